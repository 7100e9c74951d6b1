import itertools
import unittest

import numpy as np

from circuit.manager import CircuitBuilder, CircuitManager
from compiler.manager import CompilerManager
from flip.manager import EnumerationManager
from graph.manager import GraphManager
from models import (
    BiasPolarity, CircuitError, CompileError, CompileMode, GateKind, NodeType, NormalFormError,
    Partition, Ref,
)
from tests.test_circuit import SHAPES, nand_circuit

WIDE_SHAPES = [(3, 1, 2), (3, 1, 3), (3, 2, 3)]


class TestCompileCvp(unittest.TestCase):
    def test_structure(self):
        compiled = CompilerManager.compile_cvp(nand_circuit(), [1, 0])
        g = compiled.graph
        self.assertEqual(g.node_count, 13)
        self.assertEqual(compiled.anchor, 11)
        self.assertEqual(compiled.mode, CompileMode.CVP)
        # G2 = NOR(G3, G4) plus its chain edge v_{N+4}
        self.assertEqual(sorted((inc.neighbor, inc.weight) for inc in g.adjacency[1]),
                         [(0, 2), (2, 4), (3, 4), (7, 4)])

    def test_nand_local_optima_compute_the_circuit(self):
        c = nand_circuit()
        for x in itertools.product((0, 1), repeat=2):
            compiled = CompilerManager.compile_cvp(c, x)
            optima = EnumerationManager.enumerate_local_optima(compiled.graph)
            self.assertTrue(optima)
            for p in optima:
                self.assertEqual(CompilerManager.decode_gates(compiled, p), CircuitManager.eval(c, x))
                self.assertEqual(CompilerManager.decode_outputs(compiled, p), [1 - (x[0] & x[1])])

    def test_random_circuits_are_sound(self):
        rng = np.random.default_rng(17)
        for k in range(21):
            n, m, middle = SHAPES[k % len(SHAPES)]
            c = CircuitBuilder.random_normal_circuit(n, m, middle, rng)
            for x in itertools.product((0, 1), repeat=n):
                compiled = CompilerManager.compile_cvp(c, x)
                optima = EnumerationManager.enumerate_local_optima(compiled.graph)
                self.assertTrue(optima)
                for p in optima:
                    self.assertEqual(CompilerManager.decode_gates(compiled, p), CircuitManager.eval(c, x))

    def test_chain_alternates_in_every_local_optimum(self):
        rng = np.random.default_rng(29)
        circuits = [nand_circuit()] + [CircuitBuilder.random_normal_circuit(n, m, middle, rng)
                                       for n, m, middle in SHAPES]
        for c in circuits:
            big_n = c.gate_count
            for x in itertools.product((0, 1), repeat=c.n_inputs):
                compiled = CompilerManager.compile_cvp(c, x)
                for p in EnumerationManager.enumerate_local_optima(compiled.graph):
                    for j in range(big_n, 3 * big_n):
                        self.assertNotEqual(p[j], p[j + 1], msg=f"{p} v_{j + 1}")

    def test_degree_discipline(self):
        rng = np.random.default_rng(23)
        for n, m, middle in SHAPES:
            c = CircuitBuilder.random_normal_circuit(n, m, middle, rng)
            g = CompilerManager.compile_cvp(c, [0] * n).graph
            self.assertLessEqual(GraphManager.max_degree(g), 4)
            for v in range(g.node_count):
                self.assertIn(GraphManager.classify_node(g, v).node_type, (NodeType.TYPE_I, NodeType.TYPE_III))

    def test_rejects_non_normal_circuit(self):
        c = CircuitBuilder.from_gates(2, [(GateKind.NOR, [Ref(True, 1), Ref(True, 2)])], [1])
        with self.assertRaises(NormalFormError):
            CompilerManager.compile_cvp(c, [0, 0])

    def test_rejects_wrong_assignment_length(self):
        with self.assertRaises(CircuitError):
            CompilerManager.compile_cvp(nand_circuit(), [1])


class TestCompileLooker(unittest.TestCase):
    def test_role_map(self):
        compiled = CompilerManager.compile_looker(nand_circuit())
        self.assertEqual(compiled.s_nodes, (2, 3))
        self.assertEqual(compiled.t_nodes, (0,))
        self.assertEqual(compiled.role_map[2], "v_3 s_1")
        self.assertEqual(compiled.role_map[0], "v_1 t_1")
        self.assertEqual(compiled.role_map[5], "v_6")

    def test_input_gates_have_no_operand_edge(self):
        compiled = CompilerManager.compile_looker(nand_circuit())
        self.assertEqual([inc.neighbor for inc in compiled.graph.adjacency[2]], [1])

    def test_lookership(self):
        rng = np.random.default_rng(31)
        for k in range(10):
            n, m, middle = SHAPES[k % len(SHAPES)]
            c = CircuitBuilder.random_normal_circuit(n, m, middle, rng)
            self.check_lookership(c, CompilerManager.compile_looker(c))

    def test_lookership_with_three_inputs(self):
        rng = np.random.default_rng(37)
        for n, m, middle in WIDE_SHAPES:
            with self.subTest(shape=(n, m, middle)):
                c = CircuitBuilder.random_normal_circuit(n, m, middle, rng)
                self.check_lookership(c, CompilerManager.compile_looker(c))

    def check_lookership(self, c, compiled):
        """Every pinning of the s nodes leaves only optima that evaluate c on the held values"""
        for colors in itertools.product((0, 1), repeat=c.n_inputs):
            pins = dict(zip(compiled.s_nodes, colors))
            optima = EnumerationManager.pinned_local_optima(compiled.graph, pins)
            self.assertTrue(optima)
            for p in optima:
                gates = CompilerManager.decode_gates(compiled, p)
                held = [gates[i - 1] for i in CircuitManager.input_gate_order(c)]
                self.assertEqual(gates, CircuitManager.eval_from_input_gates(c, held))


class TestScale(unittest.TestCase):
    def test_scale_preserves_local_optima(self):
        g = CompilerManager.compile_cvp(nand_circuit(), [1, 1]).graph
        scaled = CompilerManager.scale(g, 3)
        self.assertEqual([e.weight for e in scaled.edges], [3 * e.weight for e in g.edges])
        self.assertEqual(EnumerationManager.enumerate_local_optima(scaled),
                         EnumerationManager.enumerate_local_optima(g))

    def test_factor_must_be_positive_integer(self):
        g = GraphManager.build_graph(2, [(0, 1, 1)])
        with self.assertRaises(CompileError):
            CompilerManager.scale(g, 0)
        with self.assertRaises(CompileError):
            CompilerManager.scale(g, 1.5)


class TestAttachBiaser(unittest.TestCase):
    def setUp(self):
        # node 2 is tied between node 0 and node 1
        self.host = GraphManager.build_graph(3, [(0, 2, 1), (1, 2, 1)])
        self.looker = CompilerManager.compile_looker(CircuitBuilder.fanout_circuit([True]))

    def test_opposite_bias(self):
        biased = CompilerManager.attach_biaser(self.host, self.looker, [0], [(2, BiasPolarity.OPPOSITE)], 1)
        self.assertEqual(biased.wiring.host_scale, 128)
        self.assertEqual(biased.looker_nodes, {2: 0, 0: 3, 1: 4})
        self.assertEqual(biased.graph.node_count, 5)
        optima = EnumerationManager.pinned_local_optima(biased.graph, {0: 0, 1: 1})
        self.assertEqual(optima, [Partition((0, 1, 1, 0, 1))])
        optima = EnumerationManager.pinned_local_optima(biased.graph, {0: 1, 1: 0})
        self.assertEqual(optima, [Partition((1, 0, 0, 1, 0))])

    def test_same_bias_uses_relay(self):
        biased = CompilerManager.attach_biaser(self.host, self.looker, [0], [(2, BiasPolarity.SAME)], 1)
        self.assertEqual(biased.relay_nodes, {0: 5})
        optima = EnumerationManager.pinned_local_optima(biased.graph, {0: 0, 1: 1})
        self.assertEqual(optima, [Partition((0, 1, 0, 0, 1, 1))])

    def test_host_weights_dominate(self):
        biased = CompilerManager.attach_biaser(self.host, self.looker, [0], [(2, BiasPolarity.OPPOSITE)], 1)
        host_edges = {(0, 2), (1, 2)}
        looker_total = sum(w for u, v, w in biased.graph.edges if (u, v) not in host_edges)
        self.assertGreater(biased.wiring.host_scale, 4 * looker_total)

    def test_nor_looker_needs_anchor(self):
        looker = CompilerManager.compile_looker(nand_circuit())
        host = GraphManager.build_graph(4, [(0, 1, 1), (2, 3, 1)])
        with self.assertRaises(CompileError):
            CompilerManager.attach_biaser(host, looker, [0, 1], [(2, BiasPolarity.OPPOSITE)], 1)

    def test_nor_looker_with_anchor_biases_only_the_target(self):
        circuits = [nand_circuit(), CircuitBuilder.random_normal_circuit(3, 1, 2, np.random.default_rng(43))]
        for c in circuits:
            looker = CompilerManager.compile_looker(c)
            n = c.n_inputs
            anchor, target, left, right, near, far = range(n, n + 6)
            host = GraphManager.build_graph(n + 6, [
                (target, left, 1), (target, right, 1), (left, near, 3), (near, far, 2)])
            for polarity in BiasPolarity:
                biased = CompilerManager.attach_biaser(
                    host, looker, list(range(n)), [(target, polarity)], 1, anchor=anchor)
                self.assertEqual(biased.looker_nodes[looker.anchor], anchor)
                for colors in itertools.product((0, 1), repeat=n):
                    with self.subTest(gates=c.gate_count, polarity=polarity.value, colors=colors):
                        pins = dict(enumerate(colors))
                        pins.update({anchor: 1, left: 0, right: 1})
                        out = CircuitManager.eval_from_input_gates(c, list(colors))[0]
                        want = out if polarity == BiasPolarity.SAME else 1 - out
                        host_rest = {(q[near], q[far]) for q in EnumerationManager.pinned_local_optima(host, pins)}
                        optima = EnumerationManager.pinned_local_optima(biased.graph, pins)
                        self.assertTrue(optima)
                        for p in optima:
                            self.assertEqual(p[target], want)
                            self.assertIn((p[near], p[far]), host_rest)

    def test_cvp_graph_rejected(self):
        compiled = CompilerManager.compile_cvp(nand_circuit(), [0, 0])
        with self.assertRaises(CompileError):
            CompilerManager.attach_biaser(self.host, compiled, [0, 1], [(2, BiasPolarity.OPPOSITE)], 1)

    def test_length_checks(self):
        with self.assertRaises(CompileError):
            CompilerManager.attach_biaser(self.host, self.looker, [0, 1], [(2, BiasPolarity.OPPOSITE)], 1)
        with self.assertRaises(CompileError):
            CompilerManager.attach_biaser(self.host, self.looker, [0], [], 1)


if __name__ == '__main__':
    unittest.main()
