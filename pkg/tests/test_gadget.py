import itertools
import unittest

from flip.manager import EnumerationManager
from gadget.manager import GadgetManager, VerificationManager
from graph.manager import GraphManager
from models import BiaserAttestation, ComparingSpecError, Partition


def star(weights):
    """Node 0 joined to nodes 1..k with the given weights"""
    return GraphManager.build_graph(len(weights) + 1, [(0, i + 1, w) for i, w in enumerate(weights)])


def neighbor_colorings(spec):
    nodes = [v for pair in spec.pairs for v in (pair.first, pair.second)] + [spec.biaser_node]
    for bits in itertools.product((0, 1), repeat=len(nodes)):
        yield dict(zip(nodes, bits))


class TestComparingSpec(unittest.TestCase):
    def test_star_host(self):
        g, spec = GadgetManager.star_host(2)
        self.assertEqual(spec.center, 0)
        self.assertEqual(spec.m, 2)
        self.assertEqual([(p.first, p.second, p.weight) for p in spec.pairs], [(1, 2, 4), (3, 4, 2)])
        self.assertEqual((spec.biaser_node, spec.delta), (5, 1))
        self.assertTrue(spec.attested)

    def test_unattested_uses_unpaired_weight(self):
        g, attested = GadgetManager.star_host(3)
        spec = GadgetManager.comparing_spec(g, 0)
        self.assertEqual(spec.pairs, attested.pairs)
        self.assertEqual(spec.biaser_node, attested.biaser_node)
        self.assertFalse(spec.attested)

    def test_smallest_comparing_node(self):
        spec = GadgetManager.comparing_spec(star([8, 8, 4]), 0)
        self.assertEqual(spec.m, 1)
        self.assertEqual(spec.delta, 4)
        self.assertEqual(spec.biaser_node, 3)

    def test_pair_order_follows_node_ids(self):
        g = GraphManager.build_graph(4, [(0, 3, 8), (0, 1, 8), (0, 2, 2)])
        spec = GadgetManager.comparing_spec(g, 0)
        self.assertEqual((spec.pairs[0].first, spec.pairs[0].second), (1, 3))

    def test_even_degree(self):
        with self.assertRaises(ComparingSpecError):
            GadgetManager.comparing_spec(star([4, 4, 2, 2]), 0)

    def test_too_few_edges(self):
        with self.assertRaises(ComparingSpecError):
            GadgetManager.comparing_spec(star([4]), 0)

    def test_odd_pairing(self):
        with self.assertRaises(ComparingSpecError):
            GadgetManager.comparing_spec(star([8, 4, 1]), 0)

    def test_ambiguous_biaser(self):
        with self.assertRaises(ComparingSpecError):
            GadgetManager.comparing_spec(star([2, 2, 2]), 0)

    def test_ratio_between_pairs(self):
        with self.assertRaises(ComparingSpecError):
            GadgetManager.comparing_spec(star([4, 4, 3, 3, 1]), 0)

    def test_ratio_against_delta(self):
        with self.assertRaises(ComparingSpecError):
            GadgetManager.comparing_spec(star([4, 4, 3]), 0)

    def test_attested_node_must_be_adjacent(self):
        g = GraphManager.build_graph(5, [(0, 1, 4), (0, 2, 4), (0, 3, 2), (3, 4, 1)])
        with self.assertRaises(ComparingSpecError):
            GadgetManager.comparing_spec(g, 0, BiaserAttestation(node=4))


class TestSemantics(unittest.TestCase):
    def test_a_greater_than_b_is_white(self):
        _, spec = GadgetManager.star_host(2)
        colors = {1: 1, 2: 1, 3: 0, 4: 0, 5: 0}
        self.assertEqual(GadgetManager.compared_numbers(spec, colors), (2, 1))
        self.assertEqual(GadgetManager.semantics(spec, colors), 0)

    def test_a_less_than_b_is_black(self):
        _, spec = GadgetManager.star_host(2)
        colors = {1: 0, 2: 0, 3: 1, 4: 1, 5: 1}
        self.assertEqual(GadgetManager.compared_numbers(spec, colors), (1, 2))
        self.assertEqual(GadgetManager.semantics(spec, colors), 1)

    def test_tie_follows_biaser(self):
        _, spec = GadgetManager.star_host(2)
        for biaser in (0, 1):
            colors = {1: 1, 2: 0, 3: 0, 4: 1, 5: biaser}
            self.assertIsNone(GadgetManager.decisive_pair(spec, colors))
            self.assertEqual(GadgetManager.semantics(spec, colors), 1 - biaser)

    def test_decisive_pair(self):
        _, spec = GadgetManager.star_host(3)
        colors = {1: 0, 2: 1, 3: 1, 4: 1, 5: 0, 6: 0, 7: 0}
        self.assertEqual(GadgetManager.decisive_pair(spec, colors), 2)

    def test_missing_color(self):
        _, spec = GadgetManager.star_host(1)
        with self.assertRaises(ComparingSpecError):
            GadgetManager.semantics(spec, {1: 0, 2: 1})

    def test_star_center_matches_semantics(self):
        for m in (1, 2, 3):
            g, spec = GadgetManager.star_host(m)
            for colors in neighbor_colorings(spec):
                self.assertEqual(GadgetManager.star_center_colors(g, spec, colors),
                                 [GadgetManager.semantics(spec, colors)], msg=f"m={m} {colors}")


class TestDegrade(unittest.TestCase):
    def test_internal_nodes_and_degrees(self):
        for m in (1, 2, 3):
            g, spec = GadgetManager.star_host(m)
            dg = GadgetManager.degrade(g, spec)
            self.assertEqual(len(dg.internal_nodes), 4 * m - 1)
            for v in dg.internal_nodes:
                self.assertLessEqual(dg.graph.degree(v), 5)
            for old, new in dg.node_map.items():
                self.assertEqual(dg.graph.degree(new), g.degree(old))

    def test_rewired_edges_carry_scaled_weights(self):
        g, spec = GadgetManager.star_host(2)
        dg = GadgetManager.degrade(g, spec)
        self.assertEqual(len(dg.rewired), 4)
        for edge in dg.rewired:
            weights = [inc.weight for inc in dg.graph.adjacency[edge.external] if inc.neighbor == edge.attachment]
            self.assertEqual(weights, [edge.weight])
        self.assertEqual(dg.rewired[0].weight, 4 * dg.scale)

    def test_odd_weights_are_doubled(self):
        g = star([3, 3, 1])
        dg = GadgetManager.degrade(g, GadgetManager.comparing_spec(g, 0))
        self.assertEqual(dg.scale, 2 * dg.biaser.wiring.host_scale)
        for edge in dg.rewired:
            self.assertEqual(edge.weight, 3 * dg.scale)

    def test_col(self):
        g, spec = GadgetManager.star_host(2)
        dg = GadgetManager.degrade(g, spec)
        for color in (0, 1):
            coloring = GadgetManager.expected_coloring(dg, color)
            colors = tuple(coloring.get(v, 0) for v in range(dg.graph.node_count))
            self.assertEqual(GadgetManager.col(dg, Partition(colors)), color)
        self.assertIsNone(GadgetManager.col(dg, Partition((0,) * dg.graph.node_count)))

    def test_biaser_outputs_follow_looked_at_color(self):
        g, spec = GadgetManager.star_host(2)
        dg = GadgetManager.degrade(g, spec)
        targets = sorted(dg.first_nodes.values()) + sorted(dg.second_nodes.values())
        firsts = set(dg.first_nodes.values())
        for color in (0, 1):
            coloring = GadgetManager.biaser_coloring(dg, color)
            self.assertEqual(set(coloring), set(dg.biaser_nodes.values()))
            for j, target in enumerate(targets):
                self.assertEqual(coloring[dg.biaser_nodes[j]], color if target in firsts else 1 - color)

    def pinned_optima(self, dg, colors, biaser_color):
        pins = {dg.node_map[v]: c for v, c in colors.items()}
        pins.update(GadgetManager.biaser_coloring(dg, biaser_color))
        return EnumerationManager.pinned_local_optima(dg.graph, pins)

    def test_every_local_optimum_has_the_predicted_skeleton(self):
        for m in (1, 2, 3):
            g, spec = GadgetManager.star_host(m)
            dg = GadgetManager.degrade(g, spec)
            for colors, biaser_color, expected in VerificationManager.neighbor_cases(spec):
                skeleton = GadgetManager.expected_coloring(dg, expected)
                optima = self.pinned_optima(dg, colors, biaser_color)
                self.assertTrue(optima, msg=f"m={m} {colors}")
                for p in optima:
                    self.assertEqual({v: p[v] for v in dg.internal_nodes}, skeleton, msg=f"m={m} {colors}")
                    self.assertEqual(GadgetManager.col(dg, p), expected)

    def test_first_side_is_correct_up_to_the_decisive_pair(self):
        for m in (1, 2, 3):
            g, spec = GadgetManager.star_host(m)
            dg = GadgetManager.degrade(g, spec)
            checked = 0
            for colors, biaser_color, expected in VerificationManager.neighbor_cases(spec):
                q = GadgetManager.decisive_pair(spec, colors) or m
                if any(colors[spec.pairs[i].first] != biaser_color for i in range(q)):
                    continue
                checked += 1
                skeleton = GadgetManager.expected_coloring(dg, expected)
                for p in self.pinned_optima(dg, colors, biaser_color):
                    for i in range(1, q + 1):
                        for v in (dg.first_nodes[(i, 1)], dg.second_nodes[(i, 1)]):
                            self.assertEqual(p[v], skeleton[v], msg=f"m={m} i={i} {colors}")
            self.assertGreater(checked, 0)

    def test_external_gains_scale_on_a_non_star_host(self):
        for m in (1, 2, 3):
            star_graph, _ = GadgetManager.star_host(m)
            biaser, extra_a, extra_b = 2 * m + 1, 2 * m + 2, 2 * m + 3
            edges = [tuple(e) for e in star_graph.edges]
            edges += [(u, extra_a if u % 2 else extra_b, u + 1) for u in range(1, 2 * m + 1)]
            edges += [(1, 2, 3), (extra_a, extra_b, 2), (biaser, extra_b, 1)]
            g = GraphManager.build_graph(2 * m + 4, edges)
            spec = GadgetManager.comparing_spec(g, 0, BiaserAttestation(node=biaser))
            dg = GadgetManager.degrade(g, spec)
            externals = [v for pair in spec.pairs for v in (pair.first, pair.second)]
            for bits in itertools.product((0, 1), repeat=g.node_count):
                p = Partition(bits)
                colors = [0] * dg.graph.node_count
                for old, new in dg.node_map.items():
                    colors[new] = bits[old]
                for v, c in GadgetManager.expected_coloring(dg, bits[0]).items():
                    colors[v] = c
                for v, c in GadgetManager.biaser_coloring(dg, bits[biaser]).items():
                    colors[v] = c
                degraded = Partition(tuple(colors))
                for u in externals:
                    gain = GraphManager.gain(g, p, u)
                    degraded_gain = GraphManager.gain(dg.graph, degraded, dg.node_map[u])
                    self.assertEqual(degraded_gain, dg.scale * gain, msg=f"m={m} {bits} u={u}")
                    self.assertEqual(degraded_gain <= 0, gain <= 0)

    def test_spec_must_match_graph(self):
        g, spec = GadgetManager.star_host(2)
        other, _ = GadgetManager.star_host(1)
        with self.assertRaises(ComparingSpecError):
            GadgetManager.degrade(other, spec)


class TestVerification(unittest.TestCase):
    def test_case_count(self):
        _, spec = GadgetManager.star_host(2)
        self.assertEqual(len(VerificationManager.neighbor_cases(spec)), 4 ** 2 + 2 ** 2)

    def test_degradation_holds(self):
        for m in (1, 2, 3):
            report = VerificationManager.verify_theorem1(m, max_workers=2)
            self.assertTrue(report.passed, msg=f"m={m}: {report.counterexamples[:3]}")
            self.assertTrue(report.biaser_happy)
            self.assertEqual(report.internal_nodes, 4 * m - 1)
            self.assertEqual(report.cases, 4 ** m + 2 ** m)

    def test_larger_delta(self):
        self.assertTrue(VerificationManager.verify_theorem1(2, delta=3).passed)

    def test_m_out_of_range(self):
        with self.assertRaises(ComparingSpecError):
            VerificationManager.verify_theorem1(0)
        with self.assertRaises(ComparingSpecError):
            VerificationManager.verify_theorem1(4)


if __name__ == '__main__':
    unittest.main()
