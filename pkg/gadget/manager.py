"""Gadget manager for comparing nodes and their degree-five replacement."""

import concurrent.futures
import logging
from collections import Counter
from typing import Dict, List, Mapping, Optional, Tuple

from circuit.manager import CircuitBuilder, CircuitManager
from compiler.manager import CompilerManager
from flip.manager import EnumerationManager
from graph.manager import GraphManager
from models import (
    BiaserAttestation, BiasPolarity, ComparingPair, ComparingSpec, ComparingSpecError,
    Counterexample, DegradedGadget, Graph, Partition, RewiredEdge, VerificationReport,
)
import constants

logger = logging.getLogger(__name__)


class GadgetManager:
    """Handles comparing-node recognition, semantics and degradation"""

    @staticmethod
    def comparing_spec(g: Graph, v: int, attestation: Optional[BiaserAttestation] = None) -> ComparingSpec:
        """Group v's incident edges into m equal-weight pairs and one delta edge.

        Within a pair the neighbor with the smaller id is u_i^1. The biaser edge is
        the attested node's edge if one is named, else the single unpaired weight.
        """
        GraphManager.check_node(g, v)
        incident = list(g.adjacency[v])
        degree = len(incident)
        if degree < 3 or degree % 2 == 0:
            raise ComparingSpecError(constants.ERROR_COMPARING_ARITY.format(v=v, degree=degree))

        if attestation is not None and attestation.node is not None:
            biaser = [inc for inc in incident if inc.neighbor == attestation.node]
            if not biaser:
                raise ComparingSpecError(constants.ERROR_COMPARING_BIASER.format(u=attestation.node, v=v))
        else:
            counts = Counter(inc.weight for inc in incident)
            unpaired = [w for w, count in counts.items() if count % 2 == 1]
            if len(unpaired) != 1:
                raise ComparingSpecError(constants.ERROR_COMPARING_PAIRING.format(
                    v=v, weights=sorted(inc.weight for inc in incident)))
            biaser = [inc for inc in incident if inc.weight == unpaired[0]]
            if len(biaser) > 1:
                raise ComparingSpecError(constants.ERROR_COMPARING_AMBIGUOUS.format(v=v))
        delta_edge = biaser[0]

        rest = sorted((inc for inc in incident if inc is not delta_edge),
                      key=lambda inc: (-inc.weight, inc.neighbor))
        pairs: List[ComparingPair] = []
        for first, second in zip(rest[0::2], rest[1::2]):
            if first.weight != second.weight:
                raise ComparingSpecError(constants.ERROR_COMPARING_PAIRING.format(
                    v=v, weights=sorted(inc.weight for inc in incident)))
            low, high = sorted((first.neighbor, second.neighbor))
            pairs.append(ComparingPair(low, high, first.weight))

        for i in range(len(pairs) - 1):
            if pairs[i].weight < 2 * pairs[i + 1].weight:
                raise ComparingSpecError(constants.ERROR_COMPARING_RATIO.format(
                    v=v, detail=f"a_{i + 1} = {pairs[i].weight} < 2 * a_{i + 2} = {2 * pairs[i + 1].weight}"))
        if pairs[-1].weight < 2 * delta_edge.weight:
            raise ComparingSpecError(constants.ERROR_COMPARING_RATIO.format(
                v=v, detail=f"a_{len(pairs)} = {pairs[-1].weight} < 2 * delta = {2 * delta_edge.weight}"))

        return ComparingSpec(
            center=v,
            pairs=tuple(pairs),
            biaser_node=delta_edge.neighbor,
            delta=delta_edge.weight,
            attested=attestation is not None,
        )

    @staticmethod
    def _color(colors: Mapping[int, int], v: int) -> int:
        if v not in colors:
            raise ComparingSpecError(constants.ERROR_MISSING_COLOR.format(v=v))
        return int(colors[v])

    @staticmethod
    def compared_numbers(spec: ComparingSpec, colors: Mapping[int, int]) -> Tuple[int, int]:
        """a from the u_i^1 colors, b as the bitwise complement of the u_i^2 colors; u_1 is the top bit"""
        a = b = 0
        for pair in spec.pairs:
            a = (a << 1) | GadgetManager._color(colors, pair.first)
            b = (b << 1) | (1 - GadgetManager._color(colors, pair.second))
        return a, b

    @staticmethod
    def semantics(spec: ComparingSpec, colors: Mapping[int, int]) -> int:
        """White if a > b, black if a < b, otherwise the color opposite to the biaser node"""
        a, b = GadgetManager.compared_numbers(spec, colors)
        biaser_color = GadgetManager._color(colors, spec.biaser_node)
        if a > b:
            return 0
        if a < b:
            return 1
        return 1 - biaser_color

    @staticmethod
    def decisive_pair(spec: ComparingSpec, colors: Mapping[int, int]) -> Optional[int]:
        """1-based index of the heaviest equally colored pair; None when weakly indifferent"""
        for i, pair in enumerate(spec.pairs, start=1):
            if GadgetManager._color(colors, pair.first) == GadgetManager._color(colors, pair.second):
                return i
        return None

    @staticmethod
    def _check_spec(g: Graph, spec: ComparingSpec):
        GraphManager.check_node(g, spec.center)
        expected = Counter([(pair.first, pair.weight) for pair in spec.pairs]
                           + [(pair.second, pair.weight) for pair in spec.pairs]
                           + [(spec.biaser_node, spec.delta)])
        actual = Counter((inc.neighbor, inc.weight) for inc in g.adjacency[spec.center])
        if expected != actual:
            raise ComparingSpecError(constants.ERROR_SPEC_MISMATCH.format(v=spec.center))

    @staticmethod
    def degrade(g: Graph, spec: ComparingSpec) -> DegradedGadget:
        """Replace the comparing node by 4m - 1 internal nodes of degree at most five.

        v_{i,1}^k takes over the external edge of u_i^k. For i < m it is tied to
        v_{i,2}^k with weight a_i, and v_{i,2}^k feeds v_{i+1,1}^1 and v_{i+1,1}^2 with a_i/2;
        v_{m,1}^1 and v_{m,1}^2 both meet v_{m,2}^1 with a_m. A NOT-only biaser
        looks at u and biases every v_{i,1}^k away from c(u) and every v_{i,2}^k
        toward it, with all biaser weights below delta.
        """
        GadgetManager._check_spec(g, spec)
        m = spec.m
        k = 2 if any(pair.weight % 2 for pair in spec.pairs) else 1

        node_map: Dict[int, int] = {}
        for v in range(g.node_count):
            if v != spec.center:
                node_map[v] = len(node_map)
        edges = [(node_map[u], node_map[v], w * k) for u, v, w in g.edges
                 if spec.center not in (u, v)]

        next_id = len(node_map)
        first_nodes: Dict[Tuple[int, int], int] = {}
        second_nodes: Dict[Tuple[int, int], int] = {}
        labels: Dict[int, str] = {}
        for i in range(1, m + 1):
            for side in (1, 2):
                first_nodes[(i, side)] = next_id
                labels[next_id] = f"v_{{{i},1}}^{side}"
                next_id += 1
        for i in range(1, m):
            for side in (1, 2):
                second_nodes[(i, side)] = next_id
                labels[next_id] = f"v_{{{i},2}}^{side}"
                next_id += 1
        second_nodes[(m, 1)] = next_id
        labels[next_id] = f"v_{{{m},2}}^1"
        next_id += 1

        rewired: List[Tuple[int, int, int]] = []
        for i, pair in enumerate(spec.pairs, start=1):
            a = pair.weight * k
            for side, external in ((1, pair.first), (2, pair.second)):
                edges.append((node_map[external], first_nodes[(i, side)], a))
                rewired.append((node_map[external], first_nodes[(i, side)], pair.weight))
            if i < m:
                for side in (1, 2):
                    edges.append((first_nodes[(i, side)], second_nodes[(i, side)], a))
                    edges.append((second_nodes[(i, side)], first_nodes[(i + 1, 1)], a // 2))
                    edges.append((second_nodes[(i, side)], first_nodes[(i + 1, 2)], a // 2))
            else:
                for side in (1, 2):
                    edges.append((first_nodes[(m, side)], second_nodes[(m, 1)], a))
        gadget_host = GraphManager.build_graph(next_id, edges)

        targets = sorted(first_nodes.values()) + sorted(second_nodes.values())
        first_ids = set(first_nodes.values())
        circuit = CircuitBuilder.fanout_circuit([t in first_ids for t in targets])
        looker = CompilerManager.compile_looker(circuit)
        biased = CompilerManager.attach_biaser(
            host=gadget_host,
            looker=looker,
            look_at=[node_map[spec.biaser_node]],
            bias=[(t, BiasPolarity.OPPOSITE) for t in targets],
            budget=spec.delta * k,
        )
        scale = k * biased.wiring.host_scale
        biaser_nodes = {looker_id: composite for looker_id, composite in biased.looker_nodes.items()
                        if composite >= gadget_host.node_count}

        logger.info(constants.LOG_DEGRADED.format(v=spec.center, m=m, internal=4 * m - 1, scale=scale))
        return DegradedGadget(
            graph=biased.graph,
            spec=spec,
            node_map=node_map,
            first_nodes=first_nodes,
            second_nodes=second_nodes,
            labels=labels,
            biaser=biased,
            biaser_circuit=circuit,
            biaser_nodes=biaser_nodes,
            rewired=[RewiredEdge(u, a, w * scale) for u, a, w in rewired],
            scale=scale,
        )

    @staticmethod
    def col(dg: DegradedGadget, p: Partition) -> Optional[int]:
        GraphManager.check_partition(dg.graph, p)
        firsts = {p[v] for v in dg.first_nodes.values()}
        seconds = {p[v] for v in dg.second_nodes.values()}
        if len(firsts) == 1 and len(seconds) == 1 and firsts != seconds:
            return firsts.pop()
        return None

    @staticmethod
    def expected_coloring(dg: DegradedGadget, color: int) -> Dict[int, int]:
        """Internal coloring with col equal to `color`"""
        coloring = {v: color for v in dg.first_nodes.values()}
        coloring.update({v: 1 - color for v in dg.second_nodes.values()})
        return coloring

    @staticmethod
    def biaser_coloring(dg: DegradedGadget, biaser_color: int) -> Dict[int, int]:
        """Colors the biaser subgraph settles on when it looks at a node of color biaser_color"""
        values = CircuitManager.eval_from_input_gates(dg.biaser_circuit, [biaser_color])
        return {composite: values[looker_id] for looker_id, composite in dg.biaser_nodes.items()}

    @staticmethod
    def star_host(m: int, delta: int = 1) -> Tuple[Graph, ComparingSpec]:
        """Comparing node 0 with neighbors u_i^1 = 2i - 1, u_i^2 = 2i and biaser node 2m + 1"""
        edges = []
        for i in range(1, m + 1):
            a = (1 << (m - i + 1)) * delta
            edges.append((0, 2 * i - 1, a))
            edges.append((0, 2 * i, a))
        edges.append((0, 2 * m + 1, delta))
        g = GraphManager.build_graph(2 * m + 2, edges)
        return g, GadgetManager.comparing_spec(g, 0, BiaserAttestation(node=2 * m + 1))

    @staticmethod
    def star_center_colors(g: Graph, spec: ComparingSpec, colors: Mapping[int, int]) -> List[int]:
        """Center colors over all pinned local optima of the un-degraded graph"""
        pins = {v: int(c) for v, c in colors.items() if v != spec.center}
        return [p[spec.center] for p in EnumerationManager.pinned_local_optima(g, pins)]


class VerificationManager:
    """Handles the exhaustive check that degradation preserves local optima"""

    @staticmethod
    def neighbor_cases(spec: ComparingSpec) -> List[Tuple[Dict[int, int], int, int]]:
        """Every neighbor coloring with each biaser color that biases v to its own color"""
        cases = []
        neighbors = [v for pair in spec.pairs for v in (pair.first, pair.second)]
        for bits in range(1 << len(neighbors)):
            colors = {v: (bits >> (len(neighbors) - 1 - j)) & 1 for j, v in enumerate(neighbors)}
            q = GadgetManager.decisive_pair(spec, colors)
            biaser_options = (0, 1) if q is None else (colors[spec.pairs[q - 1].first],)
            for biaser_color in biaser_options:
                full = dict(colors)
                full[spec.biaser_node] = biaser_color
                cases.append((full, biaser_color, GadgetManager.semantics(spec, full)))
        return cases

    @staticmethod
    def check_case(dg: DegradedGadget, colors: Mapping[int, int], expected: int) -> Optional[Counterexample]:
        spec = dg.spec
        biaser_color = colors[spec.biaser_node]
        pins = {dg.node_map[v]: c for v, c in colors.items()}
        pins.update(GadgetManager.biaser_coloring(dg, biaser_color))
        optima = EnumerationManager.pinned_local_optima(dg.graph, pins)

        full = dict(pins)
        full.update(GadgetManager.expected_coloring(dg, expected))
        correct = Partition(tuple(full[v] for v in range(dg.graph.node_count)))
        neighbor_bits = "".join(str(colors[v]) for pair in spec.pairs for v in (pair.first, pair.second))

        if optima != [correct]:
            return Counterexample(neighbor_bits, biaser_color, expected, [str(p) for p in optima],
                                  "local optima differ from the single expected coloring")
        unhappy = [v for v in dg.biaser_nodes.values() if GraphManager.gain(dg.graph, correct, v) > 0]
        if unhappy:
            return Counterexample(neighbor_bits, biaser_color, expected, [str(correct)],
                                  f"biaser nodes {unhappy} unhappy")
        return None

    @staticmethod
    def verify_theorem1(m: int, delta: int = 1, max_workers: int = 1) -> VerificationReport:
        """Degrade the comparing node of a star and compare local optima exhaustively.

        For every neighbor coloring whose biaser color biases v to its own color,
        the pinned local optima over the internal nodes must be exactly the
        coloring whose col equals the comparison result.
        """
        if not 1 <= m <= constants.VERIFY_MAX_M:
            raise ComparingSpecError(constants.ERROR_VERIFY_M.format(max_m=constants.VERIFY_MAX_M, m=m))
        g, spec = GadgetManager.star_host(m, delta)
        dg = GadgetManager.degrade(g, spec)
        cases = VerificationManager.neighbor_cases(spec)
        logger.info(constants.LOG_VERIFY_START.format(m=m, cases=len(cases), internal=len(dg.internal_nodes)))

        with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
            results = list(pool.map(lambda case: VerificationManager.check_case(dg, case[0], case[2]), cases))

        counterexamples = [c for c in results if c is not None]
        passed = not counterexamples
        logger.info(constants.LOG_VERIFY_DONE.format(
            m=m, result=constants.PASS if passed else constants.FAIL, failures=len(counterexamples)))
        return VerificationReport(
            m=m,
            delta=delta,
            internal_nodes=len(dg.internal_nodes),
            cases=len(cases),
            passed=passed,
            counterexamples=counterexamples,
            biaser_happy=not any("unhappy" in c.reason for c in counterexamples),
        )
