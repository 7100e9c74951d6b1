"""Text formats for graphs, circuits and partitions, and JSON report shaping.

Node ids are 1-based in every file and report and 0-based in memory.
"""

import logging
import re
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from graph.manager import GraphManager
from models import (
    Circuit, Claim17Result, CompiledGraph, DegradedGadget, FlipTrace, FormatError, Gate, GateKind,
    Graph, Partition, Ref, SmoothedReport, TrialStats, VerificationReport,
)
import constants

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\S+")
_NATURAL = re.compile(r"\d+")


def _lines(text: str):
    """(line number, [(token, column)]) for every non-blank, non-comment line"""
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]
        if tokens and not tokens[0][0].startswith(constants.COMMENT_PREFIX):
            yield lineno, tokens


def _natural(token: Tuple[str, int], lineno: int, what: str, minimum: int = 0) -> int:
    text, column = token
    if not _NATURAL.fullmatch(text):
        raise FormatError(constants.ERROR_FORMAT_INTEGER.format(what=what, token=text), lineno, column)
    if len(text) > constants.MAX_INTEGER_DIGITS:
        raise FormatError(constants.ERROR_FORMAT_DIGITS.format(
            what=what, digits=len(text), limit=constants.MAX_INTEGER_DIGITS), lineno, column)
    value = int(text)
    if value < minimum:
        raise FormatError(constants.ERROR_FORMAT_INTEGER.format(what=what, token=text), lineno, column)
    return value


def _fields(tokens, lineno: int, expected: int):
    if len(tokens) != expected:
        raise FormatError(constants.ERROR_FORMAT_FIELDS.format(
            kind=tokens[0][0], expected=expected, got=len(tokens)), lineno, tokens[0][1])


class FormatManager:
    """Handles parsing and emitting the line-based file formats"""

    @staticmethod
    def parse_graph(text: str) -> Graph:
        header: Optional[Tuple[int, int]] = None
        header_at: Tuple[int, int] = (0, 0)
        edges: List[Tuple[int, int, int]] = []
        seen: Dict[Tuple[int, int], int] = {}

        for lineno, tokens in _lines(text):
            kind = tokens[0][0]
            if kind == "p":
                if header is not None:
                    raise FormatError(constants.ERROR_FORMAT_DUPLICATE_HEADER, lineno, tokens[0][1])
                if len(tokens) != 4 or tokens[1][0] != "maxcut":
                    raise FormatError(constants.ERROR_FORMAT_HEADER, lineno, tokens[0][1])
                header = (_natural(tokens[2], lineno, "node count"), _natural(tokens[3], lineno, "edge count"))
                header_at = (lineno, tokens[0][1])
                continue
            if kind not in ("e", "x"):
                raise FormatError(constants.ERROR_FORMAT_LINE_TYPE.format(token=kind), lineno, tokens[0][1])
            if header is None:
                raise FormatError(constants.ERROR_FORMAT_HEADER, lineno, tokens[0][1])
            _fields(tokens, lineno, 4)

            n = header[0]
            ends = []
            for token in tokens[1:3]:
                value = _natural(token, lineno, "node id")
                if not 1 <= value <= n:
                    raise FormatError(constants.ERROR_FORMAT_NODE_ID.format(value=value, n=n), lineno, token[1])
                ends.append(value)
            u, v = ends
            if u == v:
                raise FormatError(constants.ERROR_FORMAT_SELF_LOOP.format(value=u), lineno, tokens[2][1])
            key = (min(u, v), max(u, v))
            if key in seen:
                raise FormatError(constants.ERROR_FORMAT_DUPLICATE_EDGE.format(u=key[0], v=key[1]),
                                  lineno, tokens[0][1])
            seen[key] = lineno

            if kind == "e":
                weight = _natural(tokens[3], lineno, "positive weight", minimum=1)
            else:
                exponent = _natural(tokens[3], lineno, "exponent")
                if exponent > constants.MAX_WEIGHT_EXPONENT:
                    raise FormatError(constants.ERROR_FORMAT_EXPONENT.format(
                        value=exponent, limit=constants.MAX_WEIGHT_EXPONENT), lineno, tokens[3][1])
                weight = 1 << exponent
            edges.append((u - 1, v - 1, weight))

        if header is None:
            raise FormatError(constants.ERROR_FORMAT_EMPTY.format(what="graph"))
        if len(edges) != header[1]:
            raise FormatError(constants.ERROR_FORMAT_EDGE_COUNT.format(expected=header[1], got=len(edges)),
                              *header_at)
        return GraphManager.build_graph(header[0], edges)

    @staticmethod
    def emit_graph(g: Graph, exponents: bool = False, comments: Iterable[str] = ()) -> str:
        """Canonical text; with exponents, power-of-two weights become x lines"""
        lines = [f"{constants.COMMENT_PREFIX} {comment}" for comment in comments]
        lines.append(constants.GRAPH_HEADER.format(n=g.node_count, m=len(g.edges)))
        for u, v, w in g.edges:
            if exponents and (w & (w - 1)) == 0:
                lines.append(constants.GRAPH_EXPONENT_LINE.format(u=u + 1, v=v + 1, e=w.bit_length() - 1))
            else:
                lines.append(constants.GRAPH_EDGE_LINE.format(u=u + 1, v=v + 1, w=w))
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse_circuit(text: str) -> Circuit:
        """Inputs are X_1..X_n in file order; gate ids must be 1..N and name G_i directly"""
        input_ids: List[int] = []
        raw_gates: Dict[int, Tuple[GateKind, List[Tuple[str, int]], int]] = {}
        outputs: Optional[List[int]] = None
        outputs_at: Tuple[int, int] = (0, 0)
        defined: Dict[int, int] = {}

        def define(token, lineno):
            value = _natural(token, lineno, "id", minimum=1)
            if value in defined:
                raise FormatError(constants.ERROR_FORMAT_DUPLICATE_ID.format(value=value), lineno, token[1])
            defined[value] = lineno
            return value

        for lineno, tokens in _lines(text):
            kind = tokens[0][0]
            if kind == "input":
                _fields(tokens, lineno, 2)
                input_ids.append(define(tokens[1], lineno))
            elif kind == "gate":
                if len(tokens) < 3 or tokens[2][0] not in (GateKind.NOR.value, GateKind.NOT.value):
                    raise FormatError(constants.ERROR_FORMAT_LINE_TYPE.format(
                        token=" ".join(t for t, _ in tokens[:3])), lineno, tokens[0][1])
                gate_kind = GateKind(tokens[2][0])
                _fields(tokens, lineno, 5 if gate_kind == GateKind.NOR else 4)
                gate_id = define(tokens[1], lineno)
                raw_gates[gate_id] = (gate_kind, tokens[3:], lineno)
            elif kind == "outputs":
                if outputs is not None:
                    raise FormatError(constants.ERROR_FORMAT_OUTPUTS, lineno, tokens[0][1])
                outputs = [_natural(token, lineno, "gate id", minimum=1) for token in tokens[1:]]
                outputs_at = (lineno, tokens[0][1])
            else:
                raise FormatError(constants.ERROR_FORMAT_LINE_TYPE.format(token=kind), lineno, tokens[0][1])

        if not input_ids and not raw_gates:
            raise FormatError(constants.ERROR_FORMAT_EMPTY.format(what="circuit"))
        big_n = len(raw_gates)
        if set(raw_gates) != set(range(1, big_n + 1)):
            raise FormatError(constants.ERROR_FORMAT_GATE_IDS.format(n=big_n))
        if outputs is None:
            raise FormatError(constants.ERROR_FORMAT_OUTPUTS)
        for value in outputs:
            if value not in raw_gates:
                raise FormatError(constants.ERROR_FORMAT_OUTPUT_ID.format(value=value), *outputs_at)

        position = {value: j for j, value in enumerate(input_ids, start=1)}
        gates = []
        for index in range(1, big_n + 1):
            gate_kind, operand_tokens, lineno = raw_gates[index]
            refs = []
            for token in operand_tokens:
                value = _natural(token, lineno, "operand id", minimum=1)
                if value in position:
                    refs.append(Ref(True, position[value]))
                elif value in raw_gates:
                    refs.append(Ref(False, value))
                else:
                    raise FormatError(constants.ERROR_FORMAT_UNKNOWN_ID.format(value=value), lineno, token[1])
            gates.append(Gate(index, gate_kind, tuple(refs)))
        return Circuit(tuple(input_ids), tuple(gates), tuple(outputs))

    @staticmethod
    def emit_circuit(c: Circuit) -> str:
        """Inputs first, then gates from G_N down to G_1, then the outputs line"""
        def name(ref: Ref) -> int:
            return c.input_ids[ref.index - 1] if ref.is_input else ref.index

        lines = [constants.CIRCUIT_INPUT_LINE.format(id=value) for value in c.input_ids]
        for gate in reversed(c.gates):
            if gate.kind == GateKind.NOR:
                a, b = gate.operands
                lines.append(constants.CIRCUIT_NOR_LINE.format(id=gate.index, a=name(a), b=name(b)))
            else:
                lines.append(constants.CIRCUIT_NOT_LINE.format(id=gate.index, a=name(gate.operands[0])))
        lines.append(constants.CIRCUIT_OUTPUTS_LINE.format(ids=" ".join(str(i) for i in c.outputs)))
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse_partition(text: str, node_count: Optional[int] = None) -> Partition:
        for lineno, tokens in _lines(text):
            bits, column = tokens[0]
            if len(tokens) > 1:
                raise FormatError(constants.ERROR_FORMAT_FIELDS.format(
                    kind="partition", expected=1, got=len(tokens)), lineno, tokens[1][1])
            for offset, char in enumerate(bits):
                if char not in "01":
                    raise FormatError(constants.ERROR_FORMAT_PARTITION_CHAR.format(char=char),
                                      lineno, column + offset)
            if node_count is not None and len(bits) != node_count:
                raise FormatError(constants.ERROR_FORMAT_PARTITION_LENGTH.format(
                    got=len(bits), expected=node_count), lineno, column)
            return Partition.from_string(bits)
        if node_count == 0:
            return Partition(())
        raise FormatError(constants.ERROR_FORMAT_EMPTY.format(what="partition"))

    @staticmethod
    def emit_partition(p: Partition) -> str:
        return f"{p}\n"

    @staticmethod
    def parse_pin(text: str) -> Tuple[int, int]:
        """'ID=C' with a 1-based id"""
        node, _, color = text.partition("=")
        if not _NATURAL.fullmatch(node) or int(node) < 1:
            raise FormatError(constants.ERROR_FORMAT_INTEGER.format(what="node id", token=node))
        if color not in ("0", "1"):
            raise FormatError(constants.ERROR_FORMAT_PARTITION_CHAR.format(char=color))
        return int(node) - 1, int(color)


class ReportManager:
    """Shapes results into versioned JSON documents"""

    @staticmethod
    def _envelope(kind: str, seed: Optional[int] = None, canonical: bool = False) -> Dict[str, object]:
        report: Dict[str, object] = {"schema": constants.SCHEMA, "kind": kind, "ids": constants.ID_CONVENTION}
        if seed is not None:
            report["seed"] = seed
        if canonical:
            report["canonical"] = constants.CANONICAL_CONVENTION
        return report

    @staticmethod
    def trace(g: Graph, trace: FlipTrace) -> Dict[str, object]:
        report = ReportManager._envelope("flip", seed=trace.seed)
        report.update({
            "rule": trace.rule.value,
            "initial": str(trace.initial),
            "final": str(trace.final),
            "initial_cut": trace.initial_cut,
            "final_cut": trace.final_cut,
            "steps": [{"node": step.node + 1, "gain": step.gain} for step in trace.steps],
            "step_count": trace.step_count,
            "step_limit": trace.step_limit,
            "reached_limit": trace.reached_limit,
            "local_optimum": GraphManager.is_local_optimum(g, trace.final),
        })
        return report

    @staticmethod
    def check(g: Graph, p: Partition) -> Dict[str, object]:
        report = ReportManager._envelope("check")
        report.update({
            "partition": str(p),
            "local_optimum": GraphManager.is_local_optimum(g, p),
            "unhappy": [v + 1 for v in GraphManager.unhappy_nodes(g, p)],
            "cut": GraphManager.cut_weight(g, p),
        })
        return report

    @staticmethod
    def optima(optima: Sequence[Partition], pins: Optional[Dict[int, int]] = None) -> Dict[str, object]:
        report = ReportManager._envelope("enumerate", canonical=not pins)
        if pins:
            report["pins"] = {str(v + 1): c for v, c in sorted(pins.items())}
        report.update({"count": len(optima), "optima": [str(p) for p in optima]})
        return report

    @staticmethod
    def role_map(compiled: CompiledGraph) -> Dict[str, object]:
        report = ReportManager._envelope("roles")
        report.update({
            "mode": compiled.mode.value,
            "gate_count": compiled.gate_count,
            "anchor": compiled.anchor + 1,
            "anchor_convention": constants.ANCHOR_CONVENTION,
            "roles": {str(v + 1): label for v, label in sorted(compiled.role_map.items())},
        })
        return report

    @staticmethod
    def compile_summary(compiled: CompiledGraph) -> Dict[str, object]:
        g = compiled.graph
        report = ReportManager._envelope("compile")
        report.update({
            "mode": compiled.mode.value,
            "nodes": g.node_count,
            "edges": len(g.edges),
            "max_degree": GraphManager.max_degree(g),
            "node_types": {str(v + 1): GraphManager.classify_node(g, v).node_type.value
                           for v in range(g.node_count)},
        })
        return report

    @staticmethod
    def node_map(dg: DegradedGadget) -> Dict[str, object]:
        report = ReportManager._envelope("nodes")
        report.update({
            "center": dg.spec.center + 1,
            "m": dg.spec.m,
            "delta": dg.spec.delta,
            "scale": dg.scale,
            "host": {str(old + 1): new + 1 for old, new in sorted(dg.node_map.items())},
            "internal": {str(v + 1): label for v, label in sorted(dg.labels.items())},
            "biaser": [v + 1 for v in sorted(dg.biaser_nodes.values())],
            "rewired": [{"external": e.external + 1, "attachment": e.attachment + 1, "weight": e.weight}
                        for e in dg.rewired],
        })
        return report

    @staticmethod
    def verification(report: VerificationReport) -> Dict[str, object]:
        shaped = ReportManager._envelope("verify-theorem1")
        shaped.update({
            "m": report.m,
            "delta": report.delta,
            "internal_nodes": report.internal_nodes,
            "cases": report.cases,
            "verdict": constants.PASS if report.passed else constants.FAIL,
            "biaser_happy": report.biaser_happy,
            "counterexamples": [{
                "neighbors": c.neighbor_colors,
                "biaser_color": c.biaser_color,
                "expected": c.expected,
                "optima": c.optima,
                "reason": c.reason,
            } for c in report.counterexamples],
        })
        return shaped

    @staticmethod
    def _trial(t: TrialStats) -> Dict[str, object]:
        return {
            "n": t.n, "m": t.m, "d": t.d, "sigma": t.sigma, "seed": t.seed, "rule": t.rule.value,
            "steps": t.steps, "min_gain": t.min_flip_gain, "final_cut": t.final_cut,
            "converged": t.converged, "low_gain_flips": t.low_gain_flips,
            "near_zero_flips": t.near_zero_flips,
        }

    @staticmethod
    def smoothed(report: SmoothedReport) -> Dict[str, object]:
        shaped = ReportManager._envelope("smooth", seed=report.config["seed"])
        shaped.update({
            "config": report.config,
            "trials": [ReportManager._trial(t) for t in report.trials],
            "aggregates": report.aggregates,
            "fits": report.fits,
            "checks": report.checks,
        })
        return shaped

    @staticmethod
    def claim17(results: Sequence[Claim17Result], seed: int) -> Dict[str, object]:
        shaped = ReportManager._envelope("claim17", seed=seed)
        shaped["rows"] = [{
            "k": r.k, "subset": list(r.subset), "a": r.a, "delta_prime": r.delta_prime,
            "sigma": r.sigma, "c": r.c, "samples": r.samples, "hits": r.hits,
            "estimate": r.estimate, "bound": r.bound, "standard_error": r.standard_error,
            "verdict": constants.PASS if r.passed else constants.FAIL,
        } for r in results]
        shaped["passed"] = all(r.passed for r in results)
        return shaped

    @staticmethod
    def cubic(bench: Dict[str, object]) -> Dict[str, object]:
        shaped = ReportManager._envelope("cubic-bench", seed=bench["seed"])
        shaped.update(bench)
        return shaped
