"""Compiler manager: circuits to Max-Cut graphs whose local optima compute them."""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from circuit.manager import CircuitManager
from graph.manager import GraphManager
from models import (
    BiasEdge, BiasedGraph, BiasPolarity, BiasWiring, Circuit, CompiledGraph, CompileError,
    CompileMode, GateKind, Graph, NormalFormError, NormalFormMode, Partition,
)
import constants

logger = logging.getLogger(__name__)


class CompilerManager:
    """Handles gadget compilation of normalized circuits.

    Node v_i of the construction is node id i - 1. Gate G_i contributes edges of
    weight 2^i; the chain v_{N+1}..v_{3N+1} alternates colors in every local
    optimum and is read with v_{3N} black.
    """

    @staticmethod
    def _require_normal_form(c: Circuit):
        violations = CircuitManager.validate_normal_form(c, NormalFormMode.GADGET)
        if violations:
            raise NormalFormError(violations)

    @staticmethod
    def _compile(c: Circuit, mode: CompileMode, assignment: Optional[Sequence[int]]) -> CompiledGraph:
        big_n = c.gate_count
        values = CircuitManager.eval(c, assignment) if assignment is not None else None
        edges: List[Tuple[int, int, int]] = []

        for gate in c.gates:
            i = gate.index
            weight = 1 << i
            if gate.kind == GateKind.NOR:
                for ref in gate.operands:
                    edges.append((i - 1, ref.index - 1, weight))
                edges.append((i - 1, big_n + 2 * i - 1, weight))
            elif gate.operands[0].is_input:
                if values is not None:
                    # a true gate value is pulled toward the white chain node v_{N+2i-1}
                    target = big_n + 2 * i - 1 if values[i - 1] == 1 else big_n + 2 * i
                    edges.append((i - 1, target - 1, weight))
            else:
                edges.append((i - 1, gate.operands[0].index - 1, weight))

        for k in range(big_n + 1, 3 * big_n + 1):
            edges.append((k - 1, k, 1 << k))

        graph = GraphManager.build_graph(3 * big_n + 1, edges)
        role_map = {v: f"v_{v + 1}" for v in range(graph.node_count)}
        s_nodes: Tuple[int, ...] = ()
        t_nodes: Tuple[int, ...] = ()
        if mode == CompileMode.LOOKER:
            s_nodes = tuple(i - 1 for i in CircuitManager.input_gate_order(c))
            t_nodes = tuple(i - 1 for i in c.outputs)
            for j, v in enumerate(s_nodes, start=1):
                role_map[v] += f" s_{j}"
            for j, v in enumerate(t_nodes, start=1):
                role_map[v] += f" t_{j}"

        compiled = CompiledGraph(
            graph=graph,
            mode=mode,
            gate_count=big_n,
            role_map=role_map,
            s_nodes=s_nodes,
            t_nodes=t_nodes,
            output_gates=tuple(c.outputs),
            has_nor=any(gate.kind == GateKind.NOR for gate in c.gates),
        )
        logger.info(constants.LOG_COMPILED.format(
            mode=mode.value, nodes=graph.node_count, edges=len(graph.edges),
            degree=GraphManager.max_degree(graph)))
        return compiled

    @staticmethod
    def compile_cvp(c: Circuit, assignment: Sequence[int]) -> CompiledGraph:
        CompilerManager._require_normal_form(c)
        CircuitManager.check_length(c, assignment)
        return CompilerManager._compile(c, CompileMode.CVP, assignment)

    @staticmethod
    def compile_looker(c: Circuit) -> CompiledGraph:
        CompilerManager._require_normal_form(c)
        return CompilerManager._compile(c, CompileMode.LOOKER, None)

    @staticmethod
    def decode_gates(compiled: CompiledGraph, p: Partition) -> List[int]:
        """Gate values read from a local optimum, complemented first if v_{3N} is white"""
        GraphManager.check_partition(compiled.graph, p)
        if p[compiled.anchor] != 1:
            p = GraphManager.complement(p)
        return [p[i - 1] for i in range(1, compiled.gate_count + 1)]

    @staticmethod
    def decode_outputs(compiled: CompiledGraph, p: Partition) -> List[int]:
        gates = CompilerManager.decode_gates(compiled, p)
        return [gates[i - 1] for i in compiled.output_gates]

    @staticmethod
    def scale(g: Graph, factor: int) -> Graph:
        if int(factor) != factor or factor < 1:
            raise CompileError(constants.ERROR_SCALE_FACTOR.format(factor=factor))
        return GraphManager.build_graph(g.node_count, [(u, v, w * int(factor)) for u, v, w in g.edges])

    @staticmethod
    def attach_biaser(host: Graph, looker: CompiledGraph, look_at: Sequence[int],
                      bias: Sequence[Tuple[int, BiasPolarity]], budget: int,
                      anchor: Optional[int] = None, min_host_scale: int = 1) -> BiasedGraph:
        """Compose host and looker so that looker output t_j biases host node bias[j].

        Each s_i is identified with host node look_at[i]. The host is scaled up by
        a power of two until budget * host_scale exceeds four times the looker's
        total weight, so looker edges only matter where the host is tied.
        """
        if looker.mode != CompileMode.LOOKER:
            raise CompileError(constants.ERROR_NOT_LOOKER)
        if len(look_at) != len(looker.s_nodes):
            raise CompileError(constants.ERROR_LOOK_AT_LENGTH.format(expected=len(looker.s_nodes), got=len(look_at)))
        if len(bias) != len(looker.t_nodes):
            raise CompileError(constants.ERROR_BIAS_LENGTH.format(expected=len(looker.t_nodes), got=len(bias)))
        if budget < 1:
            raise CompileError(constants.ERROR_BUDGET.format(budget=budget))
        if looker.has_nor and anchor is None:
            raise CompileError(constants.ERROR_NEEDS_ANCHOR)
        for v in list(look_at) + [target for target, _ in bias] + ([anchor] if anchor is not None else []):
            GraphManager.check_node(host, v)
        merged = list(look_at) + ([anchor] if anchor is not None else [])
        CompilerManager._require_distinct(merged, constants.ERROR_LOOK_AT_TWICE)
        CompilerManager._require_distinct([target for target, _ in bias], constants.ERROR_BIAS_TARGET_TWICE)

        big_n = looker.gate_count
        node_map: Dict[int, int] = {s: h for s, h in zip(looker.s_nodes, look_at)}
        if looker.has_nor:
            node_map[looker.anchor] = anchor
            kept = range(looker.graph.node_count)
        else:
            # the chain is an isolated path when no NOR gate reads it
            kept = range(big_n)
        next_id = host.node_count
        for v in kept:
            if v not in node_map:
                node_map[v] = next_id
                next_id += 1

        f = constants.LOOKER_SCALE
        looker_edges = [(node_map[u], node_map[v], w * f) for u, v, w in looker.graph.edges
                        if u in node_map and v in node_map]
        relay_nodes: Dict[int, int] = {}
        wiring: List[BiasEdge] = []
        for t, gate_index, (target, polarity) in zip(looker.t_nodes, looker.output_gates, bias):
            own = (1 << gate_index) * f
            if polarity == BiasPolarity.SAME:
                relay = next_id
                next_id += 1
                relay_nodes[t] = relay
                looker_edges.append((node_map[t], relay, own // 2))
                looker_edges.append((relay, target, own // 4))
                wiring.append(BiasEdge(node_map[t], target, polarity, own // 4))
            else:
                looker_edges.append((node_map[t], target, own // 2))
                wiring.append(BiasEdge(node_map[t], target, polarity, own // 2))

        looker_total = sum(w for _, _, w in looker_edges)
        host_scale = max(1, int(min_host_scale))
        while budget * host_scale <= constants.HOST_SEPARATION * looker_total:
            host_scale *= 2

        edges = [(u, v, w * host_scale) for u, v, w in host.edges] + looker_edges
        graph = GraphManager.build_graph(next_id, edges)
        logger.info(constants.LOG_BIASER_ATTACHED.format(
            host_scale=host_scale, targets=len(bias), nodes=graph.node_count))
        return BiasedGraph(
            graph=graph,
            wiring=BiasWiring(edges=wiring, host_scale=host_scale, looker_scale=f),
            looker_nodes=node_map,
            relay_nodes=relay_nodes,
        )

    @staticmethod
    def _require_distinct(nodes: Sequence[int], template: str):
        seen = set()
        for v in nodes:
            if v in seen:
                raise CompileError(template.format(v=v))
            seen.add(v)
