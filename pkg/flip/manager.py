"""FLIP local search engine and the exhaustive local-optimum oracle."""

import logging
import math
from typing import List, Mapping, Optional, Sequence

import numpy as np

from graph.manager import GraphManager
from models import (
    EnumerationCapError, FlipStep, FlipTrace, Graph, GraphError, Partition, PivotRule,
)
import constants

logger = logging.getLogger(__name__)


class FlipManager:
    """Runs FLIP local search under a pivot rule"""

    @staticmethod
    def default_step_limit(g: Graph) -> int:
        """2 * n^2 * max(1, log2(total weight))"""
        total = GraphManager.total_weight(g)
        log_total = math.log2(total) if total > 0 else 0.0
        return int(math.ceil(2 * g.node_count ** 2 * max(1.0, log_total)))

    @staticmethod
    def choose_node(rule: PivotRule, unhappy: Sequence[int], gains, rng: np.random.Generator) -> int:
        """Pick the node to flip among the unhappy ones (ascending ids)"""
        if rule == PivotRule.FIRST:
            return int(unhappy[0])
        if rule == PivotRule.BEST:
            best = unhappy[0]
            for v in unhappy[1:]:
                if gains[v] > gains[best]:
                    best = v
            return int(best)
        return int(unhappy[int(rng.integers(len(unhappy)))])

    @staticmethod
    def run_flip(g: Graph, p0: Partition, rule: PivotRule = PivotRule.FIRST,
                 step_limit: Optional[int] = None, seed: int = constants.DEFAULT_SEED) -> FlipTrace:
        GraphManager.check_partition(g, p0)
        if step_limit is None:
            step_limit = FlipManager.default_step_limit(g)
        if step_limit < 0:
            raise GraphError(constants.ERROR_STEP_LIMIT.format(limit=step_limit))

        rng = np.random.default_rng(seed)
        colors = list(p0.colors)
        gains = [GraphManager._local_gain(g, colors, v) for v in range(g.node_count)]
        cut = GraphManager.cut_weight(g, p0)
        initial_cut = cut
        steps: List[FlipStep] = []
        reached_limit = False

        while True:
            unhappy = [v for v in range(g.node_count) if gains[v] > 0]
            if not unhappy:
                break
            if len(steps) >= step_limit:
                reached_limit = True
                break
            v = FlipManager.choose_node(rule, unhappy, gains, rng)
            gained = gains[v]
            steps.append(FlipStep(v, gained))
            cut += gained
            colors[v] = 1 - colors[v]
            gains[v] = -gained
            for u, w, _ in g.adjacency[v]:
                gains[u] += 2 * w if colors[u] == colors[v] else -2 * w

        logger.debug(constants.LOG_FLIP_DONE.format(steps=len(steps), limit=reached_limit))
        return FlipTrace(
            initial=p0,
            steps=steps,
            final=Partition(tuple(colors)),
            initial_cut=initial_cut,
            final_cut=cut,
            rule=rule,
            seed=seed,
            step_limit=step_limit,
            reached_limit=reached_limit,
        )

    @staticmethod
    def canonical(p: Partition) -> Partition:
        if len(p) and p[0] == 1:
            return GraphManager.complement(p)
        return p


class EnumerationManager:
    """Handles exhaustive enumeration of local optima"""

    @staticmethod
    def enumerate_local_optima(g: Graph, cap: int = constants.ENUMERATION_CAP) -> List[Partition]:
        """All local optima with node 0 white, in lexicographic order"""
        if g.node_count > cap:
            raise EnumerationCapError(
                constants.ERROR_ENUMERATION_CAP.format(free=g.node_count, cap=cap))
        if g.node_count == 0:
            return [Partition(())]
        return EnumerationManager._scan(g, {0: 0}, list(range(g.node_count)))

    @staticmethod
    def pinned_local_optima(g: Graph, pins: Mapping[int, int],
                            cap: int = constants.ENUMERATION_CAP) -> List[Partition]:
        """Extensions of `pins` in which every free node is happy; pinned nodes are exempt"""
        for v, c in pins.items():
            GraphManager.check_node(g, v)
            if c not in (0, 1):
                raise GraphError(constants.ERROR_PIN_COLOR.format(v=v, c=c))
        free = [v for v in range(g.node_count) if v not in pins]
        if len(free) > cap:
            raise EnumerationCapError(constants.ERROR_ENUMERATION_CAP.format(free=len(free), cap=cap))
        return EnumerationManager._scan(g, pins, free)

    @staticmethod
    def _scan(g: Graph, pins: Mapping[int, int], check_nodes: List[int]) -> List[Partition]:
        n = g.node_count
        free = [v for v in range(n) if v not in pins]
        total = 1 << len(free)
        dtype = np.int64 if 2 * GraphManager.total_weight(g) < constants.INT64_SAFE_TOTAL else object
        logger.debug(constants.LOG_ENUMERATION.format(total=total, free=len(free), dtype=np.dtype(dtype).name))

        us = np.array([e.u for e in g.edges], dtype=np.int64)
        vs = np.array([e.v for e in g.edges], dtype=np.int64)
        incidence = np.zeros((len(g.edges), len(check_nodes)), dtype=dtype)
        column = {v: j for j, v in enumerate(check_nodes)}
        for e_id, (u, v, w) in enumerate(g.edges):
            if u in column:
                incidence[e_id, column[u]] = w
            if v in column:
                incidence[e_id, column[v]] = w
        weighted_degree = incidence.sum(axis=0)

        base = np.zeros(n, dtype=np.int8)
        for v, c in pins.items():
            base[v] = c

        optima: List[Partition] = []
        width = len(free)
        for start in range(0, total, constants.ENUMERATION_CHUNK):
            ks = np.arange(start, min(start + constants.ENUMERATION_CHUNK, total), dtype=np.int64)
            colors = np.tile(base, (len(ks), 1))
            for position, v in enumerate(free):
                colors[:, v] = (ks >> (width - 1 - position)) & 1
            crossing = (colors[:, us] ^ colors[:, vs]).astype(dtype)
            gains = weighted_degree - 2 * (crossing @ incidence)
            happy = np.all(gains <= 0, axis=1)
            for row in np.flatnonzero(happy):
                optima.append(Partition(tuple(int(c) for c in colors[row])))

        logger.debug(constants.LOG_ENUMERATION_DONE.format(count=len(optima)))
        return optima
