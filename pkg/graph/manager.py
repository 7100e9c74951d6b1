"""Graph manager for exact cut arithmetic, happiness and node types."""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from models import (
    Edge, Graph, GraphError, NodeClass, NodeType, Partition, PartitionMismatchError,
)
import constants

logger = logging.getLogger(__name__)


class GraphManager:
    """Handles graph construction and the pure partition operations"""

    @staticmethod
    def build_graph(node_count: int, edges: Iterable[Tuple[int, int, int]]) -> Graph:
        """Build a graph, rejecting self-loops, parallel edges and non-positive weights"""
        if node_count < 0:
            raise GraphError(f"node count must be non-negative, got {node_count}")
        seen = set()
        checked: List[Edge] = []
        for u, v, w in edges:
            u, v, w = int(u), int(v), int(w)
            for x in (u, v):
                if not 0 <= x < node_count:
                    raise GraphError(constants.ERROR_NODE_RANGE.format(v=x, n=node_count))
            if u == v:
                raise GraphError(constants.ERROR_SELF_LOOP.format(v=u))
            if w <= 0:
                raise GraphError(constants.ERROR_WEIGHT.format(u=u, v=v, w=w))
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(constants.ERROR_DUPLICATE_EDGE.format(u=key[0], v=key[1]))
            seen.add(key)
            checked.append(Edge(u, v, w))
        return Graph(node_count, tuple(checked))

    @staticmethod
    def check_partition(g: Graph, p: Partition):
        if len(p) != g.node_count:
            raise PartitionMismatchError(
                constants.ERROR_PARTITION_LENGTH.format(got=len(p), expected=g.node_count))

    @staticmethod
    def check_node(g: Graph, v: int):
        if not 0 <= v < g.node_count:
            raise GraphError(constants.ERROR_NODE_RANGE.format(v=v, n=g.node_count))

    @staticmethod
    def cut_weight(g: Graph, p: Partition) -> int:
        GraphManager.check_partition(g, p)
        return sum(w for u, v, w in g.edges if p[u] != p[v])

    @staticmethod
    def gain(g: Graph, p: Partition, v: int) -> int:
        """Change of the cut weight if v switches sides, from v's incident edges only"""
        GraphManager.check_node(g, v)
        GraphManager.check_partition(g, p)
        return GraphManager._local_gain(g, p.colors, v)

    @staticmethod
    def _local_gain(g: Graph, colors: Sequence[int], v: int) -> int:
        cv = colors[v]
        return sum(w if colors[u] == cv else -w for u, w, _ in g.adjacency[v])

    @staticmethod
    def unhappy_nodes(g: Graph, p: Partition) -> List[int]:
        GraphManager.check_partition(g, p)
        return [v for v in range(g.node_count) if GraphManager._local_gain(g, p.colors, v) > 0]

    @staticmethod
    def is_local_optimum(g: Graph, p: Partition) -> bool:
        return not GraphManager.unhappy_nodes(g, p)

    @staticmethod
    def _sorted_incidence(g: Graph, v: int):
        # stable on edge id, so equal weights keep insertion order
        return sorted(g.adjacency[v], key=lambda inc: (-inc.weight, inc.edge_id))

    @staticmethod
    def classify_node(g: Graph, v: int) -> NodeClass:
        """Type I: a > b + c + d. Type III: a + d < b + c. Missing edges weigh 0."""
        GraphManager.check_node(g, v)
        degree = g.degree(v)
        incident = GraphManager._sorted_incidence(g, v)
        weights = [inc.weight for inc in incident[:4]]
        weights += [0] * (4 - len(weights))
        a, b, c, d = weights
        if degree > 4:
            return NodeClass(NodeType.OTHER, (a, b, c, d), degree, over_degree=True)
        if a > b + c + d:
            node_type = NodeType.TYPE_I
        elif a + d < b + c:
            node_type = NodeType.TYPE_III
        else:
            node_type = NodeType.OTHER
        return NodeClass(node_type, (a, b, c, d), degree)

    @staticmethod
    def type_predicts_happy(g: Graph, p: Partition, v: int) -> Optional[bool]:
        """Happiness as read off the node type, or None for nodes of neither type"""
        GraphManager.check_partition(g, p)
        node_class = GraphManager.classify_node(g, v)
        incident = GraphManager._sorted_incidence(g, v)
        in_cut = [p[inc.neighbor] != p[v] for inc in incident]
        if node_class.node_type == NodeType.TYPE_I:
            return in_cut[0] if in_cut else True
        if node_class.node_type == NodeType.TYPE_III:
            return sum(in_cut[:3]) >= 2
        return None

    @staticmethod
    def max_degree(g: Graph) -> int:
        return max((len(items) for items in g.adjacency), default=0)

    @staticmethod
    def total_weight(g: Graph) -> int:
        return sum(w for _, _, w in g.edges)

    @staticmethod
    def flip(p: Partition, v: int) -> Partition:
        colors = list(p.colors)
        colors[v] = 1 - colors[v]
        return Partition(tuple(colors))

    @staticmethod
    def complement(p: Partition) -> Partition:
        return Partition(tuple(1 - c for c in p.colors))
