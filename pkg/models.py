"""Data models, enums and errors for the cutlab Max-Cut FLIP laboratory."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple


class LogLevel(Enum):
    DEBUG = 0
    INFO = 1
    WARNING = 2
    ERROR = 3


class NodeType(Enum):
    TYPE_I = "TypeI"
    TYPE_III = "TypeIII"
    OTHER = "Other"


class PivotRule(Enum):
    FIRST = "first"
    BEST = "best"
    RANDOM = "random"


class GateKind(Enum):
    NOR = "NOR"
    NOT = "NOT"


class NormalFormMode(Enum):
    NOR_ONLY = "nor-only"
    GADGET = "gadget"


class CompileMode(Enum):
    CVP = "cvp"
    LOOKER = "looker"


class BiasPolarity(Enum):
    OPPOSITE = "opposite"
    SAME = "same"


# Errors

class CutLabError(Exception):
    """Base class for every domain error; the CLI maps it to exit code 1"""


class GraphError(CutLabError):
    pass


class PartitionMismatchError(CutLabError):
    pass


class EnumerationCapError(CutLabError):
    pass


class CircuitError(CutLabError):
    pass


class NormalFormError(CircuitError):
    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("circuit is not in normal form: " + "; ".join(self.violations))


class CompileError(CutLabError):
    pass


class ComparingSpecError(CutLabError):
    pass


class SmoothedError(CutLabError):
    pass


class FormatError(CutLabError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"line {line}, col {column}: {message}"
        super().__init__(message)


# Graph core

class Edge(NamedTuple):
    u: int
    v: int
    weight: int


class Incidence(NamedTuple):
    neighbor: int
    weight: int
    edge_id: int


@dataclass(frozen=True)
class Graph:
    """Undirected graph with positive arbitrary-precision integer weights.

    Construct through GraphManager.build_graph, which checks the structural
    invariants; the adjacency index is derived here.
    """
    node_count: int
    edges: Tuple[Edge, ...]
    adjacency: Tuple[Tuple[Incidence, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        incident: List[List[Incidence]] = [[] for _ in range(self.node_count)]
        for edge_id, (u, v, w) in enumerate(self.edges):
            incident[u].append(Incidence(v, w, edge_id))
            incident[v].append(Incidence(u, w, edge_id))
        object.__setattr__(self, "adjacency", tuple(tuple(items) for items in incident))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


@dataclass(frozen=True)
class Partition:
    colors: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def __str__(self) -> str:
        return "".join(str(c) for c in self.colors)

    @classmethod
    def from_string(cls, bits: str) -> "Partition":
        return cls(tuple(int(ch) for ch in bits))


@dataclass(frozen=True)
class NodeClass:
    node_type: NodeType
    weights: Tuple[int, int, int, int]
    degree: int
    over_degree: bool = False


# Flip engine

class FlipStep(NamedTuple):
    node: int
    gain: int


@dataclass
class FlipTrace:
    initial: Partition
    steps: List[FlipStep]
    final: Partition
    initial_cut: int
    final_cut: int
    rule: PivotRule
    seed: int
    step_limit: int
    reached_limit: bool = False

    @property
    def step_count(self) -> int:
        return len(self.steps)


# Circuits

class Ref(NamedTuple):
    is_input: bool
    index: int


@dataclass(frozen=True)
class Gate:
    index: int
    kind: GateKind
    operands: Tuple[Ref, ...]


@dataclass(frozen=True)
class Circuit:
    """Gates G_1..G_N stored in index order; outputs list G_1 first (least significant).

    input_ids are the labels the circuit file gave X_1..X_n.
    """
    input_ids: Tuple[int, ...]
    gates: Tuple[Gate, ...]
    outputs: Tuple[int, ...]

    @property
    def n_inputs(self) -> int:
        return len(self.input_ids)

    @property
    def gate_count(self) -> int:
        return len(self.gates)


# Circuit to cut compilation

@dataclass(frozen=True)
class CompiledGraph:
    graph: Graph
    mode: CompileMode
    gate_count: int
    role_map: Dict[int, str]
    s_nodes: Tuple[int, ...] = ()
    t_nodes: Tuple[int, ...] = ()
    output_gates: Tuple[int, ...] = ()
    has_nor: bool = True

    @property
    def anchor(self) -> int:
        """Node id of v_{3N}; black in the canonical reading of a local optimum."""
        return 3 * self.gate_count - 1


class BiasEdge(NamedTuple):
    output_node: int
    target: int
    polarity: BiasPolarity
    weight: int


@dataclass
class BiasWiring:
    edges: List[BiasEdge]
    host_scale: int
    looker_scale: int


@dataclass
class BiasedGraph:
    graph: Graph
    wiring: BiasWiring
    looker_nodes: Dict[int, int]
    relay_nodes: Dict[int, int] = field(default_factory=dict)


# Comparing gadget

class ComparingPair(NamedTuple):
    first: int
    second: int
    weight: int


@dataclass(frozen=True)
class BiaserAttestation:
    """Caller's statement that `node` belongs to a subgraph biasing the center."""
    node: Optional[int] = None


@dataclass(frozen=True)
class ComparingSpec:
    center: int
    pairs: Tuple[ComparingPair, ...]
    biaser_node: int
    delta: int
    attested: bool = False

    @property
    def m(self) -> int:
        return len(self.pairs)


class RewiredEdge(NamedTuple):
    external: int
    attachment: int
    weight: int


@dataclass
class DegradedGadget:
    graph: Graph
    spec: ComparingSpec
    node_map: Dict[int, int]
    first_nodes: Dict[Tuple[int, int], int]
    second_nodes: Dict[Tuple[int, int], int]
    labels: Dict[int, str]
    biaser: BiasedGraph
    biaser_circuit: Circuit
    biaser_nodes: Dict[int, int]
    rewired: List[RewiredEdge]
    scale: int

    @property
    def internal_nodes(self) -> List[int]:
        return sorted(list(self.first_nodes.values()) + list(self.second_nodes.values()))


@dataclass
class Counterexample:
    neighbor_colors: str
    biaser_color: int
    expected: int
    optima: List[str]
    reason: str


@dataclass
class VerificationReport:
    m: int
    delta: int
    internal_nodes: int
    cases: int
    passed: bool
    counterexamples: List[Counterexample] = field(default_factory=list)
    biaser_happy: bool = True


# Smoothed analysis

@dataclass(frozen=True)
class RealGraph:
    """Real-weighted graph; edge arrays are numpy arrays in a fixed edge order."""
    node_count: int
    us: object
    vs: object
    weights: object
    w_max: float = 1.0

    @property
    def edge_count(self) -> int:
        return len(self.weights)


@dataclass
class TrialStats:
    n: int
    m: int
    d: int
    sigma: float
    seed: int
    rule: PivotRule
    steps: int
    min_flip_gain: Optional[float]
    final_cut: float
    converged: bool = True
    low_gain_flips: int = 0
    near_zero_flips: int = 0


@dataclass
class Claim17Result:
    k: int
    subset: Tuple[int, ...]
    a: float
    delta_prime: float
    sigma: float
    c: float
    samples: int
    hits: int
    estimate: float
    bound: float
    standard_error: float
    passed: bool


@dataclass
class ExperimentConfig:
    sizes: List[int]
    sigmas: List[float]
    trials: int
    rules: List[PivotRule]
    seed: int
    degree_rule: str = "log"
    degree_factor: float = 2.0
    failure_delta: float = 0.1
    tau: float = 0.01
    quantile_constant: float = 1.0
    n_power: float = 4.0
    sigma_power: float = 1.0
    max_workers: int = 1
    safety_cap_factor: int = 50
    near_zero_gain: float = 1e-12


@dataclass
class SmoothedReport:
    config: Dict[str, object]
    trials: List[TrialStats]
    aggregates: Dict[str, object]
    fits: Dict[str, object]
    checks: Dict[str, object]


@dataclass
class CubicBenchConfig:
    sizes: List[int]
    starts: int
    seed: int
    rule: PivotRule = PivotRule.RANDOM
    max_weight: int = 1_000_000
    slope_limit: float = 2.2
    max_workers: int = 1


# Settings

@dataclass
class LabSettings:
    enumeration_cap: int = 24
    log_level: LogLevel = LogLevel.INFO
    claim17_c: float = 10.0
    failure_delta: float = 0.1
    tau: float = 0.01
    quantile_constant: float = 1.0
    n_power: float = 4.0
    sigma_power: float = 1.0
    degree_factor: float = 2.0
    max_workers: int = 0
    near_zero_gain: float = 1e-12
    safety_cap_factor: int = 50
