# constants.py

# Application Info
APP_NAME = "cutlab"
APP_VERSION = "1.0.0"
APP_DESCRIPTION = "Local Max-Cut FLIP laboratory: gadget compilation, comparing-node degradation, smoothed experiments"
SCHEMA = "cutlab/1"
ID_CONVENTION = "1-based"
CANONICAL_CONVENTION = "color(node 1) = 0"
ANCHOR_CONVENTION = "color(v_3N) = 1"

# File and Path Names
SETTINGS_FILE = "cutlab_settings.json"
ROLE_MAP_SUFFIX = ".roles.json"
NODE_MAP_SUFFIX = ".nodes.json"

# Limits and Defaults
ENUMERATION_CAP = 24
ENUMERATION_CHUNK = 1 << 16
INT64_SAFE_TOTAL = 1 << 62
VERIFY_MAX_M = 3
DEFAULT_SEED = 0
DEFAULT_CLAIM17_C = 10.0
DEFAULT_FAILURE_DELTA = 0.1
DEFAULT_TAU = 0.01
DEFAULT_DEGREE_FACTOR = 2.0
DEFAULT_NEAR_ZERO_GAIN = 1e-12
DEFAULT_SAFETY_CAP_FACTOR = 50
DEFAULT_SIGMA = 0.1
DEFAULT_TRIALS = 50
DEFAULT_SIZES = [64, 128, 256]
DEFAULT_CUBIC_SIZES = [50, 100, 200, 400]
DEFAULT_CUBIC_STARTS = 20
DEFAULT_CUBIC_MAX_WEIGHT = 1_000_000
CUBIC_SLOPE_LIMIT = 2.2
SMOOTH_N_EXPONENT_LIMIT = 4.0
CLAIM17_SE_FACTOR = 3.0
MAX_WEIGHT_EXPONENT = 12_000
MAX_INTEGER_DIGITS = 3_613
DEGREE_RULES = ("log", "cubic")
LOOKER_SCALE = 4
HOST_SEPARATION = 4

# Graph file grammar
GRAPH_HEADER = "p maxcut {n} {m}"
GRAPH_EDGE_LINE = "e {u} {v} {w}"
GRAPH_EXPONENT_LINE = "x {u} {v} {e}"
COMMENT_PREFIX = "#"

# Circuit file grammar
CIRCUIT_INPUT_LINE = "input {id}"
CIRCUIT_NOR_LINE = "gate {id} NOR {a} {b}"
CIRCUIT_NOT_LINE = "gate {id} NOT {a}"
CIRCUIT_OUTPUTS_LINE = "outputs {ids}"

# Normal form violations
VIOLATION_DUPLICATE_INPUTS = "duplicate inputs at G_{i}"
VIOLATION_TOPOLOGICAL = "topological order: G_{i} reads G_{j}"
VIOLATION_ARITY = "G_{i} is {kind} with fanin {fanin}"
VIOLATION_DANGLING = "G_{i} references missing {what} {j}"
VIOLATION_NON_NOR = "G_{i} is not a NOR gate"
VIOLATION_INPUT_OCCURRENCE = "input X_{j} occurs {count} times"
VIOLATION_NOR_FANOUT = "NOR gate G_{i} has fanout {fanout}"
VIOLATION_NOT_FANOUT = "NOT gate G_{i} has fanout {fanout}"
VIOLATION_INPUT_GATE_KIND = "input-holding gate G_{i} is not a NOT gate"
VIOLATION_INPUT_GATE_FANOUT = "input-holding gate G_{i} has fanout {fanout}"
VIOLATION_INPUT_GATE_POSITION = "input-holding gates must be G_{low}..G_{high}"
VIOLATION_OUTPUTS = "output gates must be G_1..G_{m}"
VIOLATION_OUTPUT_GATE = "output gate G_{i} must be a NOT gate with fanout 0"
VIOLATION_NO_OUTPUTS = "circuit declares no outputs"

# Error Messages
ERROR_PARTITION_LENGTH = "partition has {got} colors, graph has {expected} nodes"
ERROR_NODE_RANGE = "node {v} out of range for {n} nodes"
ERROR_SELF_LOOP = "self-loop at node {v}"
ERROR_DUPLICATE_EDGE = "duplicate edge {{{u}, {v}}}"
ERROR_WEIGHT = "edge {{{u}, {v}}} has non-positive weight {w}"
ERROR_ENUMERATION_CAP = "{free} free nodes exceed the enumeration cap of {cap}"
ERROR_PIN_COLOR = "pin for node {v} has color {c}"
ERROR_STEP_LIMIT = "step limit must be non-negative, got {limit}"
ERROR_DEGREE_RULE = "degree must be log, cubic or a positive integer, got '{value}'"
ERROR_ASSIGNMENT_LENGTH = "assignment has {got} bits, circuit has {expected} inputs"
ERROR_SCALE_FACTOR = "scale factor must be >= 1, got {factor}"
ERROR_BUDGET = "budget must be >= 1, got {budget}"
ERROR_LOOK_AT_LENGTH = "looker has {expected} input nodes, got {got} look-at nodes"
ERROR_BIAS_LENGTH = "looker has {expected} output nodes, got {got} bias targets"
ERROR_BIAS_TARGET_TWICE = "host node {v} receives more than one biaser edge"
ERROR_LOOK_AT_TWICE = "host node {v} is looked at twice"
ERROR_NEEDS_ANCHOR = "looker contains NOR gates; an anchor host node is required"
ERROR_NOT_LOOKER = "attach_biaser needs a looker-mode compiled graph"
ERROR_COMPARING_ARITY = "no delta edge / wrong arity: node {v} has degree {degree}"
ERROR_COMPARING_PAIRING = "odd pairing at node {v}: weights {weights}"
ERROR_COMPARING_AMBIGUOUS = "ambiguous pairing at node {v}: several candidates for the biaser edge"
ERROR_COMPARING_RATIO = "ratio condition violated at node {v}: {detail}"
ERROR_COMPARING_BIASER = "attested biaser node {u} is not adjacent to node {v}"
ERROR_MISSING_COLOR = "no color given for node {v}"
ERROR_SPEC_MISMATCH = "comparing spec does not match node {v} of the graph"
ERROR_VERIFY_M = "verify_theorem1 supports m in 1..{max_m}, got {m}"
ERROR_EDGELESS = "graph has no edges to normalize"
ERROR_SIGMA = "sigma must satisfy 0 < sigma < 1, got {sigma}"
ERROR_EMPTY_TRIALS = "number of trials must be positive"
ERROR_CLAIM17_K = "k must be >= 1 and the subset within 1..k"
ERROR_DELTA_PRIME = "delta' must satisfy 0 < delta' < 1, got {value}"
ERROR_EMPTY_GRID = "experiment grid is empty"
ERROR_SIZE = "graph sizes must be >= 2, got {n}"
ERROR_REGULAR = "no {d}-regular graph on {n} nodes"
ERROR_GENERATOR = "could not build a normal-form circuit with {n} inputs, {m} outputs and {middle} inner gates"
ERROR_ASSIGNMENT_REQUIRED = "--assignment is required in cvp mode"

# Format errors
ERROR_FORMAT_EMPTY = "empty {what} file"
ERROR_FORMAT_HEADER = "expected header 'p maxcut <n> <m>'"
ERROR_FORMAT_DUPLICATE_HEADER = "header given twice"
ERROR_FORMAT_LINE_TYPE = "unknown line type '{token}'"
ERROR_FORMAT_FIELDS = "'{kind}' line takes {expected} fields, got {got}"
ERROR_FORMAT_INTEGER = "expected {what}, got '{token}'"
ERROR_FORMAT_NODE_ID = "node id {value} outside 1..{n}"
ERROR_FORMAT_SELF_LOOP = "self-loop at node {value}"
ERROR_FORMAT_DUPLICATE_EDGE = "duplicate edge {{{u}, {v}}}"
ERROR_FORMAT_EDGE_COUNT = "header declares {expected} edges, file has {got}"
ERROR_FORMAT_EXPONENT = "exponent {value} exceeds the limit of {limit}"
ERROR_FORMAT_DIGITS = "{what} has {digits} digits, the limit is {limit}"
ERROR_FORMAT_DUPLICATE_ID = "id {value} defined twice"
ERROR_FORMAT_UNKNOWN_ID = "reference to undefined id {value}"
ERROR_FORMAT_GATE_IDS = "gate ids must be exactly 1..{n}"
ERROR_FORMAT_OUTPUTS = "expected exactly one 'outputs' line"
ERROR_FORMAT_OUTPUT_ID = "output {value} is not a gate id"
ERROR_FORMAT_PARTITION_CHAR = "expected '0' or '1', got '{char}'"
ERROR_FORMAT_PARTITION_LENGTH = "partition has {got} colors, expected {expected}"

# Log Messages
LOG_APP_STARTED = "cutlab {version} started: command {command}"
LOG_FATAL_ERROR = "Fatal error in cutlab"
LOG_DOMAIN_ERROR = "cutlab error: {error}"
LOG_SETTINGS_LOADED = "Settings loaded from {path}"
LOG_SETTINGS_CREATED = "No settings file found, created default settings file: {path}"
LOG_SETTINGS_ERROR = "Error loading settings: {error}"
LOG_SETTINGS_SAVE_ERROR = "Error saving settings: {error}"
LOG_REPORT_SAVED = "Report written to {path}"
LOG_ENUMERATION = "Enumerating {total} colorings of {free} free nodes ({dtype})"
LOG_ENUMERATION_DONE = "Enumeration found {count} local optima"
LOG_FLIP_DONE = "FLIP run finished after {steps} steps (limit reached: {limit})"
LOG_COMPILED = "Compiled {mode} graph: {nodes} nodes, {edges} edges, max degree {degree}"
LOG_BIASER_ATTACHED = "Attached biaser: host scale {host_scale}, {targets} targets, {nodes} composite nodes"
LOG_DEGRADED = "Degraded node {v}: m={m}, {internal} internal nodes, scale {scale}"
LOG_VERIFY_START = "Verifying degradation for m={m}: {cases} neighbor cases, {internal} internal nodes"
LOG_VERIFY_DONE = "Verification for m={m}: {result} ({failures} counterexamples)"
LOG_DEGREE_WARNING = "max degree {d} exceeds {limit} = ceil({factor} * log2 {n})"
LOG_TRIAL_CAP = "trial seed {seed} hit the safety cap of {cap} steps"
LOG_NEAR_ZERO_GAIN = "trial seed {seed} flipped with gain {gain:.3e} below the trusted floor"
LOG_EXPERIMENT_START = "Smoothed experiment: {jobs} trials on {workers} workers"
LOG_EXPERIMENT_DONE = "Smoothed experiment finished: {converged}/{jobs} converged"
LOG_CUBIC_DONE = "Cubic benchmark slope {slope:.3f} (limit {limit})"
LOG_CLAIM17 = "Claim check k={k}: estimate {estimate:.3e}, bound {bound:.3e}"
LOG_WORKERS = "Using {workers} workers"

# Verdicts
PASS = "PASS"
FAIL = "FAIL"
