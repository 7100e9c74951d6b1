"""Circuit manager for NOR/NOT circuits and the CIRCUITFLIP problem."""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from models import Circuit, CircuitError, Gate, GateKind, NormalFormMode, Ref
import constants

logger = logging.getLogger(__name__)


class CircuitManager:
    """Handles structural checks and evaluation of normalized circuits"""

    @staticmethod
    def fanout(c: Circuit) -> Dict[int, int]:
        """Number of gates reading each gate; outputs do not count"""
        counts = {gate.index: 0 for gate in c.gates}
        for gate in c.gates:
            for ref in gate.operands:
                if not ref.is_input and ref.index in counts:
                    counts[ref.index] += 1
        return counts

    @staticmethod
    def input_holders(c: Circuit) -> Dict[int, List[int]]:
        """For each input X_j the gates reading it"""
        holders: Dict[int, List[int]] = {j: [] for j in range(1, c.n_inputs + 1)}
        for gate in c.gates:
            for ref in gate.operands:
                if ref.is_input and ref.index in holders:
                    holders[ref.index].append(gate.index)
        return holders

    @staticmethod
    def validate_normal_form(c: Circuit, mode: NormalFormMode) -> List[str]:
        violations: List[str] = []
        n, big_n = c.n_inputs, c.gate_count

        for gate in c.gates:
            expected = 2 if gate.kind == GateKind.NOR else 1
            if len(gate.operands) != expected:
                violations.append(constants.VIOLATION_ARITY.format(
                    i=gate.index, kind=gate.kind.value, fanin=len(gate.operands)))
            for ref in gate.operands:
                if ref.is_input and not 1 <= ref.index <= n:
                    violations.append(constants.VIOLATION_DANGLING.format(i=gate.index, what="input", j=ref.index))
                elif not ref.is_input and not 1 <= ref.index <= big_n:
                    violations.append(constants.VIOLATION_DANGLING.format(i=gate.index, what="gate", j=ref.index))
                elif not ref.is_input and ref.index <= gate.index:
                    violations.append(constants.VIOLATION_TOPOLOGICAL.format(i=gate.index, j=ref.index))
            if gate.kind == GateKind.NOR and len(gate.operands) == 2 and gate.operands[0] == gate.operands[1]:
                violations.append(constants.VIOLATION_DUPLICATE_INPUTS.format(i=gate.index))

        if not c.outputs:
            violations.append(constants.VIOLATION_NO_OUTPUTS)
        for i in c.outputs:
            if not 1 <= i <= big_n:
                violations.append(constants.VIOLATION_DANGLING.format(i=i, what="output gate", j=i))

        if mode == NormalFormMode.NOR_ONLY:
            for gate in c.gates:
                if gate.kind != GateKind.NOR:
                    violations.append(constants.VIOLATION_NON_NOR.format(i=gate.index))
            for j, holders in CircuitManager.input_holders(c).items():
                if len(holders) != 1:
                    violations.append(constants.VIOLATION_INPUT_OCCURRENCE.format(j=j, count=len(holders)))
            return violations

        violations.extend(CircuitManager._gadget_violations(c))
        return violations

    @staticmethod
    def _gadget_violations(c: Circuit) -> List[str]:
        violations: List[str] = []
        n, big_n = c.n_inputs, c.gate_count
        m = len(c.outputs)
        fanout = CircuitManager.fanout(c)
        holders = CircuitManager.input_holders(c)
        holding_gates = sorted({i for gates in holders.values() for i in gates})

        for j, gates in holders.items():
            if len(gates) != 1:
                violations.append(constants.VIOLATION_INPUT_OCCURRENCE.format(j=j, count=len(gates)))
        if holding_gates != list(range(big_n - n + 1, big_n + 1)):
            violations.append(constants.VIOLATION_INPUT_GATE_POSITION.format(low=big_n - n + 1, high=big_n))
        if tuple(c.outputs) != tuple(range(1, m + 1)):
            violations.append(constants.VIOLATION_OUTPUTS.format(m=m))

        for gate in c.gates:
            i = gate.index
            holds_input = any(ref.is_input for ref in gate.operands)
            if holds_input:
                if gate.kind != GateKind.NOT:
                    violations.append(constants.VIOLATION_INPUT_GATE_KIND.format(i=i))
                if fanout[i] != 1:
                    violations.append(constants.VIOLATION_INPUT_GATE_FANOUT.format(i=i, fanout=fanout[i]))
                continue
            if i in c.outputs:
                if gate.kind != GateKind.NOT or fanout[i] != 0:
                    violations.append(constants.VIOLATION_OUTPUT_GATE.format(i=i))
                continue
            if gate.kind == GateKind.NOR and fanout[i] != 1:
                violations.append(constants.VIOLATION_NOR_FANOUT.format(i=i, fanout=fanout[i]))
            if gate.kind == GateKind.NOT and fanout[i] > 2:
                violations.append(constants.VIOLATION_NOT_FANOUT.format(i=i, fanout=fanout[i]))
        return violations

    @staticmethod
    def check_length(c: Circuit, x: Sequence[int]):
        if len(x) != c.n_inputs:
            raise CircuitError(constants.ERROR_ASSIGNMENT_LENGTH.format(got=len(x), expected=c.n_inputs))

    @staticmethod
    def eval(c: Circuit, x: Sequence[int]) -> List[int]:
        """Per-gate values; entry i-1 holds the value of G_i"""
        CircuitManager.check_length(c, x)
        values: Dict[int, int] = {}
        for gate in reversed(c.gates):
            args = []
            for ref in gate.operands:
                if ref.is_input:
                    args.append(int(x[ref.index - 1]))
                elif ref.index in values:
                    args.append(values[ref.index])
                else:
                    raise CircuitError(constants.VIOLATION_TOPOLOGICAL.format(i=gate.index, j=ref.index))
            values[gate.index] = 0 if any(args) else 1
        return [values[i] for i in range(1, c.gate_count + 1)]

    @staticmethod
    def input_gate_order(c: Circuit) -> List[int]:
        """Gate holding X_1, X_2, ... in input order"""
        holders = CircuitManager.input_holders(c)
        return [holders[j][0] for j in range(1, c.n_inputs + 1)]

    @staticmethod
    def eval_from_input_gates(c: Circuit, gate_values: Sequence[int]) -> List[int]:
        """Evaluate when the input-holding gates' values are given; inputs are their negations"""
        return CircuitManager.eval(c, [1 - int(b) for b in gate_values])

    @staticmethod
    def cf_objective(c: Circuit, x: Sequence[int]) -> int:
        values = CircuitManager.eval(c, x)
        return sum(values[i - 1] << k for k, i in enumerate(c.outputs))

    @staticmethod
    def cf_improving_neighbor(c: Circuit, x: Sequence[int]) -> Optional[Tuple[int, ...]]:
        """Lowest-index single-bit flip that raises the objective"""
        current = CircuitManager.cf_objective(c, x)
        for j in range(len(x)):
            candidate = list(x)
            candidate[j] = 1 - candidate[j]
            if CircuitManager.cf_objective(c, candidate) > current:
                return tuple(int(b) for b in candidate)
        return None

    @staticmethod
    def cf_local_search(c: Circuit, x0: Sequence[int], step_limit: int = 10_000) -> Tuple[Tuple[int, ...], int]:
        x = tuple(int(b) for b in x0)
        CircuitManager.check_length(c, x)
        steps = 0
        while steps < step_limit:
            better = CircuitManager.cf_improving_neighbor(c, x)
            if better is None:
                break
            x = better
            steps += 1
        return x, steps


class CircuitBuilder:
    """Builds circuits used as oracle instances and as biasers"""

    @staticmethod
    def from_gates(n_inputs: int, gates: Sequence[Tuple[GateKind, Sequence[Ref]]],
                   outputs: Sequence[int], input_ids: Optional[Sequence[int]] = None) -> Circuit:
        """gates[k] becomes G_{k+1}"""
        built = tuple(Gate(k + 1, kind, tuple(refs)) for k, (kind, refs) in enumerate(gates))
        if input_ids is None:
            input_ids = range(len(built) + 1, len(built) + 1 + n_inputs)
        return Circuit(tuple(input_ids), built, tuple(outputs))

    @staticmethod
    def fanout_circuit(identity_flags: Sequence[bool]) -> Circuit:
        """NOT-only circuit with one input; output j reads back the input gate's value
        when identity_flags[j] is true and its negation otherwise.

        A spine of NOT gates hangs off the input gate; spine gate k carries the
        input gate's value negated k times and feeds at most one output.
        """
        slots: List[int] = []
        k = 0
        for identity in identity_flags:
            k += 1
            if (k % 2 == 1) != bool(identity):
                k += 1
            slots.append(k)
        m, spine = len(identity_flags), k
        big_n = m + spine + 1

        def spine_index(step: int) -> int:
            return m + spine - step + 1

        gates: Dict[int, Tuple[GateKind, Tuple[Ref, ...]]] = {
            big_n: (GateKind.NOT, (Ref(True, 1),)),
        }
        for step in range(1, spine + 1):
            source = big_n if step == 1 else spine_index(step - 1)
            gates[spine_index(step)] = (GateKind.NOT, (Ref(False, source),))
        for j, step in enumerate(slots, start=1):
            gates[j] = (GateKind.NOT, (Ref(False, spine_index(step)),))
        ordered = [gates[i] for i in range(1, big_n + 1)]
        return CircuitBuilder.from_gates(1, ordered, range(1, m + 1))

    @staticmethod
    def random_normal_circuit(n_inputs: int, n_outputs: int, n_middle: int,
                              rng: np.random.Generator, attempts: int = 500) -> Circuit:
        """Random circuit satisfying the gadget normal form.

        Gates G_{N-n+1}..G_N hold the inputs, G_1..G_m are the outputs and the
        n_middle gates between them are NOR or NOT gates.
        """
        for _ in range(attempts):
            circuit = CircuitBuilder._attempt(n_inputs, n_outputs, n_middle, rng)
            if circuit is not None:
                return circuit
        raise CircuitError(constants.ERROR_GENERATOR.format(n=n_inputs, m=n_outputs, middle=n_middle))

    @staticmethod
    def _attempt(n: int, m: int, middle: int, rng: np.random.Generator) -> Optional[Circuit]:
        big_n = n + middle + m
        gates: Dict[int, Tuple[GateKind, Tuple[Ref, ...]]] = {}
        pending: List[int] = []   # gates still waiting for their first reader
        spare: List[int] = []     # inner NOT gates that may take a second reader

        order = list(range(1, n + 1))
        rng.shuffle(order)
        for offset, j in enumerate(order):
            i = big_n - n + 1 + offset
            gates[i] = (GateKind.NOT, (Ref(True, j),))
            pending.append(i)

        def take(pool: List[int]) -> int:
            return pool.pop(int(rng.integers(len(pool))))

        def first_read(source: int):
            # an inner NOT gate may be read a second time later on
            if gates[source][0] == GateKind.NOT and not gates[source][1][0].is_input:
                spare.append(source)

        for i in range(big_n - n, m, -1):
            remaining = i - m
            surplus = len(pending) - m
            can_nor = len(pending) + len(spare) >= 2 and len(pending) >= 1
            must_reduce = surplus >= remaining and len(pending) >= 2
            if must_reduce or (can_nor and surplus > 0 and rng.random() < 0.6):
                first = take(pending)
                from_pending = bool(pending) and (not spare or rng.random() < 0.7)
                pool = pending if from_pending else spare
                if not pool:
                    return None
                second = take(pool)
                first_read(first)
                if from_pending:
                    first_read(second)
                gates[i] = (GateKind.NOR, (Ref(False, first), Ref(False, second)))
            elif surplus < 0 and spare:
                gates[i] = (GateKind.NOT, (Ref(False, take(spare)),))
            elif pending:
                source = take(pending)
                first_read(source)
                gates[i] = (GateKind.NOT, (Ref(False, source),))
            else:
                return None
            pending.append(i)

        for i in range(m, 0, -1):
            if pending:
                source = take(pending)
                first_read(source)
            elif spare:
                source = take(spare)
            else:
                return None
            gates[i] = (GateKind.NOT, (Ref(False, source),))
        if pending:
            return None

        circuit = CircuitBuilder.from_gates(n, [gates[i] for i in range(1, big_n + 1)], range(1, m + 1))
        if CircuitManager.validate_normal_form(circuit, NormalFormMode.GADGET):
            return None
        return circuit
