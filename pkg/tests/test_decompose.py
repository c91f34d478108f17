import numpy as np
import pytest

from helpers import (
    applicable_strategies,
    enumerate_toffoli_cases,
    make_toffoli,
    noncanonical_count,
    verify_lowering,
)
from qudisim.core import WireSpec, digits_to_index
from qudisim.decompose import (
    Strategy,
    ancilla_requirement,
    effective_qutrit_alt_count,
    lower_circuit,
    lower_toffoli,
    predicted_gate_count,
)
from qudisim.errors import InvalidArguments, StrategyInapplicable, TooFewControls
from qudisim.gates import Circuit, ControlSpec, GateOp, XVariant
from qudisim.sim import apply_circuit, run_exact


class TestPredictedCounts:
    def test_chain_canonical(self):
        assert predicted_gate_count(2, 0, 0, Strategy.ANCILLA_CHAIN) == 5

    def test_chain_all_noncanonical_max(self):
        # 4n-3+2k peaks at 6n-3 when k = n
        assert predicted_gate_count(2, 1, 3, Strategy.ANCILLA_CHAIN) == 15

    def test_effective_qutrit_canonical(self):
        assert predicted_gate_count(2, 1, 0, Strategy.EFFECTIVE_QUTRIT) == 7

    def test_chain_mixed_noncanonical(self):
        assert predicted_gate_count(1, 1, 2, Strategy.ANCILLA_CHAIN) == 9

    def test_alt_count_is_one_below(self):
        for n1 in range(0, 4):
            for n2 in range(0, 4):
                if n1 + n2 < 2 or n1 < 1:
                    continue
                for k in range(n1 + n2 + 1):
                    assert (
                        predicted_gate_count(n1, n2, k, Strategy.EFFECTIVE_QUTRIT)
                        - effective_qutrit_alt_count(n1, n2, k)
                    ) == 1

    def test_invalid_arguments(self):
        with pytest.raises(InvalidArguments):
            predicted_gate_count(1, 0, 0, Strategy.ANCILLA_CHAIN)
        with pytest.raises(InvalidArguments):
            predicted_gate_count(2, 1, 4, Strategy.ANCILLA_CHAIN)
        with pytest.raises(StrategyInapplicable):
            predicted_gate_count(0, 2, 0, Strategy.EFFECTIVE_QUTRIT)
        with pytest.raises(StrategyInapplicable):
            predicted_gate_count(1, 1, 0, Strategy.QUBIT_ANCILLA)


class TestAncillaRequirement:
    @pytest.mark.parametrize(
        "n1,n2,strategy,expected",
        [
            (3, 0, Strategy.ANCILLA_CHAIN, (2, 0)),
            (2, 1, Strategy.EFFECTIVE_QUTRIT, (1, 0)),
            (2, 0, Strategy.ANCILLA_CHAIN, (1, 0)),
            (3, 0, Strategy.QUBIT_ANCILLA, (0, 2)),
            (2, 0, Strategy.EFFECTIVE_QUTRIT, (0, 0)),
        ],
    )
    def test_requirements(self, n1, n2, strategy, expected):
        assert ancilla_requirement(n1, n2, strategy) == expected


class TestLoweringEquivalence:
    """Exhaustive n = 2 sweep here; n = 3 and random n = 4 run in acceptance."""

    @pytest.mark.parametrize("case", list(enumerate_toffoli_cases(2)))
    def test_n2_exhaustive(self, case):
        ctrl_dims, states, target_dim, variant = case
        spec, gate = make_toffoli(ctrl_dims, states, target_dim, variant)
        k = noncanonical_count(ctrl_dims, states)
        n1 = sum(1 for d in ctrl_dims if d == 2)
        n2 = len(ctrl_dims) - n1
        for strategy in applicable_strategies(ctrl_dims):
            lowered = verify_lowering(spec, gate, strategy)
            assert len(lowered.circuit.ops) == predicted_gate_count(n1, n2, k, strategy)

    def test_qubit_ancilla_retains_binary_toffolis(self):
        spec, gate = make_toffoli((2, 2, 2), (1, 1, 1), 3, XVariant.PLUS1)
        lowered = verify_lowering(spec, gate, Strategy.QUBIT_ANCILLA)
        assert lowered.toffoli_count == 4
        assert lowered.elementary_gate_count == 1
        assert lowered.ancilla_wires == (4, 5)

    def test_qubit_ancilla_full_lowering_flag(self):
        spec, gate = make_toffoli((2, 2, 2), (1, 0, 1), 3, XVariant.SWAP02)
        lowered = verify_lowering(
            spec, gate, Strategy.QUBIT_ANCILLA, lower_binary_toffolis=True
        )
        assert lowered.toffoli_count == 0
        assert all(len(op.wires()) <= 2 for op in lowered.circuit.ops)

    def test_effective_qutrit_improvement(self):
        # canonical controls: exactly 2*n1 - 2 fewer gates than the chain
        for ctrl_dims in [(2, 2), (2, 2, 3), (2, 2, 2), (2, 3, 2, 2)]:
            states = tuple(d - 1 for d in ctrl_dims)
            spec, gate = make_toffoli(ctrl_dims, states, 3, XVariant.PLUS1)
            chain = lower_toffoli(spec, gate, Strategy.ANCILLA_CHAIN)
            eff = lower_toffoli(spec, gate, Strategy.EFFECTIVE_QUTRIT)
            n1 = sum(1 for d in ctrl_dims if d == 2)
            assert len(chain.circuit.ops) - len(eff.circuit.ops) == 2 * n1 - 2

    def test_promoted_wires_reported(self):
        spec, gate = make_toffoli((2, 2, 2), (1, 1, 1), 3, XVariant.PLUS1)
        lowered = lower_toffoli(spec, gate, Strategy.EFFECTIVE_QUTRIT)
        assert lowered.promoted_wires == (1, 2)
        assert lowered.circuit.spec.dims[1] == 3
        assert lowered.circuit.spec.dims[2] == 3

    def test_ancillas_restored_on_basis_states(self):
        spec, gate = make_toffoli((3, 2, 3), (0, 1, 1), 3, XVariant.SWAP12)
        lowered = lower_toffoli(spec, gate, Strategy.ANCILLA_CHAIN)
        lspec = lowered.circuit.spec
        pad = lspec.num_wires - spec.num_wires
        for idx in range(spec.total_dim):
            digits = []
            v = idx
            for d in reversed(spec.dims):
                v, r = divmod(v, d)
                digits.append(r)
            digits = tuple(reversed(digits)) + (0,) * pad
            amps = np.zeros(lspec.total_dim, dtype=complex)
            amps[digits_to_index(digits, lspec)] = 1.0
            out = apply_circuit(lowered.circuit, amps)
            hot = np.flatnonzero(np.abs(out) > 1e-12)
            assert len(hot) == 1 and abs(abs(out[hot[0]]) - 1.0) < 1e-12
            out_digits = []
            v = int(hot[0])
            for d in reversed(lspec.dims):
                v, r = divmod(v, d)
                out_digits.append(r)
            out_digits = tuple(reversed(out_digits))
            assert out_digits[spec.num_wires:] == (0,) * pad


class TestErrors:
    def test_too_few_controls(self):
        spec = WireSpec((3, 3))
        gate = GateOp.controlled_flip([ControlSpec(0, 2)], 1, XVariant.PLUS1)
        with pytest.raises(TooFewControls):
            lower_toffoli(spec, gate, Strategy.ANCILLA_CHAIN)

    def test_strategy_inapplicable(self):
        spec, gate = make_toffoli((3, 3), (2, 2), 3, XVariant.PLUS1)
        with pytest.raises(StrategyInapplicable):
            lower_toffoli(spec, gate, Strategy.EFFECTIVE_QUTRIT)
        with pytest.raises(StrategyInapplicable):
            lower_toffoli(spec, gate, Strategy.QUBIT_ANCILLA)


class TestLowerCircuit:
    def test_passthrough_and_pool_reuse(self):
        spec = WireSpec((2, 2, 3))
        circuit = Circuit(spec)
        circuit.add(GateOp.hadamard(0))
        circuit.add(GateOp.controlled_flip(
            [ControlSpec(0, 1), ControlSpec(1, 1)], 2, XVariant.PLUS1))
        circuit.add(GateOp.controlled_flip(
            [ControlSpec(0, 0), ControlSpec(1, 1)], 2, XVariant.PLUS2))
        lowered = lower_circuit(circuit, Strategy.ANCILLA_CHAIN)
        # one shared ancilla for both two-control gates
        assert len(lowered.ancilla_wires) == 1
        assert lowered.circuit.spec.dims[3] == 3

    def test_hadamard_on_promoted_wire_gets_subdim(self):
        spec = WireSpec((2, 2, 3))
        circuit = Circuit(spec)
        circuit.add(GateOp.hadamard(0))
        circuit.add(GateOp.hadamard(1))
        circuit.add(GateOp.controlled_flip(
            [ControlSpec(0, 1), ControlSpec(1, 1)], 2, XVariant.PLUS1))
        lowered = lower_circuit(circuit, Strategy.EFFECTIVE_QUTRIT)
        assert lowered.promoted_wires == (1,)
        hs = [op for op in lowered.circuit.ops if op.kind == "hadamard"]
        assert hs[0].subdim is None and hs[1].subdim == 2

    def test_share_chains_state_equivalent_and_smaller(self):
        from qudisim.encoding import build_encoding_circuit, demo_image, expected_state

        image = demo_image()
        circuit = build_encoding_circuit(image)
        reference = expected_state(image).amplitudes
        for strategy in (Strategy.ANCILLA_CHAIN, Strategy.EFFECTIVE_QUTRIT):
            plain = lower_circuit(circuit, strategy)
            shared = lower_circuit(circuit, strategy, share_chains=True)
            assert len(shared.circuit.ops) < len(plain.circuit.ops)
            state = run_exact(shared.circuit).amplitudes
            total = len(reference)
            if strategy is Strategy.ANCILLA_CHAIN:
                block = state.reshape(total, -1)
                assert np.abs(block[:, 0] - reference).max() < 1e-10
                assert np.abs(block[:, 1:]).max() < 1e-12
            else:
                from qudisim.core import index_to_digits
                lspec = shared.circuit.spec
                rspec = expected_state(image).spec
                restricted = np.zeros(total, dtype=complex)
                for idx in range(total):
                    digits = index_to_digits(idx, rspec)
                    padded = digits + (0,) * (lspec.num_wires - len(digits))
                    restricted[idx] = state[digits_to_index(padded, lspec)]
                assert np.abs(restricted - reference).max() < 1e-10
        # demo image: 18 groups of 5 same-control flips share their chains
        plain = lower_circuit(circuit, Strategy.ANCILLA_CHAIN)
        shared = lower_circuit(circuit, Strategy.ANCILLA_CHAIN, share_chains=True)
        saved = len(plain.circuit.ops) - len(shared.circuit.ops)
        # each group saves 4 chain gates and 2k sandwich gates per extra flip
        assert saved >= 18 * 4 * 4

    def test_lowered_state_matches_original(self):
        spec = WireSpec((2, 2, 3))
        circuit = Circuit(spec)
        for w in (0, 1):
            circuit.add(GateOp.hadamard(w))
        circuit.add(GateOp.controlled_flip(
            [ControlSpec(0, 1), ControlSpec(1, 0)], 2, XVariant.PLUS1))
        reference = run_exact(circuit).amplitudes
        for strategy in (Strategy.ANCILLA_CHAIN, Strategy.EFFECTIVE_QUTRIT):
            lowered = lower_circuit(circuit, strategy)
            state = run_exact(lowered.circuit).amplitudes
            lspec = lowered.circuit.spec
            # original-register amplitudes live at ancilla digits zero
            restricted = np.zeros(spec.total_dim, dtype=complex)
            for idx in range(spec.total_dim):
                digits = []
                v = idx
                for d in reversed(spec.dims):
                    v, r = divmod(v, d)
                    digits.append(r)
                digits = tuple(reversed(digits)) + (0,) * (lspec.num_wires - 3)
                restricted[idx] = state[digits_to_index(digits, lspec)]
            assert np.abs(restricted - reference).max() < 1e-10
