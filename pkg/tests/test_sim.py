import numpy as np
import pytest

from qudisim.core import WireSpec
from qudisim.errors import (
    DimensionTooLarge,
    InvalidArguments,
    InvalidDimension,
    InvalidStrength,
    NoiseOnUnloweredCircuit,
)
from qudisim.gates import (
    Circuit,
    ControlSpec,
    GateOp,
    XVariant,
    gate_unitary,
    hadamard_matrix,
)
from qudisim.sim import (
    NoiseModel,
    ShotHistogram,
    circuit_unitary,
    depolarizing_kraus,
    run_exact,
    sample_shots,
    weyl_operator,
)


class TestRunExact:
    def test_empty_circuit(self):
        state = run_exact(Circuit(WireSpec((3,))))
        assert np.array_equal(state.amplitudes, [1, 0, 0])

    def test_single_h3(self):
        circuit = Circuit(WireSpec((3,)))
        circuit.add(GateOp.hadamard(0))
        state = run_exact(circuit)
        assert np.abs(state.amplitudes - 1 / np.sqrt(3)).max() < 1e-12

    def test_h2_tensor_h3(self):
        circuit = Circuit(WireSpec((2, 3)))
        circuit.add(GateOp.hadamard(0))
        circuit.add(GateOp.hadamard(1))
        state = run_exact(circuit)
        assert np.abs(np.abs(state.amplitudes) - 1 / np.sqrt(6)).max() < 1e-12

    def test_norm_preserved(self):
        circuit = Circuit(WireSpec((3, 2, 3)))
        circuit.add(GateOp.hadamard(0))
        circuit.add(GateOp.controlled_flip([ControlSpec(0, 2)], 2, XVariant.PLUS1))
        circuit.add(GateOp.hadamard(1))
        assert abs(run_exact(circuit).norm() - 1.0) < 1e-10


class TestCircuitUnitary:
    def test_empty_is_identity(self):
        assert np.array_equal(circuit_unitary(Circuit(WireSpec((3, 2)))), np.eye(6))

    def test_single_gate(self):
        circuit = Circuit(WireSpec((3,)))
        circuit.add(GateOp.x(0, XVariant.PLUS1))
        assert np.array_equal(circuit_unitary(circuit), XVariant.PLUS1.matrix(3))

    def test_gate_then_inverse(self):
        circuit = Circuit(WireSpec((3, 3)))
        op = GateOp.controlled_flip([ControlSpec(0, 2)], 1, XVariant.PLUS1)
        inv = GateOp.controlled_flip([ControlSpec(0, 2)], 1, XVariant.PLUS2)
        circuit.add(op)
        circuit.add(inv)
        assert np.abs(circuit_unitary(circuit) - np.eye(9)).max() < 1e-12

    def test_embedding_matches_gate_unitary(self):
        spec = WireSpec((2, 3))
        circuit = Circuit(spec)
        op = GateOp.controlled_flip([ControlSpec(0, 1)], 1, XVariant.SWAP12)
        circuit.add(op)
        assert np.array_equal(circuit_unitary(circuit), gate_unitary(op, spec))

    def test_dimension_cap(self):
        with pytest.raises(DimensionTooLarge):
            circuit_unitary(Circuit(WireSpec((2,) * 13)))


class TestWeylAndKraus:
    @pytest.mark.parametrize("dim", [2, 3, 4, 6, 9])
    def test_weyl_unitary(self, dim):
        for a in range(dim):
            for b in range(dim):
                w = weyl_operator(dim, a, b)
                assert np.abs(w @ w.conj().T - np.eye(dim)).max() < 1e-12

    @pytest.mark.parametrize("dim", [2, 3, 4, 6, 9])
    @pytest.mark.parametrize("lam", [0.0, 1e-4, 0.3, 1.0])
    def test_completeness(self, dim, lam):
        total = np.zeros((dim, dim), dtype=complex)
        for op in depolarizing_kraus(dim, lam):
            total += op.conj().T @ op
        assert np.abs(total - np.eye(dim)).max() < 1e-12

    def test_operator_count_and_weights(self):
        ops = depolarizing_kraus(3, 0.0)
        assert len(ops) == 9
        assert np.array_equal(ops[0], np.eye(3))
        assert all(np.abs(op).max() == 0.0 for op in ops[1:])

    def test_identity_weight(self):
        ops = depolarizing_kraus(6, 1e-4)
        assert abs(ops[0][0, 0] - np.sqrt(1 - 1e-4)) < 1e-15

    def test_invalid_inputs(self):
        with pytest.raises(InvalidDimension):
            depolarizing_kraus(5, 0.1)
        with pytest.raises(InvalidStrength):
            depolarizing_kraus(3, 1.5)
        with pytest.raises(InvalidStrength):
            NoiseModel(lambda1=-0.1)


class TestSampleShots:
    def test_single_qubit_hadamard_statistics(self):
        circuit = Circuit(WireSpec((2,)))
        circuit.add(GateOp.hadamard(0))
        hist = sample_shots(circuit, 5000, seed=11)
        assert set(hist.counts) == {"0", "1"}
        sigma = np.sqrt(5000 * 0.25)
        assert abs(hist.counts["0"] - 2500) <= 3 * sigma

    def test_deterministic_for_fixed_seed(self):
        circuit = Circuit(WireSpec((3,)))
        circuit.add(GateOp.hadamard(0))
        one = sample_shots(circuit, 1, seed=3)
        two = sample_shots(circuit, 1, seed=3)
        assert one.counts == two.counts
        many = sample_shots(circuit, 400, seed=9)
        again = sample_shots(circuit, 400, seed=9)
        assert many.counts == again.counts

    def test_thread_count_does_not_change_results(self):
        circuit = Circuit(WireSpec((3, 2)))
        circuit.add(GateOp.hadamard(0))
        circuit.add(GateOp.hadamard(1))
        serial = sample_shots(circuit, 500, seed=21, threads=1)
        threaded = sample_shots(circuit, 500, seed=21, threads=4)
        assert serial.counts == threaded.counts

    def test_shots_must_be_positive(self):
        with pytest.raises(InvalidArguments):
            sample_shots(Circuit(WireSpec((2,))), 0)

    def test_noise_requires_elementary_circuit(self):
        circuit = Circuit(WireSpec((2, 2, 3)))
        circuit.add(GateOp.controlled_flip(
            [ControlSpec(0, 1), ControlSpec(1, 1)], 2, XVariant.PLUS1))
        with pytest.raises(NoiseOnUnloweredCircuit):
            sample_shots(circuit, 10, noise=NoiseModel(1e-4, 1e-4))

    def test_zero_noise_reproduces_noiseless_exactly(self):
        circuit = Circuit(WireSpec((3, 2)))
        circuit.add(GateOp.hadamard(0))
        circuit.add(GateOp.controlled_flip([ControlSpec(0, 2)], 1, XVariant.SWAP01))
        clean = sample_shots(circuit, 5000, seed=17)
        noisy = sample_shots(circuit, 5000, noise=NoiseModel(1e-12, 1e-12), seed=17)
        assert clean.counts == noisy.counts

    def test_trajectory_matches_kraus_channel(self):
        # H3 then single-wire depolarizing(0.3); oracle is the explicit channel
        circuit = Circuit(WireSpec((3,)))
        circuit.add(GateOp.hadamard(0))
        psi = hadamard_matrix(3)[:, 0]
        rho = np.outer(psi, psi.conj())
        out = np.zeros_like(rho)
        for kraus in depolarizing_kraus(3, 0.3):
            out += kraus @ rho @ kraus.conj().T
        analytic = np.real(np.diag(out))
        hist = sample_shots(circuit, 100_000, noise=NoiseModel(lambda1=0.3), seed=5)
        empirical = np.array([hist.counts.get(s, 0) for s in "012"]) / hist.shots
        assert 0.5 * np.abs(empirical - analytic).sum() < 0.01

    def test_trajectory_matches_kraus_channel_nonuniform(self):
        circuit = Circuit(WireSpec((3,)))
        circuit.add(GateOp.x(0, XVariant.PLUS1))
        rho = np.zeros((3, 3), dtype=complex)
        rho[1, 1] = 1.0
        out = np.zeros_like(rho)
        for kraus in depolarizing_kraus(3, 0.3):
            out += kraus @ rho @ kraus.conj().T
        analytic = np.real(np.diag(out))
        hist = sample_shots(circuit, 50_000, noise=NoiseModel(lambda1=0.3), seed=6)
        empirical = np.array([hist.counts.get(s, 0) for s in "012"]) / hist.shots
        assert 0.5 * np.abs(empirical - analytic).sum() < 0.01


class TestTwoWireWeyl:
    def test_sparse_weyl_matches_matrix(self):
        # the trajectory engine's digit unfold against the dense operator
        from qudisim.sim import _apply_weyl, _compile_ops

        spec = WireSpec((3, 2, 3))
        circuit = Circuit(spec)
        circuit.add(GateOp.controlled_flip([ControlSpec(0, 2)], 2, XVariant.PLUS1))
        op = _compile_ops(circuit)[0]  # support wires (0, 2), joint dim 9
        rng = np.random.default_rng(12)
        dense = rng.normal(size=18) + 1j * rng.normal(size=18)
        for a in range(9):
            for b in range(9):
                idx = np.arange(18, dtype=np.int64)
                new_idx, new_amp = _apply_weyl(idx, dense.copy(), op, a, b)
                got = np.zeros(18, dtype=complex)
                got[new_idx] = new_amp
                from qudisim.core import apply_unitary_to_array
                want = apply_unitary_to_array(
                    dense, spec.dims, (0, 2), weyl_operator(9, a, b))
                assert np.abs(got - want).max() < 1e-12

    def test_two_wire_channel_matches_kraus(self):
        # H2 on the control, CX, then pair depolarizing(0.25): the joint
        # 6-dim channel applied to the density matrix is the oracle
        spec = WireSpec((2, 3))
        circuit = Circuit(spec)
        circuit.add(GateOp.hadamard(0))
        cx = GateOp.controlled_flip([ControlSpec(0, 1)], 1, XVariant.SWAP01)
        circuit.add(cx)
        psi = np.zeros(6, dtype=complex)
        psi[0] = psi[3] = 1 / np.sqrt(2)
        psi = gate_unitary(cx, spec) @ psi
        rho = np.outer(psi, psi.conj())
        out = np.zeros_like(rho)
        for kraus in depolarizing_kraus(6, 0.25):
            out += kraus @ rho @ kraus.conj().T
        analytic = np.real(np.diag(out))
        hist = sample_shots(circuit, 50_000, noise=NoiseModel(0.0, 0.25), seed=14)
        outcomes = ["00", "01", "02", "10", "11", "12"]
        empirical = np.array([hist.counts.get(s, 0) for s in outcomes]) / hist.shots
        assert 0.5 * np.abs(empirical - analytic).sum() < 0.01


class TestHistogramCsv:
    def test_roundtrip(self, tmp_path):
        hist = ShotHistogram({"010": 7, "212": 3, "000": 1}, 11)
        path = tmp_path / "hist.csv"
        hist.to_csv(path)
        back = ShotHistogram.from_csv(path)
        assert back.counts == hist.counts
        assert back.shots == 11

    def test_rows_sorted(self, tmp_path):
        hist = ShotHistogram({"2": 1, "0": 1, "1": 1}, 3)
        path = tmp_path / "hist.csv"
        hist.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "outcome_digits,count"
        assert [ln.split(",")[0] for ln in lines[1:]] == ["0", "1", "2"]

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "hist.csv"
        path.write_text("outcome,count\n0,1\n")
        with pytest.raises(InvalidArguments):
            ShotHistogram.from_csv(path)
