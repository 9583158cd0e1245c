import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logdepth.errors import ConfigurationError
from logdepth.statevector import (
    DensityMatrix,
    GateOp,
    PureState,
    apply_gate,
    expectation_z,
    projector_probability,
    purity,
    reduced_density,
    von_neumann_entropy,
    zero_state,
)

from oracles import brute_partial_trace, full_gate_matrix, z_operator

SQ = 1 / math.sqrt(2)


def random_state(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return PureState(n, v / np.linalg.norm(v))


def random_gate(rng, n):
    kind = rng.choice(["H", "X", "Z", "RZ", "RY", "CNOT", "CPHASE"])
    angle = float(rng.uniform(-2 * math.pi, 2 * math.pi)) if kind in ("RZ", "RY", "CPHASE") else None
    if kind in ("CNOT", "CPHASE"):
        c, t = rng.choice(n, size=2, replace=False)
        return GateOp(str(kind), (int(c), int(t)), angle)
    return GateOp(str(kind), (int(rng.integers(n)),), angle)


class TestZeroState:
    def test_three_qubits(self):
        s = zero_state(3)
        assert s.amplitudes.tolist() == [1, 0, 0, 0, 0, 0, 0, 0]

    def test_one_qubit(self):
        assert zero_state(1).amplitudes.tolist() == [1, 0]

    @pytest.mark.parametrize("n", [0, -1, 25])
    def test_out_of_range(self, n):
        with pytest.raises(ConfigurationError):
            zero_state(n)


class TestApplyGate:
    def test_branch0_walkthrough(self):
        s1 = apply_gate(zero_state(3), GateOp("H", (0,)))
        assert s1.allclose(PureState.from_kets({"000": SQ, "100": SQ}))
        s2 = apply_gate(s1, GateOp("X", (1,)))
        assert s2.allclose(PureState.from_kets({"010": SQ, "110": SQ}))
        s3 = apply_gate(s2, GateOp("CNOT", (0, 2)))
        assert s3.allclose(PureState.from_kets({"010": SQ, "111": SQ}))
        s4 = apply_gate(s3, GateOp("RZ", (1,), math.pi / 4))
        expected = PureState.from_kets({"010": SQ, "111": SQ})
        expected = PureState(3, expected.amplitudes * np.exp(1j * math.pi / 8))
        assert s4.allclose(expected)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            apply_gate(zero_state(2), GateOp("X", (2,)))

    def test_gate_rejects_bad_records(self):
        with pytest.raises(ValueError):
            GateOp("CNOT", (1, 1))
        with pytest.raises(ValueError):
            GateOp("RZ", (0,))
        with pytest.raises(ValueError):
            GateOp("RY", (0,), float("nan"))
        with pytest.raises(ValueError):
            GateOp("H", (0,), 1.0)

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            n = int(rng.integers(2, 6))
            state = random_state(rng, n)
            gate = random_gate(rng, n)
            dense = full_gate_matrix(gate, n) @ state.amplitudes
            assert np.allclose(apply_gate(state, gate).amplitudes, dense, atol=1e-12)

    @pytest.mark.parametrize("kind,angle", [("H", None), ("X", None), ("Z", None), ("RZ", 0.3),
                                            ("RY", -1.2), ("CNOT", None), ("CPHASE", 2.5)])
    def test_local_matrix_unitary(self, kind, angle):
        targets = (0, 1) if kind in ("CNOT", "CPHASE") else (0,)
        u = GateOp(kind, targets, angle).matrix()
        assert np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) < 1e-12


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6), depth=st.integers(1, 8))
def test_gates_preserve_norm(seed, n, depth):
    rng = np.random.default_rng(seed)
    state = random_state(rng, n)
    for _ in range(depth):
        gate = random_gate(rng, n) if n > 1 else GateOp("RY", (0,), float(rng.uniform(0, 6)))
        state = apply_gate(state, gate)
    assert abs(np.linalg.norm(state.amplitudes) - 1) < 1e-10


class TestExpectationZ:
    def test_paper_values(self):
        s = PureState.from_kets({"000": SQ, "100": SQ})
        assert [expectation_z(s, k) for k in range(3)] == [0.0, 1.0, 1.0]
        s = PureState.from_kets({"010": SQ, "111": SQ})
        assert [expectation_z(s, k) for k in range(3)] == [0.0, -1.0, 0.0]

    def test_ground(self):
        assert expectation_z(zero_state(1), 0) == 1.0

    def test_bad_index(self):
        with pytest.raises(IndexError):
            expectation_z(zero_state(2), 5)

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5))
    def test_matches_density_trace(self, seed, n):
        rng = np.random.default_rng(seed)
        state = random_state(rng, n)
        rho = np.outer(state.amplitudes, state.amplitudes.conj())
        for k in range(n):
            assert abs(expectation_z(state, k) - np.trace(rho @ z_operator(k, n)).real) < 1e-10


class TestProjector:
    def test_paper_values(self):
        s = PureState.from_kets({"010": SQ, "111": SQ})
        assert projector_probability(s, 2, 0) == 0.5
        s = PureState.from_kets({"001": SQ, "101": SQ})
        assert projector_probability(s, 2, 0) == 0.0
        assert projector_probability(zero_state(3), 0, 0) == 1.0

    def test_complementary(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            s = random_state(rng, 4)
            q = int(rng.integers(4))
            assert abs(projector_probability(s, q, 0) + projector_probability(s, q, 1) - 1) < 1e-10

    def test_bad_value(self):
        with pytest.raises(ValueError):
            projector_probability(zero_state(1), 0, 2)


class TestReducedDensity:
    def test_product_state(self):
        s = PureState.from_kets({"00": SQ, "10": SQ})
        rho = reduced_density(s, [0])
        assert np.allclose(rho.entries, [[0.5, 0.5], [0.5, 0.5]])
        assert abs(purity(rho) - 1) < 1e-10

    def test_bell(self):
        s = PureState.from_kets({"00": SQ, "11": SQ})
        assert np.allclose(reduced_density(s, [0]).entries, np.eye(2) / 2)

    def test_ghz_against_brute_force(self):
        s = PureState.from_kets({"000": SQ, "111": SQ})
        oracle = brute_partial_trace(s.amplitudes, 3, [0])
        assert np.allclose(oracle, np.diag([0.5, 0.5]))
        assert np.allclose(reduced_density(s, [0]).entries, oracle, atol=1e-12)

    def test_random_against_brute_force(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            n = int(rng.integers(2, 5))
            s = random_state(rng, n)
            keep = sorted(rng.choice(n, size=int(rng.integers(1, n)), replace=False).tolist())
            assert np.allclose(reduced_density(s, keep).entries,
                               brute_partial_trace(s.amplitudes, n, keep), atol=1e-12)

    def test_empty_keep(self):
        with pytest.raises(ValueError):
            reduced_density(zero_state(2), [])

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), na=st.integers(1, 3), nb=st.integers(1, 3))
    def test_unentangled_bipartition_is_pure(self, seed, na, nb):
        rng = np.random.default_rng(seed)
        a, b = random_state(rng, na), random_state(rng, nb)
        joint = PureState(na + nb, np.kron(a.amplitudes, b.amplitudes))
        assert abs(purity(reduced_density(joint, range(na))) - 1) < 1e-10

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6))
    def test_schmidt_symmetry(self, seed, n):
        rng = np.random.default_rng(seed)
        s = random_state(rng, n)
        k = int(rng.integers(1, n))
        part = sorted(rng.choice(n, size=k, replace=False).tolist())
        rest = [q for q in range(n) if q not in part]
        sa = von_neumann_entropy(reduced_density(s, part))
        sb = von_neumann_entropy(reduced_density(s, rest))
        assert abs(sa - sb) < 1e-8


class TestPurityEntropy:
    def test_purity_values(self):
        assert abs(purity(DensityMatrix.from_state(zero_state(2))) - 1) < 1e-12
        assert purity(DensityMatrix(np.eye(2) / 2)) == 0.5
        assert purity(DensityMatrix(np.diag([0.75, 0.25]))) == 0.625

    def test_entropy_values(self):
        assert von_neumann_entropy(DensityMatrix.from_state(zero_state(2))) == 0.0
        assert abs(von_neumann_entropy(DensityMatrix(np.eye(2) / 2)) - 1) < 1e-12
        assert abs(von_neumann_entropy(DensityMatrix(np.eye(4) / 4)) - 2) < 1e-12

    def test_density_invariants_enforced(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([0.7, 0.7]))
        with pytest.raises(ValueError):
            DensityMatrix(np.array([[0.5, 1], [0, 0.5]]))
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([1.5, -0.5]))

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), dim_bits=st.integers(1, 3))
    def test_bounds(self, seed, dim_bits):
        rng = np.random.default_rng(seed)
        d = 2**dim_bits
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = DensityMatrix(g @ g.conj().T / np.trace(g @ g.conj().T).real)
        assert 1 / d - 1e-10 <= purity(rho) <= 1 + 1e-10
        assert -1e-12 <= von_neumann_entropy(rho) <= dim_bits + 1e-8
