"""Pauli-basis algebra: tables, composition, folds, and the explicit sum."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import chain_product_scaled, coeffs_of, matrix_of
from stairwell import pauli
from stairwell.errors import ChainTooLong, NonFiniteCoefficient


def random_chain(rng, n):
    """n random 2x2 matrices with standard-normal complex entries."""
    return rng.standard_normal((n, 2, 2)) + 1j * rng.standard_normal((n, 2, 2))


class TestIndexTables:
    def test_pairing_identity_exhaustive(self):
        # sigma_q sigma_phi(p,q) = i^epsilon(p,q,phi(p,q)) sigma_p, all 16 pairs,
        # exact complex arithmetic (entries stay in {0, +-1, +-i}).
        ipow = (1, 1j, -1, -1j)
        for p in range(4):
            for q in range(4):
                r = pauli.phi(p, q)
                lhs = pauli.PAULI_MATRICES[q] @ pauli.PAULI_MATRICES[r]
                rhs = ipow[pauli.epsilon(p, q, r) % 4] * pauli.PAULI_MATRICES[p]
                assert np.array_equal(lhs, rhs), (p, q, r)

    def test_phi_is_xor(self):
        for a in range(4):
            for b in range(4):
                assert pauli.phi(a, b) == a ^ b

    def test_epsilon_antisymmetry_and_values(self):
        assert pauli.epsilon(1, 2, 3) == 1
        assert pauli.epsilon(3, 2, 1) == -1
        assert pauli.epsilon(0, 1, 1) == 0
        for a in range(4):
            for b in range(4):
                for c in range(4):
                    assert pauli.epsilon(a, b, c) == -pauli.epsilon(c, b, a)


class TestVectorMatrixMaps:
    def test_roundtrip_against_trace_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            m = random_chain(rng, 1)[0]
            c = pauli.from_matrix(m)
            np.testing.assert_allclose(c, coeffs_of(m), atol=1e-14)
            np.testing.assert_allclose(pauli.to_matrix(c), matrix_of(c), atol=0)
            np.testing.assert_allclose(pauli.to_matrix(c), m, atol=1e-14)

    def test_identity_vector(self):
        assert np.array_equal(pauli.to_matrix(pauli.identity()), np.eye(2))

    def test_batched_shapes(self):
        rng = np.random.default_rng(8)
        m = random_chain(rng, 6).reshape(2, 3, 2, 2)
        c = pauli.from_matrix(m)
        assert c.shape == (2, 3, 4)
        np.testing.assert_allclose(pauli.to_matrix(c), m, atol=1e-14)


class TestCompose:
    def test_compose_matches_matmul(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            a, b = random_chain(rng, 2)
            got = pauli.to_matrix(pauli.compose(pauli.from_matrix(a), pauli.from_matrix(b)))
            np.testing.assert_allclose(got, a @ b, rtol=1e-13, atol=1e-13)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 3), st.integers(0, 3))
    def test_compose_of_basis_elements(self, p, q):
        cp = np.zeros(4, dtype=complex)
        cq = np.zeros(4, dtype=complex)
        cp[p] = 1.0
        cq[q] = 1.0
        got = pauli.to_matrix(pauli.compose(cp, cq))
        want = pauli.PAULI_MATRICES[p] @ pauli.PAULI_MATRICES[q]
        assert np.array_equal(got, want)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(0, 3), min_size=3, max_size=3))
    def test_compose_associative(self, idx):
        rng = np.random.default_rng(sum(idx))
        a, b, c = (pauli.from_matrix(m) for m in random_chain(rng, 3))
        left = pauli.compose(pauli.compose(a, b), c)
        right = pauli.compose(a, pauli.compose(b, c))
        np.testing.assert_allclose(left, right, rtol=1e-12, atol=1e-12)


def assert_fold_matches_direct(mats, rtol):
    folded = pauli.fold_chain(pauli.from_matrix(mats))
    direct, s_direct = chain_product_scaled(mats)
    got = pauli.to_matrix(folded.vector) * np.exp(folded.log_scale - s_direct)
    scale = np.abs(direct).max()
    np.testing.assert_allclose(got, direct, rtol=0, atol=rtol * scale)


class TestFoldChain:
    def test_empty_chain_is_identity(self):
        out = pauli.fold_chain(np.empty((0, 4)))
        assert np.array_equal(out.vector, pauli.identity())
        assert out.log_scale == 0.0

    def test_single_element(self):
        rng = np.random.default_rng(10)
        m = random_chain(rng, 1)
        out = pauli.fold_chain(pauli.from_matrix(m))
        np.testing.assert_allclose(
            pauli.to_matrix(out.vector) * np.exp(out.log_scale), m[0], rtol=1e-14
        )

    @pytest.mark.parametrize("n", [2, 3, 5, 17, 64, 200])
    def test_matches_sequential_product(self, n):
        rng = np.random.default_rng(n)
        for _ in range(5):
            assert_fold_matches_direct(random_chain(rng, n), rtol=1e-11)

    def test_long_chain_magnitude_tracking(self):
        # 3000 random factors drift hundreds of ln-units; the mantissa must
        # stay normalized while log_scale absorbs the growth.
        rng = np.random.default_rng(11)
        mats = random_chain(rng, 3000)
        out = pauli.fold_chain(pauli.from_matrix(mats))
        assert np.abs(out.vector).max() == pytest.approx(1.0, rel=1e-12)
        assert np.isfinite(out.log_scale)
        assert_fold_matches_direct(mats, rtol=1e-9)

    def test_log_scales_shift_additively(self):
        rng = np.random.default_rng(12)
        c = pauli.from_matrix(random_chain(rng, 20))
        offs = rng.uniform(-5, 5, 20)
        plain = pauli.fold_chain(c)
        shifted = pauli.fold_chain(c, log_scales=offs)
        assert np.array_equal(plain.vector, shifted.vector)
        assert shifted.log_scale == pytest.approx(plain.log_scale + offs.sum(), rel=1e-12)

    def test_rejects_non_finite(self):
        bad = np.ones((3, 4), dtype=complex)
        bad[1, 2] = np.nan
        with pytest.raises(NonFiniteCoefficient):
            pauli.fold_chain(bad)

    def test_fold_batch_rows_match_standalone(self):
        # A batch of one is bitwise identical to fold_chain.  Rows inside a
        # larger batch can differ in the last mantissa bit because numpy
        # reductions round differently with stride, so they get a tolerance.
        rng = np.random.default_rng(13)
        c = pauli.from_matrix(random_chain(rng, 24)).reshape(4, 6, 4)
        vec, log = pauli.fold_batch(c)
        for i in range(4):
            single = pauli.fold_chain(c[i])
            one_vec, one_log = pauli.fold_batch(c[i][None])
            assert np.array_equal(one_vec[0], single.vector)
            assert one_log[0] == single.log_scale
            np.testing.assert_allclose(vec[i], single.vector, rtol=1e-13)
            np.testing.assert_allclose(log[i], single.log_scale, rtol=1e-13)


class TestFoldSuffixes:
    def test_all_suffixes_match_direct(self):
        rng = np.random.default_rng(14)
        mats = random_chain(rng, 9)
        c = pauli.from_matrix(mats)
        vecs, logs = pauli.fold_suffixes(c)
        assert vecs.shape == (10, 4)
        assert np.array_equal(vecs[9], pauli.identity())
        assert logs[9] == 0.0
        for i in range(9):
            direct, s_direct = chain_product_scaled(mats[i:])
            got = pauli.to_matrix(vecs[i]) * np.exp(logs[i] - s_direct)
            np.testing.assert_allclose(got, direct, rtol=0, atol=1e-12)


class TestExplicitProduct:
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
    def test_matches_fold_and_matmul(self, n):
        rng = np.random.default_rng(20 + n)
        mats = random_chain(rng, n)
        c = pauli.from_matrix(mats)
        explicit = pauli.explicit_product(c)
        direct = np.eye(2, dtype=complex)
        for m in mats:
            direct = direct @ m
        np.testing.assert_allclose(pauli.to_matrix(explicit), direct, rtol=1e-12, atol=1e-12)
        folded = pauli.fold_chain(c)
        np.testing.assert_allclose(
            pauli.to_matrix(folded.vector) * np.exp(folded.log_scale),
            pauli.to_matrix(explicit),
            rtol=1e-12,
            atol=1e-12,
        )

    def test_rejects_long_chains(self):
        with pytest.raises(ChainTooLong):
            pauli.explicit_product(np.ones((9, 4), dtype=complex))

    def test_empty_is_identity(self):
        assert np.array_equal(pauli.explicit_product(np.empty((0, 4))), pauli.identity())
