"""Solver checks against closed forms, an independent boundary-matching
oracle, frozen high-precision references, and structural invariants."""

import cmath
import math

import numpy as np
import pytest

from conftest import random_localized_barrier
from oracles import (
    boundary_match_transmission,
    chain_product_scaled,
    matrix_of,
    single_barrier_ln_transmission,
    single_barrier_transmission,
)
from stairwell.errors import (
    BothRegionsDegenerate,
    DegenerateKappa,
    EvanescentLead,
    UnequalLeads,
)
from stairwell.potential import (
    MbpSpec,
    PiecewiseConstantPotential,
    build_mbp,
    reverse,
)
from stairwell.scattering import (
    solve,
    transfer_matrix,
    transfer_matrix_2x2,
    transfer_matrix_linear,
    transmission_curve,
    wavefunction,
)


def single_barrier(v0=40.0, width=0.5):
    return PiecewiseConstantPotential([0.0, width], [0.0, v0, 0.0])


def tri_barrier():
    return PiecewiseConstantPotential(
        [0.0, 0.4, 1.1, 1.5], [0.0, 6.0, -3.0, 5.0, 0.0]
    )


FOUR_BARRIER = MbpSpec(4, 40.0, 0.5, (5.0, 3.0, 2.0))
UNIFORM_WELLS = MbpSpec(4, 40.0, 0.5, (5.0, 5.0, 5.0))

# T for the 0.5-wide height-40 barrier, frozen from a high-precision
# (mpmath) evaluation of the closed form.
SINGLE_T = {
    5.0: 0.004720705108989644,
    20.0: 0.044665321731119846,
    39.0: 0.26419877558339183,
    40.0: 0.2857142857142857,
    41.0: 0.30841087882476215,
    60.0: 0.8289641864050596,
    100.0: 0.9711190811848719,
}

# T for the four-barrier profile with wells 5, 3, 2, frozen from a
# high-precision (mpmath) transfer-matrix product.
FOUR_BARRIER_T = {
    0.25: 9.6042925829739783e-17,
    4.0: 2.3269464926283314e-11,
    27.217: 5.8453906301293007e-04,
    39.9: 0.20145685753422685,
    41.0: 0.41273046842667388,
    60.0: 0.29461384978230487,
}

# Same source; uniform wells of width 5, keyed by lead kappa = sqrt(E).
UNIFORM_WELLS_T = {
    0.02: 7.486121091660619e-23,
    0.05: 4.968091162464605e-22,
    0.70: 9.811307308867788e-15,
    2.0: 3.737660947735421e-12,
}


def region_value_slope(wave, x):
    """psi and psi' at a point, straight from one region's stored form."""
    if wave.basis == "linear":
        f = np.exp(wave.log_scale)
        return (wave.a * x + wave.b) * f, wave.a * f
    local = x - wave.x_ref
    up = wave.a * np.exp(wave.log_scale + 1j * wave.kappa * local)
    dn = wave.b * np.exp(wave.log_scale - 1j * wave.kappa * local)
    return up + dn, 1j * wave.kappa * (up - dn)


def interface_mismatch(solution):
    """Largest relative value/slope jump across any breakpoint."""
    worst = 0.0
    for j, xj in enumerate(solution.potential.breakpoints):
        vl, dl = region_value_slope(solution.regions[j], float(xj))
        vr, dr = region_value_slope(solution.regions[j + 1], float(xj))
        scale = max(abs(vl), abs(dl), 1e-300)
        worst = max(worst, max(abs(vl - vr), abs(dl - dr)) / scale)
    return worst


class TestSingleBarrierClosedForm:
    def test_frozen_values(self):
        p = single_barrier()
        for energy, expected in SINGLE_T.items():
            sol = solve(p, energy)
            assert sol.transmission == pytest.approx(expected, rel=1e-12)

    def test_patch_matches_limit(self):
        # At E = V0 the closed form degenerates to 1/(1 + V0 d^2/4); the
        # solver switches that region to the linear basis.
        p = single_barrier()
        limit = 1.0 / (1.0 + 40.0 * 0.5**2 / 4.0)
        assert solve(p, 40.0).transmission == pytest.approx(limit, rel=1e-12)
        for energy in (40.0 - 1e-7, 40.0 + 1e-7):
            assert solve(p, energy).transmission == pytest.approx(limit, rel=1e-4)

    def test_dense_against_closed_form(self):
        p = single_barrier()
        for energy in np.geomspace(0.1, 120.0, 200):
            energy = float(energy)
            if abs(energy - 40.0) < 1e-6:
                continue
            want = single_barrier_transmission(40.0, 0.5, energy)
            assert solve(p, energy).transmission == pytest.approx(want, rel=1e-12)

    def test_deep_barrier_log_form(self):
        # e^{kappa'' d} ~ e^350 here; only the log route survives in floats.
        p = single_barrier(v0=200.0, width=35.0)
        sol = solve(p, 100.0)
        assert sol.ln_transmission == pytest.approx(-698.6137056388801, rel=1e-12)
        want = single_barrier_ln_transmission(200.0, 35.0, 100.0)
        assert sol.ln_transmission == pytest.approx(want, rel=1e-12)
        assert sol.transmission == pytest.approx(math.exp(sol.ln_transmission))
        assert 0.0 < sol.transmission < 1e-300
        assert sol.reflection == pytest.approx(1.0, abs=1e-12)


class TestMultiBarrierFrozen:
    def test_four_barrier_values(self):
        p = build_mbp(FOUR_BARRIER)
        for energy, expected in FOUR_BARRIER_T.items():
            sol = solve(p, energy)
            assert sol.transmission == pytest.approx(expected, rel=1e-12)

    def test_uniform_wells_deep_tunneling(self):
        p = build_mbp(UNIFORM_WELLS)
        for kappa, expected in UNIFORM_WELLS_T.items():
            sol = solve(p, kappa**2)
            assert sol.transmission == pytest.approx(expected, rel=1e-12)


class TestEnergyConservation:
    def test_t_plus_r_on_random_barriers(self):
        rng = np.random.default_rng(2024)
        for _ in range(50):
            p = random_localized_barrier(rng)
            for energy in rng.uniform(0.05, 120.0, 2):
                energy = float(energy)
                if np.min(np.abs(energy - p.levels)) < 1e-6:
                    continue
                sol = solve(p, energy)
                assert abs(sol.transmission + sol.reflection - 1.0) <= 1e-10
                assert 0.0 <= sol.transmission <= 1.0 + 1e-12

    def test_against_boundary_matching_oracle(self):
        # Moderate profiles only: the oracle's linear system carries raw
        # exponentials and loses conditioning for deep tunneling.
        rng = np.random.default_rng(42)
        checked = 0
        for _ in range(40):
            n = int(rng.integers(2, 11))
            x = np.cumsum(rng.uniform(0.1, 0.8, n)) + rng.uniform(-2.0, 2.0)
            v = np.concatenate([[0.0], rng.uniform(-5.0, 8.0, n - 1), [0.0]])
            p = PiecewiseConstantPotential(x, v)
            for energy in rng.uniform(0.5, 30.0, 3):
                energy = float(energy)
                if np.min(np.abs(energy - v)) < 1e-6:
                    continue
                t_ref, r_ref = boundary_match_transmission(x, v, energy)
                sol = solve(p, energy)
                assert sol.transmission == pytest.approx(t_ref, rel=1e-12)
                assert sol.reflection == pytest.approx(r_ref, abs=1e-12)
                checked += 1
        assert checked > 100


class TestDirectionalSymmetry:
    ENERGIES = (0.25, 4.0, 27.217, 60.0)

    def test_right_incidence_matches_left(self):
        p = build_mbp(FOUR_BARRIER)
        for energy in self.ENERGIES:
            left = solve(p, energy)
            right = solve(p, energy, incidence="right")
            assert right.transmission == pytest.approx(left.transmission, rel=1e-12)
            assert right.reflection == pytest.approx(left.reflection, abs=1e-12)

    def test_reversal_invariance(self):
        p = build_mbp(FOUR_BARRIER)
        q = reverse(p)
        for energy in self.ENERGIES:
            t_fwd = solve(p, energy).transmission
            t_rev = solve(q, energy).transmission
            assert t_rev == pytest.approx(t_fwd, rel=1e-12)

    def test_translation_invariance(self):
        p = build_mbp(FOUR_BARRIER)
        shifted = PiecewiseConstantPotential(p.breakpoints + 13.7, p.levels)
        for energy in self.ENERGIES:
            t0 = solve(p, energy).transmission
            t1 = solve(shifted, energy).transmission
            assert t1 == pytest.approx(t0, rel=1e-12)

    def test_random_barriers_both_directions(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            p = random_localized_barrier(rng, max_interfaces=30)
            energy = float(rng.uniform(1.0, 90.0))
            if np.min(np.abs(energy - p.levels)) < 1e-6:
                continue
            left = solve(p, energy)
            right = solve(p, energy, incidence="right")
            rev = solve(reverse(p), energy)
            if left.transmission == 0.0:
                assert right.transmission == 0.0
                continue
            assert right.transmission == pytest.approx(left.transmission, rel=1e-11)
            assert rev.transmission == pytest.approx(left.transmission, rel=1e-11)


class TestTransmissionCurve:
    def test_matches_pointwise_solve(self):
        p = build_mbp(FOUR_BARRIER)
        grid = np.append(np.linspace(0.1, 11.0, 197), math.sqrt(40.0))
        ln_t, t, r = transmission_curve(p, grid)
        for i, kappa in enumerate(grid):
            sol = solve(p, float(kappa) ** 2)
            assert t[i] == pytest.approx(sol.transmission, rel=1e-12)
            assert r[i] == pytest.approx(sol.reflection, abs=1e-12)
            assert ln_t[i] == pytest.approx(sol.ln_transmission, rel=1e-12, abs=1e-12)

    def test_level_collision_falls_back_to_patched_path(self):
        # kappa = sqrt(V0) lands exactly on a region level; that point must
        # reproduce the scalar patched solve bit for bit.
        p = build_mbp(FOUR_BARRIER)
        grid = np.array([1.0, math.sqrt(40.0), 9.0])
        ln_t, t, r = transmission_curve(p, grid)
        sol = solve(p, float(grid[1]) ** 2)
        assert t[1] == sol.transmission
        assert ln_t[1] == sol.ln_transmission

    def test_right_incidence_curve(self):
        p = build_mbp(FOUR_BARRIER)
        grid = np.linspace(0.3, 9.0, 50)
        _, t_left, _ = transmission_curve(p, grid)
        _, t_right, _ = transmission_curve(p, grid, incidence="right")
        np.testing.assert_allclose(t_right, t_left, rtol=1e-11)

    def test_scalar_input(self):
        p = single_barrier()
        ln_t, t, r = transmission_curve(p, 2.0)
        assert t.shape == (1,)
        assert t[0] == pytest.approx(solve(p, 4.0).transmission, rel=1e-13)

    def test_rejects_lead_collision(self):
        with pytest.raises(EvanescentLead):
            transmission_curve(single_barrier(), [0.5, 0.0, 2.0])


class TestWavefunction:
    def test_interface_continuity_structured(self):
        cases = [
            (build_mbp(FOUR_BARRIER), (0.25, 4.0, 27.217, 60.0)),
            (single_barrier(), (5.0, 40.0)),
            (tri_barrier(), (6.0, 9.3)),
        ]
        for p, energies in cases:
            for energy in energies:
                for incidence in ("left", "right"):
                    sol = solve(p, energy, incidence=incidence)
                    assert interface_mismatch(sol) < 1e-10

    def test_interface_continuity_random(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            p = random_localized_barrier(rng, max_interfaces=40)
            energy = float(rng.uniform(0.5, 100.0))
            if np.min(np.abs(energy - p.levels)) < 1e-6:
                continue
            for incidence in ("left", "right"):
                sol = solve(p, energy, incidence=incidence)
                assert interface_mismatch(sol) < 1e-7

    def test_transmitted_lead_is_pure_outgoing(self):
        p = build_mbp(FOUR_BARRIER)
        seed = 2.0 - 1.0j
        left = solve(p, 0.25, seed_amplitude=seed)
        xs = np.linspace(p.breakpoints[-1] + 0.5, p.breakpoints[-1] + 6.0, 9)
        np.testing.assert_allclose(
            np.abs(wavefunction(left, xs)), abs(seed), rtol=1e-12
        )
        right = solve(p, 0.25, incidence="right", seed_amplitude=seed)
        assert right.regions[0].a == 0.0
        xs = np.linspace(p.breakpoints[0] - 6.0, p.breakpoints[0] - 0.5, 9)
        np.testing.assert_allclose(
            np.abs(wavefunction(right, xs)), abs(seed), rtol=1e-12
        )

    def test_lead_amplitudes_reproduce_t_and_r(self):
        p = tri_barrier()
        sol = solve(p, 9.3)
        a, b = sol.regions[0].amplitudes
        assert abs(b / a) ** 2 == pytest.approx(sol.reflection, abs=1e-10)
        assert 1.0 / abs(a) ** 2 == pytest.approx(sol.transmission, rel=1e-10)

    def test_seed_linearity_is_exact(self):
        p = tri_barrier()
        seed = 2.0 - 3.0j
        unit = solve(p, 9.3)
        scaled = solve(p, 9.3, seed_amplitude=seed)
        for r1, r2 in zip(unit.regions, scaled.regions):
            assert r2.a == r1.a * seed
            assert r2.b == r1.b * seed

    def test_linear_basis_region_at_matching_energy(self):
        sol = solve(single_barrier(), 40.0)
        assert [w.basis for w in sol.regions] == ["exponential", "linear", "exponential"]
        assert interface_mismatch(sol) < 1e-12

    def test_right_incidence_mirrors_reversed_profile(self):
        p = build_mbp(FOUR_BARRIER)
        q = reverse(p)
        lo, hi = p.breakpoints[0], p.breakpoints[-1]
        xs = np.linspace(lo - 2.0, hi + 2.0, 41)
        for energy in (0.25, 27.217):
            fwd = np.abs(wavefunction(solve(p, energy, incidence="right"), xs))
            mir = np.abs(wavefunction(solve(q, energy), lo + hi - xs))
            np.testing.assert_allclose(fwd, mir, rtol=1e-10)

    def test_evaluation_matches_region_forms(self):
        p = tri_barrier()
        sol = solve(p, 9.3)
        xs = np.array([-1.0, 0.2, 0.7, 1.3, 2.5])
        idx = p.region_of(xs)
        for x, r in zip(xs, idx):
            direct, _ = region_value_slope(sol.regions[r], float(x))
            assert wavefunction(sol, [x])[0] == pytest.approx(direct, rel=1e-14)


class TestDegenerateEnergy:
    def test_transmission_continuous_across_patch(self):
        for p, level in ((single_barrier(), 40.0), (tri_barrier(), 6.0)):
            t_at = solve(p, level).transmission
            for energy in (level - 1e-7, level + 1e-7):
                assert abs(solve(p, energy).transmission - t_at) <= 1e-4

    def test_adjacent_degenerate_regions_rejected(self):
        p = PiecewiseConstantPotential([0.0, 1.0, 2.0], [0.0, 5.0, 5.0, 0.0])
        with pytest.raises(BothRegionsDegenerate):
            solve(p, 5.0)


class TestErrors:
    def test_unequal_leads(self):
        p = PiecewiseConstantPotential([0.0, 1.0], [0.0, 5.0, 1.0])
        with pytest.raises(UnequalLeads):
            solve(p, 10.0)
        with pytest.raises(UnequalLeads):
            transmission_curve(p, [1.0, 2.0])

    def test_evanescent_lead(self):
        p = single_barrier()
        for energy in (0.0, -3.0, 1e-10):
            with pytest.raises(EvanescentLead):
                solve(p, energy)

    def test_bad_incidence(self):
        with pytest.raises(ValueError):
            solve(single_barrier(), 10.0, incidence="up")
        with pytest.raises(ValueError):
            transmission_curve(single_barrier(), [1.0], incidence="up")

    def test_transfer_matrix_degenerate_energy(self):
        p = single_barrier()
        with pytest.raises(DegenerateKappa):
            transfer_matrix(p, 0, 40.0)
        with pytest.raises(IndexError):
            transfer_matrix(p, 5, 10.0)

    def test_transfer_matrix_linear_guards(self):
        p = PiecewiseConstantPotential([0.0, 1.0, 2.0], [0.0, 5.0, 5.0, 0.0])
        with pytest.raises(BothRegionsDegenerate):
            transfer_matrix_linear(p, 1, 5.0, "left")
        with pytest.raises(ValueError):
            transfer_matrix_linear(single_barrier(), 0, 40.0, "middle")


class TestTransferMatrix:
    @staticmethod
    def textbook_matrix(potential, j, energy):
        """Independent construction straight from the matching equations."""
        x = float(potential.breakpoints[j])
        kl = cmath.sqrt(complex(energy - potential.levels[j]))
        kr = cmath.sqrt(complex(energy - potential.levels[j + 1]))
        ps = (kl + kr) / (2.0 * kl)
        pd = (kl - kr) / (2.0 * kl)
        return np.array(
            [
                [ps * cmath.exp(1j * (kr - kl) * x), pd * cmath.exp(-1j * (kl + kr) * x)],
                [pd * cmath.exp(1j * (kl + kr) * x), ps * cmath.exp(1j * (kl - kr) * x)],
            ]
        )

    def test_matches_matching_equations(self):
        p = tri_barrier()
        for energy in (9.3, 2.0):
            for j in range(4):
                got = matrix_of(transfer_matrix(p, j, energy))
                want = self.textbook_matrix(p, j, energy)
                np.testing.assert_allclose(got, want, atol=1e-14)

    def test_determinant(self):
        p = tri_barrier()
        energy = 9.3
        k = np.sqrt(np.asarray(energy - p.levels, dtype=complex))
        for j in range(4):
            det = np.linalg.det(transfer_matrix_2x2(p, j, energy))
            assert det == pytest.approx(k[j + 1] / k[j], rel=1e-12)

    def test_chain_product_reproduces_transmission(self):
        p = tri_barrier()
        for energy in (9.3, 4.5):
            mats = [matrix_of(transfer_matrix(p, j, energy)) for j in range(4)]
            mantissa, log_scale = chain_product_scaled(mats)
            t = math.exp(-2.0 * log_scale) / abs(mantissa[0, 0]) ** 2
            assert t == pytest.approx(solve(p, energy).transmission, rel=1e-10)

    def test_linear_interface_chain_at_barrier_top(self):
        p = single_barrier()
        enter = matrix_of(transfer_matrix_linear(p, 0, 40.0, "right"))
        leave = matrix_of(transfer_matrix_linear(p, 1, 40.0, "left"))
        product = enter @ leave
        t = 1.0 / abs(product[0, 0]) ** 2
        assert t == pytest.approx(1.0 / 3.5, rel=1e-12)
