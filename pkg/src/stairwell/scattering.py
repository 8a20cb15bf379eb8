"""Plane-wave scattering off a piecewise-constant potential.

Units: 2m/hbar^2 = 1, so each region j has wave number
kappa_j = sqrt(E - V_j) (principal branch, Im >= 0; evanescent regions decay
to the right).  With psi_j = A_j e^{i kappa_j x} + B_j e^{-i kappa_j x},
matching value and slope at breakpoint x_j gives
(A_j, B_j) = M_j (A_{j+1}, B_{j+1}) with

    M_j = 1/(2 kappa_j) *
        [ (kappa_j+kappa_{j+1}) e^{ i(kappa_{j+1}-kappa_j) x_j}   (kappa_j-kappa_{j+1}) e^{-i(kappa_j+kappa_{j+1}) x_j} ]
        [ (kappa_j-kappa_{j+1}) e^{ i(kappa_j+kappa_{j+1}) x_j}   (kappa_j+kappa_{j+1}) e^{ i(kappa_j-kappa_{j+1}) x_j} ]

and det M_j = kappa_{j+1} / kappa_j.  transfer_matrix returns exactly this
form.

Chains are NOT multiplied in that form.  M_j carries exponentials of the
absolute position x_j; in an evanescent stretch those reach e^{|kappa| x_j}
while the physical product only grows like e^{|kappa| w} per region width w.
The excess scale cancels between adjacent factors, and float64 cannot
survive that cancellation once |kappa| x_j outruns the mantissa (the small
matrix entries, which carry the dominant transmission paths, drop below the
roundoff floor of the large ones).  Instead each factor is split as
M_j = P(kappa_j, x_j) S_j P(kappa_{j+1}, x_j)^{-1} with
P(kappa, x) = diag(e^{-i kappa x}, e^{i kappa x}), which telescopes the
product into

    M_1 ... M_N = P(kappa_1, x_1) [S_1 Q_2 S_2 Q_3 ... S_N] P(kappa_{N+1}, x_N)^{-1}

where S_j = [[kappa_j+kappa_{j+1}, kappa_j-kappa_{j+1}], [mirrored]] /
(2 kappa_j) carries no exponentials at all and Q_r = diag(e^{-i kappa_r w_r},
e^{i kappa_r w_r}) propagates across the width w_r of region r.  Exponents
now scale with tunneling depth per region, never with absolute position,
and the outer P factors are unimodular in the leads, so they drop out of T
and R entirely.  The bracketed chain is composed in the Pauli basis, each
factor pre-scaled by its largest exponential into a log scale.

If E equals a region level the plane-wave basis degenerates; that region
uses psi = A x + B instead and its two interface factors take matched
linear-basis forms (polynomial in x, no exponentials).

Transmission for equal leads: T = 1/|c^0 + c^3|^2 from the Pauli vector of
the bracketed chain; R = |(c^1 + i c^2)/(c^0 + c^3)|^2.  Right incidence
inverts each factor and folds in reverse order, a genuinely independent
arithmetic path to the same T.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    BothRegionsDegenerate,
    ChainOverflow,
    DegenerateKappa,
    EvanescentLead,
    NonFiniteCoefficient,
    UnequalLeads,
)
from .pauli import fold_batch, fold_suffixes, to_matrix
from .potential import PiecewiseConstantPotential, validate

__all__ = [
    "RegionWave",
    "ScatteringSolution",
    "ZERO_KAPPA_FACTOR",
    "solve",
    "transfer_matrix",
    "transfer_matrix_2x2",
    "transfer_matrix_linear",
    "transmission_curve",
    "wavefunction",
]

# |E - V_j| at or below this (times max(1, |V_j|)) counts as E = V_j.
ZERO_KAPPA_FACTOR = 1e-9


def _thresholds(levels: np.ndarray) -> np.ndarray:
    return ZERO_KAPPA_FACTOR * np.maximum(1.0, np.abs(levels))


def _stack_pauli(m11, m12, m21, m22):
    return np.stack(
        [(m11 + m22) / 2, (m12 + m21) / 2, (m12 - m21) * 0.5j, (m11 - m22) / 2],
        axis=-1,
    )


def _factor_pauli(kl, kr, w):
    """Pauli vectors of the regauged chain factors S_j Q_{j+1} (batched).

    kl, kr: wave numbers left/right of each interface; w: width of the
    region right of the interface (0 for the last interface, whose
    propagation lives in the unimodular lead phase).  Returns
    (coeffs (..., 4), log_scale (...,)) with the largest exponential
    factored out.
    """
    ps = (kl + kr) / (2.0 * kl)
    pd = (kl - kr) / (2.0 * kl)
    e = 1j * kr * w
    g = np.abs(e.real)
    qm = np.exp(-e - g)
    qp = np.exp(e - g)
    return _stack_pauli(ps * qm, pd * qp, pd * qm, ps * qp), g


def _entry_linear_pauli(k: complex, x: float):
    """Chain factor entering a region that sits exactly at E (psi = A x + B).

    k is the left (plane-wave) region's wave number.  This is the interface
    matrix with the left P factor split off; the linear basis itself is
    position-referenced, so no propagation factor follows it:
        [ (x - i/k)/2   1/2 ]
        [ (x + i/k)/2   1/2 ]
    """
    m11 = 0.5 * (x - 1j / k)
    m21 = 0.5 * (x + 1j / k)
    return _stack_pauli(m11, 0.5 + 0.0j, m21, 0.5 + 0.0j), 0.0


def _exit_linear_pauli(k: complex, x: float, w: float):
    """Chain factor leaving a region that sits exactly at E.

    k is the right (plane-wave) region's wave number, w the width of that
    right region (0 if it is the last lead).  The interface matrix
        [ i k       -i k      ]
        [ 1 - i k x  1 + i k x ]
    followed by the propagation Q across w.
    """
    e = 1j * k * w
    g = abs(e.real)
    qm = np.exp(-e - g)
    qp = np.exp(e - g)
    m11 = 1j * k * qm
    m12 = -1j * k * qp
    m21 = (1.0 - 1j * k * x) * qm
    m22 = (1.0 + 1j * k * x) * qp
    return _stack_pauli(m11, m12, m21, m22), g


def _factor_chain(potential: PiecewiseConstantPotential, energy: float):
    """Scaled Pauli chain of regauged factors at one energy.

    Returns (kappas (N+1,), degenerate (N+1,) bool, coeffs (N, 4), logs (N,)).
    """
    x = potential.breakpoints
    v = potential.levels
    kap = np.sqrt(np.asarray(energy - v, dtype=complex))
    degen = np.abs(energy - v) <= _thresholds(v)
    if np.any(degen[:-1] & degen[1:]):
        raise BothRegionsDegenerate(
            f"E={energy} matches the levels on both sides of an interface"
        )
    widths = np.append(np.diff(x), 0.0)
    patch_exit = degen[:-1]   # interface i: its left region (i) is at E
    patch_entry = degen[1:]   # interface i: its right region (i+1) is at E
    kl = np.where(patch_exit, 1.0, kap[:-1])
    c, g = _factor_pauli(kl, kap[1:], widths)
    for i in np.nonzero(patch_entry)[0]:
        c[i], g[i] = _entry_linear_pauli(complex(kap[i]), float(x[i]))
    for i in np.nonzero(patch_exit)[0]:
        c[i], g[i] = _exit_linear_pauli(complex(kap[i + 1]), float(x[i]), float(widths[i]))
    return kap, degen, c, g


def _invert_reverse(c: np.ndarray, g: np.ndarray):
    """Per-element Pauli inversion and order reversal of a scaled chain."""
    det = c[..., 0] ** 2 - c[..., 1] ** 2 - c[..., 2] ** 2 - c[..., 3] ** 2
    mag = np.abs(det)
    if np.any(mag == 0.0):
        raise ChainOverflow("chain element is singular; cannot invert")
    adj = np.stack([c[..., 0], -c[..., 1], -c[..., 2], -c[..., 3]], axis=-1)
    inv = adj * (mag / det)[..., None]
    return inv[..., ::-1, :], -(g + np.log(mag))[..., ::-1]


def _tr_from_chain(c, g, incidence: str):
    """(ln_t, t, r, chain_log_scale) from a scaled regauged chain."""
    if incidence == "right":
        c, g = _invert_reverse(c, g)
    try:
        vec, s = fold_batch(c, g)
    except NonFiniteCoefficient as exc:
        raise ChainOverflow(str(exc)) from exc
    if incidence == "right":
        top = vec[..., 0] - vec[..., 3]
        off = vec[..., 1] - 1j * vec[..., 2]
    else:
        top = vec[..., 0] + vec[..., 3]
        off = vec[..., 1] + 1j * vec[..., 2]
    # ln T straight from the log scale; exponentiating may underflow to 0,
    # which is the honest double-precision value of T there.
    with np.errstate(divide="ignore", over="ignore"):
        ln_t = -2.0 * (s + np.log(np.abs(top)))
        t = np.exp(ln_t)
        r = np.abs(off / top) ** 2
    return ln_t, t, r, s


@dataclass(frozen=True)
class RegionWave:
    """Wave data of one region.

    basis "exponential": psi(x) = e^{log_scale} (a e^{i kappa (x - x_ref)}
    + b e^{-i kappa (x - x_ref)}), referenced to the region's own edge so
    evaluation exponents scale with depth into the region, not with absolute
    position.  basis "linear" (E equal to the region level): psi(x) =
    e^{log_scale} (a x + b).
    """

    kappa: complex
    basis: str
    a: complex
    b: complex
    log_scale: float
    x_ref: float

    @property
    def amplitudes(self) -> tuple[complex, complex]:
        """Plain (A, B) in the absolute convention psi = A e^{i kappa x} +
        B e^{-i kappa x}; can overflow for deeply evanescent regions far
        from the origin, which is what the referenced form avoids."""
        if self.basis == "linear":
            f = np.exp(self.log_scale)
            return (self.a * f, self.b * f)
        fa = np.exp(self.log_scale - 1j * self.kappa * self.x_ref)
        fb = np.exp(self.log_scale + 1j * self.kappa * self.x_ref)
        return (self.a * fa, self.b * fb)


@dataclass(eq=False)
class ScatteringSolution:
    """One energy solved: T/R plus lazily computed per-region amplitudes."""

    potential: PiecewiseConstantPotential
    energy: float
    incidence: str
    seed: complex
    kappas: np.ndarray
    transmission: float
    reflection: float
    ln_transmission: float
    chain_log_scale: float
    _chain: tuple = field(repr=False)
    _end_basis: tuple = field(repr=False)

    @cached_property
    def regions(self) -> tuple[RegionWave, ...]:
        """Amplitudes of every region (suffix products in one doubling sweep).

        Composition is anchored at the transmitted lead, where the boundary
        pair is known exactly, and runs toward the incident side.  That is
        the growth direction of the physics, so no cancellation is needed;
        anchoring at the incident side instead would lose the far-side
        amplitudes to roundoff once T drops below machine epsilon.  For left
        incidence that means suffix products of the chain; for right
        incidence, suffix products of the element-inverted reversed chain,
        read back in reverse (inverse prefix products).

        The seed multiplies precomputed unit-seed coefficients, so amplitudes
        are exactly linear in it.
        """
        degen, c, g = self._chain
        if self.incidence == "right":
            c, g = _invert_reverse(c, g)
        try:
            mus, ss = fold_suffixes(c, g)
        except NonFiniteCoefficient as exc:
            raise ChainOverflow(str(exc)) from exc
        if self.incidence == "right":
            mus, ss = mus[::-1], ss[::-1]
        u_end, v_end = self._end_basis
        a = (mus[:, 0] + mus[:, 3]) * u_end + (mus[:, 1] - 1j * mus[:, 2]) * v_end
        b = (mus[:, 1] + 1j * mus[:, 2]) * u_end + (mus[:, 0] - mus[:, 3]) * v_end
        x = self.potential.breakpoints
        refs = np.append(x, x[-1])
        out = []
        for r in range(self.kappas.size):
            # Scale by the seed in Python complex arithmetic: callers can
            # then reproduce a solve at seed s from a unit-seed solve to the
            # exact same bits.
            out.append(
                RegionWave(
                    kappa=complex(self.kappas[r]),
                    basis="linear" if degen[r] else "exponential",
                    a=complex(a[r]) * self.seed,
                    b=complex(b[r]) * self.seed,
                    log_scale=float(ss[r]),
                    x_ref=float(refs[r]),
                )
            )
        return tuple(out)


def _check_leads(potential: PiecewiseConstantPotential, energy: float) -> None:
    v = potential.levels
    if v[0] != v[-1]:
        raise UnequalLeads(
            f"lead levels {v[0]} and {v[-1]} differ; T/R need equal leads"
        )
    if energy <= v[0] + float(_thresholds(v[:1])[0]):
        raise EvanescentLead(f"E={energy} is at or below the lead level {v[0]}")


def solve(
    potential: PiecewiseConstantPotential,
    energy: float,
    incidence: str = "left",
    seed_amplitude: complex = 1.0,
) -> ScatteringSolution:
    """Solve one energy: transmission, reflection, and region amplitudes.

    incidence "left" sends the wave in from the left lead (B_{N+1} = 0);
    "right" from the right lead (A_1 = 0), computed by folding the inverted
    chain in reverse order.  seed_amplitude fixes the outgoing transmitted
    amplitude; every region amplitude scales in it linearly and exactly, and
    T and R never depend on it.
    """
    validate(potential)
    if incidence not in ("left", "right"):
        raise ValueError("incidence must be 'left' or 'right'")
    energy = float(energy)
    _check_leads(potential, energy)
    kap, degen, c, g = _factor_chain(potential, energy)
    # Fold as a batch of one: numpy's 0-d scalar ops can differ from its
    # array ufunc loops in the last bit, and batch rows must reproduce a
    # standalone solve exactly.
    ln_t, t, r, s = (v[0] for v in _tr_from_chain(c[None], g[None], incidence))
    x = potential.breakpoints
    k_lead = complex(kap[0])
    if incidence == "left":
        # theta_{N+1} = (seed, 0) in the absolute convention; referencing to
        # x_N leaves a unimodular phase on the A side.
        end_basis = (complex(np.exp(1j * k_lead * x[-1])), 0.0j)
    else:
        # theta_1 = (0, seed) in the absolute convention: the anchor sits at
        # the transmitted (left) lead and is exact, so regions never divides
        # back through the full chain.
        end_basis = (0.0j, complex(np.exp(-1j * k_lead * x[0])))
    return ScatteringSolution(
        potential=potential,
        energy=energy,
        incidence=incidence,
        seed=complex(seed_amplitude),
        kappas=kap,
        transmission=float(t),
        reflection=float(r),
        ln_transmission=float(ln_t),
        chain_log_scale=float(s),
        _chain=(degen, c, g),
        _end_basis=end_basis,
    )


def wavefunction(solution: ScatteringSolution, xs) -> np.ndarray:
    """Evaluate psi at the given points; breakpoints use the left region."""
    xs = np.asarray(xs, dtype=float)
    flat = xs.ravel()
    idx = solution.potential.region_of(flat)
    psi = np.empty(flat.shape, dtype=complex)
    regions = solution.regions
    for r in np.unique(idx):
        w = regions[r]
        m = idx == r
        if w.basis == "exponential":
            local = flat[m] - w.x_ref
            psi[m] = w.a * np.exp(w.log_scale + 1j * w.kappa * local) + w.b * np.exp(
                w.log_scale - 1j * w.kappa * local
            )
        else:
            psi[m] = (w.a * flat[m] + w.b) * np.exp(w.log_scale)
    return psi.reshape(xs.shape)


def transmission_curve(
    potential: PiecewiseConstantPotential, kappas, incidence: str = "left"
):
    """(ln_t, t, r) arrays over a vector of lead wave numbers kappa = sqrt(E).

    Vectorizes the chain build and fold across all grid points; grid points
    where E collides with a region level fall back to the patched scalar
    path.  Batched folds agree with standalone solves to within a few units
    of the last mantissa bit (numpy reductions round differently with
    stride), so compare against solve() with a small relative tolerance.
    """
    validate(potential)
    if incidence not in ("left", "right"):
        raise ValueError("incidence must be 'left' or 'right'")
    kappas = np.atleast_1d(np.asarray(kappas, dtype=float))
    energies = kappas**2
    v = potential.levels
    if v[0] != v[-1]:
        raise UnequalLeads(f"lead levels {v[0]} and {v[-1]} differ; T/R need equal leads")
    lead_thr = float(_thresholds(v[:1])[0])
    low = energies <= v[0] + lead_thr
    if np.any(low):
        k_bad = kappas[low][0]
        raise EvanescentLead(
            f"E={k_bad**2} (kappa={k_bad}) is at or below the lead level {v[0]}"
        )
    collide = (np.abs(energies[:, None] - v[None, :]) <= _thresholds(v)[None, :]).any(axis=1)
    ln_t = np.empty(kappas.shape)
    t = np.empty(kappas.shape)
    r = np.empty(kappas.shape)
    good = ~collide
    if np.any(good):
        kap = np.sqrt(energies[good, None] - v[None, :] + 0j)
        widths = np.append(np.diff(potential.breakpoints), 0.0)
        c, g = _factor_pauli(kap[:, :-1], kap[:, 1:], widths[None, :])
        ln_t[good], t[good], r[good], _ = _tr_from_chain(c, g, incidence)
    for i in np.nonzero(collide)[0]:
        _, _, c, g = _factor_chain(potential, float(energies[i]))
        ln_t[i], t[i], r[i], _ = _tr_from_chain(c, g, incidence)
    return ln_t, t, r


def transfer_matrix(
    potential: PiecewiseConstantPotential, j: int, energy: float
) -> np.ndarray:
    """Pauli vector of the textbook interface matrix at breakpoint j (0-based).

    This is the absolute-position form quoted in the module docstring, with
    det M_j = kappa_{j+1}/kappa_j.  Raises DegenerateKappa when E matches a
    flanking level; use transfer_matrix_linear there.  Chains inside solve()
    compose the regauged factorization instead, whose product is
    mathematically identical.
    """
    validate(potential)
    x = potential.breakpoints
    v = potential.levels
    if not 0 <= j < x.size:
        raise IndexError(f"interface {j} out of range for {x.size} breakpoints")
    thr = _thresholds(v)
    dl = abs(energy - v[j]) <= thr[j]
    dr = abs(energy - v[j + 1]) <= thr[j + 1]
    if dl and dr:
        raise BothRegionsDegenerate(
            f"E={energy} matches the levels on both sides of interface {j}"
        )
    if dl or dr:
        raise DegenerateKappa(
            f"E={energy} matches a level at interface {j}; use transfer_matrix_linear"
        )
    kl = complex(np.sqrt(complex(energy - v[j])))
    kr = complex(np.sqrt(complex(energy - v[j + 1])))
    xj = float(x[j])
    ps = (kl + kr) / (2.0 * kl)
    pd = (kl - kr) / (2.0 * kl)
    m11 = ps * np.exp(1j * (kr - kl) * xj)
    m22 = ps * np.exp(-1j * (kr - kl) * xj)
    m12 = pd * np.exp(-1j * (kl + kr) * xj)
    m21 = pd * np.exp(1j * (kl + kr) * xj)
    return _stack_pauli(m11, m12, m21, m22)


def transfer_matrix_linear(
    potential: PiecewiseConstantPotential, j: int, energy: float, linear_side: str
) -> np.ndarray:
    """Interface matrix at breakpoint j when one flanking region sits at E.

    linear_side names the region ("left" or "right" of the interface) whose
    basis is psi = A x + B; the opposite region must not also be at E.
    Like transfer_matrix this returns the absolute-position form.
    """
    validate(potential)
    x = potential.breakpoints
    v = potential.levels
    if not 0 <= j < x.size:
        raise IndexError(f"interface {j} out of range for {x.size} breakpoints")
    if linear_side not in ("left", "right"):
        raise ValueError("linear_side must be 'left' or 'right'")
    thr = _thresholds(v)
    other = v[j + 1] if linear_side == "left" else v[j]
    other_thr = thr[j + 1] if linear_side == "left" else thr[j]
    if abs(energy - other) <= other_thr:
        raise BothRegionsDegenerate(
            f"E={energy} matches the levels on both sides of interface {j}"
        )
    k = complex(np.sqrt(complex(energy - other)))
    xj = float(x[j])
    ep = np.exp(1j * k * xj)
    em = np.exp(-1j * k * xj)
    if linear_side == "left":
        m11 = 1j * k * ep
        m12 = -1j * k * em
        m21 = (1.0 - 1j * k * xj) * ep
        m22 = (1.0 + 1j * k * xj) * em
    else:
        m11 = 0.5 * (xj - 1j / k) * em
        m12 = 0.5 * em
        m21 = 0.5 * (xj + 1j / k) * ep
        m22 = 0.5 * ep
    return _stack_pauli(m11, m12, m21, m22)


def transfer_matrix_2x2(potential, j, energy) -> np.ndarray:
    """Plain 2x2 interface matrix (convenience wrapper over transfer_matrix)."""
    return to_matrix(transfer_matrix(potential, j, energy))
