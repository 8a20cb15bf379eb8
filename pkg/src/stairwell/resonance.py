"""Resonance counting, peak location, and well-permutation audits.

Transmission through a barrier train spikes wherever the energy lines up
with a quasi-bound state of one of the wells.  The infinite-well guesses
kappa = n*pi/tau frame those spikes from above (finite wells bind lower),
which gives closed-form counting rules and cheap seed points for the
numeric search:

  band_count  beta  = floor(tau*sqrt(V0)/pi)  bands for a uniform train
  peak_count  alpha = sum of beta over distinct well widths

find_peaks locates the actual maxima of ln T(kappa) on a grid, refines
them by golden-section search, and splits them into sharp sub-top
resonances, diffuse near-top remnants, and above-top interference
ripples.  alias_audit compares the peak sets of different well orderings;
orderings that are mirror images must produce identical transmission.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BadPermutation, InvalidRange, InvalidSpec
from .potential import (
    MbpSpec,
    PiecewiseConstantPotential,
    build_mbp,
    validate,
    well_widths_of,
)
from .scattering import solve, transmission_curve

__all__ = [
    "AliasReport",
    "Peak",
    "PermutationMatch",
    "ResonanceCatalog",
    "ResonanceEstimate",
    "ReversalCheck",
    "alias_audit",
    "band_count",
    "estimates",
    "find_peaks",
    "peak_count",
    "spike_count",
    "spike_groups",
]

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_GRID_POINTS = 20_000
DEFAULT_REFINE_TOLERANCE = 1e-6

# A resonance rises tens of ln-units above its surroundings; 0.5 separates
# physical peaks from ripple.  Near the barrier top the surviving well
# states flatten out, so inside [0.95, 1.2]*sqrt(V0) the floor drops to 0.1.
SHARP_PROMINENCE = 0.5
DIFFUSE_PROMINENCE = 0.1
RETENTION_BAND = (0.95, 1.2)

# Near-top well states stay put when the barrier width changes; above-top
# interference ripples migrate with the total span.  The stationary kind
# never strays past ~1.05*sqrt(V0), so the diffuse label stops there and
# everything beyond is classified as ripple.
DIFFUSE_BAND = (0.95, 1.05)


def band_count(tau: float, v0: float) -> int:
    """Resonant bands below the barrier top for well width tau: floor(tau*sqrt(v0)/pi)."""
    if not (np.isfinite(tau) and tau > 0):
        raise InvalidSpec("tau must be positive")
    if not (np.isfinite(v0) and v0 > 0):
        raise InvalidSpec("v0 must be positive")
    return int(math.floor(tau * math.sqrt(v0) / math.pi))


def peak_count(well_widths, v0: float) -> int:
    """Total sub-top peaks: band_count summed over distinct well widths.

    Repeated widths contribute once; their wells share the same state
    ladder and alias onto the same peaks.
    """
    widths = tuple(float(w) for w in well_widths)
    for w in widths:
        if not (np.isfinite(w) and w > 0):
            raise InvalidSpec("well widths must be positive")
    return sum(band_count(w, v0) for w in set(widths))


@dataclass(frozen=True)
class ResonanceEstimate:
    """Infinite-well state at kappa = n*pi/tau; an upper bound for the true peak."""

    well_width: float
    quantum_number: int
    kappa_estimate: float


def estimates(well_widths, v0: float, kappa_max: float) -> tuple[ResonanceEstimate, ...]:
    """All (tau, n) with n*pi/tau <= kappa_max, deduplicated across repeated widths.

    Sorted by kappa_estimate; distinct widths whose estimates collide
    (n*tau' = l*tau) both appear, ordered by width.
    """
    widths = tuple(float(w) for w in well_widths)
    for w in widths:
        if not (np.isfinite(w) and w > 0):
            raise InvalidSpec("well widths must be positive")
    if not (np.isfinite(v0) and v0 > 0):
        raise InvalidSpec("v0 must be positive")
    if not (np.isfinite(kappa_max) and kappa_max > 0):
        raise InvalidRange("kappa_max must be positive")
    out = []
    for tau in sorted(set(widths)):
        n = 1
        while n * math.pi / tau <= kappa_max:
            out.append(ResonanceEstimate(tau, n, n * math.pi / tau))
            n += 1
    out.sort(key=lambda e: (e.kappa_estimate, e.well_width))
    return tuple(out)


@dataclass(frozen=True)
class Peak:
    """One local maximum of ln T(kappa).

    width is the full width at half the prominence; prominence is the rise
    above the lower of the two flanking minima.  kind is "sharp" (sub-top
    resonance), "diffuse" (near-top well state), or "ripple".
    """

    kappa: float
    ln_t: float
    width: float
    prominence: float
    kind: str


@dataclass(frozen=True)
class ResonanceCatalog:
    """Located peaks plus the counting-rule context they are judged against."""

    peaks: tuple[Peak, ...]
    estimates: tuple[ResonanceEstimate, ...]
    band_count_beta: int
    peak_count_alpha: int
    barrier_top: float
    kappa_range: tuple[float, float]

    def sharp_peaks(self) -> tuple[Peak, ...]:
        return tuple(p for p in self.peaks if p.kind == "sharp")

    def diffuse_peaks(self) -> tuple[Peak, ...]:
        return tuple(p for p in self.peaks if p.kind == "diffuse")

    @property
    def sharp_count(self) -> int:
        return len(self.sharp_peaks())

    @property
    def diffuse_count(self) -> int:
        return len(self.diffuse_peaks())


def _golden_max(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section maximum of f on [a, b] to interval width tol."""
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _golden_min(f, a: float, b: float, tol: float) -> tuple[float, float]:
    x, neg = _golden_max(lambda u: -f(u), a, b, tol)
    return x, -neg


def _half_level_crossing(f, x_out: float, x_peak: float, level: float, tol: float) -> float:
    """Abscissa where f crosses level between a flank point and the peak.

    If the flank never dips to the level (the shallow side of an asymmetric
    peak), the flank point itself bounds the width.
    """
    if f(x_out) >= level:
        return x_out
    a, b = x_out, x_peak  # f(a) < level <= f(b)
    while abs(b - a) > tol:
        m = 0.5 * (a + b)
        if f(m) < level:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def find_peaks(
    potential: PiecewiseConstantPotential,
    kappa_range: tuple[float, float] | None = None,
    grid_points: int = DEFAULT_GRID_POINTS,
    refine_tolerance: float = DEFAULT_REFINE_TOLERANCE,
) -> ResonanceCatalog:
    """Locate and classify the maxima of ln T(kappa).

    Candidates are the strict local maxima of a uniform kappa grid plus a
    window around every infinite-well estimate (insurance against grid
    misses between deep minima).  Each candidate is refined by
    golden-section search to refine_tolerance, candidates closer than twice
    that merge, and every survivor must be a genuine local maximum at the
    +-refine_tolerance scale.  Prominence is measured against the lower of
    the two flanking minima (located by golden-section descent toward the
    neighboring peaks or range edges).

    Default kappa_range is (0.02, 1.2*sqrt(max level)); potentials with no
    positive level need an explicit range.
    """
    validate(potential)
    v_top = float(np.max(potential.levels))
    top = math.sqrt(v_top) if v_top > 0 else 0.0
    if kappa_range is None:
        if top <= 0:
            raise InvalidRange("no positive level; pass kappa_range explicitly")
        kappa_range = (0.02, 1.2 * top)
    lo, hi = float(kappa_range[0]), float(kappa_range[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and 0 < lo < hi):
        raise InvalidRange(f"need 0 < lo < hi, got ({lo}, {hi})")
    if grid_points < 16:
        raise InvalidRange("grid_points must be at least 16")
    if not (np.isfinite(refine_tolerance) and refine_tolerance > 0):
        raise InvalidRange("refine_tolerance must be positive")

    grid = np.linspace(lo, hi, grid_points)
    ln = transmission_curve(potential, grid)[0]

    def f(k: float) -> float:
        return float(solve(potential, k * k).ln_transmission)

    interior = (ln[1:-1] > ln[:-2]) & (ln[1:-1] > ln[2:])
    windows = [(grid[i], grid[i + 2]) for i in np.nonzero(interior)[0]]
    wells = well_widths_of(potential)
    seeds = estimates(wells, v_top, hi) if wells and v_top > 0 else ()
    h = (hi - lo) / (grid_points - 1)
    for est in seeds:
        k = est.kappa_estimate
        if lo < k < hi:
            windows.append((max(lo, k - 2 * h), min(hi, k + 2 * h)))

    refined = []
    for a, b in windows:
        x, y = _golden_max(f, a, b, refine_tolerance)
        refined.append((x, y))
    refined.sort()
    merged: list[tuple[float, float]] = []
    for cand in refined:
        if merged and cand[0] - merged[-1][0] < 2.0 * refine_tolerance:
            if cand[1] > merged[-1][1]:
                merged[-1] = cand
        else:
            merged.append(cand)
    genuine = [
        (x, y)
        for x, y in merged
        if lo + refine_tolerance <= x <= hi - refine_tolerance
        and y >= f(x - refine_tolerance)
        and y >= f(x + refine_tolerance)
    ]

    peaks = []
    for i, (x, y) in enumerate(genuine):
        left_edge = genuine[i - 1][0] if i > 0 else lo
        right_edge = genuine[i + 1][0] if i + 1 < len(genuine) else hi
        xl, yl = _golden_min(f, left_edge, x, refine_tolerance)
        xr, yr = _golden_min(f, x, right_edge, refine_tolerance)
        prominence = y - min(yl, yr)
        in_band = top > 0 and RETENTION_BAND[0] * top <= x <= RETENTION_BAND[1] * top
        if prominence < SHARP_PROMINENCE and not (in_band and prominence >= DIFFUSE_PROMINENCE):
            continue
        level = y - 0.5 * prominence
        wl = _half_level_crossing(f, xl, x, level, refine_tolerance)
        wr = _half_level_crossing(f, xr, x, level, refine_tolerance)
        if prominence >= SHARP_PROMINENCE and top > 0 and x < top:
            kind = "sharp"
        elif top > 0 and DIFFUSE_BAND[0] * top <= x <= DIFFUSE_BAND[1] * top:
            kind = "diffuse"
        else:
            kind = "ripple"
        peaks.append(
            Peak(float(x), float(y), float(max(wr - wl, refine_tolerance)), float(prominence), kind)
        )

    beta = band_count(max(wells), v_top) if wells and v_top > 0 else 0
    alpha = peak_count(wells, v_top) if wells and v_top > 0 else 0
    return ResonanceCatalog(
        peaks=tuple(peaks),
        estimates=seeds,
        band_count_beta=beta,
        peak_count_alpha=alpha,
        barrier_top=top,
        kappa_range=(lo, hi),
    )


def spike_groups(peaks, gap: float = 0.05) -> tuple[tuple[Peak, ...], ...]:
    """Cluster peaks into groups separated by more than gap in kappa.

    Multiplet members sit within ~1e-2 of each other while distinct bands
    are ~0.4 apart, so one visual spike equals one group.
    """
    if gap <= 0:
        raise InvalidRange("gap must be positive")
    ordered = sorted(peaks, key=lambda p: p.kappa)
    groups: list[list[Peak]] = []
    for p in ordered:
        if groups and p.kappa - groups[-1][-1].kappa <= gap:
            groups[-1].append(p)
        else:
            groups.append([p])
    return tuple(tuple(g) for g in groups)


def spike_count(
    catalog: ResonanceCatalog, gap: float = 0.05, prominence_floor: float = 10.0
) -> int:
    """Number of resonant spikes: groups whose tallest member rises at least
    prominence_floor above its surroundings.

    Counts sharp and diffuse peaks together; the near-top well states form
    one more visual spike hugging sqrt(V0) even though they sit past the
    sub-top cutoff.
    """
    resonant = [p for p in catalog.peaks if p.kind in ("sharp", "diffuse")]
    groups = spike_groups(resonant, gap)
    return sum(1 for g in groups if max(p.prominence for p in g) >= prominence_floor)


@dataclass(frozen=True)
class PermutationMatch:
    """Peak comparison of one well ordering against the reference ordering."""

    order: tuple[float, ...]
    sharp_count: int
    matched: int
    unmatched: int
    max_distance: float
    within_gate: bool


@dataclass(frozen=True)
class ReversalCheck:
    """Full-curve agreement of a mirror-image pair of orderings."""

    first: tuple[float, ...]
    second: tuple[float, ...]
    max_delta_t: float
    within_tolerance: bool


@dataclass(frozen=True)
class AliasReport:
    reference_order: tuple[float, ...]
    matches: tuple[PermutationMatch, ...]
    reversals: tuple[ReversalCheck, ...]
    duplicates: tuple[tuple[float, ...], ...]
    match_gate: float
    mirror_tolerance: float
    kappa_range: tuple[float, float]
    barrier_top: float

    @property
    def counts_equal(self) -> bool:
        counts = {m.sharp_count for m in self.matches}
        return len(counts) <= 1

    @property
    def all_within_gate(self) -> bool:
        return all(m.within_gate for m in self.matches)

    @property
    def all_mirrors_agree(self) -> bool:
        return all(r.within_tolerance for r in self.reversals)

    def render(self) -> str:
        def fmt(order):
            return "(" + ", ".join(f"{w:g}" for w in order) + ")"

        lines = [
            "alias audit",
            f"  reference order: {fmt(self.reference_order)}",
            f"  kappa range: ({self.kappa_range[0]:g}, {self.kappa_range[1]:g}),"
            f" barrier top sqrt(V0) = {self.barrier_top:.6g}",
            f"  match gate: {self.match_gate:g} in kappa,"
            f" mirror tolerance: {self.mirror_tolerance:g} in T",
            "",
            f"  {'order':<24} {'sharp':>5} {'matched':>7} {'unmatched':>9}"
            f" {'max |dk|':>12} {'gate':>5}",
        ]
        for m in self.matches:
            lines.append(
                f"  {fmt(m.order):<24} {m.sharp_count:>5} {m.matched:>7}"
                f" {m.unmatched:>9} {m.max_distance:>12.3e}"
                f" {'ok' if m.within_gate else 'FAIL':>5}"
            )
        lines.append("")
        if self.reversals:
            lines.append("  mirror pairs (full-curve check):")
            for r in self.reversals:
                lines.append(
                    f"    {fmt(r.first)} vs {fmt(r.second)}:"
                    f" max |dT| = {r.max_delta_t:.3e}"
                    f" {'ok' if r.within_tolerance else 'FAIL'}"
                )
        else:
            lines.append("  mirror pairs: none among the given orderings")
        if self.duplicates:
            dup = ", ".join(fmt(d) for d in self.duplicates)
            lines.append(f"  duplicate orderings (identical potentials): {dup}")
        lines.append("")
        verdict = (
            "counts equal" if self.counts_equal else "counts DIFFER"
        ) + (", all matches within gate" if self.all_within_gate else ", gate violations present")
        lines.append(f"  verdict: {verdict}")
        return "\n".join(lines) + "\n"


def _greedy_match(base: list[float], other: list[float]) -> tuple[int, float]:
    """Greedy nearest pairing of two location lists.

    Returns (pair count, max paired distance).  Pairs are taken in order of
    increasing separation, each location used once.
    """
    pairs = sorted(
        (abs(a - b), i, j) for i, a in enumerate(base) for j, b in enumerate(other)
    )
    used_a: set[int] = set()
    used_b: set[int] = set()
    worst = 0.0
    for d, i, j in pairs:
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        worst = max(worst, d)
    return min(len(base), len(other)), worst


def alias_audit(
    spec: MbpSpec,
    permutations=None,
    kappa_range: tuple[float, float] | None = None,
    grid_points: int = DEFAULT_GRID_POINTS,
    refine_tolerance: float = DEFAULT_REFINE_TOLERANCE,
    match_gate: float = 1e-2,
    mirror_tolerance: float = 1e-12,
    mirror_grid_points: int = 2048,
) -> AliasReport:
    """Compare transmission peaks across well orderings of one barrier train.

    The first ordering is the reference; every other ordering must be a
    rearrangement of the same width multiset (BadPermutation otherwise).
    Sharp sub-top peaks are paired by greedy nearest match and judged
    against match_gate.  Orderings that are mirror images of each other
    additionally get a full-curve comparison: their transmission
    coefficients are identical physics and must agree to mirror_tolerance.

    permutations=None audits every distinct ordering; factorial growth is
    the caller's responsibility.
    """
    reference = tuple(float(w) for w in spec.well_widths)
    if len(reference) < 1:
        raise InvalidSpec("alias audit needs at least one well")
    if permutations is None:
        orders = sorted(set(itertools.permutations(reference)))
    else:
        orders = [tuple(float(w) for w in p) for p in permutations]
        if not orders:
            raise InvalidSpec("permutation list is empty")
    want = sorted(reference)
    for p in orders:
        if sorted(p) != want:
            raise BadPermutation(f"{p} is not a rearrangement of {reference}")

    catalogs: dict[tuple[float, ...], ResonanceCatalog] = {}
    duplicates = []
    for p in orders:
        if p in catalogs:
            duplicates.append(p)
            continue
        pot = build_mbp(replace(spec, well_widths=p))
        catalogs[p] = find_peaks(pot, kappa_range, grid_points, refine_tolerance)
    unique = list(catalogs)
    base_order = unique[0]
    base_cat = catalogs[base_order]
    base_locs = [p.kappa for p in base_cat.sharp_peaks()]

    matches = []
    for p in unique:
        cat = catalogs[p]
        locs = [q.kappa for q in cat.sharp_peaks()]
        if p == base_order:
            matches.append(
                PermutationMatch(p, len(locs), len(locs), 0, 0.0, True)
            )
            continue
        paired, worst = _greedy_match(base_locs, locs)
        unmatched = len(base_locs) + len(locs) - 2 * paired
        ok = unmatched == 0 and worst <= match_gate
        matches.append(PermutationMatch(p, len(locs), paired, unmatched, worst, ok))

    reversals = []
    lo, hi = base_cat.kappa_range
    mirror_grid = np.linspace(lo, hi, mirror_grid_points)
    seen_pairs: set[tuple[tuple[float, ...], tuple[float, ...]]] = set()
    curve_cache: dict[tuple[float, ...], np.ndarray] = {}

    def curve(order):
        if order not in curve_cache:
            pot = build_mbp(replace(spec, well_widths=order))
            curve_cache[order] = transmission_curve(pot, mirror_grid)[1]
        return curve_cache[order]

    for p in unique:
        q = tuple(reversed(p))
        if q == p or q not in catalogs:
            continue
        key = (min(p, q), max(p, q))
        if key in seen_pairs:
            continue
        seen_pairs.add(key)
        delta = float(np.max(np.abs(curve(p) - curve(q))))
        reversals.append(ReversalCheck(key[0], key[1], delta, delta <= mirror_tolerance))

    return AliasReport(
        reference_order=base_order,
        matches=tuple(matches),
        reversals=tuple(reversals),
        duplicates=tuple(duplicates),
        match_gate=match_gate,
        mirror_tolerance=mirror_tolerance,
        kappa_range=base_cat.kappa_range,
        barrier_top=base_cat.barrier_top,
    )
