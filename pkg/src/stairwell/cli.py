"""Command-line front end.

Every capability is scriptable: spectra and 2D scans to CSV/PGM, peak
reports, well-permutation audits, wavefunction dumps, and staircase
discretization of smooth profiles.  All physics flags are in natural
units with 2M/hbar^2 = 1, so kappa = sqrt(E) in the leads and a barrier
of height V0 has its top at kappa = sqrt(V0).

Exit codes: 0 success, 1 configuration error (bad flags, bad files,
invalid ranges), 2 numeric error (no propagating solution, overflow).
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .errors import (
    BothRegionsDegenerate,
    ChainOverflow,
    ChainTooLong,
    DegenerateKappa,
    EvanescentLead,
    NonFiniteCoefficient,
    StairwellError,
    UnequalLeads,
)
from .potential import (
    MbpSpec,
    build_mbp,
    discretize,
    dump_potential,
    load_potential,
    mbp_spec_from_file,
)
from .resonance import alias_audit, find_peaks
from .scan import emit, scan_single_well, scan_uniform_tau, spectrum
from .scattering import solve, wavefunction

__all__ = ["main"]

NUMERIC_ERRORS = (
    DegenerateKappa,
    BothRegionsDegenerate,
    EvanescentLead,
    UnequalLeads,
    ChainOverflow,
    NonFiniteCoefficient,
    ChainTooLong,
    FloatingPointError,
    OverflowError,
    ZeroDivisionError,
)

UNITS_NOTE = (
    "Natural units throughout: 2M/hbar^2 = 1, kappa = sqrt(E) in the leads. "
    "All lengths and energies are dimensionless in this convention."
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_grid(text: str, name: str, positive: bool = True) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"{name}: expected lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _UsageError(f"{name}: expected lo:hi:count with numeric parts, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise _UsageError(f"{name}: need lo < hi, got {text!r}")
    if positive and lo <= 0:
        raise _UsageError(f"{name}: lo must be positive, got {text!r}")
    if count < 2:
        raise _UsageError(f"{name}: need at least 2 points, got {text!r}")
    return lo, hi, count


def _parse_span(text: str, name: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise _UsageError(f"{name}: expected lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise _UsageError(f"{name}: expected lo:hi with numeric parts, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise _UsageError(f"{name}: need lo < hi, got {text!r}")
    return lo, hi


def _parse_floats(text: str, name: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise _UsageError(f"{name}: expected comma-separated numbers, got {text!r}") from None


def _require_out(args, command: str) -> str:
    if not args.out:
        raise _UsageError(f"{command} requires --out/-o for its output file")
    return args.out


def _mbp_spec_from_args(args) -> MbpSpec:
    """Resolve the barrier-train spec from --mbp/--wells or an mbp-form file."""
    has_inline = args.mbp is not None
    has_file = getattr(args, "potential", None) is not None
    if has_inline == has_file:
        raise _UsageError("give exactly one potential source: --potential FILE or --mbp m,v0,delta")
    if has_file:
        return mbp_spec_from_file(args.potential)
    parts = _parse_floats(args.mbp, "--mbp")
    if len(parts) != 3:
        raise _UsageError(f"--mbp: expected m,v0,delta, got {args.mbp!r}")
    m = int(parts[0])
    if m != parts[0] or m < 1:
        raise _UsageError("--mbp: barrier count m must be a positive integer")
    wells = _parse_floats(args.wells, "--wells") if args.wells else ()
    return MbpSpec(m, parts[1], parts[2], wells)


def _potential_from_args(args):
    has_inline = args.mbp is not None
    has_file = getattr(args, "potential", None) is not None
    if has_inline == has_file:
        raise _UsageError("give exactly one potential source: --potential FILE or --mbp m,v0,delta")
    if has_file:
        return load_potential(args.potential)
    return build_mbp(_mbp_spec_from_args(args))


def _add_source_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--potential", metavar="FILE", help="potential definition file (JSON)")
    p.add_argument("--mbp", metavar="M,V0,DELTA", help="inline barrier train: count, height, width")
    p.add_argument("--wells", metavar="W1,W2,...", help="well widths left to right (with --mbp)")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", "-o", metavar="PATH", help="output file path (or stem for multi-file commands)")
    p.add_argument(
        "--threads",
        type=int,
        default=1,
        metavar="N",
        help="worker budget; grid assembly is index-deterministic, so output never depends on it",
    )
    p.add_argument(
        "--tolerance",
        type=float,
        default=1e-6,
        metavar="TOL",
        help="refinement tolerance in kappa for peak location (default 1e-6)",
    )


def _check_common(args) -> None:
    if args.threads < 1:
        raise _UsageError("--threads must be at least 1")
    if not (math.isfinite(args.tolerance) and args.tolerance > 0):
        raise _UsageError("--tolerance must be positive")


# ---- commands ---------------------------------------------------------------

def _cmd_spectrum(args) -> int:
    _check_common(args)
    out = _require_out(args, "spectrum")
    pot = _potential_from_args(args)
    grid = _parse_grid(args.kappa, "--kappa")
    rows = spectrum(pot, grid)
    emit(rows, "csv", out)
    ln = [r.ln_t for r in rows]
    print(f"{len(rows)} rows, ln T in [{min(ln):.6g}, {max(ln):.6g}], wrote {out}")
    return 0


def _peaks_report(cat) -> str:
    lines = [
        f"kappa range ({cat.kappa_range[0]:g}, {cat.kappa_range[1]:g}), "
        f"barrier top sqrt(V0) = {cat.barrier_top:.6g}",
        f"beta = {cat.band_count_beta} (bands, widest well), "
        f"alpha = {cat.peak_count_alpha} (floor sum over distinct widths)",
        "",
        f"{'kind':<8} {'kappa':>12} {'lnT':>12} {'prominence':>11} {'width':>10}",
    ]
    for p in cat.peaks:
        lines.append(
            f"{p.kind:<8} {p.kappa:>12.6f} {p.ln_t:>12.4f} {p.prominence:>11.3f} {p.width:>10.3e}"
        )
    lines.append("")
    lines.append(f"{'estimates':<10} {'well':>8} {'n':>4} {'kappa':>12}")
    for e in cat.estimates:
        lines.append(f"{'':<10} {e.well_width:>8g} {e.quantum_number:>4} {e.kappa_estimate:>12.6f}")
    return "\n".join(lines) + "\n"


def _cmd_peaks(args) -> int:
    _check_common(args)
    pot = _potential_from_args(args)
    krange = _parse_grid(args.kappa, "--kappa")[:2] if args.kappa else None
    grid_points = args.grid_points
    if args.kappa:
        grid_points = _parse_grid(args.kappa, "--kappa")[2]
    cat = find_peaks(pot, krange, grid_points, args.tolerance)
    report = _peaks_report(cat)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report)
        print(f"wrote {args.out}")
    else:
        print(report, end="")
    print(f"{cat.sharp_count} sharp peaks, beta={cat.band_count_beta}")
    print(f"{cat.diffuse_count} diffuse peaks near the top, alpha={cat.peak_count_alpha}")
    return 0


def _order_tag(order) -> str:
    return "-".join(f"{w:g}" for w in order)


def _cmd_alias(args) -> int:
    _check_common(args)
    out = _require_out(args, "alias")
    spec = _mbp_spec_from_args(args)
    if len(spec.well_widths) < 1:
        raise _UsageError("alias needs at least one well (m >= 2)")
    if args.all and args.perms:
        raise _UsageError("give --all or --perms, not both")
    if args.all:
        if math.factorial(len(spec.well_widths)) > 720:
            raise _UsageError(
                f"--all with {len(spec.well_widths)} wells means "
                f"{math.factorial(len(spec.well_widths))} orderings; cap is 720"
            )
        perms = None
    elif args.perms:
        perms = [_parse_floats(p, "--perms") for p in args.perms.split(";") if p]
        if not perms:
            raise _UsageError("--perms: no orderings given")
    else:
        raise _UsageError("alias requires --all or --perms")
    krange = _parse_grid(args.kappa, "--kappa")[:2] if args.kappa else None
    report = alias_audit(
        spec,
        perms,
        kappa_range=krange,
        refine_tolerance=args.tolerance,
        mirror_grid_points=args.curve_points,
    )
    with open(out + ".txt", "w", encoding="utf-8") as fh:
        fh.write(report.render())
    lo, hi = report.kappa_range
    seen = set()
    for m in report.matches:
        if m.order in seen:
            continue
        seen.add(m.order)
        pot = build_mbp(MbpSpec(spec.barrier_count, spec.barrier_height, spec.barrier_width, m.order, spec.origin))
        emit(spectrum(pot, (lo, hi, args.curve_points)), "csv", f"{out}.order-{_order_tag(m.order)}.csv")
    print(report.render(), end="")
    print(f"wrote {out}.txt and {len(seen)} spectra, {len(report.reversals)} reversal pairs")
    return 0


def _cmd_scan2d(args) -> int:
    _check_common(args)
    out = _require_out(args, "scan2d")
    spec = _mbp_spec_from_args(args) if (args.potential or args.wells) else None
    if args.mbp and spec is None:
        parts = _parse_floats(args.mbp, "--mbp")
        if len(parts) != 3:
            raise _UsageError(f"--mbp: expected m,v0,delta, got {args.mbp!r}")
        m, v0, delta = int(parts[0]), parts[1], parts[2]
    elif spec is not None:
        m, v0, delta = spec.barrier_count, spec.barrier_height, spec.barrier_width
    else:
        raise _UsageError("scan2d needs --mbp m,v0,delta or an mbp-form --potential file")
    kappa_axis = _parse_grid(args.kappa, "--kappa")
    if bool(args.uniform_tau) == bool(args.single_well):
        raise _UsageError("give exactly one of --uniform-tau or --single-well")
    if args.uniform_tau:
        tau_axis = _parse_grid(args.uniform_tau, "--uniform-tau")
        grid = scan_uniform_tau(m, v0, delta, tau_axis, kappa_axis)
    else:
        parts = _parse_floats(args.single_well, "--single-well")
        if len(parts) != 2 or int(parts[1]) != parts[1]:
            raise _UsageError("--single-well: expected base_tau,varied_index")
        if not args.tau_prime:
            raise _UsageError("--single-well needs --tau-prime lo:hi:count")
        tp_axis = _parse_grid(args.tau_prime, "--tau-prime")
        grid = scan_single_well(m, v0, delta, parts[0], int(parts[1]), tp_axis, kappa_axis)
    emit(grid, "csv", out + ".csv")
    emit(grid, "raster", out + ".pgm")
    print(
        f"{grid.values.shape[0]} x {grid.values.shape[1]} grid ({grid.param_kind}), "
        f"ln T in [{grid.values.min():.6g}, {grid.values.max():.6g}], "
        f"wrote {out}.csv, {out}.pgm, {out}.pgm.txt"
    )
    return 0


def _cmd_wavefunction(args) -> int:
    _check_common(args)
    out = _require_out(args, "wavefunction")
    pot = _potential_from_args(args)
    if args.energy is None:
        raise _UsageError("wavefunction requires --energy")
    seed_parts = _parse_floats(args.seed, "--seed")
    if len(seed_parts) == 1:
        seed = complex(seed_parts[0], 0.0)
    elif len(seed_parts) == 2:
        seed = complex(seed_parts[0], seed_parts[1])
    else:
        raise _UsageError("--seed: expected re or re,im")
    sol = solve(pot, args.energy, incidence=args.incidence, seed_amplitude=seed)
    if args.x:
        lo, hi, count = _parse_grid(args.x, "--x", positive=False)
    else:
        span = float(pot.breakpoints[-1] - pot.breakpoints[0])
        pad = 0.25 * span + 1.0
        lo, hi, count = float(pot.breakpoints[0]) - pad, float(pot.breakpoints[-1]) + pad, 2000
    xs = np.linspace(lo, hi, count)
    psi = wavefunction(sol, xs)
    if args.scale_to_barrier:
        v_top = float(np.max(pot.levels))
        if v_top <= 0:
            raise _UsageError("--scale-to-barrier needs a positive barrier level")
        peak = float(np.max(np.abs(psi)))
        if peak == 0.0:
            raise _UsageError("--scale-to-barrier: wavefunction is identically zero")
        psi = psi * (v_top / peak)
    levels = pot.levels[pot.region_of(xs)]
    lines = ["x,reV,rePsi,imPsi,absPsi"]
    for x, v, p in zip(xs, levels, psi):
        lines.append(
            f"{x:.17g},{v:.17g},{p.real:.17g},{p.imag:.17g},{abs(p):.17g}"
        )
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    print(
        f"E={args.energy:g}, T={sol.transmission:.6g}, R={sol.reflection:.6g}, "
        f"{count} samples on [{lo:g}, {hi:g}], wrote {out}"
    )
    return 0


def _cmd_discretize(args) -> int:
    _check_common(args)
    out = _require_out(args, "discretize")
    if args.steps < 1:
        raise _UsageError("--steps must be at least 1")
    if not math.isfinite(args.amplitude):
        raise _UsageError("--amplitude must be finite")
    lo, hi = _parse_span(args.span, "--span")
    xs = np.linspace(lo, hi, 40_001)
    if args.profile == "gaussian":
        if not (math.isfinite(args.sigma) and args.sigma > 0):
            raise _UsageError("--sigma must be positive")
        vs = args.amplitude * np.exp(-((xs / args.sigma) ** 2))
    else:
        vs = np.full_like(xs, args.amplitude)
    pot = discretize(np.column_stack([xs, vs]), args.steps)
    dump_potential(pot, out)
    inner = pot.levels[1:-1]
    print(
        f"{args.steps} steps over [{lo:g}, {hi:g}], levels in "
        f"[{inner.min():.6g}, {inner.max():.6g}], wrote {out}"
    )
    return 0


# ---- wiring -----------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(
        prog="stairwell",
        description="Exact transmission through 1D piecewise-constant potential barriers. " + UNITS_NOTE,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="T(kappa) table to CSV", description=UNITS_NOTE)
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--kappa", required=True, metavar="LO:HI:COUNT", help="kappa grid")
    p.add_argument("--incidence", choices=("left", "right"), default="left")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("peaks", help="locate and classify resonant peaks", description=UNITS_NOTE)
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--kappa", metavar="LO:HI:COUNT", help="search range (default (0.02, 1.2*sqrt(V0)))")
    p.add_argument("--grid-points", type=int, default=20_000, metavar="N")
    p.set_defaults(func=_cmd_peaks)

    p = sub.add_parser("alias", help="audit well-order permutations", description=UNITS_NOTE)
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--perms", metavar="A,B,...;C,D,...", help="semicolon-separated orderings")
    p.add_argument("--all", action="store_true", help="audit every ordering (capped at 720)")
    p.add_argument("--kappa", metavar="LO:HI:COUNT", help="search range override")
    p.add_argument("--curve-points", type=int, default=2048, metavar="N", help="grid for full-curve checks and spectra")
    p.set_defaults(func=_cmd_alias)

    p = sub.add_parser("scan2d", help="ln T grid over kappa and a geometry parameter", description=UNITS_NOTE)
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--kappa", required=True, metavar="LO:HI:COUNT")
    p.add_argument("--uniform-tau", metavar="LO:HI:COUNT", help="sweep the common well width")
    p.add_argument("--single-well", metavar="BASE,INDEX", help="fix wells at BASE, vary well INDEX (1-based)")
    p.add_argument("--tau-prime", metavar="LO:HI:COUNT", help="sweep for the varied well")
    p.set_defaults(func=_cmd_scan2d)

    p = sub.add_parser("wavefunction", help="psi(x) dump at one energy", description=UNITS_NOTE)
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--energy", type=float, metavar="E", help="total energy (natural units)")
    p.add_argument("--x", metavar="LO:HI:COUNT", help="sample grid (default: padded barrier span)")
    p.add_argument("--incidence", choices=("left", "right"), default="left")
    p.add_argument("--seed", default="1", metavar="RE[,IM]", help="transmitted amplitude (default 1)")
    p.add_argument("--scale-to-barrier", action="store_true", help="rescale psi so max |psi| equals the barrier height")
    p.set_defaults(func=_cmd_wavefunction)

    p = sub.add_parser("discretize", help="staircase a smooth profile into a potential file", description=UNITS_NOTE)
    _add_common_flags(p)
    p.add_argument("--profile", choices=("gaussian", "constant"), required=True)
    p.add_argument("--amplitude", type=float, required=True, metavar="A")
    p.add_argument("--sigma", type=float, default=1.0, metavar="S", help="gaussian width: A*exp(-(x/S)^2)")
    p.add_argument("--span", required=True, metavar="LO:HI", help="sampled interval")
    p.add_argument("--steps", type=int, required=True, metavar="N", help="number of stair levels")
    p.set_defaults(func=_cmd_discretize)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NUMERIC_ERRORS as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2
    except StairwellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
