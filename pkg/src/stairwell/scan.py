"""Parameter sweeps and file emission: spectra, 2D ln T grids, CSV, PGM.

A spectrum samples T(kappa) for one fixed potential on a uniform kappa
grid.  A GridScan stacks spectra while one geometry parameter varies row
by row: the common well width tau, or the width tau' of one singled-out
well.  Grids are written either as long-form CSV or as an 8-bit grayscale
portable graymap with a text sidecar describing the axes and the gray
mapping, so any external tool can plot them.

All numbers are printed with 17 significant digits; reading a CSV back
reproduces the written doubles exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyData, InvalidRange, InvalidSpec, IoError, StairwellError
from .potential import MbpSpec, PiecewiseConstantPotential, build_mbp, validate
from .scattering import solve, transmission_curve

__all__ = [
    "GridScan",
    "SpectrumRow",
    "emit",
    "overlay_hyperbolas",
    "read_spectrum_csv",
    "scan_single_well",
    "scan_uniform_tau",
    "spectrum",
]

SPECTRUM_HEADER = "kappa,energy,T,lnT,R"
GRID_HEADER = "kappa,param,lnT"


def _check_axis(axis, name: str) -> tuple[float, float, int]:
    try:
        lo, hi, count = axis
    except (TypeError, ValueError):
        raise InvalidRange(f"{name}: expected (lo, hi, count)") from None
    lo, hi, count = float(lo), float(hi), int(count)
    if not (np.isfinite(lo) and np.isfinite(hi) and 0 < lo < hi):
        raise InvalidRange(f"{name}: need 0 < lo < hi, got ({lo}, {hi})")
    if count < 2:
        raise InvalidRange(f"{name}: need at least 2 points, got {count}")
    return lo, hi, count


@dataclass(frozen=True)
class SpectrumRow:
    """One solved grid point; energy is kappa squared as computed."""

    kappa: float
    energy: float
    t: float
    ln_t: float
    r: float


def spectrum(potential: PiecewiseConstantPotential, kappa_grid) -> list[SpectrumRow]:
    """Solve T, ln T, R on a uniform kappa grid; one row per point.

    Solver failures are re-raised with the first offending kappa named
    (found by replaying the grid point by point).
    """
    validate(potential)
    lo, hi, count = _check_axis(kappa_grid, "kappa_grid")
    grid = np.linspace(lo, hi, count)
    try:
        ln_t, t, r = transmission_curve(potential, grid)
    except StairwellError as exc:
        for k in grid:
            try:
                solve(potential, float(k) * float(k))
            except StairwellError as point_exc:
                raise type(point_exc)(f"{point_exc} [kappa={float(k)!r}]") from exc
        raise
    return [
        SpectrumRow(float(k), float(k) * float(k), float(tv), float(lv), float(rv))
        for k, tv, lv, rv in zip(grid, t, ln_t, r)
    ]


@dataclass(frozen=True)
class GridScan:
    """Row-major ln T matrix: values[i, j] at param_axis point i, kappa point j.

    param_kind names the varied parameter: "uniform_tau" (all wells share
    tau) or "single_well_tau_prime" (one well varied, the rest fixed).
    """

    kappa_axis: tuple[float, float, int]
    param_axis: tuple[float, float, int]
    param_kind: str
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def kappa_grid(self) -> np.ndarray:
        lo, hi, count = self.kappa_axis
        return np.linspace(lo, hi, count)

    def param_grid(self) -> np.ndarray:
        lo, hi, count = self.param_axis
        return np.linspace(lo, hi, count)


def _grid_from_rows(kappa_axis, param_axis, param_kind, potentials) -> GridScan:
    lo, hi, count = _check_axis(kappa_axis, "kappa_axis")
    rows = []
    for pot in potentials:
        rows.append([row.ln_t for row in spectrum(pot, (lo, hi, count))])
    values = np.array(rows, dtype=float)
    if not np.isfinite(values).all():
        raise InvalidSpec("scan produced non-finite ln T")
    return GridScan(
        kappa_axis=(lo, hi, count),
        param_axis=param_axis,
        param_kind=param_kind,
        values=values,
    )


def scan_uniform_tau(m: int, v0: float, delta: float, tau_axis, kappa_axis) -> GridScan:
    """ln T grid over the kappa-tau plane for uniform m-barrier trains.

    Each row rebuilds the train with every well at that row's tau and runs
    the standalone spectrum path, so any row equals spectrum() bit for bit.
    """
    if m < 2:
        raise InvalidSpec("uniform-tau scan needs m >= 2 (at least one well)")
    t_lo, t_hi, t_count = _check_axis(tau_axis, "tau_axis")
    taus = np.linspace(t_lo, t_hi, t_count)
    pots = (build_mbp(MbpSpec(m, v0, delta, (float(t),) * (m - 1))) for t in taus)
    return _grid_from_rows(kappa_axis, (t_lo, t_hi, t_count), "uniform_tau", pots)


def scan_single_well(
    m: int,
    v0: float,
    delta: float,
    base_tau: float,
    varied_index: int,
    tau_prime_axis,
    kappa_axis,
) -> GridScan:
    """ln T grid where well varied_index (1-based) sweeps tau' and the rest stay at base_tau."""
    if m < 2:
        raise InvalidSpec("single-well scan needs m >= 2")
    if not (1 <= varied_index <= m - 1):
        raise InvalidSpec(f"varied_index must be in [1, {m - 1}], got {varied_index}")
    if not (np.isfinite(base_tau) and base_tau > 0):
        raise InvalidSpec("base_tau must be positive")
    p_lo, p_hi, p_count = _check_axis(tau_prime_axis, "tau_prime_axis")

    def pots():
        for tp in np.linspace(p_lo, p_hi, p_count):
            wells = [float(base_tau)] * (m - 1)
            wells[varied_index - 1] = float(tp)
            yield build_mbp(MbpSpec(m, v0, delta, tuple(wells)))

    return _grid_from_rows(
        kappa_axis, (p_lo, p_hi, p_count), "single_well_tau_prime", pots()
    )


def overlay_hyperbolas(kappa_axis, tau_axis, n_max: int) -> list[np.ndarray]:
    """Curves tau = n*pi/kappa for n = 1..n_max, clipped to the axes.

    Each entry is an (k, 2) array of (kappa, tau) points sampled at the
    kappa grid; entries may be empty where the curve leaves the tau window.
    """
    if n_max < 1:
        raise InvalidRange("n_max must be at least 1")
    k_lo, k_hi, k_count = _check_axis(kappa_axis, "kappa_axis")
    t_lo, t_hi, _ = _check_axis(tau_axis, "tau_axis")
    kappas = np.linspace(k_lo, k_hi, k_count)
    out = []
    for n in range(1, n_max + 1):
        taus = n * np.pi / kappas
        keep = (taus >= t_lo) & (taus <= t_hi)
        out.append(np.column_stack([kappas[keep], taus[keep]]))
    return out


# ---- emission ---------------------------------------------------------------

def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _write_text(path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _spectrum_csv(rows) -> str:
    lines = [SPECTRUM_HEADER]
    for row in rows:
        lines.append(
            ",".join(_fmt(v) for v in (row.kappa, row.energy, row.t, row.ln_t, row.r))
        )
    return "\n".join(lines) + "\n"


def _grid_csv(scan: GridScan) -> str:
    lines = [GRID_HEADER]
    kappas = scan.kappa_grid()
    params = scan.param_grid()
    for i, p in enumerate(params):
        for j, k in enumerate(kappas):
            lines.append(f"{_fmt(k)},{_fmt(p)},{_fmt(scan.values[i, j])}")
    return "\n".join(lines) + "\n"


def _grid_pgm(scan: GridScan, path) -> None:
    values = scan.values
    mn = float(values.min())
    if mn >= 0.0:
        gray = np.full(values.shape, 255, dtype=np.uint8)
    else:
        gray = np.rint(255.0 * (values - mn) / (0.0 - mn))
        gray = np.clip(gray, 0, 255).astype(np.uint8)
    h, w = gray.shape
    try:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            fh.write(gray.tobytes())
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    k_lo, k_hi, k_count = scan.kappa_axis
    p_lo, p_hi, p_count = scan.param_axis
    sidecar = "\n".join(
        [
            "binary portable graymap sidecar",
            f"columns: kappa from {_fmt(k_lo)} to {_fmt(k_hi)}, {k_count} points",
            f"rows: {scan.param_kind} from {_fmt(p_lo)} to {_fmt(p_hi)}, {p_count} points",
            "row 0 of the raster is the lowest parameter value",
            f"gray = round(255 * (lnT - min) / (0 - min)) with min lnT = {_fmt(mn)}",
            "gray 0 = min lnT, gray 255 = lnT 0",
        ]
    ) + "\n"
    _write_text(str(path) + ".txt", sidecar)


def emit(data, format: str, path) -> None:
    """Write a spectrum or grid scan to disk.

    format "csv": spectra use the header kappa,energy,T,lnT,R; grids the
    long form kappa,param,lnT.  format "raster": grids only, written as a
    binary PGM mapping [min lnT, 0] linearly onto [0, 255] plus a sidecar
    text file (path + ".txt") recording axes and the mapping.
    """
    if isinstance(data, GridScan):
        if data.values.size == 0:
            raise EmptyData("grid scan has no values")
        if format == "csv":
            _write_text(path, _grid_csv(data))
        elif format == "raster":
            _grid_pgm(data, path)
        else:
            raise IoError(f"unknown format {format!r}; use 'csv' or 'raster'")
        return
    rows = list(data)
    if not rows:
        raise EmptyData("spectrum has no rows")
    if format == "csv":
        _write_text(path, _spectrum_csv(rows))
    elif format == "raster":
        raise IoError("raster output needs a grid scan, not a spectrum")
    else:
        raise IoError(f"unknown format {format!r}; use 'csv' or 'raster'")


def read_spectrum_csv(path) -> list[SpectrumRow]:
    """Parse a spectrum CSV written by emit; values round-trip exactly."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0] != SPECTRUM_HEADER:
        raise IoError(f"{path}: missing header {SPECTRUM_HEADER!r}")
    rows = []
    for ln in lines[1:]:
        if not ln:
            continue
        parts = ln.split(",")
        if len(parts) != 5:
            raise IoError(f"{path}: bad row {ln!r}")
        k, e, t, lt, r = (float(p) for p in parts)
        rows.append(SpectrumRow(k, e, t, lt, r))
    if not rows:
        raise EmptyData(f"{path}: no data rows")
    return rows
