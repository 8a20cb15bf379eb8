"""Piecewise-constant potential profiles and their builders.

A profile with N jumps is stored as N strictly increasing breakpoints and
N+1 region levels; region j occupies (x_{j-1}, x_j) with the outermost
regions extending to +-infinity.  Multi-barrier profiles (m identical
barriers separated by wells) come from build_mbp; arbitrary smooth barriers
can be approximated with discretize.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptySamples,
    InvalidSpec,
    LengthMismatch,
    NonIncreasingBreakpoints,
    PotentialFormatError,
    UnsortedSamples,
)

__all__ = [
    "MbpSpec",
    "PiecewiseConstantPotential",
    "build_mbp",
    "discretize",
    "dump_potential",
    "load_potential",
    "reverse",
    "validate",
    "well_widths_of",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PiecewiseConstantPotential:
    """N breakpoints and N+1 levels; immutable after construction.

    Construction does not validate; call validate() (builders and the solver
    do) so that malformed instances can still be inspected and reported.
    """

    breakpoints: np.ndarray
    levels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", _readonly(np.atleast_1d(self.breakpoints)))
        object.__setattr__(self, "levels", _readonly(np.atleast_1d(self.levels)))

    @property
    def interface_count(self) -> int:
        return self.breakpoints.size

    @property
    def region_count(self) -> int:
        return self.levels.size

    def region_of(self, x) -> np.ndarray:
        """Region index for each point; points on a breakpoint use the left region."""
        return np.searchsorted(self.breakpoints, np.asarray(x, dtype=float), side="left")


def validate(potential: PiecewiseConstantPotential) -> None:
    """Raise unless breakpoints increase strictly and lengths/values are sane."""
    x = potential.breakpoints
    v = potential.levels
    if x.ndim != 1 or x.size < 1:
        raise NonIncreasingBreakpoints("need at least one breakpoint")
    if not np.isfinite(x).all():
        raise InvalidSpec("breakpoints must be finite")
    if not np.isfinite(v).all():
        raise InvalidSpec("levels must be finite")
    if x.size > 1 and not (np.diff(x) > 0).all():
        raise NonIncreasingBreakpoints("breakpoints must be strictly increasing")
    if v.size != x.size + 1:
        raise LengthMismatch(f"{v.size} levels for {x.size} breakpoints; need one more level than breakpoints")


@dataclass(frozen=True)
class MbpSpec:
    """m identical rectangular barriers with individually sized wells.

    barrier_count m >= 1 barriers of height barrier_height and width
    barrier_width, separated by m-1 wells at the lead level; well_widths
    lists them left to right.  origin places the left edge of the first
    barrier.
    """

    barrier_count: int
    barrier_height: float
    barrier_width: float
    well_widths: tuple[float, ...] = field(default=())
    origin: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "well_widths", tuple(float(w) for w in self.well_widths))


def _check_spec(spec: MbpSpec) -> None:
    if spec.barrier_count < 1:
        raise InvalidSpec("barrier_count must be >= 1")
    if not (np.isfinite(spec.barrier_width) and spec.barrier_width > 0):
        raise InvalidSpec("barrier_width must be positive")
    if not np.isfinite(spec.barrier_height) or spec.barrier_height == 0:
        raise InvalidSpec("barrier_height must be finite and nonzero")
    if len(spec.well_widths) != spec.barrier_count - 1:
        raise InvalidSpec(
            f"{len(spec.well_widths)} well widths for {spec.barrier_count} barriers; need barrier_count - 1"
        )
    for i, w in enumerate(spec.well_widths):
        if not (np.isfinite(w) and w > 0):
            raise InvalidSpec(f"well_widths[{i}] must be positive")
    if not np.isfinite(spec.origin):
        raise InvalidSpec("origin must be finite")


def build_mbp(spec: MbpSpec) -> PiecewiseConstantPotential:
    """Realize an MbpSpec as a potential with 2m breakpoints.

    Levels alternate lead (0) and barrier height.  For uniform well widths
    the breakpoints are evaluated from the closed-form alternating sequence
    (odd j at (j-1)/2*(delta+tau)+origin, even j at j/2*delta+(j/2-1)*tau
    +origin) so uniform profiles reproduce it bit-for-bit; mixed widths
    accumulate left to right.
    """
    _check_spec(spec)
    m = spec.barrier_count
    delta = spec.barrier_width
    theta = spec.origin
    wells = spec.well_widths
    uniform = len(set(wells)) <= 1
    if uniform:
        tau = wells[0] if wells else 0.0
        x = np.empty(2 * m)
        for j in range(1, 2 * m + 1):
            if j % 2:
                x[j - 1] = ((j - 1) // 2) * (delta + tau) + theta
            else:
                x[j - 1] = (j // 2) * delta + (j // 2 - 1) * tau + theta
    else:
        x = np.empty(2 * m)
        pos = theta
        for i in range(m):
            x[2 * i] = pos
            pos += delta
            x[2 * i + 1] = pos
            if i < m - 1:
                pos += wells[i]
    v = np.zeros(2 * m + 1)
    v[1::2] = spec.barrier_height
    pot = PiecewiseConstantPotential(x, v)
    validate(pot)
    return pot


def reverse(potential: PiecewiseConstantPotential) -> PiecewiseConstantPotential:
    """Mirror image about the midpoint of the breakpoint span.

    The outermost breakpoints are fixed points of the mirror and are copied
    bit-for-bit; interior points are reflected through x_first + x_last.
    """
    x = potential.breakpoints
    v = potential.levels
    s = x[0] + x[-1]
    rx = s - x[::-1]
    rx[0] = x[0]
    rx[-1] = x[-1]
    return PiecewiseConstantPotential(rx, v[::-1])


def discretize(samples, steps: int) -> PiecewiseConstantPotential:
    """Staircase approximation of a sampled potential.

    samples is an (k, 2) array of (x, V) rows with strictly increasing x.
    The sampled span is split into `steps` equal intervals; each takes the
    value of the linear interpolant at its midpoint.  Outside the span the
    level is 0, so the result is a localized barrier with steps+1 jumps.
    Equal neighboring stair levels are kept as-is (the solver treats the
    fictitious interface as an exact identity).
    """
    s = np.asarray(samples, dtype=float)
    if s.size == 0 or s.ndim != 2 or s.shape[0] < 2 or s.shape[1] != 2:
        raise EmptySamples("need at least two (x, V) samples")
    if not np.isfinite(s).all():
        raise UnsortedSamples("samples must be finite")
    sx, sv = s[:, 0], s[:, 1]
    if not (np.diff(sx) > 0).all():
        raise UnsortedSamples("sample x values must be strictly increasing")
    if not isinstance(steps, (int, np.integer)) or steps < 1:
        raise InvalidSpec("steps must be a positive integer")
    edges = np.linspace(sx[0], sx[-1], steps + 1)
    mid = (edges[:-1] + edges[1:]) / 2
    inner = np.interp(mid, sx, sv)
    levels = np.concatenate([[0.0], inner, [0.0]])
    pot = PiecewiseConstantPotential(edges, levels)
    validate(pot)
    return pot


def well_widths_of(potential: PiecewiseConstantPotential) -> tuple[float, ...]:
    """Widths of interior regions lying strictly below both neighbors.

    For barrier trains this recovers the well list; a profile with no local
    dips has no wells.
    """
    x = potential.breakpoints
    v = potential.levels
    out = []
    for r in range(1, v.size - 1):
        if v[r] < v[r - 1] and v[r] < v[r + 1]:
            out.append(float(x[r] - x[r - 1]))
    return tuple(out)


# ---- potential definition files -------------------------------------------

def _require_number(obj, name: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise PotentialFormatError(f"{name}: expected a number, got {type(obj).__name__}")
    if not np.isfinite(obj):
        raise PotentialFormatError(f"{name}: must be finite")
    return float(obj)


def _require_number_list(obj, name: str) -> list[float]:
    if not isinstance(obj, list):
        raise PotentialFormatError(f"{name}: expected a list")
    return [_require_number(item, f"{name}[{i}]") for i, item in enumerate(obj)]


def load_potential(source) -> PiecewiseConstantPotential:
    """Read a potential definition from a path, file object, or dict.

    Two schemas:
      {"kind": "explicit", "x": [...], "v": [...]}
      {"kind": "mbp", "v0": 40, "delta": 0.5, "wells": [5, 3, 2], "theta": 0}
    wells and theta are optional in the mbp form.  Schema violations raise
    PotentialFormatError naming the offending field.
    """
    if isinstance(source, dict):
        doc = source
    elif hasattr(source, "read"):
        doc = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if not isinstance(doc, dict):
        raise PotentialFormatError("top level: expected an object")
    kind = doc.get("kind")
    if kind == "explicit":
        allowed = {"kind", "x", "v"}
        for key in doc:
            if key not in allowed:
                raise PotentialFormatError(f"{key}: unknown field for kind 'explicit'")
        if "x" not in doc or "v" not in doc:
            raise PotentialFormatError("explicit form requires fields 'x' and 'v'")
        x = _require_number_list(doc["x"], "x")
        v = _require_number_list(doc["v"], "v")
        pot = PiecewiseConstantPotential(np.array(x), np.array(v))
        validate(pot)
        return pot
    if kind == "mbp":
        allowed = {"kind", "v0", "delta", "wells", "theta"}
        for key in doc:
            if key not in allowed:
                raise PotentialFormatError(f"{key}: unknown field for kind 'mbp'")
        for req in ("v0", "delta"):
            if req not in doc:
                raise PotentialFormatError(f"mbp form requires field '{req}'")
        wells = _require_number_list(doc.get("wells", []), "wells")
        spec = MbpSpec(
            barrier_count=len(wells) + 1,
            barrier_height=_require_number(doc["v0"], "v0"),
            barrier_width=_require_number(doc["delta"], "delta"),
            well_widths=tuple(wells),
            origin=_require_number(doc.get("theta", 0.0), "theta"),
        )
        return build_mbp(spec)
    raise PotentialFormatError("kind: expected 'explicit' or 'mbp'")


def mbp_spec_from_file(source) -> MbpSpec:
    """Read an mbp-form definition file back into its spec (for scans)."""
    if isinstance(source, dict):
        doc = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if not isinstance(doc, dict) or doc.get("kind") != "mbp":
        raise PotentialFormatError("kind: expected 'mbp'")
    load_potential(doc)  # full schema check
    wells = tuple(float(w) for w in doc.get("wells", []))
    return MbpSpec(
        barrier_count=len(wells) + 1,
        barrier_height=float(doc["v0"]),
        barrier_width=float(doc["delta"]),
        well_widths=wells,
        origin=float(doc.get("theta", 0.0)),
    )


def dump_potential(potential: PiecewiseConstantPotential, path) -> None:
    """Write the explicit-form definition file for a potential."""
    validate(potential)
    doc = {
        "kind": "explicit",
        "x": [float(b) for b in potential.breakpoints],
        "v": [float(l) for l in potential.levels],
    }
    if hasattr(path, "write"):
        json.dump(doc, path, indent=2)
        path.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
