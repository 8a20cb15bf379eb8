"""Exact transmission through 1D piecewise-constant potentials.

The solver composes per-interface transfer factors in the Pauli basis with
log-scale renormalization, so arbitrarily deep tunneling and chains of
10^5 steps stay exact to double precision.  On top sit resonance counting
and location, well-permutation audits, parameter scans, and a CLI.
"""

from . import cli, errors, pauli, potential, resonance, scan, scattering
from .errors import StairwellError
from .potential import (
    MbpSpec,
    PiecewiseConstantPotential,
    build_mbp,
    discretize,
    dump_potential,
    load_potential,
    reverse,
    well_widths_of,
)
from .resonance import (
    AliasReport,
    Peak,
    ResonanceCatalog,
    ResonanceEstimate,
    alias_audit,
    band_count,
    estimates,
    find_peaks,
    peak_count,
    spike_count,
    spike_groups,
)
from .scan import (
    GridScan,
    SpectrumRow,
    emit,
    overlay_hyperbolas,
    read_spectrum_csv,
    scan_single_well,
    scan_uniform_tau,
    spectrum,
)
from .scattering import (
    ScatteringSolution,
    solve,
    transfer_matrix,
    transmission_curve,
    wavefunction,
)

__version__ = "0.1.0"

__all__ = [
    "AliasReport",
    "GridScan",
    "MbpSpec",
    "Peak",
    "PiecewiseConstantPotential",
    "ResonanceCatalog",
    "ResonanceEstimate",
    "ScatteringSolution",
    "SpectrumRow",
    "StairwellError",
    "alias_audit",
    "band_count",
    "build_mbp",
    "cli",
    "discretize",
    "dump_potential",
    "emit",
    "errors",
    "estimates",
    "find_peaks",
    "load_potential",
    "overlay_hyperbolas",
    "pauli",
    "peak_count",
    "potential",
    "read_spectrum_csv",
    "resonance",
    "reverse",
    "scan",
    "scan_single_well",
    "scan_uniform_tau",
    "scattering",
    "solve",
    "spectrum",
    "spike_count",
    "spike_groups",
    "transfer_matrix",
    "transmission_curve",
    "wavefunction",
    "well_widths_of",
]
