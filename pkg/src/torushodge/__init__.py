"""Harmonic form dimensions on torus bundles over the circle.

The library decomposes functions on a mapping torus of T^n into Fourier
modes indexed by lattice orbits of the monodromy, reduces constant
coefficient harmonicity systems to per-mode ODEs or recurrences, and
assembles the resulting harmonic (p,q)-form dimension counts.
"""

from .lattice_orbits import TorusBundle, Orbit, orbit_of, orbit_partition
from .jordan_structure import (
    JordanData,
    jordan_decompose,
    root_of_unity_order,
    matrix_power_real,
    is_finite_via_eigen,
    theta_of,
)
from .frame_algebra import Form, FrameSpec, MetricSpec

__all__ = [
    "TorusBundle",
    "Orbit",
    "orbit_of",
    "orbit_partition",
    "JordanData",
    "jordan_decompose",
    "root_of_unity_order",
    "matrix_power_real",
    "is_finite_via_eigen",
    "theta_of",
    "Form",
    "FrameSpec",
    "MetricSpec",
]

__version__ = "0.1.0"
