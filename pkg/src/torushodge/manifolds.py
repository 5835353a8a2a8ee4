"""Built-in manifold data: Kodaira-Thurston and the cyclic mapping torus.

Collects, for each worked example, the torus bundle, the coframe structure
constants, the metrics, and the harmonicity PDE systems expressed in the
special frame.  Also loads the same data from JSON configs for the CLI.

Convention: TorusBundle.A is the matrix of the identification
(t, x) ~ (t+1, A x), so Fourier modes evolve by A^T.  For the
Kodaira-Thurston manifold this is [[1,0,0],[0,1,0],[0,1,1]] (the mode
action (l,m,n) -> (l, m+n, n)).
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np
import sympy as sp

from .frame_algebra import Form, FrameSpec, MetricSpec
from .lattice_orbits import TorusBundle
from .mode_systems import PdeSystem, VectorField

__all__ = [
    "kt4_bundle",
    "kt4_frame",
    "kt4_metric_w",
    "kt4_metric_rho",
    "kt4_alpha_w",
    "kt4_lee_form",
    "kt4_pde_21",
    "kt4_pde_12",
    "kt4_pde_21_full",
    "kt4_pde_21_system",
    "cyclic3_bundle",
    "cyclic3_frame",
    "cyclic3_metric",
    "cyclic3_pde_01",
    "ManifoldConfig",
    "load_config",
]

PI = float(np.pi)


# ---------------------------------------------------------------------------
# Kodaira-Thurston manifold
# ---------------------------------------------------------------------------


def kt4_bundle():
    """KT^4 as a T^3 bundle: fibre coordinates (x, y, z), z shifts by t*y."""
    return TorusBundle(3, [[1, 0, 0], [0, 1, 0], [0, 1, 1]])


def kt4_frame(b):
    """Coframe phi^1, phi^2 with d phi^2 = (b/4)(phi^12 + phi^{1,-2} + phi^{2,-1} - phi^{-1,-2})."""
    m = 2
    c = b / 4.0
    dphi2 = (
        Form.monomial(m, (1, 2), c)
        + Form.monomial(m, (1, -2), c)
        + Form.monomial(m, (2, -1), c)
        + Form.monomial(m, (-1, -2), -c)
    )
    return FrameSpec(m=m, dphi=(Form.zero(m), dphi2))


def kt4_metric_w(w):
    """Fundamental form i((1+|w|^2)phi^{1,-1} - w phi^{1,-2} - conj(w) phi^{2,-1} + phi^{2,-2}).

    The unitary coframe is psi^1 = phi^1, psi^2 = phi^2 - w phi^1.
    """
    return MetricSpec.from_unitary_coframe(2, [[1, 0], [-w, 1]])


def kt4_metric_rho(rho):
    """Fundamental form i(phi^{1,-1} + rho phi^{2,-2}); psi^2 = sqrt(rho) phi^2."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return MetricSpec.from_unitary_coframe(2, [[1, 0], [0, np.sqrt(rho)]])


def kt4_alpha_w(w, b):
    """b(-w^2 phi^1 - conj(w)^2 conj(phi^1) + w phi^2 + conj(w) conj(phi^2)).

    Twice the Lee form of omega_w when w is real; see kt4_lee_form for
    the 1-form that satisfies d omega_w = alpha wedge omega_w exactly.
    """
    m = 2
    return (
        Form.monomial(m, (1,), -b * w**2)
        + Form.monomial(m, (-1,), -b * np.conj(w) ** 2)
        + Form.monomial(m, (2,), b * w)
        + Form.monomial(m, (-2,), b * np.conj(w))
    )


def kt4_lee_form(w, b):
    """The Lee form of omega_w: d omega_w = alpha wedge omega_w for all w.

    Solving the wedge equation against the structure equations gives
    (b/4)(w + conj(w)) (-w phi^1 - conj(w) conj(phi^1) + phi^2 + conj(phi^2)),
    which for real w is half of kt4_alpha_w.
    """
    m = 2
    c = b * (w + np.conj(w)) / 4
    return (
        Form.monomial(m, (1,), -c * w)
        + Form.monomial(m, (-1,), -c * np.conj(w))
        + Form.monomial(m, (2,), c)
        + Form.monomial(m, (-2,), c)
    )


def _kt4_vector_fields(a, b):
    """V1 = (1/2)(d/dx - i d/dt), V2 = (1/2)((d/dy + t d/dz) - ((a-i)/b) d/dz).

    Given as (c_t, w at t=0); w resolves into the Jordan chains of the
    bundle so the t-dependence is carried by the frame.
    """
    a, b = sp.nsimplify(a), sp.nsimplify(b)
    V1 = VectorField(c_t=-sp.I / 2, w=(sp.Rational(1, 2), 0, 0))
    V2 = VectorField(c_t=0, w=(0, sp.Rational(1, 2), -(a - sp.I) / (2 * b)))
    return {"V1": V1, "V2": V2, "V1b": V1.conjugate(), "V2b": V2.conjugate()}


def kt4_pde_21(rho, a, b):
    """Rows two and three of the (2,1) Bott-Chern harmonicity system.

    Unknowns (f, g) are the coefficients of phi^{12,-1} and phi^{12,-2}.
    """
    rho, a, b = sp.nsimplify(rho), sp.nsimplify(a), sp.nsimplify(b)
    terms = (
        # rho V1 V2b(f) + V2 V2b(g) + (b/4) rho V2(f) = 0
        (0, ("V1", "V2b"), 0, rho),
        (0, ("V2", "V2b"), 1, 1),
        (0, ("V2",), 0, b * rho / 4),
        # V1b(g) - V2b(f) = 0
        (1, ("V1b",), 1, 1),
        (1, ("V2b",), 0, -1),
    )
    return PdeSystem(
        r=2, vector_fields=_kt4_vector_fields(a, b), terms=terms, label="kt4 (2,1) BC"
    )


def kt4_pde_21_full(rho, a, b):
    """The remaining (second order) row of the (2,1) system, for the
    no-new-information check against the reduced ODE.

    The constant term is -(b^2/16) rho f: that is the unique value making
    the row a consequence of the first-order ODE system, as the check in
    the tests certifies symbolically.
    """
    rho, a, b = sp.nsimplify(rho), sp.nsimplify(a), sp.nsimplify(b)
    terms = (
        (0, ("V1", "V1b"), 0, rho),
        (0, ("V2", "V1b"), 1, 1),
        (0, ("V1",), 0, -b * rho / 4),
        (0, ("V1b",), 0, b * rho / 4),
        (0, ("V2b",), 1, -b / 4),
        (0, (), 0, -(b**2) * rho / 16),
    )
    return PdeSystem(
        r=2, vector_fields=_kt4_vector_fields(a, b), terms=terms, label="kt4 (2,1) row1"
    )


def kt4_pde_21_system(rho, a, b):
    """All three rows of the (2,1) system (second-order row included).

    The first-order pair determines the generic mode reduction, but at
    degenerate modes (l = m = n = 0) its leading matrix drops rank and the
    second-order row carries the surviving constraint on f, so kernel
    scans over finite orbits must use the full system.
    """
    first = kt4_pde_21_full(rho, a, b)
    rest = kt4_pde_21(rho, a, b)
    terms = tuple(first.terms) + tuple((eq + 1, w, u, c) for eq, w, u, c in rest.terms)
    return PdeSystem(
        r=2, vector_fields=_kt4_vector_fields(a, b), terms=terms, label="kt4 (2,1) BC full"
    )


def kt4_pde_12(rho, a, b):
    """Rows two and three of the (1,2) system; unknowns are the
    coefficients of phi^{1,-1,-2} and phi^{2,-1,-2}."""
    rho, a, b = sp.nsimplify(rho), sp.nsimplify(a), sp.nsimplify(b)
    terms = (
        # rho V2 V1b(f) + V2 V2b(g) + (b/4) rho V2(f) = 0
        (0, ("V2", "V1b"), 0, rho),
        (0, ("V2", "V2b"), 1, 1),
        (0, ("V2",), 0, b * rho / 4),
        # V1(g) - V2(f) = 0
        (1, ("V1",), 1, 1),
        (1, ("V2",), 0, -1),
    )
    return PdeSystem(
        r=2, vector_fields=_kt4_vector_fields(a, b), terms=terms, label="kt4 (1,2) BC"
    )


# ---------------------------------------------------------------------------
# cyclic mapping torus (coordinate 3-cycle monodromy)
# ---------------------------------------------------------------------------


def cyclic3_bundle():
    """T^3 bundle whose monodromy cyclically permutes the fibre coordinates."""
    return TorusBundle(3, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])


def cyclic3_frame():
    """Coframe with d phi^1 = (pi/6)(phi^12 - phi^{1,-2} - phi^{2,-1} - phi^{-1,-2}),
    d phi^2 = (pi/3) phi^{1,-1}."""
    m = 2
    c = PI / 6.0
    dphi1 = (
        Form.monomial(m, (1, 2), c)
        + Form.monomial(m, (1, -2), -c)
        + Form.monomial(m, (2, -1), -c)
        + Form.monomial(m, (-1, -2), -c)
    )
    dphi2 = Form.monomial(m, (1, -1), PI / 3.0)
    return FrameSpec(m=m, dphi=(dphi1, dphi2))


def cyclic3_metric():
    """The coframe itself is unitary."""
    return MetricSpec.from_unitary_coframe(2, np.eye(2))


def _cyclic3_vector_fields():
    """V1 = (1/2)(eps_0 - (i/2)(eps_2 + eps_3)), V2 = (1/2)(eps_1 + (1/2)(eps_2 - eps_3)).

    eps_1, eps_2, eps_3 are the eigenvector frame fields; at t = 0 they
    reduce to v . grad with v the eigenvectors below.
    """
    w3 = sp.exp(2 * sp.pi * sp.I / 3)
    v1 = sp.Matrix([1, 1, 1])
    v2 = sp.Matrix([w3, sp.conjugate(w3), 1])
    v3 = sp.Matrix([sp.conjugate(w3), w3, 1])
    w_V1 = -sp.I / 4 * (v2 + v3)
    w_V2 = v1 / 2 + (v2 - v3) / 4
    V1 = VectorField(c_t=sp.Rational(1, 2), w=tuple(w_V1))
    V2 = VectorField(c_t=0, w=tuple(w_V2))
    return {"V1": V1, "V2": V2, "V1b": V1.conjugate(), "V2b": V2.conjugate()}


def cyclic3_pde_01():
    """The dbar-harmonicity system for a (0,1)-form f conj(phi^1) + g conj(phi^2):

    -(V2b - pi/6) f + V1b g = 0 and V1 f + V2 g = 0.
    """
    terms = (
        (0, ("V2b",), 0, -1),
        (0, (), 0, sp.pi / 6),
        (0, ("V1b",), 1, 1),
        (1, ("V1",), 0, 1),
        (1, ("V2",), 1, 1),
    )
    return PdeSystem(
        r=2, vector_fields=_cyclic3_vector_fields(), terms=terms, label="cyclic3 (0,1) dbar"
    )


# ---------------------------------------------------------------------------
# JSON configs
# ---------------------------------------------------------------------------


class ManifoldConfig:
    """Manifold description parsed from JSON.

    Rational entries may be given as strings like "p/q" or "pi/3"; they
    are evaluated with sympy so exactness survives the parse boundary.
    """

    def __init__(self, data):
        self.name = data["name"]
        self.n = int(data["n"])
        self.monodromy = [[int(x) for x in row] for row in data["monodromy"]]
        self.complex_dim = int(data.get("complex_dim", 2))
        self.params = {k: sp.nsimplify(v) for k, v in data.get("params", {}).items()}
        self.structure = data.get("structure", {})
        self.bundle = TorusBundle(self.n, self.monodromy)
        self.frame = self._build_frame()
        if self.frame is not None and not self.frame.check_d_squared():
            raise ValueError(f"config {self.name}: structure constants violate d^2 = 0")

    def _build_frame(self):
        if not self.structure:
            return None
        m = self.complex_dim
        dphi = []
        subs = {sp.Symbol(k): v for k, v in self.params.items()}
        for idx in range(1, m + 1):
            entries = self.structure.get(f"dphi{idx}", [])
            form = Form.zero(m)
            for coeff_str, word in entries:
                coeff = complex(sp.sympify(coeff_str).subs(subs).evalf())
                form = form + Form.monomial(m, tuple(word), coeff)
            dphi.append(form)
        return FrameSpec(m=m, dphi=tuple(dphi))

    def param(self, key, default=None):
        if key in self.params:
            return float(self.params[key])
        return default

    def metric(self):
        if self.name == "kt4":
            return kt4_metric_rho(self.param("rho", 1.0))
        return MetricSpec.from_unitary_coframe(self.complex_dim, np.eye(self.complex_dim))


def load_config(name_or_path):
    """Load a manifold config by built-in name ("kt4", "cyclic3") or path."""
    builtin = {"kt4": "kt4.json", "cyclic3": "cyclic3.json"}
    if name_or_path in builtin:
        text = (
            resources.files("torushodge").joinpath("data", builtin[name_or_path]).read_text()
        )
    else:
        with open(name_or_path) as fh:
            text = fh.read()
    return ManifoldConfig(json.loads(text))
