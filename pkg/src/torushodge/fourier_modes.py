"""Numerical Fourier analysis on torus bundles over the circle.

A function on the mapping torus satisfies f(t, x) = f(t+1, A x); expanding
in fibre Fourier modes gives one coefficient function F_y(t) per mode
y in Z^n, with the equivariance F_{A^T y}(t) = F_y(t+1).  Over a finite
orbit of length N the coefficient is N-periodic in t and expands further
into discrete coefficients G_{t0,y}.  This module realises the
projections by quadrature, reconstructs functions from their modes, and
exposes the symbolic rules for how the special frame fields act on mode
coefficients.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import sympy as sp

from .jordan_structure import chain_vector_exprs, matrix_power_real

__all__ = [
    "SampledFunction",
    "ModeCoefficient",
    "project_F",
    "project_G",
    "reconstruct",
    "op_action_F",
    "op_action_G",
    "FrameOpRule",
    "FrameShiftRule",
    "orbit_mode_function",
    "random_orbit_function",
    "apply_frame_field",
]

DEFAULT_RES = 64
PERIODICITY_TOL = 1e-8
TWO_PI_I = 2j * np.pi


@dataclass
class SampledFunction:
    """Complex samples of f on [0, N) x [0,1)^n (uniform grids).

    ``data`` has shape (periods * res_t, res_x, ..., res_x) with n
    spatial axes; t runs over ``periods`` copies of the base circle so
    finite-orbit coefficients can be extracted from a single array.
    """

    bundle: object
    periods: int
    res_t: int
    res_x: int
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        expected = (self.periods * self.res_t,) + (self.res_x,) * self.bundle.n
        if self.data.shape != expected:
            raise ValueError(f"sample array has shape {self.data.shape}, expected {expected}")

    @property
    def t_grid(self):
        return np.arange(self.periods * self.res_t) / self.res_t

    @classmethod
    def from_callable(cls, bundle, func, periods=1, res_t=DEFAULT_RES, res_x=DEFAULT_RES):
        """Sample func(t, x) with x an n-vector; vectorized over the grid."""
        t = np.arange(periods * res_t) / res_t
        axes = [np.arange(res_x) / res_x for _ in range(bundle.n)]
        X = np.meshgrid(*axes, indexing="ij")
        data = np.empty((len(t),) + X[0].shape, dtype=complex)
        for i, tv in enumerate(t):
            data[i] = func(tv, X)
        return cls(bundle=bundle, periods=periods, res_t=res_t, res_x=res_x, data=data)

    def _spatial_permutation(self, M):
        """Index map realising x -> M x mod 1 on the spatial grid."""
        n = self.bundle.n
        idx = np.indices((self.res_x,) * n)
        out = []
        for i in range(n):
            acc = np.zeros_like(idx[0])
            for j in range(n):
                acc = acc + int(M[i][j]) * idx[j]
            out.append(np.mod(acc, self.res_x))
        return tuple(out)

    def periodicity_residual(self):
        """Max |f(t, x) - f(t+1, A x)| over sample pairs inside the window."""
        if self.periods < 2:
            return 0.0
        perm = self._spatial_permutation(self.bundle.A)
        upto = (self.periods - 1) * self.res_t
        shifted = self.data[self.res_t :][(slice(None),) + perm]
        return float(np.max(np.abs(self.data[:upto] - shifted)))

    def check_periodicity(self, tol=PERIODICITY_TOL):
        res = self.periodicity_residual()
        if res > tol:
            raise ValueError(f"periodicity residual {res:.3e} exceeds {tol:.1e}")
        return res

    # -- serialization ----------------------------------------------------

    def save_npz(self, path):
        np.savez(
            path,
            data=self.data,
            meta=np.array([self.bundle.n, self.periods, self.res_t, self.res_x]),
            monodromy=np.array(self.bundle.A, dtype=np.int64),
        )

    @classmethod
    def load_npz(cls, path):
        from .lattice_orbits import TorusBundle

        z = np.load(path)
        n, periods, res_t, res_x = (int(v) for v in z["meta"])
        bundle = TorusBundle(n, z["monodromy"].tolist())
        return cls(bundle=bundle, periods=periods, res_t=res_t, res_x=res_x, data=z["data"])

    def save_csv(self, path):
        """Dense CSV: structured-text header, then one re,im pair per line."""
        flat = self.data.reshape(-1)
        rows = ",".join(str(x) for row in self.bundle.A for x in row)
        with open(path, "w") as fh:
            fh.write("# torushodge SampledFunction v1\n")
            fh.write(f"# n={self.bundle.n} periods={self.periods} res_t={self.res_t} res_x={self.res_x}\n")
            fh.write(f"# monodromy={rows}\n")
            for z in flat:
                fh.write(f"{float(z.real)!r},{float(z.imag)!r}\n")

    @classmethod
    def load_csv(cls, path):
        from .lattice_orbits import TorusBundle

        with open(path) as fh:
            header = [fh.readline() for _ in range(3)]
            fields = dict(kv.split("=") for kv in header[1][1:].split())
            n = int(fields["n"])
            ent = [int(v) for v in header[2].split("=", 1)[1].split(",")]
            A = [ent[i * n : (i + 1) * n] for i in range(n)]
            vals = np.array(
                [complex(float(a), float(b)) for a, b in (ln.split(",") for ln in fh if ln.strip())]
            )
        periods, res_t, res_x = int(fields["periods"]), int(fields["res_t"]), int(fields["res_x"])
        data = vals.reshape((periods * res_t,) + (res_x,) * n)
        return cls(bundle=TorusBundle(n, A), periods=periods, res_t=res_t, res_x=res_x, data=data)


@dataclass
class ModeCoefficient:
    """F_y(f): the mode-y Fourier coefficient as a sampled function of t."""

    y: tuple
    t: np.ndarray
    values: np.ndarray


def project_F(f, y):
    """F_y(f)(t) = integral over [0,1)^n of f(t,x) e^{-2 pi i y.x} dx.

    On the uniform periodic grid the trapezoidal rule is the plain mean,
    and it is exact for trigonometric polynomials below the Nyquist bound
    res_x >= 2 max|y_i| + 2.
    """
    y = tuple(int(v) for v in y)
    if y and 2 * max(abs(v) for v in y) + 2 > f.res_x:
        warnings.warn(f"mode {y} may alias at spatial resolution {f.res_x}")
    n = f.bundle.n
    axes = [np.arange(f.res_x) / f.res_x for _ in range(n)]
    X = np.meshgrid(*axes, indexing="ij")
    phase = np.exp(-TWO_PI_I * sum(yv * Xv for yv, Xv in zip(y, X)))
    vals = (f.data * phase).mean(axis=tuple(range(1, n + 1)))
    return ModeCoefficient(y=y, t=f.t_grid, values=vals)


def project_G(Ff, t0, N):
    """G_{t0,y}(f) = (1/N) integral over [0, N) of F_y(f)(t) e^{-2 pi i t0 t / N} dt.

    Requires Ff sampled over the full period [0, N); exact for
    trigonometric polynomials in t below Nyquist.
    """
    t = np.asarray(Ff.t)
    if abs(t[-1] + (t[1] - t[0]) - N) > 1e-9:
        raise ValueError(f"coefficient must be sampled over exactly [0, {N})")
    return complex((Ff.values * np.exp(-TWO_PI_I * t0 * t / N)).mean())


def reconstruct(modes, bundle, periods=1, res_t=DEFAULT_RES, res_x=DEFAULT_RES):
    """Partial sum f(t,x) = sum_y F_y(t) e^{2 pi i y.x} over the given modes."""
    n = bundle.n
    axes = [np.arange(res_x) / res_x for _ in range(n)]
    X = np.meshgrid(*axes, indexing="ij")
    data = np.zeros((periods * res_t,) + (res_x,) * n, dtype=complex)
    for mode in modes:
        vals = np.asarray(mode.values)
        if len(vals) != periods * res_t:
            raise ValueError("mode coefficient grid does not match target grid")
        phase = np.exp(TWO_PI_I * sum(yv * Xv for yv, Xv in zip(mode.y, X)))
        data += vals.reshape((-1,) + (1,) * n) * phase
    return SampledFunction(bundle=bundle, periods=periods, res_t=res_t, res_x=res_x, data=data)


# ---------------------------------------------------------------------------
# symbolic action of the frame fields on mode coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrameOpRule:
    """Action on F_y: either d/dt or multiplication by a function of t."""

    kind: str  # "ddt" or "mult"
    multiplier: object = None  # sympy expression in t when kind == "mult"


@dataclass(frozen=True)
class FrameShiftRule:
    """Action on G_{t0,y}: multiply by m(t0) and shift t0 by delta (or zero map)."""

    multiplier: object  # sympy expression in the index symbol; 0 for the zero map
    shift: int = 0

    @property
    def is_zero(self):
        return self.multiplier == 0


def op_action_F(op, jordan, y, t=None):
    """Rule for a frame field acting on the infinite-orbit coefficient F_y.

    ``op`` is "eps0" or a chain index pair (i, j).  eps_0 differentiates
    in t; eps_{i,j} multiplies by 2 pi i (A^t v_{i,j} . y).
    """
    if op == "eps0":
        return FrameOpRule(kind="ddt")
    if t is None:
        t = sp.Symbol("t", real=True)
    exprs = chain_vector_exprs(jordan, tuple(int(v) for v in y), t)
    if op not in exprs:
        raise KeyError(f"unknown frame field {op}")
    return FrameOpRule(kind="mult", multiplier=sp.expand(2 * sp.pi * sp.I * exprs[op]))


def op_action_G(op, jordan, y, N, t0=None):
    """Rule for a frame field acting on the finite-orbit coefficient G_{t0,y}.

    eps_0 multiplies by 2 pi i t0/N.  The top vector of a root-of-unity
    chain multiplies by 2 pi i (v . y) and shifts t0 -> t0 - N theta (its
    frame factor e^{2 pi i theta t} raises the source frequency); every
    other chain vector annihilates the coefficient.
    """
    if t0 is None:
        t0 = sp.Symbol("t0", integer=True)
    if op == "eps0":
        return FrameShiftRule(multiplier=2 * sp.pi * sp.I * t0 / N, shift=0)
    i, j = op
    chain = jordan.chains[i]
    unity = chain.unity_order is not None and N % chain.unity_order == 0
    if not unity or j != chain.length:
        return FrameShiftRule(multiplier=sp.S.Zero)
    yv = sp.Matrix([sp.Integer(v) for v in y])
    dot = sp.simplify((chain.vectors[j - 1].T * yv)[0, 0])
    shift = -chain.theta * N
    assert shift == int(shift)
    return FrameShiftRule(multiplier=2 * sp.pi * sp.I * dot, shift=int(shift))


# ---------------------------------------------------------------------------
# exactly-periodic test functions and numeric frame-field application
# ---------------------------------------------------------------------------


def orbit_mode_function(bundle, orbit, j):
    """Exactly periodic basis function for a finite orbit and t-index j.

    f(t,x) = sum over xi of e^{2 pi i j (t+xi)/N} e^{2 pi i ((A^T)^xi y).x}
    satisfies f(t, x) = f(t+1, A x) identically; its only nonzero mode
    coefficients are F_{y_xi}(t) = e^{2 pi i j (t+xi)/N}.
    """
    if not orbit.is_finite:
        raise ValueError("need a finite orbit")
    N = len(orbit.elements)
    ys = list(orbit.elements)

    def func(t, X):
        acc = 0
        for xi, y in enumerate(ys):
            spatial = np.exp(TWO_PI_I * sum(yv * Xv for yv, Xv in zip(y, X)))
            acc = acc + np.exp(TWO_PI_I * j * (t + xi) / N) * spatial
        return acc

    return func


def random_orbit_function(bundle, orbits, rng, n_terms=6, j_max=3):
    """Random smooth function on M: a combination of orbit basis functions.

    Returns (func, terms) where terms lists (coeff, orbit, j) so tests can
    compute every projection in closed form.
    """
    finite = [o for o in orbits if o.is_finite]
    if not finite:
        raise ValueError("need at least one finite orbit")
    terms = []
    for _ in range(n_terms):
        orbit = finite[rng.integers(len(finite))]
        j = int(rng.integers(-j_max, j_max + 1))
        coeff = complex(rng.normal(), rng.normal())
        terms.append((coeff, orbit, j))

    def func(t, X):
        acc = 0
        for coeff, orbit, j in terms:
            acc = acc + coeff * orbit_mode_function(bundle, orbit, j)(t, X)
        return acc

    return func, terms


def apply_frame_field(f, jordan, op):
    """Apply eps_0 or eps_{i,j} to a SampledFunction numerically.

    eps_0 = d/dt via spectral differentiation in t (valid for data that is
    periodic over the sampled window, as the orbit test functions are);
    eps_{i,j} = (A^t v_{i,j}) . grad_x via FFT derivatives per axis with
    the t-dependent coefficient from the real matrix power.  Independent
    of the symbolic rules, so it can validate them.
    """
    n = f.bundle.n
    L = f.periods * f.res_t
    if op == "eps0":
        freq = np.fft.fftfreq(L, d=1.0 / f.res_t)
        spec = np.fft.fft(f.data, axis=0)
        data = np.fft.ifft(spec * (TWO_PI_I * freq).reshape((-1,) + (1,) * n), axis=0)
        return SampledFunction(f.bundle, f.periods, f.res_t, f.res_x, data)
    i, j = op
    v = np.array(
        [complex(x) for x in np.array(jordan.chains[i].vectors[j - 1].evalf(), dtype=complex).ravel()]
    )
    freq = np.fft.fftfreq(f.res_x, d=1.0 / f.res_x)
    derivs = []
    for axis in range(n):
        shape = [1] * (n + 1)
        shape[axis + 1] = f.res_x
        spec = np.fft.fft(f.data, axis=axis + 1)
        derivs.append(np.fft.ifft(spec * (TWO_PI_I * freq).reshape(shape), axis=axis + 1))
    data = np.zeros_like(f.data)
    for idx, tv in enumerate(f.t_grid):
        coeff = matrix_power_real(jordan, float(tv)) @ v
        for axis in range(n):
            data[idx] += coeff[axis] * derivs[axis][idx]
    return SampledFunction(f.bundle, f.periods, f.res_t, f.res_x, data)
