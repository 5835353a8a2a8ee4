"""Constant-coefficient bigraded exterior algebra over a declared coframe.

Works over a (1,0)-coframe phi^1..phi^m with structure constants giving
each d(phi^a) as a constant 2-form.  Every worked formula we reproduce is
constant-coefficient in such a frame, so the whole algebra is finite
dimensional and can be checked to floating-point exactness.

Generators are encoded as integers: 0..m-1 for phi^1..phi^m and m..2m-1
for their conjugates.  A monomial is a strictly increasing tuple of
generator codes; coefficients are complex numbers with zeros pruned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Form",
    "FrameSpec",
    "MetricSpec",
    "wedge",
    "d",
    "bidegree_split",
    "hodge_star",
    "apply_J",
    "dc",
    "check_gauduchon",
    "harmonic_residuals",
    "verify_lee_form",
]

PRUNE_TOL = 1e-14


def _merge_monomials(a, b):
    """Concatenate two increasing monomials; returns (key, sign) or None."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    out = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            # b[j] hops over the remaining len(a)-i generators of a
            if (len(a) - i) % 2 == 1:
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), sign


def _sort_monomial(seq):
    """Sort a generator sequence into a canonical monomial with sign."""
    seq = list(seq)
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            if seq[j - 1] == seq[j]:
                return None
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    if len(set(seq)) != len(seq):
        return None
    return tuple(seq), sign


class Form:
    """A complex form over the coframe, graded by bidegree monomial."""

    __slots__ = ("m", "_c")

    def __init__(self, m, coeffs=None):
        self.m = m
        self._c = {}
        if coeffs:
            for key, val in coeffs.items():
                self._add(tuple(key), complex(val))

    def _add(self, key, val):
        cur = self._c.get(key, 0j) + val
        if abs(cur) < PRUNE_TOL:
            self._c.pop(key, None)
        else:
            self._c[key] = cur

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, m):
        return cls(m)

    @classmethod
    def scalar(cls, m, value):
        return cls(m, {(): value})

    @classmethod
    def generator(cls, m, index, conjugate=False):
        """phi^index (1-based); conjugate=True gives its conjugate."""
        if not 1 <= index <= m:
            raise ValueError("generator index out of range")
        code = index - 1 + (m if conjugate else 0)
        return cls(m, {(code,): 1.0})

    @classmethod
    def monomial(cls, m, word, coeff=1.0):
        """Monomial from signed 1-based indices: +a is phi^a, -a its conjugate."""
        codes = []
        for w in word:
            if w == 0 or abs(w) > m:
                raise ValueError("generator index out of range")
            codes.append(w - 1 if w > 0 else m + (-w) - 1)
        sorted_key = _sort_monomial(codes)
        if sorted_key is None:
            return cls(m)
        key, sign = sorted_key
        return cls(m, {key: sign * coeff})

    # -- inspection ---------------------------------------------------
    def coeffs(self):
        return dict(self._c)

    def bidegree_of(self, key):
        p = sum(1 for c in key if c < self.m)
        return (p, len(key) - p)

    def components(self):
        """Split into homogeneous (p,q) pieces: dict (p,q) -> Form."""
        out = {}
        for key, val in self._c.items():
            pq = self.bidegree_of(key)
            out.setdefault(pq, Form(self.m))._add(key, val)
        return out

    def component(self, p, q):
        return self.components().get((p, q), Form(self.m))

    def is_zero(self, tol=1e-12):
        return all(abs(v) < tol for v in self._c.values())

    def norm(self):
        return float(np.sqrt(sum(abs(v) ** 2 for v in self._c.values())))

    # -- algebra ------------------------------------------------------
    def __add__(self, other):
        out = Form(self.m, self._c)
        for key, val in other._c.items():
            out._add(key, val)
        return out

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __rmul__(self, scalar):
        out = Form(self.m)
        for key, val in self._c.items():
            out._add(key, scalar * val)
        return out

    def __mul__(self, scalar):
        return self.__rmul__(scalar)

    def wedge(self, other):
        out = Form(self.m)
        for ka, va in self._c.items():
            for kb, vb in other._c.items():
                merged = _merge_monomials(ka, kb)
                if merged is None:
                    continue
                key, sign = merged
                out._add(key, sign * va * vb)
        return out

    def conj(self):
        out = Form(self.m)
        for key, val in self._c.items():
            mapped = tuple((c + self.m) % (2 * self.m) for c in key)
            sorted_key = _sort_monomial(mapped)
            key2, sign = sorted_key
            out._add(key2, sign * np.conj(val))
        return out

    def __repr__(self):
        if not self._c:
            return "Form(0)"
        names = []
        for key in sorted(self._c):
            word = "".join(
                f"{c + 1}" if c < self.m else f"~{c - self.m + 1}" for c in key
            )
            names.append(f"({self._c[key]:.6g})phi^{word or '0'}")
        return "Form(" + " + ".join(names) + ")"


def wedge(a, b):
    return a.wedge(b)


@dataclass(frozen=True)
class FrameSpec:
    """Coframe phi^1..phi^m plus the structure 2-forms d(phi^a)."""

    m: int
    dphi: tuple  # Form for each holomorphic generator

    def __post_init__(self):
        if len(self.dphi) != self.m:
            raise ValueError("need one structure form per generator")

    def d_generator(self, code):
        """d of the generator with internal code (0..2m-1)."""
        if code < self.m:
            return self.dphi[code]
        return self.dphi[code - self.m].conj()

    def check_d_squared(self, tol=1e-10):
        """d(d phi^a) must vanish for every generator."""
        for a in range(1, self.m + 1):
            for conj in (False, True):
                gen = Form.generator(self.m, a, conjugate=conj)
                if not d(d(gen, self), self).is_zero(tol):
                    return False
        return True


def d(a, frame):
    """Exterior derivative by Leibniz from the structure constants."""
    out = Form(a.m)
    for key, val in a.coeffs().items():
        for pos, code in enumerate(key):
            rest = Form(a.m, {tuple(c for k, c in enumerate(key) if k != pos): 1.0})
            sign = (-1) ** pos
            out = out + (sign * val) * frame.d_generator(code).wedge(rest)
    return out


def bidegree_split(a, frame):
    """The four pieces (mu a, del a, delbar a, mubar a) of d a.

    Each piece collects the terms of d whose bidegree shift relative to the
    source component is (+2,-1), (+1,0), (0,+1), (-1,+2) respectively.
    """
    shifts = [(2, -1), (1, 0), (0, 1), (-1, 2)]
    pieces = [Form(a.m) for _ in shifts]
    for (p, q), comp in a.components().items():
        dcomp = d(comp, frame)
        for idx, (dp, dq) in enumerate(shifts):
            pieces[idx] = pieces[idx] + dcomp.component(p + dp, q + dq)
    return tuple(pieces)


def mu(a, frame):
    return bidegree_split(a, frame)[0]


def partial(a, frame):
    return bidegree_split(a, frame)[1]


def dbar(a, frame):
    return bidegree_split(a, frame)[2]


def mubar(a, frame):
    return bidegree_split(a, frame)[3]


@dataclass(frozen=True)
class MetricSpec:
    """Almost Hermitian metric as a fundamental (1,1)-form.

    ``unitary_coframe`` is the matrix U with psi^a = sum_b U[a,b] phi^b
    describing a coframe that is orthonormal for the metric; omega must
    equal i * sum_a psi^a wedge conj(psi^a).
    """

    omega: Form
    unitary_coframe: tuple = field(default=None)

    @classmethod
    def from_unitary_coframe(cls, m, U):
        U = np.asarray(U, dtype=complex)
        omega = Form(m)
        for a in range(m):
            psi = Form(m)
            psib = Form(m)
            for b in range(m):
                psi = psi + U[a, b] * Form.generator(m, b + 1)
                psib = psib + np.conj(U[a, b]) * Form.generator(m, b + 1, conjugate=True)
            omega = omega + 1j * psi.wedge(psib)
        metric = cls(omega=omega, unitary_coframe=tuple(map(tuple, U)))
        metric.validate()
        return metric

    @property
    def m(self):
        return self.omega.m

    def U(self):
        return np.array(self.unitary_coframe, dtype=complex)

    def validate(self, tol=1e-10):
        if (self.omega - self.omega.conj()).norm() > tol:
            raise ValueError("fundamental form must be real")
        if any(pq != (1, 1) for pq in self.omega.components()):
            raise ValueError("fundamental form must have bidegree (1,1)")
        # positivity on the declared unitary coframe: i psi^{a abar} coefficients
        Uinv = np.linalg.inv(self.U())
        diag = _to_basis(self.omega, Uinv)
        for a in range(self.m):
            # omega = sum_a c_a * (i psi^{a abar}); require c_a real positive
            c = complex(diag.coeffs().get((a, a + self.m), 0)) / 1j
            if not (abs(c.imag) < tol and c.real > tol):
                raise ValueError("metric not positive on the declared coframe")

    def volume_form(self):
        """omega^m / m! as a Form."""
        out = Form.scalar(self.m, 1.0)
        fact = 1
        for k in range(1, self.m + 1):
            out = out.wedge(self.omega)
            fact *= k
        return (1.0 / fact) * out


def _to_basis(a, Uinv):
    """Express a form in the psi basis: substitute phi^b = sum (U^-1)[b,a] psi^a."""
    m = a.m
    out = Form(m)
    for key, val in a.coeffs().items():
        piece = Form.scalar(m, val)
        for code in key:
            g = Form(m)
            if code < m:
                for aa in range(m):
                    g = g + Uinv[code, aa] * Form.generator(m, aa + 1)
            else:
                for aa in range(m):
                    g = g + np.conj(Uinv[code - m, aa]) * Form.generator(
                        m, aa + 1, conjugate=True
                    )
            piece = piece.wedge(g)
        out = out + piece
    return out


def _star_orthonormal(a):
    """Hodge star in an orthonormal coframe, from alpha ^ *conj(beta) = <alpha,beta> vol.

    The basis monomials are orthonormal for the Hermitian pairing and the
    volume form equals the canonical top monomial up to the sign fixed by
    vol = omega^m / m!.
    """
    m = a.m
    full = tuple(range(2 * m))
    # sign v with vol = v * (full canonical monomial)
    vol_seq = []
    for k in range(m):
        vol_seq.extend([k, k + m])
    v = (1j**m) * _sort_monomial(vol_seq)[1]
    out = Form(m)
    for key, val in a.coeffs().items():
        # conj monomial: key -> key*, sign sigma
        mapped = tuple((c + m) % (2 * m) for c in key)
        key_star, sigma = _sort_monomial(mapped)
        comp = tuple(c for c in full if c not in key_star)
        merged = _merge_monomials(key_star, comp)
        s = merged[1]
        out._add(comp, val * sigma * v / s)
    return out


def hodge_star(a, metric):
    """Hodge star for the metric, via its unitary coframe."""
    U = metric.U()
    Uinv = np.linalg.inv(U)
    in_psi = _to_basis(a, Uinv)
    starred = _star_orthonormal(in_psi)
    return _to_basis(starred, U)


def apply_J(a, inverse=False):
    """The almost complex structure acting on forms.

    Acts on the (p,q) component as multiplication by i^(q-p); the inverse
    uses i^(p-q).  (The sign of the exponent is fixed so that J applied to
    the fundamental-form differential reproduces the worked 4-manifold
    examples; see the convention note in the module tests.)
    """
    out = Form(a.m)
    for (p, q), comp in a.components().items():
        k = (p - q) if inverse else (q - p)
        out = out + (1j**k) * comp
    return out


def dc(a, frame):
    """d^c = J^{-1} d J."""
    return apply_J(d(apply_J(a), frame), inverse=True)


def check_gauduchon(metric, frame, tol=1e-12):
    """True when del delbar omega vanishes."""
    return partial(dbar(metric.omega, frame), frame).is_zero(tol)


def harmonic_residuals(s, flavor, metric, frame):
    """Residual forms of the harmonicity system for the given laplacian.

    flavor "d":    {d s, d * s}
    flavor "dbar": {dbar s, del * s}
    flavor "BC":   {del s, dbar s, del dbar * s}
    The form is harmonic iff every returned residual vanishes.
    """
    star_s = hodge_star(s, metric)
    if flavor == "d":
        return [d(s, frame), d(star_s, frame)]
    if flavor == "dbar":
        return [dbar(s, frame), partial(star_s, frame)]
    if flavor == "BC":
        return [partial(s, frame), dbar(s, frame), partial(dbar(star_s, frame), frame)]
    raise ValueError(f"unknown flavor {flavor!r}")


def verify_lee_form(metric, frame, alpha):
    """Check d omega = alpha ^ omega and report the closedness of alpha.

    Returns a dict with the wedge residual norm, d(alpha) and whether it
    vanishes.  Whether alpha is globally exact is a topological question
    outside this module; callers consult the catalog constants for that.
    """
    domega = d(metric.omega, frame)
    residual = domega - alpha.wedge(metric.omega)
    dalpha = d(alpha, frame)
    return {
        "lee_residual": residual.norm(),
        "matches": residual.is_zero(),
        "d_alpha": dalpha,
        "alpha_closed": dalpha.is_zero(),
    }
