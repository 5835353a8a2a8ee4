"""Spectral data of the monodromy matrix.

Everything downstream needs the Jordan chains of A: the orbit-finiteness
criterion tests mode vectors against them, the special frame on the bundle
is built from A^t applied to chain vectors, and the rotation numbers of
root-of-unity eigenvalues become the shifts of the mode recurrences.

Eigenvalues are kept exact (sympy) whenever the characteristic polynomial
factors over the rationals into linear or cyclotomic pieces, which covers
every worked example; numeric fallbacks carry a 1e-10 tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy as sp

__all__ = [
    "JordanChain",
    "JordanData",
    "jordan_decompose",
    "root_of_unity_order",
    "matrix_power_real",
    "is_finite_via_eigen",
    "theta_of",
    "chain_vector_exprs",
]

TOL = 1e-10
UNITY_ORDER_MAX = 120


@dataclass(frozen=True)
class JordanChain:
    """One Jordan chain: eigenvalue, vectors v_1..v_m with (A-l)v_j = v_{j-1}.

    ``vectors`` are exact sympy column matrices; ``unity_order`` is the least
    N with eigenvalue**N == 1 when one exists, and ``theta`` the matching
    rotation number in (-1/2, 1/2].
    """

    eigenvalue: object
    vectors: tuple
    unity_order: int | None
    theta: Fraction | None

    @property
    def length(self):
        return len(self.vectors)


@dataclass(frozen=True)
class JordanData:
    """Full Jordan decomposition of an integer matrix A."""

    n: int
    A: tuple
    chains: tuple

    def chain_items(self):
        """Yield (chain_index, j, vector) over all generalised eigenvectors."""
        for i, chain in enumerate(self.chains):
            for j, v in enumerate(chain.vectors, start=1):
                yield i, j, v

    def basis_matrix(self):
        """Columns are all chain vectors, in chain order (exact)."""
        cols = [v for _, _, v in self.chain_items()]
        return sp.Matrix.hstack(*cols)


def jordan_decompose(A):
    """Exact Jordan chains of an integer matrix invertible over Z.

    The decomposition is fully symbolic; chains are read off sympy's Jordan
    form so that (A - l) v_j = v_{j-1} holds exactly.
    """
    M = sp.Matrix([[sp.Integer(x) for x in row] for row in A])
    n = M.shape[0]
    if M.shape[1] != n:
        raise ValueError("matrix must be square")
    if abs(M.det()) != 1:
        raise ValueError("matrix must be invertible over the integers")

    P, J = M.jordan_form()
    P = sp.simplify(P)
    chains = []
    col = 0
    while col < n:
        lam = sp.nsimplify(sp.simplify(J[col, col]))
        length = 1
        while col + length < n and J[col + length - 1, col + length] == 1:
            length += 1
        vectors = tuple(P[:, col + j] for j in range(length))
        order = root_of_unity_order(lam)
        theta = _theta_from(lam, order) if order is not None else None
        chains.append(
            JordanChain(eigenvalue=lam, vectors=vectors, unity_order=order, theta=theta)
        )
        col += length

    data = JordanData(n=n, A=tuple(tuple(int(x) for x in row) for row in A), chains=tuple(chains))
    _check_chains(M, data)
    return data


def _check_chains(M, data):
    rank_basis = data.basis_matrix()
    if rank_basis.rank() != data.n:
        raise ValueError("Jordan chain construction did not reach full rank")
    for chain in data.chains:
        lam = chain.eigenvalue
        prev = sp.zeros(data.n, 1)
        for v in chain.vectors:
            resid = sp.simplify((M - lam * sp.eye(data.n)) * v - prev)
            if any(abs(complex(x)) > TOL for x in resid):
                raise ValueError("Jordan chain relation failed")
            prev = v


def root_of_unity_order(lam, n_max=UNITY_ORDER_MAX):
    """Least N <= n_max with lam**N == 1, or None.

    Exact sympy inputs are tested exactly; floats within 1e-10.
    """
    lam_c = complex(lam)
    if abs(abs(lam_c) - 1.0) > TOL:
        return None
    for N in range(1, n_max + 1):
        if abs(lam_c**N - 1.0) < TOL:
            if isinstance(lam, sp.Expr) and lam.is_number and lam.is_algebraic is not False:
                if sp.simplify(lam**N - 1) != 0:
                    continue
            return N
    return None


def _theta_from(lam, order):
    """Rotation number in (-1/2, 1/2] with lam = exp(2 pi i theta)."""
    ang = np.angle(complex(lam)) / (2 * np.pi)
    theta = Fraction(round(ang * order), order)
    if theta <= Fraction(-1, 2):
        theta += 1
    if theta > Fraction(1, 2):
        theta -= 1
    return theta


def theta_of(jordan, i):
    """Rotation number of the i-th chain; errors unless it is a root of unity."""
    chain = jordan.chains[i]
    if chain.theta is None:
        raise ValueError(f"eigenvalue {chain.eigenvalue} is not a root of unity")
    return chain.theta


def _branch_log(chain):
    """Scalar log of the eigenvalue, taking 2*pi*i*theta for roots of unity."""
    if chain.theta is not None:
        return 2j * np.pi * float(chain.theta)
    return complex(sp.log(chain.eigenvalue))


def matrix_power_real(jordan, t):
    """A^t = exp(t ln A) with the branch fixed by the rotation numbers.

    Root-of-unity eigenvalues use log = 2 pi i theta with theta in
    (-1/2, 1/2]; everything else takes the principal logarithm.  Built in
    the Jordan basis so nilpotent parts exponentiate as finite series.
    """
    n = jordan.n
    V = np.array(jordan.basis_matrix().evalf(), dtype=complex)
    blocks = []
    for chain in jordan.chains:
        m = chain.length
        lam = complex(chain.eigenvalue)
        # chain basis: B = lam*I + S with S v_j = v_{j-1} (upper shift)
        S = np.zeros((m, m), dtype=complex)
        for j in range(1, m):
            S[j - 1, j] = 1.0
        # log(I + S/lam) as a finite nilpotent series
        X = S / lam
        L = np.zeros((m, m), dtype=complex)
        term = X.copy()
        for r in range(1, m):
            L += ((-1) ** (r + 1)) * term / r
            term = term @ X
        # exp of (scalar + nilpotent): scalar factor times finite series
        scal = np.exp(t * _branch_log(chain))
        Nt = t * L
        E = np.eye(m, dtype=complex)
        term = np.eye(m, dtype=complex)
        for r in range(1, m):
            term = term @ Nt / r
            E = E + term
        blocks.append(scal * E)
    D = np.zeros((n, n), dtype=complex)
    pos = 0
    for b in blocks:
        m = b.shape[0]
        D[pos : pos + m, pos : pos + m] = b
        pos += m
    return V @ D @ np.linalg.inv(V)


def is_finite_via_eigen(jordan, y):
    """Orbit-finiteness certificate from the generalised eigenvectors.

    The orbit of y under A^T is finite iff v_{i,j} . y = 0 for every chain
    vector, except possibly the top vector of chains whose eigenvalue is a
    root of unity.  Necessity is the bounded-iterates argument; sufficiency
    holds because the surviving action is by roots of unity on finitely
    many values (asserted against direct iteration in the tests).
    """
    yv = sp.Matrix([sp.Integer(v) for v in y])
    for i, j, v in jordan.chain_items():
        chain = jordan.chains[i]
        if chain.unity_order is not None and j == chain.length:
            continue
        dot = sp.simplify((v.T * yv)[0, 0])
        if abs(complex(dot)) > TOL:
            return False
    return True


def chain_vector_exprs(jordan, y, t):
    """Sympy expressions for A^t v_{i,j} . y as functions of the symbol t.

    These are the multipliers of the fibre-direction frame vectors acting
    on the Fourier coefficient of mode y.  On a chain with eigenvalue lam,
    A^t v_j = lam_branch^t * sum_r p_r(t) v_{j-r} with polynomial p_r, so
    each entry is a finite sum of terms t^p * exp(2 pi i theta t) (or
    lam^t for eigenvalues off the unit circle).
    """
    yv = sp.Matrix([sp.Integer(v) for v in y])
    out = {}
    for i, chain in enumerate(jordan.chains):
        m = chain.length
        lam = chain.eigenvalue
        dots = [sp.simplify((v.T * yv)[0, 0]) for v in chain.vectors]
        # nilpotent log on the chain: L = log(I + S/lam), S the shift matrix
        S = sp.zeros(m, m)
        for j in range(1, m):
            S[j - 1, j] = 1
        X = S / lam
        L = sp.zeros(m, m)
        term = X
        for r in range(1, m):
            L += sp.Integer((-1) ** (r + 1)) * term / r
            term = term * X
        # exp(t L), finite series
        E = sp.eye(m)
        term = sp.eye(m)
        for r in range(1, m):
            term = term * (t * L) / r
            E = E + term
        if chain.theta is not None:
            scal = sp.exp(2 * sp.pi * sp.I * sp.Rational(chain.theta.numerator, chain.theta.denominator) * t)
        else:
            scal = lam**t
        for j in range(1, m + 1):
            # column j-1 of E gives the chain-basis coefficients of A^t v_j
            expr = scal * sum(E[r, j - 1] * dots[r] for r in range(m))
            out[(i, j)] = sp.expand(sp.simplify(expr))
    return out
