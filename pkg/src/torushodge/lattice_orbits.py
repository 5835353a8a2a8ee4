"""Orbits of lattice points under the transpose monodromy action.

The base manifold is a T^n bundle over S^1 with monodromy A in GL_n(Z).
Fourier modes on the fibre are indexed by Z^n, and travelling once around
the base maps the mode y to A^T y.  Finite orbits index discrete mode
coefficients, infinite orbits index function-valued ones, so the first
step of every computation is to partition Z^n into these orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

__all__ = ["TorusBundle", "Orbit", "orbit_of", "orbit_partition"]

DEFAULT_MAX_STEPS = 10_000
NORM_BAILOUT = 10**9


def _int_det(rows):
    """Exact integer determinant by fraction-free Gaussian elimination."""
    n = len(rows)
    m = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


@dataclass(frozen=True)
class TorusBundle:
    """A T^n bundle over S^1: fibre dimension n and monodromy A in GL_n(Z)."""

    n: int
    A: tuple

    def __init__(self, n, A):
        rows = tuple(tuple(int(x) for x in row) for row in A)
        if n < 1:
            raise ValueError("fibre dimension must be at least 1")
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"monodromy must be a {n}x{n} integer matrix")
        if abs(_int_det(rows)) != 1:
            raise ValueError("monodromy must be unimodular (|det A| = 1)")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "A", rows)

    @property
    def AT(self):
        """Transpose of the monodromy, the matrix acting on mode vectors."""
        return tuple(zip(*self.A))

    def act(self, y):
        """Apply A^T to the integer vector y (exact integer arithmetic)."""
        AT = self.AT
        return tuple(sum(AT[i][j] * y[j] for j in range(self.n)) for i in range(self.n))


@dataclass(frozen=True)
class Orbit:
    """An orbit of Z^n under the group generated by A^T.

    Finite orbits store their full element list; ``elements`` is None for
    infinite orbits.  The canonical representative of a finite orbit is its
    lexicographically smallest element, an infinite orbit keeps the query
    point that produced it.
    """

    representative: tuple
    elements: tuple | None = field(default=None)

    @property
    def is_finite(self):
        return self.elements is not None

    @property
    def size(self):
        return len(self.elements) if self.is_finite else math.inf

    def __contains__(self, y):
        if not self.is_finite:
            raise ValueError("membership test only supported for finite orbits")
        return tuple(y) in self.elements


@lru_cache(maxsize=None)
def _cached_jordan(bundle):
    from .jordan_structure import jordan_decompose

    return jordan_decompose(bundle.A)


def orbit_of(bundle, y, max_steps=DEFAULT_MAX_STEPS):
    """Compute the orbit of y under the group generated by A^T.

    Iterates the action until the cycle closes.  Infinite orbits are
    certified through the generalised-eigenvector criterion; plain
    iteration alone could never prove infiniteness, so the criterion is
    consulted first and a norm-growth bailout backs it up.
    """
    y = tuple(int(v) for v in y)
    if len(y) != bundle.n:
        raise ValueError(f"mode vector has dimension {len(y)}, expected {bundle.n}")
    if max_steps < 1:
        raise ValueError("max_steps must be positive")

    from .jordan_structure import is_finite_via_eigen

    if not is_finite_via_eigen(_cached_jordan(bundle), y):
        return Orbit(representative=y)

    elems = [y]
    cur = y
    for _ in range(max_steps):
        cur = bundle.act(cur)
        if cur == y:
            return Orbit(representative=min(elems), elements=tuple(elems))
        if max(abs(v) for v in cur) > NORM_BAILOUT:
            return Orbit(representative=y)
        elems.append(cur)
    # eigen-certificate said finite; max_steps was simply too small
    return Orbit(representative=y)


def orbit_partition(bundle, box_radius, max_steps=DEFAULT_MAX_STEPS):
    """Partition the sup-norm box of the given radius into orbits.

    Every lattice point y with ||y||_inf <= box_radius lies in exactly one
    returned orbit.  Orbits are deduplicated by canonical representative,
    so points of one finite orbit inside the box are reported once.
    """
    if box_radius < 1:
        raise ValueError("box_radius must be positive")
    seen = set()
    orbits = []
    for y in product(range(-box_radius, box_radius + 1), repeat=bundle.n):
        if y in seen:
            continue
        orb = orbit_of(bundle, y, max_steps=max_steps)
        if orb.is_finite:
            seen.update(orb.elements)
        else:
            # mark the forward and backward iterates that stay inside the box
            seen.add(y)
            for step in (1, -1):
                cur = y
                while True:
                    cur = bundle.act(cur) if step == 1 else _act_inverse(bundle, cur)
                    if max(abs(v) for v in cur) > box_radius:
                        break
                    if cur in seen:
                        break
                    seen.add(cur)
        orbits.append(orb)
    return orbits


def _act_inverse(bundle, y):
    """Apply (A^T)^{-1} to y; exact because A is unimodular."""
    inv = _unimodular_inverse(bundle.AT)
    return tuple(sum(inv[i][j] * y[j] for j in range(bundle.n)) for i in range(bundle.n))


@lru_cache(maxsize=None)
def _unimodular_inverse(rows):
    """Exact integer inverse of a unimodular integer matrix (adjugate)."""
    n = len(rows)
    det = _int_det(rows)
    inv = []
    for i in range(n):
        inv.append([])
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != i]
                for r in range(n)
                if r != j
            ]
            cof = _int_det(minor) if minor else 1
            inv[i].append(((-1) ** (i + j)) * cof * det)
    return tuple(tuple(r) for r in inv)
