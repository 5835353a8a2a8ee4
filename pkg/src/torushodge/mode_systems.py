"""Per-mode reduction of frame-expressed linear PDE systems.

A PDE written in the special frame (epsilon_0 = d/dt plus the fibre
vectors built from A^t applied to Jordan chain vectors) turns, mode by
mode, into an ODE in t for infinite orbits and into a recurrence over the
discrete Fourier index for finite orbits.  The reductions here are exact
(sympy); the Schwartz-solution detectors at the end are labelled numeric
heuristics, except for the closed-form quadratic criterion on the
Kodaira-Thurston family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .jordan_structure import chain_vector_exprs, is_finite_via_eigen

__all__ = [
    "VectorField",
    "PdeSystem",
    "OdeModeSystem",
    "RecurrenceSystem",
    "reduce_to_ode",
    "reduce_to_recurrence",
    "decoupled_kernel_scan",
    "schwartz_recurrence_candidates",
    "kt4_stokes_criterion",
    "schwartz_ode_candidates",
]

TWO_PI_I = 2 * sp.pi * sp.I


@dataclass(frozen=True)
class VectorField:
    """A frame vector field c_t * d/dt + w . grad_x with w constant at t=0.

    w is resolved into the Jordan chain basis, so the field equals
    c_t * eps_0 + sum c_ij * eps_ij and inherits the right t-dependence.
    """

    c_t: object
    w: tuple  # length-n tuple of sympy scalars

    def conjugate(self):
        return VectorField(
            c_t=sp.conjugate(self.c_t), w=tuple(sp.conjugate(x) for x in self.w)
        )


@dataclass(frozen=True)
class PdeSystem:
    """First/second order linear PDE system in named frame vector fields.

    ``terms`` is a list of (equation_index, word, unknown_index, coeff)
    where word is a tuple of vector field names applied left to right,
    i.e. ("V1", "V2b") stands for V1(V2b(u)).  An empty word is a zeroth
    order term.
    """

    r: int
    vector_fields: dict
    terms: tuple
    label: str = ""

    @property
    def n_equations(self):
        return 1 + max(t[0] for t in self.terms)


@dataclass(frozen=True)
class OdeModeSystem:
    """d/dt u = M(t) u for one infinite-orbit mode; entries sympy in t."""

    r: int
    t: object
    matrix: object  # sympy Matrix
    mode: tuple

    def numeric(self):
        f = sp.lambdify(self.t, self.matrix, modules="numpy")
        return lambda tv: np.asarray(f(tv), dtype=complex)


@dataclass(frozen=True)
class RecurrenceSystem:
    """sum_delta M_delta(k) G_{k+delta} = 0 over a finite orbit of length N."""

    r: int
    N: int
    k: object
    shift_matrices: dict  # delta -> sympy Matrix in k
    mode: tuple
    transfer: object = field(default=None)  # sympy Matrix T(k) or None

    @property
    def is_decoupled(self):
        return set(self.shift_matrices) <= {0}

    def transfer_numeric(self):
        if self.transfer is None:
            raise ValueError("recurrence has no one-step transfer form")
        f = sp.lambdify(self.k, self.transfer, modules="numpy")
        return lambda kv: np.asarray(f(kv), dtype=complex)


def _resolve_in_chain_basis(jordan, vf):
    """Coefficients of vf.w in the chain-vector basis: dict (i,j) -> coeff."""
    basis = jordan.basis_matrix()
    wcol = sp.Matrix([sp.nsimplify(x) for x in vf.w])
    sol = sp.simplify(basis.solve(wcol))
    out = {}
    idx = 0
    for i, chain in enumerate(jordan.chains):
        for j in range(1, chain.length + 1):
            c = sp.simplify(sol[idx])
            if c != 0:
                out[(i, j)] = c
            idx += 1
    return out


def _epsilon_words(pde, jordan):
    """Expand every vector-field word into epsilon words.

    Returns a list of (eq, eps_word, unk, coeff) with eps_word a tuple of
    keys: "t" for eps_0 and (i,j) for the chain vectors.
    """
    resolved = {}
    for name, vf in pde.vector_fields.items():
        parts = []
        if vf.c_t != 0:
            parts.append(("t", sp.nsimplify(vf.c_t)))
        for key, c in _resolve_in_chain_basis(jordan, vf).items():
            parts.append((key, c))
        resolved[name] = parts

    out = []
    for eq, word, unk, coeff in pde.terms:
        expansions = [((), sp.nsimplify(coeff))]
        for name in word:
            expansions = [
                (w + (key,), c * c2) for w, c in expansions for key, c2 in resolved[name]
            ]
        for w, c in expansions:
            out.append((eq, w, unk, c))
    return out


# ---------------------------------------------------------------------------
# infinite orbits: ODE reduction
# ---------------------------------------------------------------------------


def reduce_to_ode(pde, jordan, y, t=None):
    """Reduce the PDE at an infinite-orbit mode y to d/dt u = M(t) u.

    eps_0 becomes d/dt, each eps_ij multiplication by 2 pi i A^t v_ij . y;
    compositions pick up the product rule.  The assembled system must be
    first order in d/dt with an invertible leading matrix.
    """
    y = tuple(int(v) for v in y)
    if is_finite_via_eigen(jordan, y):
        raise ValueError(f"mode {y} has a finite orbit; use reduce_to_recurrence")
    if t is None:
        t = sp.Symbol("t", real=True)
    mults = {
        key: sp.expand(TWO_PI_I * expr)
        for key, expr in chain_vector_exprs(jordan, y, t).items()
    }

    def compose(key, op):
        # op is a list [c_0(t), c_1(t), ...] meaning sum c_k (d/dt)^k
        if key == "t":
            out = [sp.diff(op[0], t)]
            for k in range(1, len(op)):
                out.append(op[k - 1] + sp.diff(op[k], t))
            out.append(op[-1])
            return out
        return [mults[key] * c for c in op]

    n_eq = pde.n_equations
    max_order = 0
    ops = {}
    for eq, word, unk, coeff in _epsilon_words(pde, jordan):
        op = [coeff]
        for key in reversed(word):
            op = compose(key, op)
        cur = ops.setdefault((eq, unk), [])
        while len(cur) < len(op):
            cur.append(sp.S.Zero)
        for k, c in enumerate(op):
            cur[k] += c
        max_order = max(max_order, len(cur) - 1)

    if max_order > 1:
        raise ValueError("mode reduction is not first order in t")
    A0 = sp.zeros(n_eq, pde.r)
    A1 = sp.zeros(n_eq, pde.r)
    for (eq, unk), op in ops.items():
        A0[eq, unk] += op[0]
        if len(op) > 1:
            A1[eq, unk] += op[1]
    if n_eq != pde.r:
        raise ValueError("need a square system to form an explicit ODE")
    M = sp.simplify(-A1.solve(A0))
    M = M.applyfunc(lambda e: sp.expand(sp.cancel(e)))
    return OdeModeSystem(r=pde.r, t=t, matrix=M, mode=y)


def ode_residual_operator(pde, jordan, y, ode):
    """Residual of an equation set against an already-reduced ODE.

    Substitutes u' = M u (and u'' = (M' + M^2) u) into the reduction of
    ``pde`` at the same mode; a sympy zero matrix certifies that the
    equations carry no information beyond the ODE.
    """
    t = ode.t
    mults = {
        key: sp.expand(TWO_PI_I * expr)
        for key, expr in chain_vector_exprs(jordan, tuple(int(v) for v in y), t).items()
    }

    def compose(key, op):
        if key == "t":
            out = [sp.diff(op[0], t)]
            for k in range(1, len(op)):
                out.append(op[k - 1] + sp.diff(op[k], t))
            out.append(op[-1])
            return out
        return [mults[key] * c for c in op]

    n_eq = pde.n_equations
    mats = [sp.zeros(n_eq, pde.r), sp.zeros(n_eq, pde.r), sp.zeros(n_eq, pde.r)]
    for eq, word, unk, coeff in _epsilon_words(pde, jordan):
        op = [coeff]
        for key in reversed(word):
            op = compose(key, op)
        if len(op) > 3:
            raise ValueError("residual check supports order at most 2")
        for k, c in enumerate(op):
            mats[k][eq, unk] += c
    M = ode.matrix
    sub = mats[0] + mats[1] * M + mats[2] * (sp.diff(M, t) + M * M)
    return sp.simplify(sub)


# ---------------------------------------------------------------------------
# finite orbits: recurrence reduction
# ---------------------------------------------------------------------------


def reduce_to_recurrence(pde, jordan, orbit, k=None, y=None):
    """Reduce the PDE over a finite orbit to a recurrence in the t-index.

    eps_0 multiplies by 2 pi i k/N; the top vector of each root-of-unity
    chain multiplies by 2 pi i v . y and shifts k by -N theta (the frame
    factor e^{2 pi i theta t} raises the source frequency); every other
    chain vector acts as zero.  Compositions chain the shifts through the
    multipliers.  ``y`` picks the orbit element whose coefficients are
    tracked (different choices give equivalent recurrences related by a
    phase); default is the canonical representative.
    """
    if not orbit.is_finite:
        raise ValueError("orbit must be finite; use reduce_to_ode")
    if k is None:
        k = sp.Symbol("k", integer=True)
    N = len(orbit.elements)
    if y is None:
        y = orbit.representative
    elif tuple(y) not in orbit.elements:
        raise ValueError(f"{y} is not in the orbit of {orbit.representative}")
    yv = sp.Matrix([sp.Integer(v) for v in y])

    # rule per eps key: either None (zero map) or (multiplier(k), shift);
    # the shift rule needs lambda^N = 1, otherwise the field annihilates G
    rules = {"t": (TWO_PI_I * k / N, 0)}
    for i, chain in enumerate(jordan.chains):
        for j in range(1, chain.length + 1):
            unity = chain.unity_order is not None and N % chain.unity_order == 0
            if unity and j == chain.length:
                dot = sp.simplify((chain.vectors[j - 1].T * yv)[0, 0])
                shift = -chain.theta * N
                assert shift == int(shift)
                rules[(i, j)] = (TWO_PI_I * dot, int(shift))
            else:
                rules[(i, j)] = None

    shift_mats = {}
    n_eq = pde.n_equations

    def ensure(delta):
        if delta not in shift_mats:
            shift_mats[delta] = sp.zeros(n_eq, pde.r)
        return shift_mats[delta]

    for eq, word, unk, coeff in _epsilon_words(pde, jordan):
        mult = sp.nsimplify(coeff)
        delta = 0
        dead = False
        # G_k(A B f): rule_A at k, then rule_B at k + shift_A, etc.
        for key in word:
            rule = rules[key]
            if rule is None:
                dead = True
                break
            m_expr, dshift = rule
            mult = mult * m_expr.subs(k, k + delta)
            delta += dshift
        if dead:
            continue
        ensure(delta)[eq, unk] += mult

    shift_mats = {
        dlt: M.applyfunc(lambda e: sp.expand(sp.simplify(e)))
        for dlt, M in shift_mats.items()
        if not M.is_zero_matrix
    }
    transfer = _transfer_form(shift_mats, pde.r, n_eq, k)
    return RecurrenceSystem(
        r=pde.r, N=N, k=k, shift_matrices=shift_mats, mode=tuple(y), transfer=transfer
    )


def _transfer_form(shift_mats, r, n_eq, k):
    """Explicit one-step transfer G_{k+1} = T(k) G_k when extractable.

    Works for shift sets inside {-1, 0, +1} on square systems whose outer
    shift blocks are singular: combinations killing G_{k-1} give a (k,
    k+1) relation, combinations killing G_{k+1} give a (k-1, k) relation,
    and the latter shifted by one closes the square system.
    """
    deltas = set(shift_mats)
    if not deltas <= {-1, 0, 1} or deltas <= {0} or n_eq != r:
        return None
    Mm = shift_mats.get(-1, sp.zeros(n_eq, r))
    M0 = shift_mats.get(0, sp.zeros(n_eq, r))
    Mp = shift_mats.get(1, sp.zeros(n_eq, r))
    left_null_m = Mm.T.nullspace()
    left_null_p = Mp.T.nullspace()
    rows = []
    for c in left_null_m:  # c^T (M0 G_k + Mp G_{k+1}) = 0
        rows.append((sp.simplify((c.T * M0)), sp.simplify((c.T * Mp))))
    for c in left_null_p:  # c^T (Mm G_{k-1} + M0 G_k) = 0, shifted k -> k+1
        rows.append(
            (
                sp.simplify((c.T * Mm).subs(k, k + 1)),
                sp.simplify((c.T * M0).subs(k, k + 1)),
            )
        )
    if len(rows) < r:
        return None
    P = sp.Matrix.vstack(*[p for p, _ in rows[:r]])
    Q = sp.Matrix.vstack(*[q for _, q in rows[:r]])
    if sp.simplify(Q.det()) == 0:
        return None
    T = sp.simplify(-Q.solve(P))
    return T.applyfunc(lambda e: sp.cancel(sp.together(e)))


def decoupled_kernel_scan(rec, k_range, tol=1e-9):
    """Nontrivial kernels of a decoupled recurrence over a range of k.

    Returns a list of (k, basis) where basis is a list of numpy vectors
    spanning the kernel of M_0(k).
    """
    if not rec.is_decoupled:
        raise ValueError("recurrence is not decoupled")
    M0 = rec.shift_matrices.get(0)
    if M0 is None:
        raise ValueError("empty recurrence")
    fn = sp.lambdify(rec.k, M0, modules="numpy")
    out = []
    for kv in k_range:
        mat = np.asarray(fn(kv), dtype=complex)
        u, s, vh = np.linalg.svd(mat)
        scale = max(1.0, s[0]) if s.size else 1.0
        null = [vh[i].conj() for i in range(len(s)) if s[i] < tol * scale]
        if null:
            out.append((int(kv), null))
    return out


# ---------------------------------------------------------------------------
# Schwartz-solution detectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayReport:
    """Heuristic count of solutions decaying super-polynomially both ways."""

    dimension: int
    forward_exponents: tuple
    backward_exponents: tuple
    heuristic: bool = True


def _qr_growth_scan(step, K, r):
    """Propagate an orthonormal frame through K steps with QR renormalization.

    ``step(k, Q)`` returns the propagated frame at step k.  Returns the
    final orthonormal frame and the per-column per-step log growth series.
    """
    Q = np.eye(r, dtype=complex)
    logs = np.zeros((K, r))
    for k in range(K):
        Y = step(k, Q)
        Q, R = np.linalg.qr(Y)
        diag = np.abs(np.diag(R))
        diag[diag == 0] = np.finfo(float).tiny
        logs[k] = np.log(diag)
        # keep R's diagonal positive so columns stay consistently ordered
        Q = Q * np.sign(np.sign(np.real(np.diag(R))) + 0.5)
    return Q, logs


def _transfer_exponents(rec, K, forward):
    """Per-column growth orders from the transfer's singular values.

    The per-step growth factors of the QR scan converge to singular values
    of the one-step transfer at the current index (ascending order for the
    inverse-product forward scan, descending for the backward one), so the
    polynomial order of each scanned column is the log-log slope of the
    matching singular value.  The slope is evaluated beyond the scan window
    (indices 4K and 8K) where the O(1/k) corrections are below the
    reporting precision; the smallest singular value is recovered from the
    exact symbolic determinant because at those indices it sits near the
    floating point noise floor of the SVD.
    """
    r = rec.r
    transfer = rec.transfer_numeric()
    det_fn = sp.lambdify(rec.k, rec.transfer.det(), modules="numpy")

    def log_singvals(kv):
        M = np.asarray(transfer(kv), dtype=complex)
        s = np.log(np.linalg.svd(M, compute_uv=False))  # descending
        s[-1] = np.log(abs(complex(det_fn(kv)))) - s[:-1].sum()
        return s

    C = 4 * K
    sign = 1 if forward else -1
    slopes = (log_singvals(sign * 2 * C) - log_singvals(sign * C)) / np.log(2.0)
    if forward:
        # forward column c grows like 1 / sigma_{ascending, c}
        return [-float(slopes[r - 1 - c]) for c in range(r)]
    return [float(slopes[c]) for c in range(r)]


def _mean_outer_rates(logs, indices, K):
    """Mean per-step log growth of each column over |index| >= K/2."""
    mask = np.abs(np.asarray(indices, dtype=float)) >= K / 2.0
    return [float(logs[mask, col].mean()) for col in range(logs.shape[1])]


def _decaying_subspace(rec, K, forward, min_end_rate):
    """Orthonormal basis (at index 0) of directions decaying in one direction.

    Directions that decay as k -> +inf dominate products of inverse
    transfers run from K down to 0, and vice versa, so the QR scan of the
    appropriate product exposes them as positive-growth columns.  A column
    is kept when its mean per-step log growth over the outer half of the
    window exceeds ``min_end_rate`` (growth of the inverse product = decay
    of the solution).
    """
    transfer = rec.transfer_numeric()
    if forward:
        indices = [K - 1 - k for k in range(K)]

        def step(k, Q):
            return np.linalg.solve(transfer(K - 1 - k), Q)
    else:
        indices = [-K + k for k in range(K)]

        def step(k, Q):
            return transfer(-K + k) @ Q
    Q, logs = _qr_growth_scan(step, K, rec.r)
    orders = _transfer_exponents(rec, K, forward)
    outer = _mean_outer_rates(logs, indices, K)
    rates = list(zip(orders, outer))
    cols = [i for i, (_, end) in enumerate(rates) if end > min_end_rate]
    return Q[:, cols], rates


def schwartz_recurrence_candidates(rec, K=200, decay_threshold=-3.0):
    """Heuristic dimension of Schwartz (two-sided decaying) solutions.

    Runs the one-step transfer forward over [0, K] and backward over
    [-K, 0] with QR-based growth extraction, then intersects the two
    decaying subspaces at k = 0.  Each reported exponent pair is
    (growth order, mean per-step log growth over the outer half window);
    the order comes from the transfer's singular values far beyond the
    window, so it is stable in K.  A solution direction counts as
    super-polynomially decaying when its per-step log growth is below
    ``decay_threshold``, i.e. the scanned inverse product grows faster
    than ``-decay_threshold``.  The result is an estimate, not a
    certificate.
    """
    Qf, fwd = _decaying_subspace(rec, K, True, -decay_threshold)
    Qb, bwd = _decaying_subspace(rec, K, False, -decay_threshold)
    dim = _subspace_intersection_dim(Qf, Qb)
    return DecayReport(
        dimension=dim,
        forward_exponents=tuple(fwd),
        backward_exponents=tuple(bwd),
    )


def _subspace_intersection_dim(Qa, Qb, angle_tol=1e-6):
    if Qa.shape[1] == 0 or Qb.shape[1] == 0:
        return 0
    s = np.linalg.svd(Qa.conj().T @ Qb, compute_uv=False)
    return int(np.sum(s > 1.0 - angle_tol))


def kt4_stokes_criterion(n, b, rho, tol=1e-9):
    """Closed-form Schwartz criterion for the Kodaira-Thurston ODE family.

    Solutions at l = 0 exist for all 0 <= m < |n| exactly when
    64 pi^2 n^2 - 64 pi n u b^2 sqrt(rho) - b^4 rho = 0 for a negative
    integer u.  Returns that u, or None.
    """
    n = int(n)
    if n == 0:
        raise ValueError("criterion applies to nonzero n only")
    if rho <= 0:
        raise ValueError("rho must be positive")
    u = (64 * math.pi**2 * n**2 - b**4 * rho) / (64 * math.pi * n * b**2 * math.sqrt(rho))
    u_round = round(u)
    if abs(u - u_round) < tol and u_round < 0:
        return int(u_round)
    return None


def schwartz_ode_candidates(ode, T=40.0, steps=20000, decay_rate=0.1):
    """Heuristic dimension of solutions of u' = M(t) u decaying both ways.

    Integrates an orthonormal fundamental frame with RK4 plus QR
    renormalization from T down to 0 (exposing the forward-decaying
    subspace) and from -T up to 0 (the backward-decaying one), then
    intersects.  ``decay_rate`` is the minimum average log-growth per unit
    t for a direction to count as decaying.
    """
    Mfun = ode.numeric()
    h = T / steps

    def rk4_step(fun, tcur, Q, hstep):
        k1 = fun(tcur) @ Q
        k2 = fun(tcur + hstep / 2) @ (Q + hstep / 2 * k1)
        k3 = fun(tcur + hstep / 2) @ (Q + hstep / 2 * k2)
        k4 = fun(tcur + hstep) @ (Q + hstep * k3)
        return Q + hstep / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    def scan(sign):
        # sign +1: integrate from T to 0; sign -1: from -T to 0
        Q = np.eye(ode.r, dtype=complex)
        total = np.zeros(ode.r)
        tcur = sign * T
        hstep = -sign * h
        for _ in range(steps):
            Y = rk4_step(Mfun, tcur, Q, hstep)
            tcur += hstep
            Q, R = np.linalg.qr(Y)
            diag = np.abs(np.diag(R))
            diag[diag == 0] = np.finfo(float).tiny
            total += np.log(diag)
            Q = Q * np.sign(np.sign(np.real(np.diag(R))) + 0.5)
        rates = total / T
        cols = [i for i, rate in enumerate(rates) if rate > decay_rate]
        return Q[:, cols], tuple(float(x) for x in rates)

    Qf, fwd = scan(+1)
    Qb, bwd = scan(-1)
    dim = _subspace_intersection_dim(Qf, Qb)
    return DecayReport(dimension=dim, forward_exponents=fwd, backward_exponents=bwd)
