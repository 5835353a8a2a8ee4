from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from torushodge.jordan_structure import (
    chain_vector_exprs,
    is_finite_via_eigen,
    jordan_decompose,
    matrix_power_real,
    root_of_unity_order,
    theta_of,
)
from torushodge.lattice_orbits import orbit_of
from torushodge.manifolds import cyclic3_bundle, kt4_bundle


def test_kt4_chain_structure(kt4_jordan):
    assert sorted(ch.length for ch in kt4_jordan.chains) == [1, 2]
    for ch in kt4_jordan.chains:
        assert ch.eigenvalue == 1
        assert ch.unity_order == 1
        assert ch.theta == 0


def test_cyclic3_eigen_data(cyclic3_jordan):
    w = sp.exp(2 * sp.pi * sp.I / 3)
    eigen = {sp.simplify(ch.eigenvalue) for ch in cyclic3_jordan.chains}
    assert all(
        any(sp.simplify(sp.expand_complex(e - target)) == 0 for e in eigen)
        for target in (sp.Integer(1), w, sp.conjugate(w))
    )
    assert {ch.theta for ch in cyclic3_jordan.chains} == {
        Fraction(0),
        Fraction(1, 3),
        Fraction(-1, 3),
    }
    assert {ch.unity_order for ch in cyclic3_jordan.chains} == {1, 3}


def test_decompose_validates_input():
    with pytest.raises(ValueError):
        jordan_decompose([[1, 0], [0, 2]])
    with pytest.raises(ValueError):
        jordan_decompose([[1, 0, 0], [0, 1, 0]])


def test_root_of_unity_order():
    assert root_of_unity_order(sp.Integer(1)) == 1
    assert root_of_unity_order(sp.Integer(-1)) == 2
    assert root_of_unity_order(sp.exp(2 * sp.pi * sp.I / 5)) == 5
    assert root_of_unity_order(sp.Integer(2)) is None
    assert root_of_unity_order(-0.5 + 0.8660254037844387j) == 3


def test_theta_of_errors_off_unit_circle():
    data = jordan_decompose([[2, 1], [1, 1]])  # golden-ratio eigenvalues
    for i in range(len(data.chains)):
        with pytest.raises(ValueError):
            theta_of(data, i)


@pytest.mark.parametrize("bundle_fn", [kt4_bundle, cyclic3_bundle])
def test_matrix_power_real_at_integers(bundle_fn):
    bundle = bundle_fn()
    data = jordan_decompose(bundle.A)
    A = np.array(bundle.A, dtype=float)
    for t in (-2, -1, 0, 1, 3):
        expect = np.linalg.matrix_power(A, t)
        assert np.max(np.abs(matrix_power_real(data, t) - expect)) < 1e-9


def test_finiteness_certificate_matches_iteration():
    for bundle in (kt4_bundle(), cyclic3_bundle()):
        data = jordan_decompose(bundle.A)
        for l in range(-2, 3):
            for m in range(-2, 3):
                for n in range(-2, 3):
                    y = (l, m, n)
                    assert is_finite_via_eigen(data, y) == orbit_of(bundle, y).is_finite


def test_chain_vector_exprs_match_numeric_power(cyclic3_jordan):
    t = sp.Symbol("t", real=True)
    y = (1, 0, 0)
    exprs = chain_vector_exprs(cyclic3_jordan, y, t)
    yv = np.array(y, dtype=complex)
    for (i, j), expr in exprs.items():
        v = np.array(cyclic3_jordan.chains[i].vectors[j - 1].evalf(), dtype=complex).ravel()
        for tv in (0.0, 0.5, 1.0, 2.25):
            expect = (matrix_power_real(cyclic3_jordan, tv) @ v) @ yv
            got = complex(expr.subs(t, tv).evalf())
            assert abs(got - expect) < 1e-9


def test_kt4_chain_exprs_are_polynomial_in_t(kt4_jordan):
    # unipotent monodromy: A^t v . y is a polynomial in t
    t = sp.Symbol("t", real=True)
    exprs = chain_vector_exprs(kt4_jordan, (0, 0, 1), t)
    assert any(sp.degree(sp.Poly(e, t)) == 1 for e in exprs.values() if e != 0)
    for e in exprs.values():
        assert sp.Poly(e, t).degree() <= 1
