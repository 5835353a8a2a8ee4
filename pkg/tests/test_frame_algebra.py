import math

import numpy as np
import pytest

from torushodge import frame_algebra as fa
from torushodge.frame_algebra import Form, FrameSpec, MetricSpec
from torushodge.manifolds import (
    cyclic3_frame,
    cyclic3_metric,
    kt4_frame,
    kt4_lee_form,
    kt4_alpha_w,
    kt4_metric_rho,
    kt4_metric_w,
)


def test_monomial_canonical_sign():
    a = Form.monomial(2, (2, 1))
    b = Form.monomial(2, (1, 2))
    assert (a + b).is_zero()
    assert Form.monomial(2, (1, 1)).is_zero()


def test_wedge_anticommutes_on_one_forms():
    p1 = Form.generator(2, 1)
    p2 = Form.generator(2, 2, conjugate=True)
    assert (p1.wedge(p2) + p2.wedge(p1)).is_zero()
    assert p1.wedge(p1).is_zero()


def test_conj_is_an_involution():
    s = Form.monomial(2, (1, -2), 2.0 + 3.0j) + Form.monomial(2, (2,), -1.5j)
    assert (s.conj().conj() - s).is_zero()


def test_components_and_bidegree():
    s = Form.monomial(2, (1, 2)) + Form.monomial(2, (1, -1), 2.0)
    comps = s.components()
    assert set(comps) == {(2, 0), (1, 1)}
    assert (s.component(2, 0) - Form.monomial(2, (1, 2))).is_zero()


def test_d_squared_for_builtin_frames():
    assert kt4_frame(8 * math.pi).check_d_squared()
    assert cyclic3_frame().check_d_squared()


def test_d_squared_detects_corruption():
    bad = FrameSpec(m=2, dphi=(Form.monomial(2, (2, -2), 1.0), Form.monomial(2, (1, -1), 1.0)))
    assert not bad.check_d_squared()


def test_bidegree_split_sums_to_d():
    frame = cyclic3_frame()
    s = Form.monomial(2, (1, -2), 1.0 + 0.5j) + Form.monomial(2, (-1,), 2.0)
    total = Form.zero(2)
    for piece in fa.bidegree_split(s, frame):
        total = total + piece
    assert (total - fa.d(s, frame)).is_zero()


def test_hodge_star_involution_and_volume():
    for metric in (kt4_metric_rho(0.7), cyclic3_metric(), kt4_metric_w(0.3 + 0.2j)):
        one = Form.scalar(2, 1.0)
        assert (fa.hodge_star(one, metric) - metric.volume_form()).is_zero()
        assert (fa.hodge_star(metric.omega, metric) - metric.omega).is_zero()
        s = Form.monomial(2, (1, -2), 1.0)
        # on a 4-manifold ** = id in even degree
        assert (fa.hodge_star(fa.hodge_star(s, metric), metric) - s).is_zero()


def test_apply_J_convention():
    s21 = Form.monomial(2, (1, 2, -1))
    assert (fa.apply_J(s21) + 1j * s21).is_zero()  # i^(q-p) = i^-1
    assert (fa.apply_J(fa.apply_J(s21, inverse=True)) - s21).is_zero()
    s11 = Form.monomial(2, (1, -1))
    assert (fa.apply_J(s11) - s11).is_zero()


def test_metric_positivity_validation():
    bad = MetricSpec(
        omega=1j * Form.monomial(2, (1, -1)) + (-1j) * Form.monomial(2, (2, -2)),
        unitary_coframe=((1, 0), (0, 1)),
    )
    with pytest.raises(ValueError):
        bad.validate()
    not_11 = MetricSpec(omega=Form.monomial(2, (1, 2)), unitary_coframe=((1, 0), (0, 1)))
    with pytest.raises(ValueError):
        not_11.validate()


def test_gauduchon_for_builtin_metrics():
    frame = kt4_frame(8 * math.pi)
    assert fa.check_gauduchon(kt4_metric_w(0.4 + 1.1j), frame)
    assert fa.check_gauduchon(cyclic3_metric(), cyclic3_frame())


def test_harmonic_residuals_flavors():
    frame = cyclic3_frame()
    metric = cyclic3_metric()
    one = Form.scalar(2, 1.0)
    assert all(r.is_zero() for r in fa.harmonic_residuals(one, "d", metric, frame))
    assert all(r.is_zero() for r in fa.harmonic_residuals(one, "dbar", metric, frame))
    assert all(r.is_zero() for r in fa.harmonic_residuals(one, "BC", metric, frame))
    with pytest.raises(ValueError):
        fa.harmonic_residuals(one, "bott", metric, frame)


def test_verify_lee_form_kt4():
    b = 8 * math.pi
    frame = kt4_frame(b)
    for w in (0.6, 0.3 - 0.8j, 1.2j):
        metric = kt4_metric_w(w)
        report = fa.verify_lee_form(metric, frame, kt4_lee_form(w, b))
        assert report["matches"], w
    # the doubled one-form over-counts: alpha ^ omega = 2 d omega at real w
    w = 0.6
    metric = kt4_metric_w(w)
    alpha = kt4_alpha_w(w, b)
    d_omega = fa.d(metric.omega, frame)
    assert (alpha.wedge(metric.omega) - 2.0 * d_omega).is_zero()
    assert not fa.verify_lee_form(metric, frame, alpha)["matches"]


def test_norm_and_zero_checks():
    s = Form.monomial(2, (1,), 3.0) + Form.monomial(2, (-2,), 4.0)
    assert abs(s.norm() - 5.0) < 1e-12
    assert Form.zero(2).is_zero()
    assert not s.is_zero()
