import numpy as np
import pytest
import sympy as sp

from torushodge import fourier_modes as fm
from torushodge.lattice_orbits import orbit_of, orbit_partition
from torushodge.manifolds import cyclic3_bundle, kt4_bundle


def _single_mode(bundle, y, g):
    def func(t, X):
        phase = np.exp(2j * np.pi * sum(yv * Xv for yv, Xv in zip(y, X)))
        return g(t) * phase

    return func


def test_project_F_exact_on_single_mode():
    bundle = kt4_bundle()
    y = (2, -1, 0)
    f = fm.SampledFunction.from_callable(
        bundle, _single_mode(bundle, y, lambda t: np.exp(2j * np.pi * t)), res_t=8, res_x=8
    )
    Fy = fm.project_F(f, y)
    assert np.max(np.abs(Fy.values - np.exp(2j * np.pi * Fy.t))) < 1e-12
    other = fm.project_F(f, (1, 0, 0))
    assert np.max(np.abs(other.values)) < 1e-12


def test_project_F_warns_on_aliasing():
    bundle = kt4_bundle()
    f = fm.SampledFunction.from_callable(bundle, lambda t, X: 0 * X[0], res_t=4, res_x=8)
    with pytest.warns(UserWarning):
        fm.project_F(f, (5, 0, 0))


def test_project_G_extracts_discrete_coefficient():
    bundle = cyclic3_bundle()
    y = (1, 0, 0)
    f = fm.SampledFunction.from_callable(
        bundle,
        _single_mode(bundle, y, lambda t: np.exp(2j * np.pi * 2 * t / 3)),
        periods=3,
        res_t=8,
        res_x=4,
    )
    Fy = fm.project_F(f, y)
    assert abs(fm.project_G(Fy, 2, 3) - 1.0) < 1e-12
    assert abs(fm.project_G(Fy, 1, 3)) < 1e-12
    with pytest.raises(ValueError):
        fm.project_G(Fy, 0, 2)  # wrong window


def test_orbit_mode_function_is_equivariant():
    bundle = cyclic3_bundle()
    orb = orbit_of(bundle, (1, 1, 0))
    func = fm.orbit_mode_function(bundle, orb, 2)
    f = fm.SampledFunction.from_callable(bundle, func, periods=3, res_t=8, res_x=8)
    assert f.check_periodicity() < 1e-10


def test_orbit_mode_function_requires_finite_orbit():
    bundle = kt4_bundle()
    with pytest.raises(ValueError):
        fm.orbit_mode_function(bundle, orbit_of(bundle, (0, 0, 1)), 0)


def test_reconstruct_round_trip():
    bundle = cyclic3_bundle()
    rng = np.random.default_rng(5)
    orbits = orbit_partition(bundle, 1)
    func, terms = fm.random_orbit_function(bundle, orbits, rng, n_terms=3, j_max=2)
    f = fm.SampledFunction.from_callable(bundle, func, periods=3, res_t=12, res_x=8)
    modes = []
    seen = set()
    for _, orb, _ in terms:
        for y in orb.elements:
            if y not in seen:
                seen.add(y)
                modes.append(fm.project_F(f, y))
    rec = fm.reconstruct(modes, bundle, periods=3, res_t=12, res_x=8)
    assert np.max(np.abs(rec.data - f.data)) < 1e-10


def test_sampled_function_serialization_round_trip(tmp_path):
    bundle = cyclic3_bundle()
    rng = np.random.default_rng(0)
    data = rng.normal(size=(8, 4, 4, 4)) + 1j * rng.normal(size=(8, 4, 4, 4))
    f = fm.SampledFunction(bundle=bundle, periods=2, res_t=4, res_x=4, data=data)
    f.save_npz(tmp_path / "f.npz")
    g = fm.SampledFunction.load_npz(tmp_path / "f.npz")
    assert g.bundle.A == bundle.A and g.periods == 2
    assert np.array_equal(g.data, f.data)
    f.save_csv(tmp_path / "f.csv")
    h = fm.SampledFunction.load_csv(tmp_path / "f.csv")
    assert h.bundle.A == bundle.A
    assert np.max(np.abs(h.data - f.data)) == 0.0


def test_sampled_function_shape_validation():
    bundle = cyclic3_bundle()
    with pytest.raises(ValueError):
        fm.SampledFunction(bundle=bundle, periods=1, res_t=4, res_x=4, data=np.zeros((4, 4)))


def test_op_action_rules(cyclic3_jordan):
    y = (1, 0, 0)
    rule = fm.op_action_F("eps0", cyclic3_jordan, y)
    assert rule.kind == "ddt"
    # every chain field acts by multiplication on F_y
    for i, chain in enumerate(cyclic3_jordan.chains):
        r = fm.op_action_F((i, chain.length), cyclic3_jordan, y)
        assert r.kind == "mult"
    # finite orbit of length 1: order-3 chains annihilate the G coefficients
    for i, chain in enumerate(cyclic3_jordan.chains):
        g = fm.op_action_G((i, chain.length), cyclic3_jordan, (1, 1, 1), N=1)
        if chain.unity_order == 3:
            assert g.is_zero
        else:
            assert not g.is_zero and g.shift == 0


def test_op_action_G_shift_convention(cyclic3_jordan):
    # chain with theta = -1/3 shifts the source index by +1 and vice versa
    for i, chain in enumerate(cyclic3_jordan.chains):
        if chain.unity_order != 3:
            continue
        g = fm.op_action_G((i, chain.length), cyclic3_jordan, (1, 0, 0), N=3)
        assert g.shift == -int(chain.theta * 3)


def test_apply_frame_field_matches_F_rule(kt4_jordan):
    bundle = kt4_bundle()
    y = (1, 2, 0)
    f = fm.SampledFunction.from_callable(
        bundle,
        _single_mode(bundle, y, lambda t: np.exp(2j * np.pi * t)),
        res_t=16,
        res_x=8,
    )
    t = sp.Symbol("t", real=True)
    for i, chain in enumerate(kt4_jordan.chains):
        for j in range(1, chain.length + 1):
            g = fm.apply_frame_field(f, kt4_jordan, (i, j))
            rule = fm.op_action_F((i, j), kt4_jordan, y, t=t)
            mult = sp.lambdify(t, rule.multiplier, modules="numpy")
            Ff = fm.project_F(f, y)
            Fg = fm.project_F(g, y)
            expect = np.asarray(mult(Ff.t), dtype=complex) * Ff.values
            assert np.max(np.abs(Fg.values - expect)) < 1e-10
