import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phlab.lattice import standard_symplectic_form
from phlab.torus_maps import (
    PerturbedDiffeo,
    Shear,
    TrigPoly,
    certify_partial_hyperbolicity,
    single_shear,
    symplectic_double_shear,
    torus_reduce,
    translation_family,
)


def test_trigpoly_periodicity_and_gradient():
    phi = TrigPoly(2, (((1, 2), 0.7, -0.3), ((0, 1), 0.0, 1.1)))
    rng = np.random.default_rng(0)
    pts = rng.random((40, 2))
    shift = rng.integers(-3, 4, size=(40, 2))
    assert np.allclose(phi.value(pts + shift), phi.value(pts), atol=1e-12)
    # gradient against central differences
    h = 1e-6
    for axis in range(2):
        e = np.zeros(2)
        e[axis] = h
        fd = (phi.value(pts + e) - phi.value(pts - e)) / (2 * h)
        assert np.max(np.abs(fd - phi.gradient(pts)[:, axis])) < 1e-6
    assert phi.partial_derivative(0).modes[0][1] == pytest.approx(-0.3 * 2 * np.pi * 1, rel=1e-12)


def test_trigpoly_bounds():
    phi = TrigPoly(2, (((1, 0), 1.0, 0.0),))
    assert phi.sup_bound == 1.0
    assert phi.grad_bound == pytest.approx(2 * np.pi)
    assert phi.hessian_bound == pytest.approx((2 * np.pi) ** 2)
    assert phi.has_zero_mean
    assert not TrigPoly(2, (((0, 0), 0.5, 0.0),)).has_zero_mean


def test_shear_rejects_self_dependence():
    with pytest.raises(ValueError):
        Shear(0, TrigPoly(2, (((1, 0), 1.0, 0.0),)))


def test_eval_zero_epsilon_is_linear(quartic_symplectic):
    f = symplectic_double_shear(quartic_symplectic, 0.0)
    rng = np.random.default_rng(1)
    pts = rng.random((20, 4))
    expect = (pts @ quartic_symplectic.as_float().T) % 1.0
    assert np.max(np.abs(torus_reduce(f.eval(pts) - expect))) < 1e-14


def test_single_shear_derivative_at_zero(cat):
    # x0 -> x0 + eps sin(2 pi x1): at x = 0 the chain rule gives L then the unit shear
    eps = 0.125
    f = single_shear(cat, eps, 0, TrigPoly(2, (((0, 1), 0.0, 1.0),)))
    D = f.derivative(np.zeros(2))
    S = np.array([[1.0, 2 * np.pi * eps], [0.0, 1.0]])
    assert np.max(np.abs(D - S @ cat.as_float())) < 1e-14
    assert np.max(np.abs(f.eval(np.zeros(2)))) == 0.0


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_homotopy_class_lift(seed, small_symplectic):
    rng = np.random.default_rng(seed)
    x = rng.random((5, 4))
    m = rng.integers(-3, 4, size=(5, 4)).astype(float)
    Lm = m @ small_symplectic.L.as_float().T
    assert np.max(np.abs(small_symplectic.lift(x + m) - (small_symplectic.lift(x) + Lm))) < 1e-12


def test_inverse_roundtrip(small_symplectic):
    rng = np.random.default_rng(3)
    y = rng.random((100, 4))
    x = small_symplectic.inverse(y, tol=1e-12)
    assert np.max(np.abs(torus_reduce(small_symplectic.eval(x) - y))) < 1e-12


def test_inverse_zero_epsilon_exact(quartic_symplectic):
    f = PerturbedDiffeo(quartic_symplectic, (), 0.0, "volume_preserving")
    rng = np.random.default_rng(4)
    y = rng.random((10, 4))
    expect = (y @ quartic_symplectic.inverse_float().T) % 1.0
    assert np.max(np.abs(torus_reduce(f.inverse(y) - expect))) < 1e-14


def test_volume_preservation_monte_carlo(small_symplectic, cat_shear):
    rng = np.random.default_rng(5)
    for f in (small_symplectic, cat_shear):
        pts = rng.random((10_000, f.d))
        dets = f.jacobian_det(pts)
        assert np.max(np.abs(dets - 1.0)) < 1e-12


def test_symplectic_defect(small_symplectic):
    assert small_symplectic.symplectic_defect(10_000, seed=6) < 1e-10


def test_symplectic_kind_requires_structure(quartic_symplectic):
    phi = TrigPoly(4, (((0, 1, 0, 0), 1.0, 0.0),))
    with pytest.raises(ValueError):
        PerturbedDiffeo(quartic_symplectic, (Shear(0, phi),), 0.05, "symplectic")


def test_c1_distance_bound_dominates_grid(small_symplectic):
    rng = np.random.default_rng(7)
    pts = rng.random((500, 4))
    actual = np.max(np.linalg.norm(small_symplectic.derivative(pts) - small_symplectic.L.as_float(), 2, axis=(1, 2)))
    assert actual <= small_symplectic.c1_distance_bound()


def test_translation_family_is_exact_translation_conjugate(quartic_symplectic):
    v = np.array([0.21, -0.4, 0.13, 0.55])
    f = translation_family(quartic_symplectic, v)
    rng = np.random.default_rng(8)
    x = rng.random((50, 4))
    Lf = quartic_symplectic.as_float()
    # h o f = L o h for h(x) = x + v
    lhs = (f.eval(x) + v) % 1.0
    rhs = ((x + v) @ Lf.T) % 1.0
    assert np.max(np.abs(torus_reduce(lhs - rhs))) < 1e-12


def test_perturbation_json_roundtrip(quartic_symplectic, small_symplectic):
    obj = small_symplectic.to_json_obj()
    text = json.dumps(obj)
    back = PerturbedDiffeo.from_json(quartic_symplectic, text)
    assert back.kind == "symplectic" and back.epsilon == small_symplectic.epsilon
    rng = np.random.default_rng(9)
    pts = rng.random((10, 4))
    assert np.max(np.abs(back.eval(pts) - small_symplectic.eval(pts))) == 0.0


# -- cone certification ---------------------------------------------------------

def test_certificate_linear_rates_exact(linear_map, symp_split):
    cert = certify_partial_hyperbolicity(linear_map, symp_split, grid_n=5)
    assert cert.verified
    assert cert.nu == pytest.approx(symp_split.rho_s_max, abs=1e-12)
    assert cert.nu_hat == pytest.approx(symp_split.rho_u_min, abs=1e-12)
    assert cert.gamma == pytest.approx(1.0, abs=1e-12)
    assert cert.gamma_hat == pytest.approx(1.0, abs=1e-12)
    assert cert.nu < cert.gamma <= cert.gamma_hat < cert.nu_hat


def test_certificate_small_perturbation(small_symplectic, symp_split):
    cert = certify_partial_hyperbolicity(small_symplectic, symp_split, grid_n=6)
    assert cert.verified
    assert abs(cert.nu - symp_split.rho_s_max) < 0.05
    assert abs(cert.nu_hat - symp_split.rho_u_min) < 0.1
    assert abs(cert.gamma - 1.0) < 0.05 and abs(cert.gamma_hat - 1.0) < 0.05


def test_certificate_huge_perturbation_fails(quartic_symplectic, symp_split):
    f = symplectic_double_shear(quartic_symplectic, 10.0)
    cert = certify_partial_hyperbolicity(f, symp_split, grid_n=4)
    assert not cert.verified
    assert len(cert.worst_point) == 4


def test_certificate_identity_not_partially_hyperbolic():
    from phlab.lattice import LatticeAutomorphism, spectral_splitting

    ident = LatticeAutomorphism(((1, 0), (0, 1)))
    f = PerturbedDiffeo(ident, (), 0.0, "volume_preserving")
    cert = certify_partial_hyperbolicity(f, spectral_splitting(ident), grid_n=4)
    assert not cert.verified


def test_certificate_json(linear_map, symp_split):
    cert = certify_partial_hyperbolicity(linear_map, symp_split, grid_n=4)
    obj = cert.to_json_obj()
    assert obj["schema"] == "phlab.cone_certificate/1"
    assert "worst_point" in obj and "margin" in obj
