import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phlab.intpoly import IntPoly
from phlab.lattice import (
    CertificationError,
    LatticeAutomorphism,
    center_foliation_dense,
    char_poly_exact,
    classify,
    inverse_exact,
    is_diagonalizable,
    is_ergodic,
    is_symplectic,
    is_totally_irreducible,
    minimal_polynomial,
    spectral_splitting,
    standard_symplectic_form,
)

from oracles import numeric_ergodicity_scan

QUARTIC_POLY = IntPoly((1, -1, -1, -1, 1))


def blockdiag(a: LatticeAutomorphism, b: LatticeAutomorphism) -> LatticeAutomorphism:
    da, db = a.d, b.d
    rows = [[0] * (da + db) for _ in range(da + db)]
    for i in range(da):
        for j in range(da):
            rows[i][j] = a.rows[i][j]
    for i in range(db):
        for j in range(db):
            rows[da + i][da + j] = b.rows[i][j]
    return LatticeAutomorphism(tuple(tuple(r) for r in rows))


# -- characteristic polynomial -------------------------------------------------

def test_char_poly_identity_and_cat():
    assert char_poly_exact(((1, 0), (0, 1))) == IntPoly((1, -2, 1))
    assert char_poly_exact(((2, 1), (1, 1))) == IntPoly((1, -3, 1))


def test_char_poly_companion_roundtrip(quartic):
    assert quartic.char_poly == QUARTIC_POLY


matrices = st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_cayley_hamilton_random(rows):
    p = char_poly_exact(rows)
    M = np.array(rows, dtype=object)
    acc = np.zeros((3, 3), dtype=object)
    power = np.eye(3, dtype=object)
    for c in p.coeffs:
        acc = acc + c * power
        power = power @ M
    assert np.all(acc == 0)


def test_cayley_hamilton_battery():
    rng = np.random.default_rng(123)
    for _ in range(1000):
        d = int(rng.integers(1, 7))
        rows = rng.integers(-9, 10, size=(d, d)).tolist()
        p = char_poly_exact(rows)
        M = np.array(rows, dtype=object)
        acc = np.zeros((d, d), dtype=object)
        power = np.eye(d, dtype=object)
        for c in p.coeffs:
            acc = acc + c * power
            power = power @ M
        assert np.all(acc == 0)


def test_exact_inverse(quartic):
    M = np.array(quartic.rows, dtype=object)
    Minv = np.array(inverse_exact(quartic.rows), dtype=object)
    assert np.all(M @ Minv == np.eye(4, dtype=object))
    with pytest.raises(ValueError):
        inverse_exact(((2, 0), (0, 1)))


# -- classification flags -------------------------------------------------------

def test_ergodic_examples():
    assert is_ergodic(QUARTIC_POLY)[0]
    ok, why = is_ergodic(IntPoly((1, 0, 1)))
    assert not ok and "4" in why
    ok, why = is_ergodic(IntPoly((1, -2, -1, -2, 1)))
    assert not ok and "3" in why


def test_ergodic_agrees_with_numeric_scan():
    rng = np.random.default_rng(5)
    for _ in range(120):
        coeffs = tuple(int(v) for v in rng.integers(-3, 4, size=4)) + (1,)
        p = IntPoly(coeffs)
        exact, _ = is_ergodic(p)
        numeric, closest = numeric_ergodicity_scan(p)
        if exact != numeric:
            # near-threshold gap: the exact test is authoritative
            assert 1e-11 < closest < 1e-7
        else:
            assert exact == numeric


def test_totally_irreducible(quartic, cat):
    ok, why = is_totally_irreducible(quartic)
    assert ok, why
    ok, _ = is_totally_irreducible(cat)
    assert ok
    double = blockdiag(cat, cat)
    ok, why = is_totally_irreducible(double)
    assert not ok and "reducible" in why
    # x^2 + 1: the map itself has root-of-unity eigenvalues
    rot = LatticeAutomorphism(((0, -1), (1, 0)))
    ok, why = is_totally_irreducible(rot)
    assert not ok


def test_symplectic(quartic, quartic_symplectic, cat):
    assert is_symplectic(quartic_symplectic)[0]
    assert not is_symplectic(quartic)[0]  # companion form does not preserve standard J
    assert is_symplectic(cat)[0]  # SL(2) = Sp(2)
    J = standard_symplectic_form(4)
    LJ = LatticeAutomorphism(tuple(tuple(int(x) for x in row) for row in J))
    assert is_symplectic(LJ)[0]
    odd = LatticeAutomorphism(((1,),))
    ok, why = is_symplectic(odd)
    assert not ok and "odd" in why


def test_diagonalizable(cat):
    assert is_diagonalizable(cat)[0]
    jordan = LatticeAutomorphism(((1, 1), (0, 1)))
    assert not is_diagonalizable(jordan)[0]
    double = blockdiag(cat, cat)
    assert is_diagonalizable(double)[0]
    assert minimal_polynomial(double.rows) == IntPoly((1, -3, 1))


def test_center_foliation_dense(quartic, cat):
    assert center_foliation_dense(quartic)[0]
    ok, why = center_foliation_dense(blockdiag(quartic, cat))[0:2]
    assert not ok
    ident = LatticeAutomorphism(((1, 0), (0, 1)))
    assert center_foliation_dense(blockdiag(quartic, ident))[0]


# -- spectral splitting ----------------------------------------------------------

def test_splitting_quartic(quartic_split):
    s = quartic_split
    assert (s.dim_stable, s.dim_center, s.dim_unstable) == (1, 2, 1)
    assert s.r_L == 1.0 and s.r_u == 1.0 and s.r_s == 1.0
    assert abs(s.h_top - 0.5435350) < 1e-6
    assert abs(s.rho_u_min - 1.7220838) < 1e-6
    assert s.invariance_residual <= 1e-10
    assert not s.defective
    # the center block is an exact rotation
    C = s.block("c")
    assert np.max(np.abs(C.T @ C - np.eye(2))) < 1e-12


def test_splitting_cat(cat_split):
    s = cat_split
    assert (s.dim_stable, s.dim_center, s.dim_unstable) == (1, 0, 1)
    assert abs(s.h_top - np.log((3 + np.sqrt(5)) / 2)) < 1e-12


def test_splitting_identity():
    ident = LatticeAutomorphism(((1, 0), (0, 1)))
    s = spectral_splitting(ident)
    assert (s.dim_stable, s.dim_center, s.dim_unstable) == (0, 2, 0)
    assert s.r_L == 1.0 and s.h_top == 0.0
    assert np.max(np.abs(s.basis_c - np.eye(2))) < 1e-12


def test_splitting_defective_jordan():
    jordan = LatticeAutomorphism(((1, 1), (0, 1)))
    s = spectral_splitting(jordan)
    assert s.defective
    assert (s.dim_stable, s.dim_center, s.dim_unstable) == (0, 2, 0)
    assert s.invariance_residual <= 1e-10


def test_splitting_unit_count_certified(quartic):
    # exact Sturm count must match the numeric one on a corpus of unimodular matrices
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 60:
        d = int(rng.integers(2, 5))
        rows = rng.integers(-2, 3, size=(d, d)).tolist()
        try:
            L = LatticeAutomorphism(tuple(tuple(int(v) for v in r) for r in rows))
        except ValueError:
            continue
        s = spectral_splitting(L)  # raises CertificationError on mismatch
        assert s.dim_stable + s.dim_center + s.dim_unstable == d
        checked += 1


def test_block_diagonal_double_quartic(quartic):
    double = blockdiag(quartic, quartic)
    s = spectral_splitting(double)
    assert (s.dim_stable, s.dim_center, s.dim_unstable) == (2, 4, 2)
    rep = classify(double, s)
    assert not rep.irreducible
    assert rep.ergodic
    assert rep.center_foliation_dense
    assert rep.diagonalizable_over_C


def test_classification_report_quartic(quartic, quartic_split):
    rep = classify(quartic, quartic_split)
    obj = rep.to_json_obj()
    assert obj["irreducible"] and obj["ergodic"] and obj["totally_irreducible"]
    assert obj["partially_hyperbolic_with_center"]
    assert obj["dims"] == {"stable": 1, "center": 2, "unstable": 1}
    assert not obj["symplectic"]
    assert "certificates" in obj and len(obj["certificates"]) >= 6


def test_classification_invariants_ergodic_even_center(quartic_symplectic):
    rep = classify(quartic_symplectic)
    assert rep.ergodic and rep.dim_center % 2 == 0
    assert rep.totally_irreducible and rep.irreducible and rep.ergodic


def test_matrix_json_roundtrip(quartic):
    obj = quartic.to_json_obj()
    back = LatticeAutomorphism.from_json(obj)
    assert back.rows == quartic.rows
    with pytest.raises(ValueError):
        LatticeAutomorphism.from_json({"d": 3, "rows": [[1, 0], [0, 1]]})
    big = 2**60
    enc = LatticeAutomorphism(((0, 1), (-1, big))).to_json_obj()
    assert enc["rows"][1][1] == str(big)
    assert LatticeAutomorphism.from_json(enc).rows[1][1] == big
