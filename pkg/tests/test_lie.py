"""Structure-constants machinery: brackets, splits, adjoint flows."""

import numpy as np
import pytest

from finslergeo import lie
from finslergeo.errors import DimensionMismatch


def test_builtin_brackets():
    h3 = lie.heisenberg3()
    e = np.eye(3)
    assert np.array_equal(lie.bracket(h3, e[0], e[1]), e[2])
    assert np.array_equal(lie.bracket(h3, e[1], e[0]), -e[2])
    assert np.array_equal(lie.bracket(h3, e[2], e[0]), np.zeros(3))
    su2 = lie.su2()
    assert np.array_equal(lie.bracket(su2, e[1], e[2]), e[0])
    assert np.array_equal(lie.bracket(su2, e[2], e[0]), e[1])


def test_bracket_bilinear_antisymmetric():
    rng = np.random.RandomState(666)
    su2 = lie.su2()
    for _ in range(200):
        x, y, z = rng.standard_normal((3, 3))
        a, b = rng.standard_normal(2)
        lhs = lie.bracket(su2, a * x + b * y, z)
        rhs = a * lie.bracket(su2, x, z) + b * lie.bracket(su2, y, z)
        assert np.max(np.abs(lhs - rhs)) < 1.0e-12
        assert np.max(np.abs(lie.bracket(su2, x, x))) < 1.0e-12
        assert np.max(np.abs(lie.bracket(su2, x, y) + lie.bracket(su2, y, x))) < 1.0e-12


def test_bracket_dimension_check():
    with pytest.raises(DimensionMismatch):
        lie.bracket(lie.su2(), np.ones(4), np.ones(3))


def test_jacobi_residual_builtins():
    for alg in (lie.heisenberg3(), lie.su2(), lie.abelian(4), lie.direct_sum(lie.su2(), lie.abelian(1))):
        mag, _ = lie.jacobi_residual(alg)
        assert mag <= 1.0e-14


def test_project_m():
    dec = lie.ReductiveDecomposition(lie.su2(), m_indices=(0, 1), h_indices=(2,))
    x = np.array([1.0, 2.0, 3.0])
    p = lie.project_m(dec, x)
    assert np.array_equal(p, np.array([1.0, 2.0, 0.0]))
    assert np.array_equal(lie.project_m(dec, p), p)
    h_only = np.array([0.0, 0.0, 5.0])
    assert np.array_equal(lie.project_m(dec, h_only), np.zeros(3))
    rng = np.random.RandomState(1)
    a, b = rng.standard_normal(2)
    x, y = rng.standard_normal((2, 3))
    lhs = lie.project_m(dec, a * x + b * y)
    rhs = a * lie.project_m(dec, x) + b * lie.project_m(dec, y)
    assert np.max(np.abs(lhs - rhs)) < 1.0e-15


def test_validate_trivial_isotropy():
    dec = lie.ReductiveDecomposition(lie.heisenberg3(), m_indices=(0, 1, 2))
    report = lie.validate(dec)
    assert report.passed


def test_validate_detects_bad_split():
    # su(2) + R with a planted bracket [e4, e1] = e4 landing in h
    base = lie.direct_sum(lie.su2(), lie.abelian(1))
    c = base.c.copy()
    c[3, 0, 3] = 1.0
    c[0, 3, 3] = -1.0
    alg = lie.LieAlgebraData(4, c)
    dec = lie.ReductiveDecomposition(alg, m_indices=(0, 1, 2), h_indices=(3,))
    report = lie.validate(dec)
    by_name = {chk.name: chk for chk in report.checks}
    assert not by_name["[h, m] contained in m"].passed
    assert by_name["[h, m] contained in m"].witness == (3, 0, 3)


def test_validate_locates_jacobi_failure():
    rng = np.random.RandomState(7)
    raw = rng.standard_normal((4, 4, 4))
    c = raw - np.swapaxes(raw, 0, 1)
    alg = lie.LieAlgebraData(4, c)
    dec = lie.ReductiveDecomposition(alg, m_indices=tuple(range(4)))
    report = lie.validate(dec)
    by_name = {chk.name: chk for chk in report.checks}
    jac = by_name["Jacobi identity"]
    assert not jac.passed
    i, j, k, l = jac.witness
    total = 0.0
    for perm in ((i, j, k), (j, k, i), (k, i, j)):
        total += sum(c[perm[0], perm[1], m] * c[m, perm[2], l] for m in range(4))
    assert abs(abs(total) - jac.magnitude) < 1.0e-12


def test_ad_exp_identity_and_nilpotent():
    h3 = lie.heisenberg3()
    e = np.eye(3)
    assert np.array_equal(lie.ad_exp(h3, e[0], 0.0), np.eye(3))
    # ad(e1) is nilpotent: the series terminates and is exact
    mat = lie.ad_exp(h3, e[0], 1.0)
    assert np.array_equal(mat @ e[1], e[1] + e[2])


def test_ad_exp_taylor_order():
    su2 = lie.su2()
    rng = np.random.RandomState(12)
    x, y = rng.standard_normal((2, 3))
    errs = []
    for t in (1.0e-2, 1.0e-3):
        approx = y + t * lie.bracket(su2, x, y)
        errs.append(np.linalg.norm(lie.ad_exp(su2, x, t) @ y - approx))
    # halving t by 10 should shrink the defect by about 100
    ratio = errs[0] / errs[1]
    assert 50.0 < ratio < 200.0


def test_ad_exp_group_law():
    su2 = lie.su2()
    rng = np.random.RandomState(3)
    for _ in range(20):
        x = rng.standard_normal(3)
        s, t = rng.uniform(-2.0, 2.0, size=2)
        lhs = lie.ad_exp(su2, x, s) @ lie.ad_exp(su2, x, t)
        rhs = lie.ad_exp(su2, x, s + t)
        assert np.max(np.abs(lhs - rhs)) < 1.0e-10


def test_ad_exp_preserves_m_for_valid_split():
    dec = lie.ReductiveDecomposition(lie.su2(), m_indices=(0, 1), h_indices=(2,))
    assert lie.validate(dec).passed
    e3 = np.array([0.0, 0.0, 1.0])
    rng = np.random.RandomState(44)
    for _ in range(20):
        t = rng.uniform(-2.0, 2.0)
        v = rng.standard_normal(3)
        flow = lie.ad_exp(dec.algebra, e3, t)
        lhs = lie.project_m(dec, flow @ lie.project_m(dec, v))
        rhs = flow @ lie.project_m(dec, v)
        assert np.max(np.abs(lhs - rhs)) < 1.0e-10
