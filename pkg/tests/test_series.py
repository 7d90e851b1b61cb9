import random

import pytest

from modulieis.curve import WeierstrassCurve, scale_table
from modulieis.errors import (
    CharacteristicTooSmall,
    DegenerateDivisor,
    IdentityPoint,
)
from modulieis.field import FieldDescriptor, is_prime
from modulieis.series import (
    Laurent,
    TorsionDivisor,
    compose_with_n,
    expand_fD,
    expand_xy,
    lambda_profile,
    lambda_via_telescope,
    line_series,
    multiplication_series,
    profile_values,
    vertical_series,
)
from conftest import get_curve, get_table


def _random_curves(count, seed=0):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = rng.randrange(11, 200)
        if not is_prime(p):
            continue
        d = FieldDescriptor(p, 2)
        a, b = rng.randrange(1, p), rng.randrange(1, p)
        try:
            out.append(WeierstrassCurve(d, a, b))
        except Exception:
            continue
    return out


def test_xy_expansion_headline_coefficients():
    for c in _random_curves(10, seed=4):
        d = c.desc
        x, y, om = expand_xy(c, 8)
        assert x.lead == -2 and x.scale == d.one
        assert x.t_coeff(-2) == d.one
        assert d.is_zero(x.t_coeff(0))
        assert x.t_coeff(2) == d.neg(c.a)
        assert y.lead == -3 and y.scale == d.norm(-1)
        assert om.lead == 0 and om.t_coeff(0) == d.one
        assert om.t_coeff(4) == d.mul(d.norm(2), c.a)


def test_x_t_equals_minus_y_t2():
    c = get_curve(19, 3)
    d = c.desc
    x, y, _ = expand_xy(c, 8)
    lhs = x.laurent().shift(1)
    rhs = y.laurent().shift(2).neg()
    for k in range(-1, 6):
        assert lhs.coeff(k) == rhs.coeff(k)


def test_characteristic_guard():
    d = FieldDescriptor(5, 2)
    c = WeierstrassCurve(d, 1, 1)
    with pytest.raises(CharacteristicTooSmall):
        expand_xy(c, 8)


def test_vertical_series(table19_3):
    t = table19_3
    c = t.curve
    d = c.desc
    v = vertical_series(c, t, (1, 0), 8)
    P = t.point((1, 0))
    assert d.is_zero(v.c(1)) and d.is_zero(v.c(3))
    assert v.c(2) == d.neg(P.x)
    # oracle: subtract the constant from the expansion of x directly
    x, _, _ = expand_xy(c, 8)
    diff = x.laurent().sub(Laurent.const(d, P.x))
    for k in range(-2, 7):
        assert v.laurent().coeff(k) == diff.coeff(k)
    with pytest.raises(IdentityPoint):
        vertical_series(c, t, (0, 0), 8)


def test_line_series(table71_5):
    t = table71_5
    c = t.curve
    d = c.desc
    D = TorsionDivisor.of_points(5, (1, 0), (0, 1), (4, 4))
    ser, prof = line_series(c, t, D, 8)
    assert d.is_zero(prof.mu)
    P, Q, R = t.point((1, 0)), t.point((0, 1)), t.point((4, 4))
    assert d.mul(prof.lam, prof.lam) == d.add(d.add(P.x, Q.x), R.x)
    for pt in (P, Q, R):
        assert prof.nu == d.sub(pt.y, d.mul(prof.lam, pt.x))
    assert ser.t_coeff(-3 + 4) == d.neg(c.a)  # the t^4 unit coefficient
    with pytest.raises(DegenerateDivisor):
        line_series(c, t, TorsionDivisor.of_points(5, (1, 0), (0, 1), (1, 1)), 8)


def test_expand_fD_identity_divisor(table19_3):
    t = table19_3
    d = t.curve.desc
    one = expand_fD(t, TorsionDivisor(3, {(0, 0): 1}), 8)
    assert one.lead == 0 and one.scale == d.one
    assert all(d.is_zero(c) for c in one.coeffs)


def test_profile_parity(table71_5):
    t = table71_5
    d = t.curve.desc
    for ij in ((1, 0), (2, 3), (1, 4)):
        p1 = lambda_profile(t, ij)
        p2 = lambda_profile(t, t.neg_idx(ij))
        assert p2.lam == d.neg(p1.lam)
        assert p2.mu == p1.mu
        assert p2.nu == d.neg(p1.nu)


def test_multiplicativity_and_additivity(table71_5):
    t = table71_5
    d = t.curve.desc
    rng = random.Random(9)
    idxs = [(i, j) for i in range(5) for j in range(5)]
    for _ in range(4):
        D = TorsionDivisor(5, {rng.choice(idxs): rng.choice([1, 2, -1])})
        E = TorsionDivisor(5, {rng.choice(idxs): rng.choice([1, -2]),
                               rng.choice(idxs): 1})
        fD, fE, fDE = expand_fD(t, D, 8), expand_fD(t, E, 8), expand_fD(t, D.add(E), 8)
        prod = fD.mul(fE)
        assert prod.lead == fDE.lead and prod.scale == fDE.scale
        assert prod.coeffs[:6] == fDE.coeffs[:6]
        assert d.add(fD.c(1), fE.c(1)) == fDE.c(1)


def test_full_divisor_is_division_polynomial(table71_5):
    from modulieis.curve import _divpoly_g

    t = table71_5
    c = t.curve
    d = c.desc
    D = TorsionDivisor(5, {ij: 1 for ij in t.indices()})
    f = expand_fD(t, D, 8)
    assert f.lead == 1 - 25
    assert all(d.is_zero(x) for x in f.coeffs[:3])
    # matches the expansion of the degree-12 torsion polynomial over 5
    g5 = _divpoly_g(c, 5)
    x, _, _ = expand_xy(c, 8 + 48)
    acc = Laurent.const(d, 0)
    xp = Laurent.const(d, 1)
    for co in g5.coeffs:
        if not d.is_zero(co):
            acc = acc.add(xp.scalar(co))
        xp = xp.mul(x.laurent())
    ref = acc.scalar(d.inv(d.norm(5)))
    fl = f.laurent()
    assert all(fl.coeff(k) == ref.coeff(k) for k in range(-24, -16))


def test_coordinate_linkage(table29_4):
    t = table29_4
    d = t.curve.desc
    for ij in t.indices(include_identity=False):
        lam, mu, nu, x, y = profile_values(t, ij)
        assert x == d.sub(d.mul(lam, lam), d.mul(d.norm(2), mu))
        assert y == d.add(
            d.sub(d.mul(d.norm(3), nu), d.mul(d.norm(3), d.mul(mu, lam))),
            d.pow(lam, 3),
        )


def test_telescope_cross_check(table71_5):
    t = table71_5
    for ij in ((1, 0), (0, 1), (2, 3), (3, 3)):
        assert lambda_via_telescope(t, ij) == lambda_profile(t, ij).lam


def test_multiplication_series_opening():
    for c in _random_curves(10, seed=12):
        d = c.desc
        for n in (2, 3):
            _, _, tn = multiplication_series(c, n, 8)
            assert tn.coeff(1) == d.norm(n)
            for k in (2, 3, 4, 6):
                assert d.is_zero(tn.coeff(k))
            want = d.mul(
                d.mul(d.norm(2), c.a),
                d.div(d.sub(d.norm(n), d.norm(n ** 5)), d.norm(5)),
            )
            assert tn.coeff(5) == want


def test_compose_with_n_pattern(table71_5):
    t = table71_5
    c = t.curve
    d = c.desc
    rng = random.Random(3)
    for _ in range(3):
        ij = (rng.randrange(5), rng.randrange(5))
        if ij == (0, 0):
            continue
        prof = lambda_profile(t, ij)
        f = expand_fD(t, TorsionDivisor.single(5, ij), 8)
        assert compose_with_n(c, f, 1) == f
        for n in (2, 3):
            fn = compose_with_n(c, f, n)
            assert fn.lead == -1
            assert fn.scale == d.inv(d.norm(n))
            assert fn.c(1) == d.mul(prof.lam, d.norm(n))
            assert fn.c(2) == d.mul(prof.mu, d.norm(n * n))
            assert fn.c(3) == d.mul(prof.nu, d.norm(n ** 3))


def test_balanced_grading_under_rescaling(table19_3):
    t = table19_3
    c = t.curve
    d = c.desc
    rng = random.Random(8)
    for u in (2, 7, rng.randrange(1, 19)):
        uu = d.norm(u)
        st = scale_table(t, uu)
        x1, y1, o1 = expand_xy(c, 8)
        x2, y2, o2 = expand_xy(st.curve, 8)
        for s1, s2 in ((x1, x2), (y1, y2), (o1, o2)):
            for j in range(1, 9):
                assert s2.c(j) == d.mul(d.pow(uu, j), s1.c(j))
        D = TorsionDivisor(3, {(1, 0): 2, (2, 2): 1, (0, 1): -3})
        f1, f2 = expand_fD(t, D, 8), expand_fD(st, D, 8)
        for j in range(1, 9):
            assert f2.c(j) == d.mul(d.pow(uu, j), f1.c(j))


def test_series_json_shape(table19_3):
    f = expand_fD(table19_3, TorsionDivisor.single(3, (1, 0)), 6)
    j = f.to_json()
    assert j["lead"] == -1 and len(j["coeffs"]) == 7
