import pytest

from modulieis.errors import IdentityUnknown, PreconditionUnsatisfiable
from modulieis.identities import (
    ALL_IDENTITIES,
    reconstruct_generators,
    run_suite,
    verify_identity,
)
from modulieis.series import lambda_via_telescope, profile_values
from conftest import get_table


def test_unknown_identity(table19_3):
    with pytest.raises(IdentityUnknown):
        verify_identity("I99", table19_3)


def test_preconditions(table19_3):
    with pytest.raises(PreconditionUnsatisfiable):
        verify_identity("I12", table19_3)
    t2 = get_table(11, 2)
    with pytest.raises(PreconditionUnsatisfiable):
        verify_identity("I11", t2)


def test_chord_identity_exhaustive(table29_4):
    rep = verify_identity("I4", table29_4)
    assert rep.passed


def test_pairing_transform_at_identity_reduces_to_sum(table19_3):
    # with the trivial second argument every pairing value is 1, so the
    # transform identity at the origin is the vanishing of the lam-sum
    t = table19_3
    d = t.curve.desc
    acc = d.zero
    for q in t.indices():
        acc = d.add(acc, profile_values(t, q)[0])
    assert d.is_zero(acc)
    assert verify_identity("I8", t).passed


def test_profile_oracle_via_telescoping(table71_5):
    # I6 asserts coordinates match the profile; cross-check the profile
    # itself against the chord-only telescoping route first
    t = table71_5
    for ij in t.indices(include_identity=False):
        assert lambda_via_telescope(t, ij) == profile_values(t, ij)[0]
    assert verify_identity("I6", t).passed


def test_suite_all_levels_pass():
    for (p, level) in ((19, 3), (29, 4), (71, 5), (197, 7), (11, 2)):
        t = get_table(p, level)
        reports = run_suite(t)
        assert all(r.passed for r in reports), [
            (r.identity, r.failures[:2]) for r in reports if not r.passed
        ]


def test_level2_degeneration():
    t = get_table(11, 2)
    rep = verify_identity("I12", t)
    assert rep.passed


def test_report_shape(table19_3):
    rep = verify_identity("I1", table19_3)
    j = rep.to_json()
    assert j["identity"] == "I1" and j["failures"] == []
    assert set(j) == {"identity", "level", "prime", "trials", "failures"}


def test_catalog_is_complete():
    assert ALL_IDENTITIES == tuple(f"I{k}" for k in range(1, 13))


def test_reconstruct_generators_matches_tables():
    for (p, level) in ((19, 3), (31, 3), (37, 3), (29, 4), (71, 5)):
        t = get_table(p, level)
        pts, a, b = reconstruct_generators(t)
        assert a == t.curve.a and b == t.curve.b
        for ij, (x, y) in pts.items():
            pt = t.point(ij)
            assert (x, y) == (pt.x, pt.y)


def test_reconstruct_level3_inflection_route(table19_3):
    # x is recovered from one third of the squared inflection slope
    from modulieis.identities import reconstruct_x_coordinates

    t = table19_3
    d = t.curve.desc
    xs = reconstruct_x_coordinates(t)
    from modulieis.series import slope_of_triple

    for ij in t.indices(include_identity=False):
        lam = slope_of_triple(t, ij, ij, ij)
        assert d.mul(lam, lam) == d.mul(d.norm(3), t.point(ij).x)
        assert xs[ij] == t.point(ij).x
