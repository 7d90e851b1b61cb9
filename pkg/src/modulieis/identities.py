"""Catalog of pointwise algebraic identities and their verifier.

Identity ids I1 through I12 are the library's fixed verification
surface.  All checks are exact; enumeration is exhaustive for levels
up to 7 and seeded sampling above.  Conventions: the identity point
carries lam = mu = nu = x = y = 0, and sums over the torsion group
include it under those conventions.

I1   sum of x over nonzero torsion vanishes
I2   negation parity: lam, nu, y flip sign; mu, x do not
I3   full-group sums of lam, mu, x, nu, y all vanish
I4   squared chord slope equals the coordinate sum of its triple
I5   chord intercept nu = y - lam*x at each point of the triple
I6   x = lam^2 - 2 mu and y = 3 nu - 3 mu lam + lam^3 pointwise
I7   lam-products plus mu-sum vanish on collinear triples
I8   pairing transform sends (lam, mu, nu) to (lam, x, y)
I9   inverse transform recovers (mu, nu) from (x, y)
I10  (x_P - x_R)(lam_P + lam_Q + lam_R) = y_P - y_R on triples
I11  squared-slope linear systems reconstruct every x-coordinate
I12  level-2 degeneration: all lam vanish; x-coordinates sum to 0
"""

import json
import random

from .errors import (
    IdentityUnknown,
    InsufficientPoints,
    PreconditionUnsatisfiable,
)
from .field import solve_linear
from .series import profile_values, slope_of_triple

ALL_IDENTITIES = tuple(f"I{k}" for k in range(1, 13))

DESCRIPTIONS = {
    "I1": "sum of torsion x-coordinates vanishes",
    "I2": "profile parity under point negation",
    "I3": "full-group profile sums vanish",
    "I4": "squared chord slope = sum of x over the triple",
    "I5": "chord intercept consistent across the triple",
    "I6": "coordinates recovered from the profile",
    "I7": "chord slope products balance the mu sum",
    "I8": "pairing transform lam/mu/nu -> lam/x/y",
    "I9": "inverse pairing transform x/y -> mu/nu",
    "I10": "weight-3 chord relation",
    "I11": "squared-slope systems recover x-coordinates",
    "I12": "level-2 degeneration",
}


class IdentityReport:
    """Outcome of one identity run; empty failures means pass."""

    __slots__ = ("identity", "level", "prime", "trials", "failures")

    def __init__(self, identity, level, prime, trials, failures):
        self.identity = identity
        self.level = level
        self.prime = prime
        self.trials = trials
        self.failures = failures

    @property
    def passed(self):
        return not self.failures

    def to_json(self):
        return {
            "identity": self.identity,
            "level": self.level,
            "prime": self.prime,
            "trials": self.trials,
            "failures": self.failures,
        }

    def __repr__(self):
        state = "pass" if self.passed else f"FAIL({len(self.failures)})"
        return f"IdentityReport({self.identity}, level={self.level}, {state})"


def _nonzero_indices(table):
    return [ij for ij in table.indices() if ij != (0, 0)]


def _collinear_triples(table, rng, trials):
    """Triples (P, Q, R) of nonzero points with P + Q + R = O."""
    n = table.level
    out = []
    idxs = _nonzero_indices(table)
    if trials is None:
        for p in idxs:
            for q in idxs:
                r = table.neg_idx(table.add_idx(p, q))
                if r == (0, 0):
                    continue
                out.append((p, q, r))
    else:
        while len(out) < trials:
            p = rng.choice(idxs)
            q = rng.choice(idxs)
            r = table.neg_idx(table.add_idx(p, q))
            if r == (0, 0):
                continue
            out.append((p, q, r))
    return out


def _fmt(desc, v):
    return repr(desc.raw_to_json(v))


def verify_identity(identity, table, trials=None, seed=0):
    """Run one catalog identity over a torsion table.

    trials=None means exhaustive for level <= 7 (and falls back to 512
    samples above); failures are witness tuples, empty on success.
    """
    if identity not in ALL_IDENTITIES:
        raise IdentityUnknown(f"unknown identity {identity!r}")
    n = table.level
    d = table.curve.desc
    if identity == "I12" and n != 2:
        raise PreconditionUnsatisfiable("I12 is the level-2 degeneration")
    if identity == "I11" and n < 3:
        raise PreconditionUnsatisfiable("I11 needs level >= 3")
    if trials is None and n > 7:
        trials = 512
    rng = random.Random(seed)
    checker = globals()[f"_check_{identity}"]
    failures = checker(table, rng, trials)
    ntrials = -1 if trials is None else trials
    return IdentityReport(identity, n, d.char, ntrials, failures)


def _check_I1(table, rng, trials):
    d = table.curve.desc
    acc = d.zero
    for ij in _nonzero_indices(table):
        acc = d.add(acc, table.point(ij).x)
    return [] if d.is_zero(acc) else [("sum_x", _fmt(d, acc))]


def _check_I2(table, rng, trials):
    d = table.curve.desc
    bad = []
    for ij in _nonzero_indices(table):
        lam, mu, nu, x, y = profile_values(table, ij)
        lam2, mu2, nu2, x2, y2 = profile_values(table, table.neg_idx(ij))
        if (
            lam2 != d.neg(lam)
            or mu2 != mu
            or nu2 != d.neg(nu)
            or x2 != x
            or y2 != d.neg(y)
        ):
            bad.append((ij,))
    return bad


def _check_I3(table, rng, trials):
    d = table.curve.desc
    sums = [d.zero] * 5
    for ij in table.indices():
        vals = profile_values(table, ij)
        sums = [d.add(s, v) for s, v in zip(sums, vals)]
    names = ("lam", "mu", "nu", "x", "y")
    return [(f"sum_{nm}", _fmt(d, s)) for nm, s in zip(names, sums) if not d.is_zero(s)]


def _check_I4(table, rng, trials):
    d = table.curve.desc
    bad = []
    for p, q, r in _collinear_triples(table, rng, trials):
        lam = slope_of_triple(table, p, q, r)
        lhs = d.mul(lam, lam)
        rhs = d.add(d.add(table.point(p).x, table.point(q).x), table.point(r).x)
        if lhs != rhs:
            bad.append((p, q, r, _fmt(d, d.sub(lhs, rhs))))
    return bad


def _check_I5(table, rng, trials):
    d = table.curve.desc
    bad = []
    for p, q, r in _collinear_triples(table, rng, trials):
        lam = slope_of_triple(table, p, q, r)
        nus = set()
        for ij in (p, q, r):
            pt = table.point(ij)
            nus.add(d.sub(pt.y, d.mul(lam, pt.x)))
        if len(nus) != 1:
            bad.append((p, q, r))
    return bad


def _check_I6(table, rng, trials):
    d = table.curve.desc
    bad = []
    for ij in _nonzero_indices(table):
        lam, mu, nu, x, y = profile_values(table, ij)
        want_x = d.sub(d.mul(lam, lam), d.mul(d.norm(2), mu))
        want_y = d.add(
            d.sub(d.mul(d.norm(3), nu), d.mul(d.norm(3), d.mul(mu, lam))),
            d.pow(lam, 3),
        )
        if want_x != x or want_y != y:
            bad.append((ij,))
    return bad


def _check_I7(table, rng, trials):
    d = table.curve.desc
    bad = []
    for p, q, r in _collinear_triples(table, rng, trials):
        lp = profile_values(table, p)
        lq = profile_values(table, q)
        lr = profile_values(table, r)
        acc = d.add(
            d.add(d.mul(lp[0], lq[0]), d.mul(lq[0], lr[0])), d.mul(lp[0], lr[0])
        )
        acc = d.add(acc, d.add(d.add(lp[1], lq[1]), lr[1]))
        if not d.is_zero(acc):
            bad.append((p, q, r, _fmt(d, acc)))
    return bad


def _pair_exponent(table, q, r):
    return (q[0] * r[1] - q[1] * r[0]) % table.level


def _check_I8(table, rng, trials):
    d = table.curve.desc
    n = table.level
    bad = []
    linv = d.inv(d.norm(n))
    prof = {ij: profile_values(table, ij) for ij in table.indices()}
    for r in table.indices():
        s_lam = d.zero
        s_mu = d.zero
        s_nu = d.zero
        for q in table.indices():
            e = d.pow(d.zeta, (d.level // n) * _pair_exponent(table, q, r))
            lam, mu, nu, _, _ = prof[q]
            s_lam = d.add(s_lam, d.mul(lam, e))
            s_mu = d.add(s_mu, d.mul(mu, e))
            s_nu = d.add(s_nu, d.mul(nu, e))
        lam_r, _, _, x_r, y_r = prof[r]
        if lam_r != d.neg(d.mul(linv, s_lam)):
            bad.append(("lam", r))
        if x_r != d.neg(s_mu):
            bad.append(("x", r))
        if y_r != d.neg(d.mul(d.norm(n), s_nu)):
            bad.append(("y", r))
    return bad


def _check_I9(table, rng, trials):
    d = table.curve.desc
    n = table.level
    bad = []
    l2inv = d.inv(d.norm(n * n))
    l3inv = d.inv(d.norm(n * n * n))
    prof = {ij: profile_values(table, ij) for ij in table.indices()}
    for r in table.indices():
        s_x = d.zero
        s_y = d.zero
        for q in table.indices():
            e = d.pow(d.zeta, (d.level // n) * _pair_exponent(table, q, r))
            _, _, _, x, y = prof[q]
            s_x = d.add(s_x, d.mul(x, e))
            s_y = d.add(s_y, d.mul(y, e))
        _, mu_r, nu_r, _, _ = prof[r]
        if mu_r != d.neg(d.mul(l2inv, s_x)):
            bad.append(("mu", r))
        if nu_r != d.neg(d.mul(l3inv, s_y)):
            bad.append(("nu", r))
    return bad


def _check_I10(table, rng, trials):
    d = table.curve.desc
    bad = []
    for p, q, r in _collinear_triples(table, rng, trials):
        lp = profile_values(table, p)
        lq = profile_values(table, q)
        lr = profile_values(table, r)
        lam_sum = d.add(d.add(lp[0], lq[0]), lr[0])
        lhs = d.mul(d.sub(lp[3], lr[3]), lam_sum)
        rhs = d.sub(lp[4], lr[4])
        if lhs != rhs:
            bad.append((p, q, r))
    return bad


def _check_I11(table, rng, trials):
    d = table.curve.desc
    bad = []
    recovered = reconstruct_x_coordinates(table)
    for ij in _nonzero_indices(table):
        if recovered[ij] != table.point(ij).x:
            bad.append((ij, _fmt(d, recovered[ij])))
    return bad


def _check_I12(table, rng, trials):
    d = table.curve.desc
    bad = []
    acc = d.zero
    for ij in _nonzero_indices(table):
        lam, _, _, x, _ = profile_values(table, ij)
        if not d.is_zero(lam):
            bad.append(("lam_nonzero", ij))
        acc = d.add(acc, x)
    if not d.is_zero(acc):
        bad.append(("sum_e", _fmt(d, acc)))
    return bad


# ---------------------------------------------------------------------------
# reconstruction from chord slopes alone


def _sq_slope(table, a, b, c):
    d = table.curve.desc
    lam = slope_of_triple(table, a, b, c)
    return d.mul(lam, lam)


def reconstruct_x_coordinates(table):
    """Solve the squared-slope linear systems for every x-coordinate.

    Level 3 uses the inflection-tangent relation (slope^2 = 3x); level 4
    the six-equation basis system (determinant -12); level >= 5 the
    four-equation multiple-of-P system (determinant 6), with a chord
    completion for points of non-maximal order.
    """
    d = table.curve.desc
    n = table.level
    out = {}
    if n == 3:
        third = d.inv(d.norm(3))
        for ij in _nonzero_indices(table):
            out[ij] = d.mul(third, _sq_slope(table, ij, ij, ij))
        return out
    if n == 4:
        return _reconstruct_x_level4(table)
    order = {ij: table.curve.order_of(table.point(ij), n) for ij in _nonzero_indices(table)}
    for ij, o in order.items():
        if ij in out or o != n:
            continue
        rows = [
            [2, 1, 0, 0],
            [1, 1, 1, 0],
            [1, 0, 1, 1],
            [0, 2, 0, 1],
        ]
        p1 = ij
        p2 = table.smul_idx(2, ij)
        p3 = table.smul_idx(3, ij)
        p4 = table.smul_idx(4, ij)
        rhs = [
            _sq_slope(table, p1, p1, table.smul_idx(-2, ij)),
            _sq_slope(table, p1, p2, table.smul_idx(-3, ij)),
            _sq_slope(table, p1, p3, table.smul_idx(-4, ij)),
            _sq_slope(table, p2, p2, table.smul_idx(-4, ij)),
        ]
        sol = solve_linear(d, [[d.norm(v) for v in row] for row in rows], rhs)
        for pt, val in zip((p1, p2, p3, p4), sol):
            out[pt] = val
            out[table.neg_idx(pt)] = val
    # lower-order points via a chord through two exact-order points
    for ij, o in order.items():
        if ij in out:
            continue
        done = False
        for rr in _nonzero_indices(table):
            if order[rr] != n:
                continue
            pprime = table.add_idx(table.neg_idx(ij), rr)
            if pprime == (0, 0) or order.get(pprime) != n:
                continue
            if pprime not in out or rr not in out:
                continue
            s = _sq_slope(table, ij, pprime, table.neg_idx(rr))
            out[ij] = d.sub(d.sub(s, out[pprime]), out[rr])
            done = True
            break
        if not done:
            raise InsufficientPoints(f"no chord completion for index {ij}")
    return out


def _reconstruct_x_level4(table):
    d = table.curve.desc
    n = 4
    out = {}
    idxs = _nonzero_indices(table)

    def solve_with_basis(qv, rv):
        q2 = table.smul_idx(2, qv)
        r2 = table.smul_idx(2, rv)
        qr = table.add_idx(qv, rv)
        qmr = table.add_idx(qv, table.neg_idx(rv))
        rows = [
            [2, 1, 0, 0, 0, 0],
            [0, 0, 2, 1, 0, 0],
            [1, 0, 1, 0, 1, 0],
            [1, 0, 1, 0, 0, 1],
            [0, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1],
        ]
        rhs = [
            _sq_slope(table, qv, qv, table.smul_idx(-2, qv)),
            _sq_slope(table, rv, rv, table.smul_idx(-2, rv)),
            _sq_slope(table, qv, rv, table.neg_idx(qr)),
            _sq_slope(table, qv, table.neg_idx(rv), table.neg_idx(qmr)),
            _sq_slope(table, q2, table.neg_idx(qr), table.neg_idx(qmr)),
            _sq_slope(table, r2, table.neg_idx(qr), qmr),
        ]
        sol = solve_linear(d, [[d.norm(v) for v in row] for row in rows], rhs)
        for pt, val in zip((qv, q2, rv, r2, qr, qmr), sol):
            out.setdefault(pt, val)
            out.setdefault(table.neg_idx(pt), val)

    for ij in idxs:
        if ij in out:
            continue
        o = table.curve.order_of(table.point(ij), n)
        qv = ij if o == 4 else None
        if qv is None:
            # point of order 2: express as [2]Q for an order-4 Q
            for cand in idxs:
                if table.smul_idx(2, cand) == ij:
                    qv = cand
                    break
        for rv in idxs:
            det = (qv[0] * rv[1] - qv[1] * rv[0]) % n
            if det % 2 == 1:
                solve_with_basis(qv, rv)
                break
        if ij not in out:
            raise InsufficientPoints(f"no basis completion for index {ij}")
    return out


def reconstruct_generators(table):
    """Rebuild all coordinates and the curve coefficients from slopes only.

    Returns (points, a, b) where points maps each nonzero index to its
    recovered (x, y); everything is derived from chord slopes through
    torsion points, never from the stored coordinates.
    """
    d = table.curve.desc
    n = table.level
    if n < 3:
        raise PreconditionUnsatisfiable("reconstruction needs level >= 3")
    xs = reconstruct_x_coordinates(table)
    idxs = _nonzero_indices(table)
    ys = {}
    for ij in idxs:
        pt_y = None
        for q in idxs:
            if q == ij or q == table.neg_idx(ij):
                continue
            if xs[ij] == xs[q]:
                continue
            r1 = table.neg_idx(table.add_idx(ij, q))
            r2 = table.neg_idx(table.add_idx(ij, table.neg_idx(q)))
            if r1 == (0, 0) or r2 == (0, 0):
                continue
            s = d.add(
                slope_of_triple(table, ij, q, r1),
                slope_of_triple(table, ij, table.neg_idx(q), r2),
            )
            # s = 2 y / (x_P - x_Q)
            pt_y = d.mul(s, d.mul(d.sub(xs[ij], xs[q]), d.inv(d.norm(2))))
            break
        if pt_y is None:
            raise InsufficientPoints(f"no slope pair recovers y at {ij}")
        ys[ij] = pt_y
    a = None
    b = None
    for ij in idxs:
        if d.is_zero(ys[ij]):
            continue
        m2 = table.smul_idx(-2, ij)
        if m2 == (0, 0):
            continue
        tangent = slope_of_triple(table, ij, ij, m2)
        a = d.sub(
            d.mul(d.norm(2), d.mul(ys[ij], tangent)),
            d.mul(d.norm(3), d.mul(xs[ij], xs[ij])),
        )
        b = d.sub(
            d.sub(d.mul(ys[ij], ys[ij]), d.pow(xs[ij], 3)), d.mul(a, xs[ij])
        )
        break
    if a is None:
        raise InsufficientPoints("no point outside the 2-torsion")
    points = {ij: (xs[ij], ys[ij]) for ij in idxs}
    return points, a, b


def run_suite(table, identities=None, trials=None, seed=0):
    """Run a list of identities (default: all applicable) on one table."""
    n = table.level
    if identities is None or identities == "all":
        identities = [
            i
            for i in ALL_IDENTITIES
            if (i != "I12" or n == 2) and (i != "I11" or n >= 3)
        ]
    return [verify_identity(i, table, trials=trials, seed=seed) for i in identities]


def reports_to_json(reports):
    return json.dumps([r.to_json() for r in reports], sort_keys=True)
