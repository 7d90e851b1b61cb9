"""Weil pairing on torsion subgroups.

The hot path is Miller evaluation of the normalized functions attached
to n(P) - n(O): either the direct antisymmetric quotient
(-1)^n f_P(Q) / f_Q(P), or, when an evaluation collides with a chain
zero, the offset-divisor form with disjoint supports.  Both compute the
same pairing; the orientation is fixed so that the translation law of
the level-scaled functions holds exactly as stated (the verification
oracle below), with no global inversion needed.
"""

from . import _miller
from .errors import PointNotTorsion, PreimageUnavailable
from ._miller import ChainDegenerate, ValueAlgebra


class PairingValue:
    """A root of unity zeta^k together with its exponent k."""

    __slots__ = ("desc", "order", "exponent", "raw")

    def __init__(self, desc, order, exponent, raw):
        self.desc = desc
        self.order = order
        self.exponent = exponent
        self.raw = raw

    def __eq__(self, other):
        if isinstance(other, PairingValue):
            return self.desc == other.desc and self.raw == other.raw
        return NotImplemented

    def __repr__(self):
        return f"PairingValue(zeta^{self.exponent} of order dividing {self.order})"


def _f_torsion_value(curve, n, p, at):
    """Value at `at` of the normalized function with divisor n(P) - n(O)."""
    alg = ValueAlgebra(curve, at)
    return _miller.reduce_divisor(curve, [(p, n)], alg)


def _pair_direct(curve, n, p, q):
    d = curve.desc
    num = _f_torsion_value(curve, n, p, q)
    den = _f_torsion_value(curve, n, q, p)
    val = d.div(num, den)
    if n % 2:
        val = d.neg(val)
    return val


def _pair_offset(curve, n, p, q, pool):
    d = curve.desc
    for s in pool:
        if s.is_identity():
            continue
        if s.key() == p.key():
            continue
        qs = curve.add(q, s)
        if qs.is_identity() or qs.key() == p.key():
            continue
        try:
            f1_top = _f_torsion_value(curve, n, p, qs)
            f1_bot = _f_torsion_value(curve, n, p, s)
            alg = ValueAlgebra(curve, p)
            g = _miller.reduce_divisor(curve, [(qs, n), (s, -n)], alg)
            return d.div(d.div(f1_top, f1_bot), g)
        except ChainDegenerate:
            continue
    raise PointNotTorsion("no usable offset point for the pairing")


def weil_pairing_points(curve, n, p, q, pool):
    """Raw pairing value e_n(p, q); pool supplies offset candidates."""
    d = curve.desc
    if p.is_identity() or q.is_identity() or p.key() == q.key():
        return d.one
    if not curve.mul(n, p).is_identity() or not curve.mul(n, q).is_identity():
        raise PointNotTorsion(f"points are not {n}-torsion")
    try:
        return _pair_direct(curve, n, p, q)
    except ChainDegenerate:
        return _pair_offset(curve, n, p, q, pool)


def weil_pairing(table, p, q, n=None):
    """Pairing of two table points on E[n] (n defaults to the table level)."""
    if n is None:
        n = table.level
    d = table.curve.desc
    pp = table.point(p) if isinstance(p, tuple) else p
    qq = table.point(q) if isinstance(q, tuple) else q
    pool = [table.points[ij] for ij in sorted(table.points)]
    raw = weil_pairing_points(table.curve, n, pp, qq, pool)
    zeta_n = d.pow(d.zeta, d.level // n) if d.level % n == 0 else None
    exponent = None
    if zeta_n is not None:
        acc = d.one
        for k in range(n):
            if d.is_zero(d.sub(acc, raw)):
                exponent = k
                break
            acc = d.mul(acc, zeta_n)
    if exponent is None:
        if not d.is_zero(d.sub(d.pow(raw, n), d.one)):
            raise PointNotTorsion("pairing value is not a root of unity")
    return PairingValue(d, n, exponent, raw)


def pairing_exponent_table(table):
    """e(P, Q) as zeta powers from the symplectic indexing.

    For the canonical table, e((i,j), (k,l)) = zeta^(i*l - j*k); the
    identification is validated against Miller evaluation in the test
    suite, exhaustively at small levels.
    """
    n = table.level

    def expo(u, v):
        return (u[0] * v[1] - u[1] * v[0]) % n

    return expo


# ---------------------------------------------------------------------------
# the defining translation law, kept as an oracle


def _g_function_entries(big_table, ell, q_idx):
    """Divisor entries of the level-scaled function attached to Q.

    Over a table of level ell^2: sum over T in E[ell] of (Q' + T) minus
    sum of (T), where [ell]Q' = Q.
    """
    n2 = big_table.level
    if n2 != ell * ell:
        raise PreimageUnavailable("need a table of level ell^2 for the oracle")
    # q_idx indexes a point of E[ell] inside the big table, so both
    # coordinates are multiples of ell; Q' = q_idx / ell solves [ell]Q' = Q
    if q_idx[0] % ell or q_idx[1] % ell:
        raise PreimageUnavailable("index has no ell-division preimage")
    qprime = (q_idx[0] // ell, q_idx[1] // ell)
    entries = {}
    for ti in range(ell):
        for tj in range(ell):
            t = (ti * ell, tj * ell)
            plus = big_table.add_idx(qprime, t)
            entries[plus] = entries.get(plus, 0) + 1
            if t != (0, 0):
                entries[t] = entries.get(t, 0) - 1
    return [(big_table.point(ij), m) for ij, m in sorted(entries.items()) if m]


def _g_value(big_table, entries, ell, at):
    d = big_table.curve.desc
    alg = ValueAlgebra(big_table.curve, at)
    val = _miller.reduce_divisor(big_table.curve, entries, alg)
    return d.mul(val, d.inv(d.norm(ell)))


def verify_translation_law(table, q, r, sample_points=3, big_table=None):
    """Check g_Q(P + R) = e(Q, R) g_Q(P) at several sample points.

    `table` holds E[ell]; the construction of g_Q needs an ell-division
    preimage of Q, taken from `big_table` of level ell^2 (built on the
    same curve if not supplied).  Returns a report dict; exact check.
    """
    from .curve import torsion_table

    ell = table.level
    d = table.curve.desc
    if big_table is None:
        try:
            big_table = torsion_table(table.curve, ell * ell)
        except Exception as exc:
            raise PreimageUnavailable(
                f"no rational E[{ell * ell}] on this curve: {exc}"
            ) from exc
    if big_table.curve != table.curve:
        raise PreimageUnavailable("preimage table must live on the same curve")
    # embed the level-ell indices into the big table
    q_pt = table.point(q) if isinstance(q, tuple) else q
    r_pt = table.point(r) if isinstance(r, tuple) else r
    q_big = big_table.index(q_pt)
    r_big = big_table.index(r_pt)
    entries = _g_function_entries(big_table, ell, q_big)
    support = {pt.key() for pt, _ in entries} | {None}
    ratios = []
    tried = 0
    for ij in sorted(big_table.points):
        if len(ratios) >= sample_points:
            break
        p_pt = big_table.point(ij)
        pr_pt = big_table.curve.add(p_pt, r_pt)
        if p_pt.key() in support or pr_pt.key() in support:
            continue
        tried += 1
        try:
            g_p = _g_value(big_table, entries, ell, p_pt)
            g_pr = _g_value(big_table, entries, ell, pr_pt)
        except ChainDegenerate:
            continue
        ratios.append(d.div(g_pr, g_p))
    if not ratios:
        raise PreimageUnavailable("no clean sample points for the oracle")
    consistent = all(d.is_zero(d.sub(x, ratios[0])) for x in ratios)
    root_ok = d.is_zero(d.sub(d.pow(ratios[0], ell), d.one))
    miller = weil_pairing(table, q_pt, r_pt)
    matches = d.is_zero(d.sub(ratios[0], miller.raw))
    return {
        "pairs": (q if isinstance(q, tuple) else table.index(q_pt),
                  r if isinstance(r, tuple) else table.index(r_pt)),
        "samples": len(ratios),
        "ratio_consistent": consistent,
        "ratio_is_root_of_unity": root_ok,
        "matches_miller": matches,
        "global_inversion_applied": False,
    }
