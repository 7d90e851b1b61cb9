"""Divisor reduction into chord/vertical factors, double-and-add style.

One engine serves two consumers: the series module multiplies truncated
Laurent expansions of the factors, the pairing module multiplies their
values at a fixed evaluation point.  An "algebra" object supplies
one/mul/inv plus the two elementary factors; every factor is normalized
(unit leading coefficient at the origin of the uniformizer), so a
product of factors is again normalized and no constants need tracking.

reduce_divisor computes the normalized function attached to the
principal divisor sum(m_i * (P_i)) + (implied multiple of the identity
making the degree zero); the oplus-sum of the entries must vanish.
"""


class ChainDegenerate(Exception):
    """Evaluation point collided with a zero or pole of a chain factor."""


def _step(curve, alg, acc, a, b, exponent):
    """Multiply in the factor for (A)+(B) - (A+B) - (O); return (acc, A+B)."""
    if a.is_identity():
        return acc, b
    if b.is_identity():
        return acc, a
    c = curve.add(a, b)
    if c.is_identity():
        f = alg.vert_factor(a)
        acc = alg.mul(acc, f if exponent > 0 else alg.inv(f))
        return acc, c
    f = alg.line_factor(a, b)
    v = alg.vert_factor(c)
    if exponent > 0:
        acc = alg.mul(alg.mul(acc, f), alg.inv(v))
    else:
        acc = alg.mul(alg.mul(acc, alg.inv(f)), v)
    return acc, c


def _point_power(curve, alg, p, k):
    """Normalized function for k(P) - ([k]P) - (k-1)(O), plus [k]P."""
    g = alg.one()
    r = p
    for bit in bin(k)[3:]:
        g = alg.mul(g, g)
        g, r = _step(curve, alg, g, r, r, 1)
        if bit == "1":
            g, r = _step(curve, alg, g, r, p, 1)
    return g, r


def reduce_divisor(curve, entries, alg):
    """Normalized function for sum(m*(P)) - (deg)(O); entries are
    (CurvePoint, multiplicity) pairs with nonzero points."""
    total = alg.one()
    items = []
    for pt, m in entries:
        if m == 0 or pt.is_identity():
            continue
        g, r = _point_power(curve, alg, pt, abs(m))
        total = alg.mul(total, g if m > 0 else alg.inv(g))
        if not r.is_identity():
            items.append((r, 1 if m > 0 else -1))
    plus = []
    for pt, sign in items:
        if sign < 0:
            # -( (P)-(O) ) = ( (-P)-(O) ) - div(vertical at P)
            total = alg.mul(total, alg.inv(alg.vert_factor(pt)))
            plus.append(curve.neg(pt))
        else:
            plus.append(pt)
    if not plus:
        return total
    acc = plus[0]
    for nxt in plus[1:]:
        total, acc = _step(curve, alg, total, acc, nxt, 1)
    if not acc.is_identity():
        raise ValueError("divisor does not sum to the identity")
    return total


class ValueAlgebra:
    """Evaluate normalized factors at a fixed affine point."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, at):
        if at.is_identity():
            raise ChainDegenerate("cannot evaluate at the identity")
        self.curve = curve
        self.x = at.x
        self.y = at.y

    def one(self):
        return self.curve.desc.one

    def mul(self, u, v):
        return self.curve.desc.mul(u, v)

    def inv(self, u):
        d = self.curve.desc
        if d.is_zero(u):
            raise ChainDegenerate("pole hit during evaluation")
        return d.inv(u)

    def line_factor(self, a, b):
        d = self.curve.desc
        if a.x == b.x and (a.y != b.y or d.is_zero(a.y)):
            # the chord is vertical only when b = -a, handled elsewhere
            raise ChainDegenerate("unexpected vertical chord")
        if a.key() == b.key():
            num = d.add(d.mul(d.norm(3), d.mul(a.x, a.x)), self.curve.a)
            lam = d.div(num, d.mul(d.norm(2), a.y))
        else:
            lam = d.div(d.sub(a.y, b.y), d.sub(a.x, b.x))
        nu = d.sub(a.y, d.mul(lam, a.x))
        val = d.add(d.sub(d.mul(lam, self.x), self.y), nu)
        if d.is_zero(val):
            raise ChainDegenerate("zero hit during evaluation")
        return val

    def vert_factor(self, a):
        d = self.curve.desc
        val = d.sub(self.x, a.x)
        if d.is_zero(val):
            raise ChainDegenerate("zero hit during evaluation")
        return val
