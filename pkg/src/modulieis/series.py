"""Truncated Laurent expansions at the origin of the curve.

The uniformizer throughout is t = -x/y.  Expansions of x, y and the
invariant differential are solved coefficient-by-coefficient from the
curve equation; normalized functions attached to torsion divisors are
accumulated as products of chord/vertical factors and an exact n-th
root.  The first three unit coefficients of such an expansion are the
slope-type invariants of the divisor (weights 1, 2, 3); coefficient j
is homogeneous of weight j under the quartic/sextic curve rescaling,
which is what "balanced" refers to.

Precision bookkeeping: an internal Laurent value knows its coefficients
for exponents lead <= k < prec (prec None meaning exact); all
arithmetic propagates prec so that truncation is never silently lost.
"""

from fractions import Fraction

from . import _miller
from .errors import (
    BadCharacteristic,
    CharacteristicTooSmall,
    DegenerateDivisor,
    IdentityPoint,
    UnsupportedDivisor,
)

_BIG = 1 << 40


class Laurent:
    """Internal truncated Laurent series with explicit precision."""

    __slots__ = ("desc", "lead", "prec", "coeffs")

    def __init__(self, desc, lead, coeffs, prec):
        # strip leading zeros (they shift the lead), trim at prec
        d = desc
        cs = list(coeffs)
        if prec is not None:
            cs = cs[: max(0, prec - lead)]
        while cs and d.is_zero(cs[0]):
            cs.pop(0)
            lead += 1
        while cs and d.is_zero(cs[-1]) and prec is None:
            cs.pop()
        self.desc = d
        self.lead = lead
        self.prec = prec
        self.coeffs = cs

    @classmethod
    def const(cls, desc, c):
        c = desc.norm(c)
        return cls(desc, 0, [] if desc.is_zero(c) else [c], None)

    @classmethod
    def term(cls, desc, c, k):
        c = desc.norm(c)
        return cls(desc, k, [] if desc.is_zero(c) else [c], None)

    def is_zero(self):
        return not self.coeffs

    def coeff(self, k):
        """Coefficient of t^k; raises if k is beyond the known precision."""
        if self.prec is not None and k >= self.prec:
            raise ValueError(f"coefficient t^{k} beyond precision {self.prec}")
        if k < self.lead or k - self.lead >= len(self.coeffs):
            return self.desc.zero
        return self.coeffs[k - self.lead]

    def _p(self):
        return _BIG if self.prec is None else self.prec

    def shift(self, k):
        return Laurent(
            self.desc, self.lead + k, self.coeffs, None if self.prec is None else self.prec + k
        )

    def truncate(self, prec):
        return Laurent(self.desc, self.lead, self.coeffs, prec)

    def scalar(self, c):
        d = self.desc
        c = d.norm(c)
        if d.is_zero(c):
            return Laurent(d, 0, [], self.prec)
        return Laurent(d, self.lead, [d.mul(c, x) for x in self.coeffs], self.prec)

    def neg(self):
        d = self.desc
        return Laurent(d, self.lead, [d.neg(x) for x in self.coeffs], self.prec)

    def add(self, other):
        d = self.desc
        prec = min(self._p(), other._p())
        if self.is_zero():
            return other.truncate(None if prec >= _BIG else prec)
        if other.is_zero():
            return self.truncate(None if prec >= _BIG else prec)
        lead = min(self.lead, other.lead)
        hi = min(prec, max(self.lead + len(self.coeffs), other.lead + len(other.coeffs)))
        out = []
        for k in range(lead, hi):
            a = self.coeff(k) if k - self.lead < len(self.coeffs) and k >= self.lead else d.zero
            b = other.coeff(k) if k - other.lead < len(other.coeffs) and k >= other.lead else d.zero
            out.append(d.add(a, b))
        return Laurent(d, lead, out, None if prec >= _BIG else prec)

    def sub(self, other):
        return self.add(other.neg())

    def mul(self, other):
        d = self.desc
        if self.is_zero() or other.is_zero():
            prec = min(self._p(), other._p())
            return Laurent(d, 0, [], None if prec >= _BIG else prec)
        lead = self.lead + other.lead
        prec = min(self._p() + other.lead, other._p() + self.lead)
        n = min(len(self.coeffs) + len(other.coeffs) - 1, prec - lead)
        out = [d.zero] * n
        for i, a in enumerate(self.coeffs):
            if d.is_zero(a):
                continue
            jmax = min(len(other.coeffs), n - i)
            for j in range(jmax):
                b = other.coeffs[j]
                if not d.is_zero(b):
                    out[i + j] = d.add(out[i + j], d.mul(a, b))
        return Laurent(d, lead, out, None if prec >= _BIG else prec)

    def inv(self):
        """Inverse; leading coefficient must be nonzero (it is, by stripping)."""
        d = self.desc
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero series")
        rel = min(self._p() - self.lead, len(self.coeffs) + (0 if self.prec is not None else _BIG))
        if self.prec is None:
            rel = max(rel, len(self.coeffs))
        c0inv = d.inv(self.coeffs[0])
        out = [c0inv]
        for k in range(1, rel):
            acc = d.zero
            for i in range(1, min(k, len(self.coeffs) - 1) + 1):
                acc = d.add(acc, d.mul(self.coeffs[i], out[k - i]))
            out.append(d.neg(d.mul(acc, c0inv)))
        prec = None if self.prec is None and len(self.coeffs) == 1 else rel - self.lead
        return Laurent(d, -self.lead, out, prec)

    def div(self, other):
        return self.mul(other.inv())

    def pow_int(self, n):
        if n < 0:
            return self.inv().pow_int(-n)
        acc = Laurent.const(self.desc, 1)
        base = self
        while n:
            if n & 1:
                acc = acc.mul(base)
            base = base.mul(base)
            n >>= 1
        return acc

    def nth_root(self, n):
        """Principal branch root of a series with unit leading coefficient 1."""
        d = self.desc
        if self.is_zero() or not d.is_zero(d.sub(self.coeffs[0], d.one)):
            raise ValueError("nth_root needs leading coefficient 1")
        if self.lead % n:
            raise ValueError("lead not divisible by the root order")
        if d.char and n % d.char == 0:
            raise BadCharacteristic("root order divisible by the characteristic")
        rel = self._p() - self.lead if self.prec is not None else len(self.coeffs)
        ninv = d.inv(d.norm(n))
        r = [d.one]
        for k in range(1, rel):
            # coefficient of t^k in r^n given r known below k
            cur = Laurent(d, 0, r + [d.zero], None).pow_int(n)
            have = cur.coeff(k) if k - cur.lead < len(cur.coeffs) else d.zero
            want = self.coeffs[k] if k < len(self.coeffs) else d.zero
            r.append(d.mul(d.sub(want, have), ninv))
        prec = None if self.prec is None else rel + self.lead // n
        return Laurent(d, self.lead // n, r, prec)

    def compose(self, g):
        """Substitute the series g (valuation >= 1) for the variable."""
        if g.is_zero() or g.lead < 1:
            raise ValueError("composition needs a series of valuation >= 1")
        d = self.desc
        acc = Laurent.const(d, 0)
        gpow = g.pow_int(self.lead)
        for off in range(len(self.coeffs)):
            c = self.coeffs[off]
            if not d.is_zero(c):
                acc = acc.add(gpow.scalar(c))
            if off + 1 < len(self.coeffs):
                gpow = gpow.mul(g)
        if self.prec is not None:
            acc = acc.truncate(min(acc._p(), self.prec))
        return acc

    def derivative(self):
        d = self.desc
        out = []
        for off, c in enumerate(self.coeffs):
            k = self.lead + off
            out.append(d.mul(d.norm(k), c))
        return Laurent(d, self.lead - 1, out, None if self.prec is None else self.prec - 1)

    def __repr__(self):
        return f"Laurent(lead={self.lead}, prec={self.prec}, n={len(self.coeffs)})"


class BalancedSeries:
    """Public normalized view: scale * t^lead * (1 + c_1 t + ... + c_K t^K).

    Coefficient c_j is homogeneous of weight j under the curve rescaling
    (a, b) -> (u^4 a, u^6 b); scale carries any unit constant such as the
    1/n in expansions composed with multiplication by n.
    """

    __slots__ = ("desc", "lead", "scale", "coeffs")

    def __init__(self, desc, lead, scale, coeffs):
        self.desc = desc
        self.lead = lead
        self.scale = desc.norm(scale) if not isinstance(scale, type(desc.zero)) else scale
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_laurent(cls, lau, order):
        d = lau.desc
        if lau.is_zero():
            raise ValueError("zero series cannot be normalized")
        rel = lau._p() - lau.lead
        if rel < order + 1:
            raise ValueError(f"series precision {rel - 1} below requested order {order}")
        scale = lau.coeffs[0]
        sinv = d.inv(scale)
        cs = []
        for j in range(1, order + 1):
            c = lau.coeffs[j] if j < len(lau.coeffs) else d.zero
            cs.append(d.mul(sinv, c))
        return cls(d, lau.lead, scale, cs)

    def laurent(self):
        d = self.desc
        cs = [self.scale] + [d.mul(self.scale, c) for c in self.coeffs]
        return Laurent(d, self.lead, cs, self.lead + len(self.coeffs) + 1)

    @property
    def order(self):
        return len(self.coeffs)

    def c(self, j):
        """Unit coefficient c_j, j = 1..K (c_0 = 1 implicitly)."""
        if j == 0:
            return self.desc.one
        return self.coeffs[j - 1]

    def t_coeff(self, k):
        """Absolute coefficient of t^k."""
        off = k - self.lead
        if off < 0 or off > len(self.coeffs):
            return self.desc.zero
        return self.scale if off == 0 else self.desc.mul(self.scale, self.coeffs[off - 1])

    def mul(self, other):
        lau = self.laurent().mul(other.laurent())
        return BalancedSeries.from_laurent(lau, min(self.order, other.order))

    def to_json(self):
        d = self.desc
        lau = self.laurent()
        return {"lead": self.lead, "coeffs": [d.raw_to_json(c) for c in lau.coeffs]}

    def __eq__(self, other):
        return (
            isinstance(other, BalancedSeries)
            and self.desc == other.desc
            and self.lead == other.lead
            and self.scale == other.scale
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"BalancedSeries(lead={self.lead}, scale={self.scale}, K={self.order})"


class LambdaProfile:
    """First coefficients of a normalized torsion expansion.

    lam, mu, nu sit in weights 1, 2, 3; higher holds coefficients 4..K.
    """

    __slots__ = ("lam", "mu", "nu", "higher")

    def __init__(self, lam, mu, nu, higher=()):
        self.lam = lam
        self.mu = mu
        self.nu = nu
        self.higher = tuple(higher)

    @classmethod
    def from_series(cls, s):
        return cls(s.c(1), s.c(2), s.c(3), s.coeffs[3:])

    def __eq__(self, other):
        return (
            isinstance(other, LambdaProfile)
            and self.lam == other.lam
            and self.mu == other.mu
            and self.nu == other.nu
        )

    def __repr__(self):
        return f"LambdaProfile(lam={self.lam}, mu={self.mu}, nu={self.nu})"


class TorsionDivisor:
    """Finite multiset of torsion indices with integer multiplicities."""

    __slots__ = ("level", "terms")

    def __init__(self, level, terms):
        self.level = level
        t = {}
        for ij, m in dict(terms).items():
            if not (
                isinstance(ij, tuple)
                and len(ij) == 2
                and all(isinstance(c, int) for c in ij)
            ):
                raise UnsupportedDivisor(f"bad torsion index {ij!r}")
            key = (ij[0] % level, ij[1] % level)
            m = int(m)
            if m:
                t[key] = t.get(key, 0) + m
        self.terms = {k: v for k, v in sorted(t.items()) if v}

    @classmethod
    def single(cls, level, ij, mult=1):
        return cls(level, {ij: mult})

    @classmethod
    def of_points(cls, level, *ijs):
        d = {}
        for ij in ijs:
            key = (ij[0] % level, ij[1] % level)
            d[key] = d.get(key, 0) + 1
        return cls(level, d)

    def degree(self):
        return sum(self.terms.values())

    def oplus(self):
        i = sum(ij[0] * m for ij, m in self.terms.items()) % self.level
        j = sum(ij[1] * m for ij, m in self.terms.items()) % self.level
        return (i, j)

    def is_principal(self):
        return self.degree() == 0 and self.oplus() == (0, 0)

    def add(self, other):
        if other.level != self.level:
            raise UnsupportedDivisor("levels differ")
        t = dict(self.terms)
        for ij, m in other.terms.items():
            t[ij] = t.get(ij, 0) + m
        return TorsionDivisor(self.level, t)

    def neg(self):
        return TorsionDivisor(self.level, {ij: -m for ij, m in self.terms.items()})

    def mult_at(self, ij):
        return self.terms.get((ij[0] % self.level, ij[1] % self.level), 0)

    def support(self):
        return list(self.terms)

    def __repr__(self):
        return f"TorsionDivisor(level={self.level}, {self.terms})"


# ---------------------------------------------------------------------------
# expansions of x, y, omega


def effective_order(desc, requested, clip=False):
    """Enforce the characteristic guard p > K on the truncation order.

    With clip=True the order is lowered to p - 1 instead of raising,
    which is what the internal profile machinery wants on small primes;
    an order below 4 is never usable either way.
    """
    if desc.char == 0:
        return requested
    k = min(requested, desc.char - 1) if clip else requested
    if desc.char <= k or k < 4:
        raise CharacteristicTooSmall(
            f"characteristic {desc.char} cannot support order-{requested} expansions"
        )
    return k


def _unit_u(curve, K):
    """Unit part of x: x = t^-2 (1 + sum c_j t^j), solved iteratively."""
    cache = curve._xycache
    if K in cache:
        return cache[K]
    d = curve.desc
    one = Laurent.const(d, 1)
    ta = Laurent.term(d, d.neg(curve.a), 4)
    tb = Laurent.term(d, d.neg(curve.b), 6)
    u = one.truncate(K + 1)
    for _ in range(K // 4 + 2):
        uinv = u.inv()
        u = one.add(ta.mul(uinv)).add(tb.mul(uinv).mul(uinv)).truncate(K + 1)
    cache[K] = u
    return u


def expand_xy(curve, K=8):
    """Expansions (x, y, omega) in t = -x/y to relative order K.

    x = t^-2 (1 - a t^4 - b t^6 + ...), y = -x/t, and omega is the
    coefficient series of dt in dx/(2y).
    """
    K = effective_order(curve.desc, K)
    d = curve.desc
    u = _unit_u(curve, K)
    x = BalancedSeries.from_laurent(u.shift(-2), K)
    y = BalancedSeries(d, -3, d.norm(-1), x.coeffs)
    tu = u.derivative().shift(1)  # t * du/dt
    w = Laurent.const(d, 1).sub(tu.mul(u.inv()).scalar(Fraction(1, 2) if d.char == 0 else d.inv(d.norm(2))))
    omega = BalancedSeries.from_laurent(w.truncate(K + 1), K)
    return x, y, omega


# ---------------------------------------------------------------------------
# normalized functions of torsion divisors


class _SeriesAlgebra:
    """Chord/vertical factors as truncated expansions."""

    __slots__ = ("curve", "K", "u", "x", "my")

    def __init__(self, curve, K):
        self.curve = curve
        self.K = K
        self.u = _unit_u(curve, K)
        self.x = self.u.shift(-2)
        self.my = self.u.shift(-3)  # -y = t^-3 u

    def one(self):
        return Laurent.const(self.curve.desc, 1)

    def mul(self, a, b):
        return a.mul(b)

    def inv(self, a):
        return a.inv()

    def line_factor(self, a, b):
        d = self.curve.desc
        if a.key() == b.key():
            num = d.add(d.mul(d.norm(3), d.mul(a.x, a.x)), self.curve.a)
            lam = d.div(num, d.mul(d.norm(2), a.y))
        else:
            lam = d.div(d.sub(a.y, b.y), d.sub(a.x, b.x))
        nu = d.sub(a.y, d.mul(lam, a.x))
        # -y + lam*x + nu, leading unit at t^-3
        return self.my.add(self.x.scalar(lam)).add(Laurent.const(d, nu))

    def vert_factor(self, a):
        d = self.curve.desc
        return self.x.sub(Laurent.const(d, a.x))


def vertical_series(curve, table, P, K=8):
    """Expansion of x - x_P: lead -2, mu = -x_P, lam = nu = 0."""
    K = effective_order(curve.desc, K)
    idx = P if isinstance(P, tuple) else table.index(P)
    if (idx[0] % table.level, idx[1] % table.level) == (0, 0):
        raise IdentityPoint("vertical function needs a nonzero point")
    pt = table.point(idx)
    alg = _SeriesAlgebra(curve, K)
    return BalancedSeries.from_laurent(alg.vert_factor(pt), K)


def line_series(curve, table, D, K=8):
    """Expansion of the chord function -y + lam*x + nu for a triple divisor.

    D must consist of three nonzero points (with multiplicity) whose sum
    is the identity.  Returns (series, profile); mu is always zero.
    """
    K = effective_order(curve.desc, K)
    if isinstance(D, TorsionDivisor):
        if D.level != table.level:
            raise UnsupportedDivisor("divisor level does not match the table")
        pts = []
        for ij, m in D.terms.items():
            if m < 0:
                raise DegenerateDivisor("triple divisor must be effective")
            pts.extend([ij] * m)
    else:
        pts = [(i % table.level, j % table.level) for (i, j) in D]
    if len(pts) != 3:
        raise DegenerateDivisor("need exactly three points")
    if any(ij == (0, 0) for ij in pts):
        raise DegenerateDivisor("triple contains the identity")
    s = (sum(ij[0] for ij in pts) % table.level, sum(ij[1] for ij in pts) % table.level)
    if s != (0, 0):
        raise DegenerateDivisor("points are not collinear (sum is nonzero)")
    a, b = table.point(pts[0]), table.point(pts[1])
    if a.key() == b.key() and table.curve.desc.is_zero(a.y):
        a, b = table.point(pts[0]), table.point(pts[2])
    alg = _SeriesAlgebra(curve, K)
    lau = alg.line_factor(a, b)
    ser = BalancedSeries.from_laurent(lau, K)
    return ser, LambdaProfile.from_series(ser)


def expand_fD(table, D, K=8):
    """Normalized expansion of the function attached to a torsion divisor.

    The divisor is first blown up to the principal divisor
    level * (D - deg(D) * (O)), whose function is accumulated by
    double-and-add over chord/vertical factors; the principal branch of
    the level-th root then restores the expansion for D itself, with
    lead m_0 - deg(D).
    """
    if K < 4:
        raise ValueError("K must be at least 4")
    curve = table.curve
    K = effective_order(curve.desc, K)
    if not isinstance(D, TorsionDivisor) or D.level != table.level:
        raise UnsupportedDivisor("need a TorsionDivisor at the table level")
    n = table.level
    m0 = D.mult_at((0, 0))
    deg = D.degree()
    entries = [
        (table.point(ij), n * m)
        for ij, m in D.terms.items()
        if ij != (0, 0)
    ]
    alg = _SeriesAlgebra(curve, K)
    if not entries:
        return BalancedSeries(curve.desc, 0, curve.desc.one, [curve.desc.zero] * K)
    lau = _miller.reduce_divisor(curve, entries, alg)
    root = lau.nth_root(n)
    if root.lead != m0 - deg:
        raise UnsupportedDivisor("unexpected lead after root extraction")
    return BalancedSeries.from_laurent(root, K)


def lambda_profile(table, ij, K=None):
    """Cached profile of the single-point divisor (P) at index ij."""
    n = table.level
    ij = (ij[0] % n, ij[1] % n)
    if K is None:
        K = 8
    K = effective_order(table.curve.desc, K, clip=True)
    key = (ij, K)
    cached = table._profiles.get(key)
    if cached is not None:
        return cached
    d = table.curve.desc
    if ij == (0, 0):
        prof = LambdaProfile(d.zero, d.zero, d.zero, (d.zero,) * max(0, K - 3))
    else:
        neg = table.neg_idx(ij)
        if neg in table._profiles and (neg, K) in table._profiles:
            pass
        ser = expand_fD(table, TorsionDivisor.single(n, ij), K)
        prof = LambdaProfile.from_series(ser)
    table._profiles[key] = prof
    return prof


def profile_values(table, ij, K=None):
    """(lam, mu, nu, x, y) at one index, identity conventions included."""
    d = table.curve.desc
    n = table.level
    ij = (ij[0] % n, ij[1] % n)
    if ij == (0, 0):
        z = d.zero
        return z, z, z, z, z
    prof = lambda_profile(table, ij, K)
    pt = table.point(ij)
    return prof.lam, prof.mu, prof.nu, pt.x, pt.y


# ---------------------------------------------------------------------------
# composition with multiplication maps


def multiplication_series(curve, n, K=8):
    """(x o [n], y o [n], t o [n]) as series in t, via division polynomials."""
    from .curve import _divpoly_g

    d = curve.desc
    if d.char and n % d.char == 0:
        raise BadCharacteristic("multiplier shares the characteristic")
    K = effective_order(d, K)
    pad = 2 * n * n + 4
    Kw = K + pad  # headroom: the rational expressions cancel high leads
    alg_u = _unit_u(curve, Kw)
    x = alg_u.shift(-2)
    y = alg_u.shift(-3).neg()

    def eval_g(m):
        g = _divpoly_g(curve, m)
        acc = Laurent.const(d, 0)
        xpow = Laurent.const(d, 1)
        for c in g.coeffs:
            if not d.is_zero(c):
                acc = acc.add(xpow.scalar(c))
            xpow = xpow.mul(x)
        return acc

    E = eval_g(0).add(x.pow_int(3)).add(x.scalar(curve.a)).add(Laurent.const(d, curve.b))
    gn = eval_g(n)
    gn1 = eval_g(n - 1) if n > 1 else Laurent.const(d, 1)
    gp1 = eval_g(n + 1)
    g2n = eval_g(2 * n)
    if n % 2:
        num = E.mul(gn1).mul(gp1)
        den = gn.mul(gn)
        ynum = y.mul(g2n)
        yden = gn.pow_int(4).scalar(2)
    else:
        num = gn1.mul(gp1)
        den = E.mul(gn).mul(gn)
        ynum = y.mul(g2n)
        yden = E.mul(E).mul(gn.pow_int(4)).scalar(2)
    xn = x.sub(num.div(den))
    yn = ynum.div(yden)
    tn = xn.div(yn).neg()
    return xn, yn, tn


def compose_with_n(curve, f, n, K=None):
    """Substitute t o [n] into a normalized expansion.

    For the expansion of a single-point divisor this produces
    n^-1 t^-1 (1 + lam*n t + mu*n^2 t^2 + nu*n^3 t^3 + ...); the simple
    power pattern stops after t^3.
    """
    if K is None:
        K = f.order
    K = effective_order(curve.desc, K)
    if n == 1:
        return f
    _, _, tn = multiplication_series(curve, n, K)
    lau = f.laurent().compose(tn)
    return BalancedSeries.from_laurent(lau, K)


# ---------------------------------------------------------------------------
# independent slope routes


def slope_of_triple(table, i1, i2, i3):
    """Chord slope of a collinear nonzero triple, from coordinates only."""
    d = table.curve.desc
    n = table.level
    pts = [(i[0] % n, i[1] % n) for i in (i1, i2, i3)]
    if any(p == (0, 0) for p in pts):
        raise DegenerateDivisor("triple contains the identity")
    tot = ((pts[0][0] + pts[1][0] + pts[2][0]) % n, (pts[0][1] + pts[1][1] + pts[2][1]) % n)
    if tot != (0, 0):
        raise DegenerateDivisor("triple does not sum to the identity")
    A, B = table.point(pts[0]), table.point(pts[1])
    if A.key() == B.key():
        if d.is_zero(A.y):
            A, B = table.point(pts[0]), table.point(pts[2])
        else:
            num = d.add(d.mul(d.norm(3), d.mul(A.x, A.x)), table.curve.a)
            return d.div(num, d.mul(d.norm(2), A.y))
    if A.x == B.x:
        A, B = table.point(pts[0]), table.point(pts[2])
        if A.key() == B.key():
            num = d.add(d.mul(d.norm(3), d.mul(A.x, A.x)), table.curve.a)
            return d.div(num, d.mul(d.norm(2), A.y))
    return d.div(d.sub(A.y, B.y), d.sub(A.x, B.x))


def lambda_via_telescope(table, ij):
    """Slope invariant of one point from chord slopes alone.

    level * lam_P = sum over n = 1..level-2 of the chord slope through
    (P, [n]P, [-n-1]P); valid for points of exact order equal to the
    table level.  Independent of the series route.
    """
    d = table.curve.desc
    n = table.level
    ij = (ij[0] % n, ij[1] % n)
    if ij == (0, 0):
        return d.zero
    acc = d.zero
    for k in range(1, n - 1):
        a = table.smul_idx(k, ij)
        b = table.smul_idx(-k - 1, ij)
        acc = d.add(acc, slope_of_triple(table, ij, a, b))
    return d.div(acc, d.norm(n))
