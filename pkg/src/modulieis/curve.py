"""Short-Weierstrass curves, torsion tables, and curve search.

Everything here is exact.  Torsion enumeration follows the desk-scale
strategy: find the x-coordinates of n-torsion as roots of the division
polynomial by exhaustive evaluation over the finite field, then lift
each root to y by a square root.  Symplectic bases are normalized so
the Weil pairing of the basis equals the descriptor's designated root
of unity, with fully deterministic tie-breaks.
"""

import math

from .errors import (
    BadCharacteristic,
    NoCurveFound,
    PointNotOnCurve,
    TorsionNotRational,
    UsageError,
    ZeroScalar,
)
from .field import FieldDescriptor, is_prime, prime_factors
from .poly import Poly


class CurvePoint:
    """Affine point or the identity; coordinates are raw field values."""

    __slots__ = ("x", "y", "inf")

    def __init__(self, x=None, y=None, inf=False):
        self.inf = inf
        self.x = x
        self.y = y

    @classmethod
    def identity(cls):
        return cls(inf=True)

    def is_identity(self):
        return self.inf

    def key(self):
        return None if self.inf else (self.x, self.y)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.inf or other.inf:
            return self.inf and other.inf
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.inf, None if self.inf else (self.x, self.y)))

    def __repr__(self):
        return "O" if self.inf else f"({self.x}, {self.y})"


IDENTITY = CurvePoint.identity()


class WeierstrassCurve:
    """y^2 = x^3 + a x + b over the descriptor's field, nonsingular."""

    __slots__ = ("desc", "a", "b", "_gcache", "_xycache")

    def __init__(self, desc, a, b):
        self.desc = desc
        self.a = desc.norm(a)
        self.b = desc.norm(b)
        d = desc
        disc = d.add(
            d.mul(d.norm(4), d.pow(self.a, 3)),
            d.mul(d.norm(27), d.mul(self.b, self.b)),
        )
        if d.is_zero(disc):
            raise PointNotOnCurve("singular curve: 4a^3 + 27b^2 = 0")
        self._gcache = {}
        self._xycache = {}

    def __eq__(self, other):
        return (
            isinstance(other, WeierstrassCurve)
            and self.desc == other.desc
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.desc, self.a, self.b))

    def __repr__(self):
        return f"WeierstrassCurve(a={self.a}, b={self.b} over {self.desc!r})"

    def rhs(self, x):
        d = self.desc
        return d.add(d.add(d.pow(x, 3), d.mul(self.a, x)), self.b)

    def contains(self, pt):
        if pt.is_identity():
            return True
        d = self.desc
        return d.is_zero(d.sub(d.mul(pt.y, pt.y), self.rhs(pt.x)))

    def check(self, pt):
        if not self.contains(pt):
            raise PointNotOnCurve(f"{pt!r} not on {self!r}")
        return pt

    def point(self, x, y):
        return self.check(CurvePoint(self.desc.norm(x), self.desc.norm(y)))

    def add(self, p, q):
        d = self.desc
        if p.is_identity():
            return q
        if q.is_identity():
            return p
        if p.x == q.x:
            if d.is_zero(d.add(p.y, q.y)):
                return IDENTITY
            # tangent
            num = d.add(d.mul(d.norm(3), d.mul(p.x, p.x)), self.a)
            lam = d.div(num, d.mul(d.norm(2), p.y))
        else:
            lam = d.div(d.sub(q.y, p.y), d.sub(q.x, p.x))
        x3 = d.sub(d.sub(d.mul(lam, lam), p.x), q.x)
        y3 = d.sub(d.mul(lam, d.sub(p.x, x3)), p.y)
        return CurvePoint(x3, y3)

    def neg(self, p):
        if p.is_identity():
            return p
        return CurvePoint(p.x, self.desc.neg(p.y))

    def sub(self, p, q):
        return self.add(p, self.neg(q))

    def mul(self, n, p):
        if n < 0:
            return self.mul(-n, self.neg(p))
        acc = IDENTITY
        base = p
        while n:
            if n & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            n >>= 1
        return acc

    def order_of(self, p, bound):
        """Exact order of p given that it divides bound."""
        n = bound
        for q in prime_factors(bound):
            while n % q == 0 and self.mul(n // q, p).is_identity():
                n //= q
        return n

    def to_json(self):
        return {
            "p": self.desc.char,
            "a": self.desc.raw_to_json(self.a),
            "b": self.desc.raw_to_json(self.b),
            "level": self.desc.level,
            "field": self.desc.to_json(),
        }

    @classmethod
    def from_json(cls, j):
        desc = FieldDescriptor.from_json(j["field"])
        return cls(desc, desc.raw_from_json(j["a"]), desc.raw_from_json(j["b"]))


def point_op(curve, p, q, op):
    """Spec-shaped dispatcher over the group law.

    op is "add", "neg", or an integer scalar n meaning [n]p.
    """
    curve.check(p)
    if op == "neg":
        return curve.neg(p)
    if isinstance(op, int):
        return curve.mul(op, p)
    curve.check(q)
    if op == "add":
        return curve.add(p, q)
    raise ValueError(f"unknown point op {op!r}")


# ---------------------------------------------------------------------------
# division polynomials


def _divpoly_g(curve, n):
    """The x-only part g_n of the division polynomial.

    psi_n = g_n(x)        for odd n,
    psi_n = y * g_n(x)    for even n.
    """
    cache = curve._gcache
    if n in cache:
        return cache[n]
    d = curve.desc
    a, b = curve.a, curve.b

    def P(coeffs):
        return Poly(d, coeffs)

    if n <= 4:
        if n == -1:
            g = P([-1])
        elif n == 0:
            g = P([])
        elif n == 1:
            g = P([1])
        elif n == 2:
            g = P([2])
        elif n == 3:
            # 3x^4 + 6a x^2 + 12b x - a^2
            g = P([d.neg(d.mul(a, a)), d.mul(d.norm(12), b), d.mul(d.norm(6), a), d.zero, d.norm(3)])
        else:
            # 4(x^6 + 5a x^4 + 20b x^3 - 5a^2 x^2 - 4ab x - 8b^2 - a^3)
            a2 = d.mul(a, a)
            g = P(
                [
                    d.neg(d.add(d.mul(d.norm(8), d.mul(b, b)), d.mul(a2, a))),
                    d.neg(d.mul(d.norm(4), d.mul(a, b))),
                    d.neg(d.mul(d.norm(5), a2)),
                    d.mul(d.norm(20), b),
                    d.mul(d.norm(5), a),
                    d.zero,
                    d.norm(1),
                ]
            ) * d.norm(4)
        cache[n] = g
        return g

    E = Poly(d, [b, a, d.zero, d.one])
    E2 = E * E
    m, r = divmod(n, 2)
    if r:
        gm = _divpoly_g(curve, m)
        gm1 = _divpoly_g(curve, m + 1)
        gm2 = _divpoly_g(curve, m + 2)
        gmm1 = _divpoly_g(curve, m - 1)
        t1 = gm2 * (gm * gm * gm)
        t2 = gmm1 * (gm1 * gm1 * gm1)
        if m % 2 == 0:
            g = E2 * t1 - t2
        else:
            g = t1 - E2 * t2
    else:
        gm = _divpoly_g(curve, m)
        gm1 = _divpoly_g(curve, m + 1)
        gm2 = _divpoly_g(curve, m + 2)
        gmm1 = _divpoly_g(curve, m - 1)
        gmm2 = _divpoly_g(curve, m - 2)
        inner = gm2 * (gmm1 * gmm1) - gmm2 * (gm1 * gm1)
        g = gm * inner * d.inv(d.norm(2))
    cache[n] = g
    return g


def division_polynomial_sq(curve, n):
    """psi_n^2 as a polynomial in x: degree n^2 - 1, leading n^2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = curve.desc
    if d.char and n % d.char == 0:
        raise BadCharacteristic("characteristic divides n")
    g = _divpoly_g(curve, n)
    if n % 2:
        return g * g
    E = Poly(d, [curve.b, curve.a, d.zero, d.one])
    return E * (g * g)


def torsion_x_radical(curve, n):
    """Squarefree polynomial whose roots are all x-coordinates of E[n]-O."""
    d = curve.desc
    g = _divpoly_g(curve, n)
    if n % 2:
        return g
    E = Poly(d, [curve.b, curve.a, d.zero, d.one])
    return E * g


# ---------------------------------------------------------------------------
# square roots in finite fields


def sqrt_in_field(desc, v):
    """Canonical square root (smaller of the pair), or None if nonresidue."""
    d = desc
    if d.is_zero(v):
        return d.zero
    q = d.size()
    if q is None:
        raise BadCharacteristic("square roots only implemented over finite fields")
    if not d.is_zero(d.sub(d.pow(v, (q - 1) // 2), d.one)):
        return None
    if q % 4 == 3:
        r = d.pow(v, (q + 1) // 4)
    else:
        r = _tonelli(d, v, q)
    r2 = d.neg(r)
    return r if d.sort_key(r) <= d.sort_key(r2) else r2


def _tonelli(d, v, q):
    s, e = q - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    # deterministic nonresidue
    z = None
    for cand in d.iter_elements():
        if d.is_zero(cand):
            continue
        if not d.is_zero(d.sub(d.pow(cand, (q - 1) // 2), d.one)):
            z = cand
            break
    c = d.pow(z, s)
    r = d.pow(v, (s + 1) // 2)
    t = d.pow(v, s)
    m = e
    while not d.is_zero(d.sub(t, d.one)):
        t2 = t
        i = 0
        while not d.is_zero(d.sub(t2, d.one)):
            t2 = d.mul(t2, t2)
            i += 1
        bexp = d.pow(c, 1 << (m - i - 1))
        r = d.mul(r, bexp)
        c = d.mul(bexp, bexp)
        t = d.mul(t, c)
        m = i
    return r


# ---------------------------------------------------------------------------
# torsion tables


class TorsionTable:
    """The full n-torsion of one curve indexed by a symplectic basis.

    points[(i, j)] = [i]T + [j]U where (T, U) is the basis and
    e_n(T, U) equals the descriptor's designated root of unity raised
    to the power level // n (i.e. the canonical order-n root).
    """

    __slots__ = ("curve", "level", "basis", "points", "_index", "_profiles", "_misc")

    def __init__(self, curve, level, basis, points):
        self.curve = curve
        self.level = level
        self.basis = basis
        self.points = points
        self._index = {pt.key(): ij for ij, pt in points.items()}
        self._profiles = {}
        self._misc = {}

    def point(self, ij):
        return self.points[(ij[0] % self.level, ij[1] % self.level)]

    def index(self, pt):
        return self._index[pt.key()]

    def indices(self, include_identity=True):
        n = self.level
        for i in range(n):
            for j in range(n):
                if not include_identity and i == 0 and j == 0:
                    continue
                yield (i, j)

    def add_idx(self, u, v):
        n = self.level
        return ((u[0] + v[0]) % n, (u[1] + v[1]) % n)

    def neg_idx(self, u):
        n = self.level
        return ((-u[0]) % n, (-u[1]) % n)

    def smul_idx(self, m, u):
        n = self.level
        return ((m * u[0]) % n, (m * u[1]) % n)

    def sub_indices(self, m, include_identity=False):
        """Indices of the E[m] subgroup, m | level."""
        if self.level % m:
            raise ValueError("m must divide the table level")
        step = self.level // m
        for i in range(m):
            for j in range(m):
                if not include_identity and i == 0 and j == 0:
                    continue
                yield (i * step, j * step)

    def zeta_power(self, k):
        d = self.curve.desc
        return d.pow(d.zeta, k % d.level)

    def to_json(self):
        d = self.curve.desc
        pts = {}
        for (i, j), pt in self.points.items():
            key = f"{i},{j}"
            pts[key] = None if pt.is_identity() else [d.raw_to_json(pt.x), d.raw_to_json(pt.y)]
        return {
            "curve": self.curve.to_json(),
            "level": self.level,
            "basis": {
                "T": [d.raw_to_json(self.basis[0].x), d.raw_to_json(self.basis[0].y)],
                "U": [d.raw_to_json(self.basis[1].x), d.raw_to_json(self.basis[1].y)],
            },
            "points": pts,
        }

    @classmethod
    def from_json(cls, j):
        curve = WeierstrassCurve.from_json(j["curve"])
        d = curve.desc
        level = int(j["level"])
        pts = {}
        for key, val in j["points"].items():
            i, jj = (int(t) for t in key.split(","))
            if val is None:
                pts[(i, jj)] = IDENTITY
            else:
                pts[(i, jj)] = CurvePoint(d.raw_from_json(val[0]), d.raw_from_json(val[1]))
        T = CurvePoint(d.raw_from_json(j["basis"]["T"][0]), d.raw_from_json(j["basis"]["T"][1]))
        U = CurvePoint(d.raw_from_json(j["basis"]["U"][0]), d.raw_from_json(j["basis"]["U"][1]))
        return cls(curve, level, (T, U), pts)


def _all_torsion_points(curve, n):
    """All points of E[n] by root scan of the division polynomial."""
    d = curve.desc
    if d.char == 0:
        raise TorsionNotRational("torsion enumeration needs a finite field")
    if d.size() > 1 << 22:
        raise TorsionNotRational("field too large for exhaustive root scan")
    rad = torsion_x_radical(curve, n)
    pts = [IDENTITY]
    for x in d.iter_elements():
        if not d.is_zero(rad.eval(x)):
            continue
        rhs = curve.rhs(x)
        y = sqrt_in_field(d, rhs)
        if y is None:
            raise TorsionNotRational(f"torsion x-coordinate {x!r} does not lift")
        if d.is_zero(y):
            pts.append(CurvePoint(x, y))
        else:
            pts.append(CurvePoint(x, y))
            pts.append(CurvePoint(x, d.neg(y)))
    if len(pts) != n * n:
        raise TorsionNotRational(f"found {len(pts)} points of E[{n}], expected {n * n}")
    return pts


def torsion_table(curve, level, zeta=None):
    """Enumerate E[level] and pick the canonical symplectic basis.

    The basis (T, U) is chosen deterministically: points sorted by
    coordinates, T the first point of exact order `level`, U the first
    point pairing with T to the designated root of unity.
    """
    from .pairing import weil_pairing_points

    d = curve.desc
    if d.level % level:
        raise TorsionNotRational(
            f"descriptor level {d.level} does not support a level-{level} table"
        )
    pts = _all_torsion_points(curve, level)
    key = lambda p: (0,) if p.is_identity() else (1, d.sort_key(p.x), d.sort_key(p.y))
    pts.sort(key=key)
    if zeta is None:
        zeta = d.pow(d.zeta, d.level // level)
    T = None
    for p in pts:
        if p.is_identity():
            continue
        if curve.order_of(p, level) == level:
            T = p
            break
    if T is None:
        raise TorsionNotRational("no point of exact order found")
    U = None
    for p in pts:
        if p.is_identity():
            continue
        val = weil_pairing_points(curve, level, T, p, pts)
        if d.is_zero(d.sub(val, zeta)):
            U = p
            break
    if U is None:
        raise TorsionNotRational("no symplectic partner found; zeta convention broken")
    table = {}
    rowT = IDENTITY
    for i in range(level):
        pt = rowT
        for j in range(level):
            table[(i, j)] = pt
            pt = curve.add(pt, U)
        rowT = curve.add(rowT, T)
    if len({p.key() for p in table.values()}) != level * level:
        raise TorsionNotRational("basis failed to generate distinct points")
    return TorsionTable(curve, level, (T, U), table)


# ---------------------------------------------------------------------------
# curve search over prime fields


def _qr_table(p):
    qr = [-1] * p
    qr[0] = 0
    for x in range(1, (p + 1) // 2 + 1):
        qr[(x * x) % p] = 1
    return qr


def _split_cubic_pairs(p):
    """Set of (a, b) with x^3 + a x + b split into distinct linear factors."""
    out = set()
    for e1 in range(p):
        for e2 in range(e1 + 1, p):
            e3 = (-e1 - e2) % p
            if e3 == e1 or e3 == e2:
                continue
            a = (e1 * e2 + e1 * e3 + e2 * e3) % p
            b = (-e1 * e2 * e3) % p
            out.add((a, b))
    return out


def _prime_power_split(curve, q, qr):
    """True iff all of E[q] is rational.

    q is a maximal prime power r^k; the cheap lower layers E[r^i] are
    tested first so that most failing curves never touch the large
    division polynomial.
    """
    d = curve.desc
    p = d.char
    r = prime_factors(q)[0]
    layer = r
    while True:
        rad = torsion_x_radical(curve, layer).monic()
        x = Poly.x(d)
        if x.powmod(p, rad) != x % rad:
            return False
        a, b = curve.a, curve.b
        for x0 in range(p):
            if rad.eval(x0) == 0:
                v = (x0 * x0 * x0 + a * x0 + b) % p
                if v and qr[v] < 0:
                    return False
        if layer == q:
            return True
        layer *= r


_COUNT_CACHE = {}


def _count_table(p):
    """(p, p) array with entry [a, b] = #E(F_p) for y^2 = x^3 + ax + b.

    Built once per prime with a vectorized quadratic-character sum;
    singular pairs get a meaningless count and are filtered separately.
    """
    tab = _COUNT_CACHE.get(p)
    if tab is not None:
        return tab
    import numpy as np

    qr = np.array(_qr_table(p), dtype=np.int32)
    qr2 = np.concatenate([qr, qr])
    xs = np.arange(p, dtype=np.int64)
    cubes = (xs * xs % p) * xs % p
    bidx = np.arange(p, dtype=np.int64)
    tab = np.empty((p, p), dtype=np.int32)
    for a in range(p):
        vec = (cubes + a * xs) % p
        tab[a, :] = qr2[vec[:, None] + bidx[None, :]].sum(axis=0, dtype=np.int32)
    tab += p + 1
    _COUNT_CACHE[p] = tab
    return tab


def _feasible_level(p, level):
    """Cheap necessary conditions for some curve over F_p to carry E[level].

    The group order must be a multiple of level^2 inside the Hasse
    window, with trace t = 2 mod level and (t-2)^2 <= 4 * order.
    """
    lo = p + 1 - 2 * math.isqrt(p) - 1
    hi = p + 1 + 2 * math.isqrt(p) + 1
    m2 = level * level
    m = (lo // m2) * m2
    while m <= hi:
        if m >= lo:
            t = p + 1 - m
            if (t - 2) % level == 0 and (t - 2) ** 2 <= 4 * m:
                return True
        m += m2
    return False


def iter_full_torsion_curves(p, level):
    """Deterministic scan a = 1, 2, ... then b = 1, 2, ... yielding curves
    over F_p with a, b != 0 and all of E[level] rational."""
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    if (6 * level) % p == 0:
        raise UsageError(f"p = {p} divides 6*level")
    if p % level != 1:
        raise UsageError(f"need p = 1 mod level, got p = {p}, level = {level}")
    if not _feasible_level(p, level):
        return
    desc = FieldDescriptor(p, level)
    qr = _qr_table(p)
    counts = _count_table(p)
    split2 = _split_cubic_pairs(p) if level % 2 == 0 else None
    powers = []
    rest = level
    for q in prime_factors(level):
        pk = 1
        while rest % q == 0:
            pk *= q
            rest //= q
        powers.append(pk)
    target = level * level
    for a in range(1, p):
        row = counts[a]
        for b in range(1, p):
            if row[b] % target:
                continue
            if (4 * a * a * a + 27 * b * b) % p == 0:
                continue
            if split2 is not None and (a, b) not in split2:
                continue
            curve = WeierstrassCurve(desc, a, b)
            if all(_prime_power_split(curve, q, qr) for q in powers if q != 2 or split2 is None):
                yield curve


def find_full_torsion_curve(p, level, skip=0):
    """First curve (in scan order) over F_p with full rational E[level]."""
    it = iter_full_torsion_curves(p, level)
    for k, curve in enumerate(it):
        if k == skip:
            return curve
    raise NoCurveFound(f"no curve over F_{p} with full E[{level}] (skip={skip})")


def scan_primes(level, floor, guard=8):
    """Primes p = 1 mod level with p > guard and p coprime to 6*level."""
    p = max(floor, guard + 1)
    while True:
        if is_prime(p) and p % level == 1 and (6 * level) % p != 0 and p > guard:
            yield p
        p += 1


def find_curve_auto(level, floor=None, guard=8, skip=0, max_primes=60):
    """Scan primes upward and return (prime, curve); deterministic."""
    if floor is None:
        floor = max(guard, 1) + level
    tried = 0
    for p in scan_primes(level, floor, guard):
        tried += 1
        if tried > max_primes:
            break
        try:
            return p, find_full_torsion_curve(p, level, skip=skip)
        except NoCurveFound:
            continue
    raise NoCurveFound(f"no curve with full E[{level}] found in {max_primes} primes")


# ---------------------------------------------------------------------------
# fibers of level structures and curve rescaling


def _sl2_order(n):
    out = n ** 3
    for q in prime_factors(n):
        out = out // (q * q) * (q * q - 1)
    return out


class SymplecticBasis:
    """One level structure: a symplectic basis expressed in table indices."""

    __slots__ = ("t", "u")

    def __init__(self, t, u):
        self.t = t
        self.u = u

    def map_index(self, ij, level):
        i, j = ij
        return (
            (i * self.t[0] + j * self.u[0]) % level,
            (i * self.t[1] + j * self.u[1]) % level,
        )

    def __repr__(self):
        return f"SymplecticBasis(T'={self.t}, U'={self.u})"


def enumerate_fiber_bases(table):
    """All symplectic bases of E[level] modulo simultaneous negation.

    Expressed in index coordinates, these are exactly the matrices of
    determinant 1 mod level, deduplicated under negation; the count is
    |SL(2, Z/level)| / 2.
    """
    from .errors import FiberEnumerationFailure

    n = table.level
    if n < 3:
        raise FiberEnumerationFailure("fiber enumeration needs level >= 3")
    seen = set()
    out = []
    for t0 in range(n):
        for t1 in range(n):
            for u0 in range(n):
                for u1 in range(n):
                    if (t0 * u1 - t1 * u0) % n != 1:
                        continue
                    key = (t0, t1, u0, u1)
                    nkey = ((-t0) % n, (-t1) % n, (-u0) % n, (-u1) % n)
                    if nkey in seen:
                        continue
                    seen.add(key)
                    out.append(SymplecticBasis((t0, t1), (u0, u1)))
    expected = _sl2_order(n) // 2
    if len(out) != expected:
        raise FiberEnumerationFailure(
            f"enumerated {len(out)} bases, expected {expected}"
        )
    return out


def scale_curve(curve, u):
    """Quartic/sextic rescaling (a, b) -> (u^4 a, u^6 b).

    Returns the scaled curve and the point map (x, y) -> (u^2 x, u^3 y).
    """
    d = curve.desc
    u = d.norm(u)
    if d.is_zero(u):
        raise ZeroScalar("scale factor must be nonzero")
    u2 = d.mul(u, u)
    u3 = d.mul(u2, u)
    u4 = d.mul(u2, u2)
    u6 = d.mul(u3, u3)
    scaled = WeierstrassCurve(d, d.mul(u4, curve.a), d.mul(u6, curve.b))

    def point_map(pt):
        if pt.is_identity():
            return pt
        return CurvePoint(d.mul(u2, pt.x), d.mul(u3, pt.y))

    return scaled, point_map


def scale_table(table, u):
    """Carry a torsion table across the rescaling isomorphism."""
    scaled, pmap = scale_curve(table.curve, u)
    pts = {ij: pmap(pt) for ij, pt in table.points.items()}
    basis = (pmap(table.basis[0]), pmap(table.basis[1]))
    return TorsionTable(scaled, table.level, basis, pts)
