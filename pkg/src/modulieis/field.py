"""Exact field arithmetic and dense linear algebra on top of it.

Three kinds of coefficient fields are supported, all behind one
FieldDescriptor type:

* the rationals (characteristic 0), elements stored as Fraction;
* prime fields F_p, elements stored as ints in [0, p);
* single-step extensions F_p[x]/(f) (or Q[x]/(f)) for a monic
  irreducible f, elements stored as coefficient tuples.

A descriptor also fixes a torsion level and a designated primitive
root of unity of that order, which downstream modules use to normalize
symplectic bases.  Values are immutable throughout.
"""

from fractions import Fraction

from .errors import BadDescriptor, DivisionByZero, MixedFields, NoRootOfUnity

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = 41
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n):
    """Ascending list of distinct prime factors."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


class FieldDescriptor:
    """Carrier of the coefficient field, torsion level and zeta.

    ``ext`` is the tuple (c0, ..., c_{d-1}) of lower coefficients of a
    monic polynomial x^d + c_{d-1} x^{d-1} + ... + c0 over the prime
    field; None means no extension.
    """

    __slots__ = ("char", "ext", "level", "zeta", "deg", "_mode", "_hash")

    def __init__(self, char, level, ext=None, zeta=None):
        if not isinstance(level, int) or level < 2:
            raise BadDescriptor("level must be an integer >= 2")
        if char != 0 and not is_prime(char):
            raise BadDescriptor("characteristic must be 0 or prime")
        if char != 0 and (6 * level) % char == 0:
            raise BadDescriptor("6*level must be invertible in the field")
        object.__setattr__ if False else None
        self.char = char
        self.level = level
        if ext is not None:
            ext = tuple(self._base_norm(c) for c in ext)
            if len(ext) < 1:
                raise BadDescriptor("extension polynomial must have degree >= 2")
        self.ext = ext
        self.deg = 1 if ext is None else len(ext)
        if char == 0:
            self._mode = "q" if ext is None else "qext"
        else:
            self._mode = "fp" if ext is None else "fpext"
        if ext is not None:
            self._check_irreducible()
        if zeta is None:
            zeta = self._canonical_zeta()
        else:
            zeta = self.norm(zeta)
            if not self._has_exact_order(zeta, level):
                raise BadDescriptor("designated zeta is not a primitive root of unity")
        self.zeta = zeta
        self._hash = hash((self.char, self.ext, self.level, self._freeze(self.zeta)))

    # -- raw value plumbing ------------------------------------------------

    def _base_norm(self, c):
        if self.char:
            return int(c) % self.char
        return Fraction(c)

    def norm(self, v):
        """Coerce ints / Fractions / tuples into this field's raw form."""
        if self.deg == 1:
            return self._base_norm(v)
        if isinstance(v, (int, Fraction)):
            t = [self._base_norm(0)] * self.deg
            t[0] = self._base_norm(v)
            return tuple(t)
        v = tuple(self._base_norm(c) for c in v)
        if len(v) != self.deg:
            raise BadDescriptor("wrong coefficient vector length")
        return v

    def _freeze(self, v):
        return v if not isinstance(v, tuple) else v

    @property
    def zero(self):
        return self.norm(0)

    @property
    def one(self):
        return self.norm(1)

    def is_zero(self, v):
        if self.deg == 1:
            return v == 0
        return all(c == 0 for c in v)

    def add(self, u, v):
        m = self._mode
        if m == "fp":
            return (u + v) % self.char
        if m == "q":
            return u + v
        if m == "fpext":
            p = self.char
            return tuple((a + b) % p for a, b in zip(u, v))
        return tuple(a + b for a, b in zip(u, v))

    def sub(self, u, v):
        m = self._mode
        if m == "fp":
            return (u - v) % self.char
        if m == "q":
            return u - v
        if m == "fpext":
            p = self.char
            return tuple((a - b) % p for a, b in zip(u, v))
        return tuple(a - b for a, b in zip(u, v))

    def neg(self, u):
        m = self._mode
        if m == "fp":
            return (-u) % self.char
        if m == "q":
            return -u
        if m == "fpext":
            p = self.char
            return tuple((-a) % p for a in u)
        return tuple(-a for a in u)

    def mul(self, u, v):
        m = self._mode
        if m == "fp":
            return (u * v) % self.char
        if m == "q":
            return u * v
        return self._ext_mul(u, v)

    def _ext_mul(self, u, v):
        d = self.deg
        p = self.char
        prod = [0 if p else Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                prod[i + j] += a * b
        red = self.ext  # x^d = -(c0 + c1 x + ...)
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c == 0:
                continue
            prod[k] = 0 if p else Fraction(0)
            base = k - d
            for i, ri in enumerate(red):
                prod[base + i] -= c * ri
        if p:
            return tuple(c % p for c in prod[:d])
        return tuple(Fraction(c) for c in prod[:d])

    def inv(self, u):
        if self.is_zero(u):
            raise DivisionByZero("inverse of zero")
        m = self._mode
        if m == "fp":
            return pow(u, self.char - 2, self.char)
        if m == "q":
            return Fraction(1) / u
        return self._ext_inv(u)

    def _ext_inv(self, u):
        # extended Euclid in (base field)[x] against the defining polynomial
        p = self.char
        zero = 0 if p else Fraction(0)
        one = 1 if p else Fraction(1)

        def trim(c):
            while c and c[-1] == 0:
                c.pop()
            return c

        def polydivmod(a, b):
            a = a[:]
            q = [zero] * max(0, len(a) - len(b) + 1)
            binv = pow(b[-1], p - 2, p) if p else one / b[-1]
            while len(a) >= len(b) and a:
                f = a[-1] * binv
                if p:
                    f %= p
                sh = len(a) - len(b)
                q[sh] = f
                for i, bc in enumerate(b):
                    a[sh + i] -= f * bc
                    if p:
                        a[sh + i] %= p
                trim(a)
            return trim(q), a

        f = list(self.ext) + [one]
        r0, r1 = f, trim(list(u))
        s0, s1 = [zero], [one]
        while r1:
            q, r = polydivmod(r0, r1)
            r0, r1 = r1, r
            # s0 - q*s1
            ns = s0[:]
            ns += [zero] * (len(q) + len(s1) - 1 - len(ns))
            for i, qc in enumerate(q):
                if qc == 0:
                    continue
                for j, sc in enumerate(s1):
                    ns[i + j] -= qc * sc
                    if p:
                        ns[i + j] %= p
            s0, s1 = s1, trim(ns)
        if len(r0) != 1:
            raise DivisionByZero("element is a zero divisor (reducible modulus?)")
        lead_inv = pow(r0[0], p - 2, p) if p else one / r0[0]
        out = [zero] * self.deg
        for i, c in enumerate(s0):
            out[i] = (c * lead_inv) % p if p else c * lead_inv
        return tuple(out)

    def div(self, u, v):
        return self.mul(u, self.inv(v))

    def pow(self, u, e):
        if e < 0:
            return self.pow(self.inv(u), -e)
        acc = self.one
        base = u
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def from_int(self, n):
        return self.norm(n)

    def sort_key(self, v):
        """Fixed total order used for every deterministic tie-break."""
        if self._mode == "fp":
            return v
        if self._mode == "q":
            return v
        return tuple(v)

    def size(self):
        """Number of elements, or None in characteristic 0."""
        if self.char == 0:
            return None
        return self.char ** self.deg

    def iter_elements(self):
        """All elements in ascending sort order (finite fields only)."""
        if self.char == 0:
            raise BadDescriptor("cannot enumerate a characteristic-0 field")
        if self.deg == 1:
            yield from range(self.char)
            return
        p, d = self.char, self.deg

        def rec(prefix):
            if len(prefix) == d:
                yield tuple(prefix)
                return
            for c in range(p):
                yield from rec(prefix + [c])

        yield from rec([])

    def _has_exact_order(self, v, n):
        if self.is_zero(v):
            return False
        if not self.is_zero(self.sub(self.pow(v, n), self.one)):
            return False
        for q in prime_factors(n):
            if self.is_zero(self.sub(self.pow(v, n // q), self.one)):
                return False
        return True

    def _canonical_zeta(self):
        n = self.level
        if self.char:
            q = self.size()
            if (q - 1) % n != 0:
                raise NoRootOfUnity(
                    f"no primitive {n}th root of unity in a field of {q} elements"
                )
            for v in self.iter_elements():
                if self._has_exact_order(v, n):
                    return v
            raise NoRootOfUnity("exhausted field without finding a root of unity")
        # characteristic zero
        if n == 2:
            return self.norm(-1)
        if self.ext is not None:
            x = self.norm([0, 1] + [0] * (self.deg - 2)) if self.deg >= 2 else None
            if x is not None and self._has_exact_order(x, n):
                return x
        raise NoRootOfUnity(
            "characteristic-0 descriptor needs an extension splitting x^level - 1"
        )

    # -- serialization -----------------------------------------------------

    def raw_to_json(self, v):
        if self._mode == "fp":
            return v
        if self._mode == "q":
            return [v.numerator, v.denominator]
        return [self._base_to_json(c) for c in v]

    def _base_to_json(self, c):
        return c if self.char else [c.numerator, c.denominator]

    def raw_from_json(self, j):
        if self._mode == "fp":
            return int(j) % self.char
        if self._mode == "q":
            return Fraction(j[0], j[1])
        if self.char:
            return self.norm([int(c) for c in j])
        return self.norm([Fraction(c[0], c[1]) for c in j])

    def to_json(self):
        return {
            "char": self.char,
            "ext": None if self.ext is None else [self._base_to_json(c) for c in self.ext],
            "level": self.level,
            "zeta": self.raw_to_json(self.zeta),
        }

    @classmethod
    def from_json(cls, j):
        char = int(j["char"])
        ext = j.get("ext")
        if ext is not None:
            if char:
                ext = [int(c) for c in ext]
            else:
                ext = [Fraction(c[0], c[1]) for c in ext]
        desc = cls(char, int(j["level"]), ext=ext, zeta=None)
        zeta = desc.raw_from_json(j["zeta"])
        if not desc.is_zero(desc.sub(zeta, desc.zeta)):
            desc = cls(char, int(j["level"]), ext=ext, zeta=zeta)
        return desc

    # -- irreducibility check (finite fields rigorous, Q best effort) -------

    def _check_irreducible(self):
        d = self.deg
        if d == 1:
            raise BadDescriptor("extension must have degree >= 2")
        if self.char == 0:
            # rational-root test only; higher degrees are trusted input
            c0 = self.ext[0]
            for num in {1, -1, c0.numerator, -c0.numerator}:
                den = c0.denominator
                for dd in {1, den}:
                    r = Fraction(num, dd)
                    if self._qpoly_eval(r) == 0:
                        raise BadDescriptor("extension polynomial has a rational root")
            return
        p = self.char
        # f irreducible over F_p  <=>  x^(p^d) = x mod f and
        # gcd(x^(p^(d/q)) - x, f) = 1 for prime divisors q of d
        from .poly import Poly

        tmp = object.__new__(FieldDescriptor)
        tmp.char, tmp.ext, tmp.level, tmp.deg = p, None, self.level, 1
        tmp._mode, tmp.zeta, tmp._hash = "fp", 1 % p, 0
        f = Poly(tmp, list(self.ext) + [1])
        x = Poly(tmp, [0, 1])
        if x.powmod(p ** d, f) != x % f:
            raise BadDescriptor("extension polynomial is reducible")
        for q in prime_factors(d):
            xe = x.powmod(p ** (d // q), f)
            g = (xe - x % f).gcd(f)
            if g.degree() > 0:
                raise BadDescriptor("extension polynomial is reducible")

    def _qpoly_eval(self, r):
        acc = Fraction(1)
        tot = Fraction(0)
        for c in self.ext:
            tot += c * acc
            acc *= r
        return tot + acc

    # -- equality ----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldDescriptor)
            and self.char == other.char
            and self.ext == other.ext
            and self.level == other.level
            and self.zeta == other.zeta
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        base = f"Q" if self.char == 0 else f"F{self.char}"
        if self.ext is not None:
            base += f"[x]/(deg {self.deg})"
        return f"FieldDescriptor({base}, level={self.level})"


class FieldElement:
    """Immutable element of a described field; supports +,-,*,/,** and ==."""

    __slots__ = ("desc", "val")

    def __init__(self, desc, val):
        self.desc = desc
        self.val = desc.norm(val) if not _is_raw(desc, val) else val

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.desc != self.desc:
                raise MixedFields("operands live in different fields")
            return other.val
        if isinstance(other, (int, Fraction)):
            return self.desc.norm(other)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.desc, self.desc.add(self.val, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.desc, self.desc.sub(self.val, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.desc, self.desc.sub(v, self.val))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.desc, self.desc.mul(self.val, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.desc, self.desc.div(self.val, v))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.desc, self.desc.div(v, self.val))

    def __neg__(self):
        return FieldElement(self.desc, self.desc.neg(self.val))

    def __pow__(self, e):
        return FieldElement(self.desc, self.desc.pow(self.val, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.desc == other.desc and self.val == other.val
        if isinstance(other, (int, Fraction)):
            return self.val == self.desc.norm(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.desc, self.val))

    def is_zero(self):
        return self.desc.is_zero(self.val)

    def __repr__(self):
        return f"FieldElement({self.val!r} in {self.desc!r})"


def _is_raw(desc, val):
    if desc.deg > 1:
        return isinstance(val, tuple) and len(val) == desc.deg
    if desc.char:
        return isinstance(val, int) and 0 <= val < desc.char
    return isinstance(val, Fraction)


def field_arith(a, b, op):
    """Dispatch one exact binary field operation; op in {add,sub,mul,div}."""
    if not isinstance(a, FieldElement) or not isinstance(b, FieldElement):
        raise MixedFields("field_arith expects FieldElement operands")
    if a.desc != b.desc:
        raise MixedFields("operands live in different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def primitive_root_of_unity(desc):
    """Deterministic canonical primitive level-th root of unity.

    Always returns the smallest element (under the fixed element order)
    of exact multiplicative order desc.level.
    """
    tmp = FieldDescriptor(desc.char, desc.level, ext=desc.ext, zeta=None)
    return FieldElement(desc, tmp.zeta)


# ---------------------------------------------------------------------------
# dense matrices


class Matrix:
    """Rectangular matrix over one field; rows stored as raw-value lists."""

    __slots__ = ("desc", "nrows", "ncols", "rows")

    def __init__(self, desc, rows, ncols=None):
        self.desc = desc
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            for r in self.rows:
                if len(r) != self.ncols:
                    raise ValueError("ragged matrix")
        else:
            self.ncols = 0 if ncols is None else ncols

    @classmethod
    def from_elements(cls, grid):
        desc = None
        rows = []
        for row in grid:
            raw = []
            for e in row:
                if desc is None:
                    desc = e.desc
                elif e.desc != desc:
                    raise MixedFields("matrix entries from different fields")
                raw.append(e.val)
            rows.append(raw)
        if desc is None:
            raise ValueError("cannot infer field from an empty grid")
        return cls(desc, rows)

    def entry(self, i, j):
        return FieldElement(self.desc, self.rows[i][j])

    def mul_vec_raw(self, v):
        d = self.desc
        out = []
        for row in self.rows:
            acc = d.zero
            for a, b in zip(row, v):
                if not d.is_zero(a) and not d.is_zero(b):
                    acc = d.add(acc, d.mul(a, b))
            out.append(acc)
        return out

    def rref(self):
        """Reduced row-echelon form.

        Returns (R, pivots, rank) with pivot columns chosen left to
        right and every pivot scaled to 1; fully deterministic.
        """
        if self.desc._mode == "fp":
            return self._rref_fp()
        return self._rref_generic()

    def _rref_fp(self):
        p = self.desc.char
        rows = [r[:] for r in self.rows]
        nr, nc = self.nrows, self.ncols
        pivots = []
        r = 0
        for c in range(nc):
            pr = -1
            for i in range(r, nr):
                if rows[i][c]:
                    pr = i
                    break
            if pr < 0:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            inv = pow(rows[r][c], p - 2, p)
            if inv != 1:
                rows[r] = [(x * inv) % p for x in rows[r]]
            prow = rows[r]
            for i in range(nr):
                if i == r:
                    continue
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    rows[i] = [(x - f * y) % p for x, y in zip(ri, prow)]
            pivots.append(c)
            r += 1
            if r == nr:
                break
        return Matrix(self.desc, rows, self.ncols), tuple(pivots), r

    def _rref_generic(self):
        d = self.desc
        rows = [r[:] for r in self.rows]
        nr, nc = self.nrows, self.ncols
        pivots = []
        r = 0
        for c in range(nc):
            pr = -1
            for i in range(r, nr):
                if not d.is_zero(rows[i][c]):
                    pr = i
                    break
            if pr < 0:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            inv = d.inv(rows[r][c])
            rows[r] = [d.mul(x, inv) for x in rows[r]]
            prow = rows[r]
            for i in range(nr):
                if i == r:
                    continue
                f = rows[i][c]
                if not d.is_zero(f):
                    rows[i] = [d.sub(x, d.mul(f, y)) for x, y in zip(rows[i], prow)]
            pivots.append(c)
            r += 1
            if r == nr:
                break
        return Matrix(self.desc, rows, self.ncols), tuple(pivots), r

    def rank(self):
        return self.rref()[2]

    def kernel_raw(self):
        """Echelonized raw basis of the right null space."""
        R, pivots, rank = self.rref()
        d = self.desc
        piv_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in piv_set]
        vecs = []
        for j in free:
            v = [d.zero] * self.ncols
            v[j] = d.one
            for i, pc in enumerate(pivots):
                v[pc] = d.neg(R.rows[i][j])
            vecs.append(v)
        if not vecs:
            return []
        K, _, krank = Matrix(d, vecs, self.ncols).rref()
        return [K.rows[i] for i in range(krank)]


def kernel_basis(m):
    """Echelonized basis of the right null space of m, as element vectors."""
    return [
        [FieldElement(m.desc, x) for x in row]
        for row in m.kernel_raw()
    ]


def matrix_rank(m):
    return m.rank()


def solve_linear(desc, a_rows, b):
    """Solve A x = b for a unique solution; raw in, raw out."""
    aug = [list(r) + [bv] for r, bv in zip(a_rows, b)]
    R, pivots, rank = Matrix(desc, aug).rref()
    n = len(a_rows[0])
    if any(pc == n for pc in pivots):
        raise ValueError("inconsistent linear system")
    if rank < n:
        raise ValueError("underdetermined linear system")
    x = [desc.zero] * n
    for i, pc in enumerate(pivots):
        x[pc] = R.rows[i][n]
    return x
