"""Dense univariate polynomials over a FieldDescriptor.

Just enough machinery for division polynomials and splitting tests:
ring ops, remainder, gcd, evaluation, and modular exponentiation of x.
Coefficients are raw field values in ascending order with no trailing
zeros; the zero polynomial has an empty tuple.
"""


class Poly:
    __slots__ = ("desc", "coeffs")

    def __init__(self, desc, coeffs):
        d = desc
        cs = [c if _raw_ok(d, c) else d.norm(c) for c in coeffs]
        while cs and d.is_zero(cs[-1]):
            cs.pop()
        self.desc = d
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, desc):
        return cls(desc, [0, 1])

    @classmethod
    def const(cls, desc, c):
        return cls(desc, [c])

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, Poly) and self.desc == other.desc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.desc, self.coeffs))

    def __add__(self, other):
        d = self.desc
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = d.add(out[i], c)
        return Poly(d, out)

    def __sub__(self, other):
        d = self.desc
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            u = self.coeffs[i] if i < len(self.coeffs) else d.zero
            v = other.coeffs[i] if i < len(other.coeffs) else d.zero
            out.append(d.sub(u, v))
        return Poly(d, out)

    def __neg__(self):
        d = self.desc
        return Poly(d, [d.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        d = self.desc
        if isinstance(other, Poly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly(d, [])
            if d._mode == "fp":
                p = d.char
                out = [0] * (len(a) + len(b) - 1)
                for i, ai in enumerate(a):
                    if ai:
                        for j, bj in enumerate(b):
                            out[i + j] = (out[i + j] + ai * bj) % p
                return Poly(d, out)
            out = [d.zero] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if d.is_zero(ai):
                    continue
                for j, bj in enumerate(b):
                    out[i + j] = d.add(out[i + j], d.mul(ai, bj))
            return Poly(d, out)
        # scalar
        c = other if _raw_ok(d, other) else d.norm(other)
        return Poly(d, [d.mul(c, x) for x in self.coeffs])

    __rmul__ = __mul__

    def divmod(self, other):
        d = self.desc
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        if len(a) < len(b):
            return Poly(d, []), Poly(d, a)
        if d._mode == "fp":
            p = d.char
            binv = pow(b[-1], p - 2, p)
            q = [0] * (len(a) - len(b) + 1)
            nb = len(b)
            for sh in range(len(a) - nb, -1, -1):
                c = a[sh + nb - 1]
                if not c:
                    continue
                f = (c * binv) % p
                q[sh] = f
                for i in range(nb):
                    a[sh + i] = (a[sh + i] - f * b[i]) % p
            return Poly(d, q), Poly(d, a)
        binv = d.inv(b[-1])
        q = [d.zero] * (len(a) - len(b) + 1)
        for sh in range(len(a) - len(b), -1, -1):
            c = a[sh + len(b) - 1]
            if d.is_zero(c):
                continue
            f = d.mul(c, binv)
            q[sh] = f
            for i, bc in enumerate(b):
                a[sh + i] = d.sub(a[sh + i], d.mul(f, bc))
        return Poly(d, q), Poly(d, a)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero():
            return self
        d = self.desc
        inv = d.inv(self.lead())
        return Poly(d, [d.mul(c, inv) for c in self.coeffs])

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def eval(self, x):
        """Horner evaluation; x and result are raw field values."""
        d = self.desc
        if d._mode == "fp":
            p = d.char
            acc = 0
            for c in reversed(self.coeffs):
                acc = (acc * x + c) % p
            return acc
        acc = d.zero
        for c in reversed(self.coeffs):
            acc = d.add(d.mul(acc, x), c)
        return acc

    def powmod(self, e, mod):
        """self**e modulo mod by square and multiply."""
        result = Poly(self.desc, [1]) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def derivative(self):
        d = self.desc
        return Poly(d, [d.mul(d.norm(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __repr__(self):
        return f"Poly(deg={self.degree()})"


def _raw_ok(desc, v):
    if desc.deg > 1:
        return isinstance(v, tuple)
    if desc.char:
        return isinstance(v, int) and 0 <= v < desc.char
    from fractions import Fraction

    return isinstance(v, Fraction)
