"""Composite-torsion trace identities and convolution reduction.

Over a curve with full E[n*l] (or E[n!*l]) the slope invariants of
translated points satisfy exact averaging laws; those are checked
directly.  The deeper statement rewrites the convolution

    sum over T in E[n] of lam_{A+T} * lam_{B-[s]T}

as an integer combination of single products lam * lam with matrix
constraints, plus an explicit weight-2 remainder.  The rewriting is a
Euclid-style recursion on (n, s); each step applies the chord relation
(I7) pointwise, which is only valid when none of the three points
involved is the identity, so degenerate (T, U) pairs contribute
explicit x-corrections instead.  The certificate records everything
and is validated by exact specialization.
"""

from fractions import Fraction

from .curve import torsion_table
from .errors import PreimageUnavailable, TorsionNotRational
from .series import profile_values


class CompositeTorsionContext:
    """One curve carrying a master torsion table of composite level.

    Sub-tables for divisors of the level are index views into the master
    table, so the inclusion maps are consistent by construction.
    """

    __slots__ = ("curve", "level", "ell", "n", "master")

    def __init__(self, curve, ell, n, master_level=None):
        self.curve = curve
        self.ell = ell
        self.n = n
        self.level = master_level if master_level is not None else n * ell
        if self.level % (n * ell):
            raise TorsionNotRational("master level must be a multiple of n*ell")
        self.master = torsion_table(curve, self.level)

    def sub_indices(self, m, include_identity=True):
        if self.level % m:
            raise ValueError(f"{m} does not divide the master level {self.level}")
        step = self.level // m
        out = []
        for i in range(m):
            for j in range(m):
                if not include_identity and i == 0 and j == 0:
                    continue
                out.append((i * step, j * step))
        return out

    def profile(self, ij):
        return profile_values(self.master, ij)

    def divide_index(self, ij, s):
        """Smallest index B' with [s]B' = the given index, if any."""
        n = self.level
        out = []
        for coord in ij:
            g = _gcd(s, n)
            if coord % g:
                raise PreimageUnavailable(
                    f"index {ij} has no [{s}]-division preimage at level {n}"
                )
            # solve s*x = coord mod n; smallest nonnegative solution
            sg, ng, cg = s // g, n // g, coord // g
            x0 = (cg * pow(sg, -1, ng)) % ng
            out.append(x0)
        return tuple(out)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def build_context(ell, n, prime=None, need_factorial=False, skip=0):
    """Find a curve with the required composite torsion and wrap it."""
    from .curve import find_curve_auto, find_full_torsion_curve

    master = _factorial(n) * ell if need_factorial else n * ell
    if prime is None:
        p, curve = find_curve_auto(master, skip=skip)
    else:
        p, curve = prime, find_full_torsion_curve(prime, master, skip=skip)
    return CompositeTorsionContext(curve, ell, n, master_level=master)


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


# ---------------------------------------------------------------------------
# trace identities


def verify_trace_identities(ctx, n=None, sample=None):
    """Check the five averaging laws over E[n] for points of E[n*ell].

    sum_T lam_{P+T} = n lam_{[n]P};  sum x = n^2 x;  sum y = n^3 y;
    sum mu = mu;  sum nu = nu / n.  Exhaustive by default.
    """
    if n is None:
        n = ctx.n
    d = ctx.curve.desc
    tab = ctx.master
    nl = n * ctx.ell
    pts = ctx.sub_indices(nl)
    tors = ctx.sub_indices(n)
    if sample is not None:
        pts = pts[:sample]
    failures = []
    ninv = d.inv(d.norm(n))
    for P in pts:
        sums = [d.zero] * 5
        for T in tors:
            vals = ctx.profile(tab.add_idx(P, T))
            sums = [d.add(s, v) for s, v in zip(sums, vals)]
        lam, mu, nu, x, y = ctx.profile(tab.smul_idx(n, P))
        want = [
            d.mul(d.norm(n), lam),
            mu,
            d.mul(ninv, nu),
            d.mul(d.norm(n * n), x),
            d.mul(d.norm(n ** 3), y),
        ]
        names = ("lam", "mu", "nu", "x", "y")
        for nm, got, exp in zip(names, sums, want):
            if got != exp:
                failures.append((nm, P))
    return {
        "n": n,
        "ell": ctx.ell,
        "prime": d.char,
        "points_checked": len(pts),
        "failures": failures,
    }


# ---------------------------------------------------------------------------
# reduction certificates


class ReductionCertificate:
    """Exact rewriting of one lambda-convolution sum.

    terms: list of (coeff, (a, b, c, d)) standing for
        coeff * lam_{[a]A + [b]B} * lam_{[c]A + [d]B};
    remainder: list of (coeff, kind, index) with kind "mu" or "x",
    evaluated at master-table indices.  Every term matrix satisfies
    det = +-n and a - s b = c - s d = 0 mod n, and every term
    coefficient is an integer divisible by n.
    """

    __slots__ = ("level", "n", "s", "A", "B", "terms", "remainder")

    def __init__(self, level, n, s, A, B, terms, remainder):
        self.level = level
        self.n = n
        self.s = s
        self.A = A
        self.B = B
        self.terms = terms
        self.remainder = remainder

    def check_constraints(self):
        for coeff, (a, b, c, dd) in self.terms:
            det = a * dd - b * c
            if det not in (self.n, -self.n):
                raise ValueError(f"term {(a, b, c, dd)} has determinant {det}")
            if (a - self.s * b) % self.n or (c - self.s * dd) % self.n:
                raise ValueError(f"term {(a, b, c, dd)} fails the congruence")
            if coeff.denominator != 1 or coeff.numerator % self.n:
                raise ValueError(f"coefficient {coeff} is not divisible by n")
        return True

    def to_json(self):
        return {
            "level": self.level,
            "n": self.n,
            "s": self.s,
            "input": {"A": list(self.A), "B": list(self.B)},
            "terms": [
                {"coeff": int(c), "abcd": list(m)} for c, m in self.terms
            ],
            "remainder": [
                {
                    "coeff": [c.numerator, c.denominator],
                    "kind": kind,
                    "index": list(ij),
                }
                for c, kind, ij in self.remainder
            ],
        }


def _merge_terms(terms):
    acc = {}
    for coeff, key in terms:
        acc[key] = acc.get(key, Fraction(0)) + coeff
    return [(c, k) for k, c in sorted(acc.items(), key=lambda kv: kv[0]) if c]


def _merge_remainder(rem):
    acc = {}
    for coeff, kind, ij in rem:
        acc[(kind, ij)] = acc.get((kind, ij), Fraction(0)) + coeff
    return [(c, kind, ij) for (kind, ij), c in sorted(acc.items()) if c]


def _reduce(ctx, A, B, s, n, depth=0):
    """Recursive core; returns (terms on (A, B), remainder entries).

    Terms are (Fraction, (a, b, c, d)); the remainder is a list of
    (Fraction, "mu"|"x", master index).
    """
    tab = ctx.master
    if depth > 16:
        raise RuntimeError("reduction recursion ran away")
    if n == 1:
        return [(Fraction(1), (1, 0, 0, 1))], []
    s = s % n
    if s == 0:
        return [(Fraction(n), (n, 0, 0, 1))], []

    bprime = ctx.divide_index(B, s)
    # main rewrite: the convolution equals
    #   n lam_{[n]A} lam_{[s]A + B}
    #   - (n/s) * (convolution over E[s] with parameters below)
    #   - (1/s) * (mu sums)  + (1/s) * (degenerate corrections)
    terms = [(Fraction(n), (n, 0, s, 1))]
    remainder = []

    d_gcd = _gcd(n, s)
    remainder.append((Fraction(-s * s, s), "mu", tab.smul_idx(n, A)))
    remainder.append(
        (Fraction(-d_gcd * d_gcd, s), "mu", tab.smul_idx(n // d_gcd, B))
    )
    remainder.append(
        (
            Fraction(-n * n, s),
            "mu",
            tab.add_idx(tab.smul_idx(s, A), B),
        )
    )

    # degenerate (T, U) pairs where the chord relation cannot be applied
    zero = (0, 0)
    for T in ctx.sub_indices(n):
        for U in ctx.sub_indices(s):
            P = tab.add_idx(A, T)
            Q = tab.add_idx(tab.add_idx(bprime, tab.neg_idx(T)), U)
            mR = tab.add_idx(tab.add_idx(A, bprime), U)  # = -R
            p0, q0, r0 = P == zero, Q == zero, mR == zero
            if not (p0 or q0 or r0):
                continue
            if p0 and q0:
                continue  # forces r0 too; correction vanishes
            if p0 or q0:
                remainder.append((Fraction(-1, s), "x", mR))
            else:
                remainder.append((Fraction(-1, s), "x", P))

    # recursive part: parameters (s, n mod s) on (A + B', [-n]B')
    a_new = tab.add_idx(A, bprime)
    b_new = tab.smul_idx(-n, bprime)
    sub_terms, sub_rem = _reduce(ctx, a_new, b_new, n % s, s, depth + 1)
    scale = Fraction(-n, s)
    for coeff, (a, b, c, dd) in sub_terms:
        # lam_{[a](A+B') + [b](-n B')} = lam_{[a]A + [(a - n b)/s]B}
        if (a - n * b) % s or (c - n * dd) % s:
            raise RuntimeError("recursion produced a non-integral index map")
        mapped = (a, (a - n * b) // s, c, (c - n * dd) // s)
        terms.append((scale * coeff, mapped))
    for coeff, kind, ij in sub_rem:
        remainder.append((scale * coeff, kind, ij))
    return _merge_terms(terms), _merge_remainder(remainder)


def reduce_lambda_convolution(ctx, A, B, s, n=None):
    """Certificate for sum over T in E[n] of lam_{A+T} lam_{B-[s]T}."""
    if n is None:
        n = ctx.n
    tab = ctx.master
    A = (A[0] % ctx.level, A[1] % ctx.level)
    B = (B[0] % ctx.level, B[1] % ctx.level)
    terms, remainder = _reduce(ctx, A, B, s, n)
    for coeff, key in terms:
        if coeff.denominator != 1:
            raise RuntimeError(f"non-integral term coefficient {coeff} at {key}")
    cert = ReductionCertificate(ctx.level, n, s % n if n > 1 else 0, A, B, terms, remainder)
    cert.check_constraints()
    return cert


def convolution_lhs(ctx, A, B, s, n=None):
    """Brute-force evaluation of the convolution sum; the oracle side."""
    if n is None:
        n = ctx.n
    d = ctx.curve.desc
    tab = ctx.master
    acc = d.zero
    for T in ctx.sub_indices(n):
        lam1 = ctx.profile(tab.add_idx(A, T))[0]
        lam2 = ctx.profile(tab.add_idx(B, tab.neg_idx(tab.smul_idx(s, T))))[0]
        acc = d.add(acc, d.mul(lam1, lam2))
    return acc


def specialize_certificate(ctx, cert):
    """Evaluate a certificate exactly on its context."""
    d = ctx.curve.desc
    tab = ctx.master
    acc = d.zero
    for coeff, (a, b, c, dd) in cert.terms:
        p1 = tab.add_idx(tab.smul_idx(a, cert.A), tab.smul_idx(b, cert.B))
        p2 = tab.add_idx(tab.smul_idx(c, cert.A), tab.smul_idx(dd, cert.B))
        lam1 = ctx.profile(p1)[0]
        lam2 = ctx.profile(p2)[0]
        acc = d.add(acc, d.mul(d.norm(int(coeff)), d.mul(lam1, lam2)))
    for coeff, kind, ij in cert.remainder:
        lam, mu, nu, x, y = ctx.profile(ij)
        val = mu if kind == "mu" else x
        cnum = d.norm(coeff.numerator)
        cden = d.inv(d.norm(coeff.denominator))
        acc = d.add(acc, d.mul(d.mul(cnum, cden), val))
    return acc
