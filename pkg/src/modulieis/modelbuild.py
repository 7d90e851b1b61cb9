"""Quadric projective models of the level-l modular curve.

One curve with full rational l-torsion supplies N = |SL(2, Z/l)| / 2
points of the moduli fiber (its symplectic bases modulo joint negation).
Products of two torsion slopes span the weight-2 value space V on that
fiber; products of the chosen pivot basis of V span the weight-4 space
V'; the kernel of the evaluation of Sym^2(V) at the fiber is exactly
the set of quadrics through the embedded points and cuts out the model.

Expected dimensions come from the line-bundle degree 2g - 2 + kappa of
the weight-2 system (g the genus, kappa the cusp count):

    dim V = g + kappa - 1,   dim V' = 3g + 2 kappa - 3,
    #quadrics = dim V (dim V + 1) / 2 - dim V'.

A rank below the expected dimension signals a non-generic
specialization and raises a retry error instead of silently accepting.
"""

import json
from fractions import Fraction

from .curve import enumerate_fiber_bases, torsion_table, _sl2_order
from .errors import ConventionMismatch, DegenerateModel, RetryNeeded
from .field import FieldDescriptor, Matrix
from .series import lambda_profile


def expected_dimensions(level):
    """(N, kappa, genus, dimV, dimVp, n_quadrics) for one level >= 3."""
    if level < 3:
        raise ValueError("models need level >= 3")
    n_sl2 = _sl2_order(level)
    N = n_sl2 // 2
    kappa = Fraction(level * level, 2)
    for q in {p for p in _prime_divisors(level)}:
        kappa *= Fraction(q * q - 1, q * q)
    kappa = int(kappa)
    g = 1 + Fraction(N * (level - 6), 12 * level)
    assert g.denominator == 1
    g = int(g)
    dim_v = g + kappa - 1
    dim_vp = 3 * g + 2 * kappa - 3
    quadrics = dim_v * (dim_v + 1) // 2 - dim_vp
    return N, kappa, g, dim_v, dim_vp, quadrics


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def slope_vector(table):
    """lam at every nonzero index, computed once per curve.

    Only one representative of each {P, -P} pair runs the series
    engine; the other comes from the sign flip.
    """
    d = table.curve.desc
    out = {}
    for ij in table.indices(include_identity=False):
        if ij in out:
            continue
        lam = lambda_profile(table, ij).lam
        out[ij] = lam
        out[table.neg_idx(ij)] = d.neg(lam)
    return out


def _sign_classes(table):
    """One representative per {P, -P} pair of nonzero indices."""
    reps = []
    seen = set()
    for ij in table.indices(include_identity=False):
        if ij in seen:
            continue
        seen.add(ij)
        seen.add(table.neg_idx(ij))
        reps.append(ij)
    return reps


def _pair_rows(table):
    """Unordered pairs of sign classes; labels for the weight-2 rows."""
    reps = _sign_classes(table)
    rows = []
    for i, p in enumerate(reps):
        for q in reps[i:]:
            rows.append((p, q))
    return rows


class ValueMatrix:
    """Labelled evaluation matrix: generators x fiber classes."""

    __slots__ = ("weight", "row_labels", "fibers", "matrix")

    def __init__(self, weight, row_labels, fibers, matrix):
        self.weight = weight
        self.row_labels = row_labels
        self.fibers = fibers
        self.matrix = matrix

    def rank(self):
        return self.matrix.rank()


def build_value_matrix(table, weight):
    """Evaluate weight-2 slope products (or weight-4 pivot products)
    on the full fiber of symplectic bases."""
    if weight == 2:
        return _weight2_matrix(table)
    if weight == 4:
        w2, pivots = _weight2_with_pivots(table)
        return _weight4_matrix(table, w2, pivots)
    raise ValueError("weight must be 2 or 4")


def _weight2_matrix(table):
    d = table.curve.desc
    lam = slope_vector(table)
    fibers = enumerate_fiber_bases(table)
    rows = _pair_rows(table)
    level = table.level
    data = []
    for p, q in rows:
        row = []
        for basis in fibers:
            lp = lam[basis.map_index(p, level)]
            lq = lam[basis.map_index(q, level)]
            row.append(d.mul(lp, lq))
        data.append(row)
    return ValueMatrix(2, rows, fibers, Matrix(d, data))


def _weight2_with_pivots(table):
    vm = _weight2_matrix(table)
    # pivot rows of the transpose = first maximal independent row set
    m = vm.matrix
    _, pivots, rank = Matrix(m.desc, list(map(list, zip(*m.rows)))).rref()
    return vm, list(pivots)


def _weight4_matrix(table, w2, pivot_rows):
    d = w2.matrix.desc
    basis_rows = [w2.matrix.rows[i] for i in pivot_rows]
    labels = []
    data = []
    for i in range(len(basis_rows)):
        for j in range(i, len(basis_rows)):
            labels.append((w2.row_labels[pivot_rows[i]], w2.row_labels[pivot_rows[j]]))
            data.append([d.mul(a, b) for a, b in zip(basis_rows[i], basis_rows[j])])
    return ValueMatrix(4, labels, w2.fibers, Matrix(d, data))


class QuadricModel:
    """Echelonized quadrics through the embedded fiber, with provenance."""

    __slots__ = ("level", "desc", "basis_pairs", "quadrics", "diagnostics")

    def __init__(self, level, desc, basis_pairs, quadrics, diagnostics):
        self.level = level
        self.desc = desc
        self.basis_pairs = basis_pairs
        self.quadrics = quadrics
        self.diagnostics = diagnostics

    def sym_indices(self):
        n = self.diagnostics["dimV"]
        return [(j, k) for j in range(n) for k in range(j, n)]

    def quadric_matrix(self, q):
        """Symmetric matrix of one quadric coefficient vector."""
        d = self.desc
        n = self.diagnostics["dimV"]
        half = d.inv(d.norm(2))
        m = [[d.zero] * n for _ in range(n)]
        for (j, k), c in zip(self.sym_indices(), q):
            if j == k:
                m[j][j] = c
            else:
                m[j][k] = d.mul(c, half)
                m[k][j] = m[j][k]
        return Matrix(d, m)

    def to_json(self):
        d = self.desc
        return {
            "level": self.level,
            "field": d.to_json(),
            "basis": [[list(p), list(q)] for p, q in self.basis_pairs],
            "quadrics": [
                [
                    {"j": j, "k": k, "c": d.raw_to_json(c)}
                    for (j, k), c in zip(self.sym_indices(), q)
                    if not d.is_zero(c)
                ]
                for q in self.quadrics
            ],
            "diagnostics": self.diagnostics,
        }

    def payload_bytes(self):
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")).encode()


def build_model(curve, level, table=None):
    """Run the whole pipeline on one curve; deterministic output."""
    d = curve.desc
    if d.is_zero(curve.a) or d.is_zero(curve.b):
        raise RetryNeeded("model building needs a and b nonzero")
    N, kappa, g, dim_v, dim_vp, n_quad = expected_dimensions(level)
    if table is None:
        table = torsion_table(curve, level)
    w2, pivots = _weight2_with_pivots(table)
    if len(w2.fibers) != N:
        raise RetryNeeded(f"fiber has {len(w2.fibers)} classes, expected {N}")
    if len(pivots) != dim_v:
        raise RetryNeeded(
            f"weight-2 rank {len(pivots)} below expected {dim_v}; try another curve"
        )
    w4 = _weight4_matrix(table, w2, pivots)
    # quadrics: kernel of the (fiber x Sym^2) evaluation
    eval_cols = Matrix(d, list(map(list, zip(*w4.matrix.rows))))
    rank4 = eval_cols.rank()
    if rank4 != dim_vp:
        raise RetryNeeded(f"weight-4 rank {rank4} != expected {dim_vp}")
    kernel = eval_cols.kernel_raw()
    if len(kernel) != n_quad:
        raise DegenerateModel(
            f"kernel dimension {len(kernel)} != Sym^2 - dimV' = {n_quad}"
        )
    diagnostics = {
        "dimV": dim_v,
        "dimVp": dim_vp,
        "kernel": len(kernel),
        "N": N,
        "kappa": kappa,
        "genus": g,
        "prime": d.char,
        "a": d.raw_to_json(curve.a),
        "b": d.raw_to_json(curve.b),
    }
    basis_pairs = [w2.row_labels[i] for i in pivots]
    return QuadricModel(level, d, basis_pairs, kernel, diagnostics)


def verify_model(model, other_curve, table=None):
    """Evaluate the model's quadrics on another curve's fiber.

    The same generator recipe (the recorded index pairs) is evaluated
    on the second curve; every quadric must vanish at every fiber
    class.  Requires the same field and zeta convention; for a curve
    over a different prime only the dimension diagnostics can be
    compared, and this function refuses.
    """
    d = model.desc
    if other_curve.desc != d:
        raise ConventionMismatch(
            "independent curve must share the field descriptor and zeta"
        )
    if table is None:
        table = torsion_table(other_curve, model.level)
    lam = slope_vector(table)
    fibers = enumerate_fiber_bases(table)
    level = model.level
    cols = []
    for basis in fibers:
        col = [
            d.mul(lam[basis.map_index(p, level)], lam[basis.map_index(q, level)])
            for p, q in model.basis_pairs
        ]
        cols.append(col)
    sym = model.sym_indices()
    worst = None
    failures = 0
    for q in model.quadrics:
        for col in cols:
            acc = d.zero
            for (j, k), c in zip(sym, q):
                if d.is_zero(c):
                    continue
                acc = d.add(acc, d.mul(c, d.mul(col[j], col[k])))
            if not d.is_zero(acc):
                failures += 1
                worst = d.raw_to_json(acc)
    return {
        "level": level,
        "prime": d.char,
        "quadrics": len(model.quadrics),
        "fiber_classes": len(cols),
        "violations": failures,
        "worst": worst,
        "passed": failures == 0,
    }
