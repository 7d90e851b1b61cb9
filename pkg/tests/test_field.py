import random
from fractions import Fraction

import pytest

from modulieis.errors import DivisionByZero, MixedFields, NoRootOfUnity
from modulieis.field import (
    FieldDescriptor,
    FieldElement,
    Matrix,
    field_arith,
    kernel_basis,
    primitive_root_of_unity,
    solve_linear,
)


def test_inverse_in_f7():
    d = FieldDescriptor(7, 3)
    a, b = FieldElement(d, 3), FieldElement(d, 5)
    assert (a / b).val == 2  # 5 * 2 = 10 = 3 mod 7


def test_identity_and_inverse_laws():
    d = FieldDescriptor(13, 3)
    rng = random.Random(7)
    for _ in range(50):
        x = FieldElement(d, rng.randrange(13))
        assert (x + 0) == x
        if not x.is_zero():
            assert (x * (FieldElement(d, 1) / x)).val == 1


def test_field_axioms_randomized():
    rng = random.Random(3)
    for d in (FieldDescriptor(31, 3), FieldDescriptor(0, 2), FieldDescriptor(5, 3, ext=(2, 0))):
        for _ in range(40):
            if d.char:
                vals = [d.norm(rng.randrange(d.char ** d.deg)) if d.deg == 1
                        else tuple(rng.randrange(d.char) for _ in range(d.deg))
                        for _ in range(3)]
            else:
                vals = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 9)) for _ in range(3)]
            x, y, z = (FieldElement(d, v) for v in vals)
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert x + y == y + x
            if not x.is_zero():
                assert x * (1 / x) == FieldElement(d, 1)


def test_division_by_zero_and_mixed_fields():
    d7 = FieldDescriptor(7, 3)
    d13 = FieldDescriptor(13, 3)
    with pytest.raises(DivisionByZero):
        field_arith(FieldElement(d7, 1), FieldElement(d7, 0), "div")
    with pytest.raises(MixedFields):
        field_arith(FieldElement(d7, 1), FieldElement(d13, 1), "add")


def test_primitive_root_of_unity():
    d = FieldDescriptor(7, 3)
    z = primitive_root_of_unity(d)
    # exhaustively: 2 and 4 have order 3 in F_7*, smallest is 2
    assert z.val == 2
    assert (z ** 3).val == 1 and z.val != 1
    with pytest.raises(NoRootOfUnity):
        FieldDescriptor(5, 3)  # 3 does not divide 4
    # order 2 root is always -1
    for d2 in (FieldDescriptor(7, 2), FieldDescriptor(0, 2)):
        z2 = primitive_root_of_unity(d2)
        assert z2.val == d2.norm(-1)


def test_primitive_root_deterministic():
    vals = {primitive_root_of_unity(FieldDescriptor(31, 5)).val for _ in range(5)}
    assert len(vals) == 1


def test_kernel_trivial_cases():
    d = FieldDescriptor(7, 3)
    assert kernel_basis(Matrix(d, [[1, 0], [0, 1]])) == []
    vecs = kernel_basis(Matrix(d, [[0, 0], [0, 0]]))
    assert [[e.val for e in v] for v in vecs] == [[1, 0], [0, 1]]


def test_kernel_annihilates_and_rank_nullity():
    d = FieldDescriptor(13, 3)
    rng = random.Random(11)
    for _ in range(25):
        rows = [[rng.randrange(13) for _ in range(5)] for _ in range(3)]
        m = Matrix(d, rows)
        ker = m.kernel_raw()
        assert m.rank() + len(ker) == 5
        for v in ker:
            assert all(x == 0 for x in m.mul_vec_raw(v))


def test_kernel_rank3_example():
    d = FieldDescriptor(13, 3)
    rng = random.Random(2)
    while True:
        m = Matrix(d, [[rng.randrange(13) for _ in range(5)] for _ in range(3)])
        if m.rank() == 3:
            break
    ker = m.kernel_raw()
    assert len(ker) == 2
    for v in ker:
        assert all(x == 0 for x in m.mul_vec_raw(v))


def test_kernel_echelonized():
    d = FieldDescriptor(7, 3)
    m = Matrix(d, [[1, 2, 3, 4], [2, 4, 6, 1]])
    ker = m.kernel_raw()
    K = Matrix(d, ker)
    R, _, rank = K.rref()
    assert rank == len(ker)
    assert [r for r in R.rows] == ker  # already in reduced echelon form


def test_generic_path_matches_fp_path():
    # the rational-field elimination must agree with the prime-field one
    dq = FieldDescriptor(0, 2)
    dp = FieldDescriptor(101, 2)
    rows = [[3, 1, 4], [1, 5, 9], [2, 6, 5]]
    kq = Matrix(dq, [[Fraction(v) for v in r] for r in rows]).rank()
    kp = Matrix(dp, [[v % 101 for v in r] for r in rows]).rank()
    assert kq == kp == 3


def test_solve_linear():
    d = FieldDescriptor(7, 3)
    x = solve_linear(d, [[2, 1], [1, 1]], [d.norm(5), d.norm(4)])
    assert x == [1, 3]


def test_descriptor_json_round_trip():
    for d in (FieldDescriptor(31, 5), FieldDescriptor(5, 3, ext=(2, 0)), FieldDescriptor(0, 2)):
        j = d.to_json()
        assert FieldDescriptor.from_json(j) == d


def test_extension_inverse():
    d = FieldDescriptor(5, 3, ext=(2, 0))  # x^2 + 2 over F_5
    rng = random.Random(5)
    for _ in range(30):
        v = (rng.randrange(5), rng.randrange(5))
        if d.is_zero(v):
            continue
        assert d.mul(v, d.inv(v)) == d.one
