import pytest

from modulieis.curve import (
    find_full_torsion_curve,
    iter_full_torsion_curves,
    torsion_table,
)

_TABLES = {}
_CURVES = {}

# first primes with a suitable curve, discovered by the scanner itself;
# pinned here so the suite does not re-scan hopeless primes every run
LEVEL_PRIMES = {
    2: (11, 13, 17),
    3: (19, 31, 37),
    4: (29, 37, 41),
    5: (71, 101, 131),
    7: (197, 211, 239),
}


def get_curve(p, level, skip=0):
    key = (p, level, skip)
    if key not in _CURVES:
        _CURVES[key] = find_full_torsion_curve(p, level, skip=skip)
    return _CURVES[key]


def get_curves_at(p, level, count):
    out = []
    it = iter_full_torsion_curves(p, level)
    for curve in it:
        out.append(curve)
        if len(out) >= count:
            break
    assert len(out) == count, f"needed {count} curves over F_{p} with E[{level}]"
    return out


def get_table(p, level, skip=0):
    key = (p, level, skip)
    if key not in _TABLES:
        _TABLES[key] = torsion_table(get_curve(p, level, skip), level)
    return _TABLES[key]


@pytest.fixture(scope="session")
def table19_3():
    return get_table(19, 3)


@pytest.fixture(scope="session")
def table29_4():
    return get_table(29, 4)


@pytest.fixture(scope="session")
def table71_5():
    return get_table(71, 5)


@pytest.fixture(scope="session")
def table197_7():
    return get_table(197, 7)


@pytest.fixture(scope="session")
def ctx6():
    from modulieis.hecke import build_context

    return build_context(3, 2, prime=67)


@pytest.fixture(scope="session")
def ctx9():
    from modulieis.hecke import build_context

    return build_context(3, 3, prime=163)


@pytest.fixture(scope="session")
def ctx18():
    from modulieis.hecke import build_context

    return build_context(3, 3, prime=631, need_factorial=True)


@pytest.fixture(scope="session")
def lattice200():
    from modulieis.analytic import LatticeConfig, LatticeSums

    cfg = LatticeConfig(0.31 + 1.7j, level=5, radius=200, tol=1e-6)
    return cfg, LatticeSums(cfg)


@pytest.fixture(scope="session")
def lattice400():
    from modulieis.analytic import LatticeConfig, LatticeSums

    cfg = LatticeConfig(0.31 + 1.7j, level=5, radius=400, tol=1e-6)
    return cfg, LatticeSums(cfg)
