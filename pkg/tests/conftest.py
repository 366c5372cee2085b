import pytest

from skewlaurent.field_tower import FiniteFieldCtx, RationalFunctionCtx
from skewlaurent.skew_series import SkewSeries


@pytest.fixture(scope="session")
def gf25():
    return FiniteFieldCtx(2, 5)


@pytest.fixture(scope="session")
def gf35():
    return FiniteFieldCtx(3, 5)


@pytest.fixture(scope="session")
def gf28():
    return FiniteFieldCtx(2, 8)


@pytest.fixture(scope="session")
def gf34():
    return FiniteFieldCtx(3, 4)


@pytest.fixture(scope="session")
def gf9():
    return FiniteFieldCtx(3, 2)


@pytest.fixture(scope="session")
def qt_shift():
    return RationalFunctionCtx("shift")


def nonzero_elem(ctx, rng):
    while True:
        a = ctx.random_elem(rng)
        if a:
            return a


def random_series(ctx, rng, val_lo=-8, val_hi=8, width=24, dense=True):
    """Random series with nonzero leading coefficient and prec = val + width."""
    val = rng.randint(val_lo, val_hi)
    coeffs = [
        nonzero_elem(ctx, rng) if dense else ctx.random_elem(rng) for _ in range(width)
    ]
    coeffs[0] = nonzero_elem(ctx, rng)
    return SkewSeries(ctx, val, coeffs, val + width)
