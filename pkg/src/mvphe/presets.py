"""Desk-scale parameter presets used by the test suite and as CLI defaults.

The toy field is q = 10007 with the plane ideal <x1^2 + x2^2 - 1, x1*x2 - 3>:
its degree-<=2 slice has dimension 2 and its degree-<=4 slice dimension 11,
so the additive preset runs at n = 5 and the multiplicative one at n = 15.
"""

from __future__ import annotations

from .field import FieldContext
from .mvpoly import IdealSpec, MonomialIndex, Polynomial
from .scheme import MODE_ADDITIVE, MODE_MULT, SchemeParams

TOY_Q = 10007


def toy_ideal(q: int = TOY_Q) -> IdealSpec:
    ctx = FieldContext(q)
    index = MonomialIndex(2, 2)
    g1 = Polynomial.from_terms(index, ctx, [(1, (2, 0)), (1, (0, 2)), (q - 1, (0, 0))])
    g2 = Polynomial.from_terms(index, ctx, [(1, (1, 1)), (q - 3, (0, 0))])
    return IdealSpec([g1, g2])


def toy_additive_params(alpha: str = "0.0008", epsilon: str = "0.01") -> SchemeParams:
    """q=10007, ell=2, r=2, n = dim(I_<=2) + 3 = 5, additive only."""
    return SchemeParams(
        lam=32, q=TOY_Q, ell=2, r=2, n=5, alpha=alpha, epsilon=epsilon,
        mode=MODE_ADDITIVE, ideal=toy_ideal(), headroom=2,
    )


def toy_mult_params(alpha: str = "0.0008", epsilon: str = "0.01") -> SchemeParams:
    """Same ideal in depth-1 multiplicative mode: n = dim(I_<=4) + 4 = 15."""
    return SchemeParams(
        lam=32, q=TOY_Q, ell=2, r=2, n=15, alpha=alpha, epsilon=epsilon,
        mode=MODE_MULT, ideal=toy_ideal(), headroom=2,
    )
