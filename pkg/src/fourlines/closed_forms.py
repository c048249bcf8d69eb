"""Closed-form families of log terminal surfaces and effective bounds.

The T(a1, a2, a3, a4) family contracts two long chains on a blowup of
a quadrilateral of lines; its canonical degree is a ratio of explicit
polynomials in the four parameters, so records inside the family can
be found by scanning the minimal parameter collections.  The module
also covers the one quasi-smooth weighted hypersurface benchmark and
the astronomically small effective lower bound for log canonical
thresholds above a given delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence, Union

from .singularities import chain_determinant

__all__ = [
    "TSurface",
    "t_surface",
    "t_enumerate_minimal",
    "t_surface_chains",
    "weighted_hypersurface_k2",
    "effective_lower_bound_log10",
]

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class TSurface:
    """Numerical profile of one member of the T family."""

    a: tuple[Fraction, Fraction, Fraction, Fraction]
    A: Fraction
    B1: Fraction
    B2: Fraction
    k2: Fraction
    ample: bool


def _poly_a(a1, a2, a3, a4):
    return (
        a1 * a2 * a3 * a4
        - a2 * a3 * a4
        - a1 * a3 * a4
        - a1 * a2 * a4
        - a1 * a2 * a3
        + a1 * a2
        + a2 * a3
        + a3 * a4
        + a1 * a4
        - a1
        - a2
        - a3
        - a4
        + 3
    )


def _poly_b1(a1, a2, a3, a4):
    return (
        a1 * a2 * a3 * a4
        - a1 * a3 * a4
        - a1 * a2 * a3
        + a2 * a3
        + a1 * a4
        - a1
        - a3
        + 1
    )


def _poly_b2(a1, a2, a3, a4):
    return (
        a1 * a2 * a3 * a4
        - a2 * a3 * a4
        - a1 * a2 * a4
        + a1 * a2
        + a3 * a4
        - a2
        - a4
        + 1
    )


def t_surface(a1: Rational, a2: Rational, a3: Rational, a4: Rational) -> TSurface:
    """Canonical data of T(a1, a2, a3, a4); each parameter must be >= 2.

    The canonical class is ample exactly when A > 0, the two chain
    singularities have determinants B1 and B2, and the canonical
    degree is A^2 / (B1 * B2).
    """
    a = tuple(Fraction(x) for x in (a1, a2, a3, a4))
    if any(x < 2 for x in a):
        raise ValueError("all four parameters must be at least 2")
    A = _poly_a(*a)
    B1 = _poly_b1(*a)
    B2 = _poly_b2(*a)
    return TSurface(a=a, A=A, B1=B1, B2=B2, k2=A * A / (B1 * B2), ample=A > 0)


def _rotations(quad: tuple[int, int, int, int]):
    return [quad[i:] + quad[:i] for i in range(4)]


def t_enumerate_minimal(cap: int) -> list[TSurface]:
    """All minimal ample parameter collections, modulo cyclic rotation.

    The ample region A > 0 is upward closed in the product order on
    integer parameters, so a collection is minimal exactly when every
    single decrement (staying >= 2) leaves the region.  Only cyclic
    rotations are identified; the result lists the rotation-minimal
    representative of each class, sorted.  A cap below 10 would cut
    the list short, so it is rejected.
    """
    if cap < 10:
        raise ValueError("cap must be at least 10")
    seen: set[tuple[int, int, int, int]] = set()
    out = []
    for a1 in range(2, cap + 1):
        for a2 in range(2, cap + 1):
            for a3 in range(2, cap + 1):
                for a4 in range(2, cap + 1):
                    quad = (a1, a2, a3, a4)
                    if _poly_a(*quad) <= 0:
                        continue
                    minimal = True
                    for i in range(4):
                        if quad[i] == 2:
                            continue
                        lower = quad[:i] + (quad[i] - 1,) + quad[i + 1 :]
                        if _poly_a(*lower) > 0:
                            minimal = False
                            break
                    if not minimal:
                        continue
                    rep = min(_rotations(quad))
                    if rep not in seen:
                        seen.add(rep)
                        out.append(t_surface(*rep))
    out.sort(key=lambda t: t.a)
    return out


def t_surface_chains(
    a1: int, a2: int, a3: int, a4: int
) -> tuple[list[int], list[int]]:
    """Mark sequences of the two contracted chains of T(a1, ..., a4)."""
    quad = tuple(Fraction(x) for x in (a1, a2, a3, a4))
    if any(x.denominator != 1 for x in quad):
        raise ValueError("chain marks need integer parameters")
    if any(x < 2 for x in quad):
        raise ValueError("all four parameters must be at least 2")
    a1, a2, a3, a4 = (int(x) for x in quad)
    first = [2] * (a4 - 1) + [a3, a1] + [2] * (a2 - 1)
    second = [2] * (a3 - 1) + [a2, a4] + [2] * (a1 - 1)
    return first, second


def weighted_hypersurface_k2(
    d: int, w1: int, w2: int, w3: int, w4: int
) -> Fraction:
    """Canonical degree d (d - w1 - w2 - w3 - w4)^2 / (w1 w2 w3 w4)."""
    weights = (w1, w2, w3, w4)
    if d <= 0 or any(w <= 0 for w in weights):
        raise ValueError("degree and weights must be positive")
    excess = Fraction(d - sum(weights))
    return d * excess * excess / math.prod(weights)


def effective_lower_bound_log10(delta: Rational) -> Decimal:
    """log10 of the effective volume lower bound for discrepancies > delta - 1.

    With ell = ceil(1/delta) the bound is 1 / (ell * (2 ell)^N) where
    N = 128 ell^5 + 4 ell, far beyond floating point; the base-10
    logarithm is returned as a Decimal with comfortably more than 15
    significant digits.
    """
    d = Fraction(delta)
    if not 0 < d <= 1:
        raise ValueError("delta must lie in (0, 1]")
    ell = math.ceil(1 / d)
    steps = 128 * ell**5 + 4 * ell
    with localcontext() as ctx:
        ctx.prec = 50
        return -(Decimal(ell).log10() + Decimal(steps) * Decimal(2 * ell).log10())
