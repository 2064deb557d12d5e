"""Classical scalar q-expansions: Eisenstein series, eta powers, Delta, j.

All series are exact-rational QSeries on the trivial module.  Weights are
tracked so products land where they should.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fqm import Fqm
from .qseries import QSeries, mul_scalar_series

_TRIVIAL = Fqm.trivial()


def scalar_series(coeffs: dict, trunc, weight=0) -> QSeries:
    """Scalar series from a map exponent -> coefficient."""
    return QSeries(_TRIVIAL, weight,
                   {((), Fraction(n)): Fraction(c) for n, c in coeffs.items()},
                   trunc)


def _sigma(n: int, k: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def eisenstein4(trunc) -> QSeries:
    trunc = Fraction(trunc)
    top = math.ceil(trunc)
    return scalar_series({0: 1, **{n: 240 * _sigma(n, 3) for n in range(1, top)}},
                         trunc, weight=4)


def eisenstein6(trunc) -> QSeries:
    trunc = Fraction(trunc)
    top = math.ceil(trunc)
    return scalar_series({0: 1, **{n: -504 * _sigma(n, 5) for n in range(1, top)}},
                         trunc, weight=6)


def euler_function(trunc) -> QSeries:
    """prod_{n>=1} (1 - q^n) via the pentagonal number expansion."""
    trunc = Fraction(trunc)
    coeffs = {0: 1}
    k = 1
    while True:
        n1 = k * (3 * k - 1) // 2
        n2 = k * (3 * k + 1) // 2
        if n1 >= trunc and n2 >= trunc:
            break
        sign = -1 if k % 2 else 1
        if n1 < trunc:
            coeffs[n1] = sign
        if n2 < trunc:
            coeffs[n2] = sign
        k += 1
    return scalar_series(coeffs, trunc, weight=0)


def scalar_pow(s: QSeries, k: int) -> QSeries:
    """k-th power (k >= 0) by binary exponentiation."""
    if k < 0:
        raise ValueError("negative powers need scalar_inverse")
    out = scalar_series({0: 1}, None, weight=0)
    base = s
    while k:
        if k & 1:
            out = mul_scalar_series(out, base)
        k >>= 1
        if k:
            base = mul_scalar_series(base, base)
    return out


def scalar_inverse(s: QSeries) -> QSeries:
    """Multiplicative inverse of a scalar series with nonzero leading term.

    If s is complete below trunc T with leading exponent a, the inverse is
    complete below T - 2a.
    """
    if not s.fqm.is_trivial:
        raise ValueError("scalar series required")
    lead = s.leading
    if lead is None:
        raise ValueError("cannot invert a series with no known terms")
    offsets = {}
    for (_, n), c in s.coeffs.items():
        offsets[n - lead] = c
    den = 1
    for off in offsets:
        den = den * off.denominator // math.gcd(den, off.denominator)
    if s.trunc is None:
        span = max(off for off in offsets)
    else:
        span = s.trunc - lead
    steps = int(span * den) if span is not None else 0
    p = {int(off * den): c for off, c in offsets.items()}
    p0 = p[0]
    u = [Fraction(0)] * (steps + 1)
    u[0] = 1 / p0
    for t in range(1, steps + 1):
        acc = Fraction(0)
        for m, c in p.items():
            if 0 < m <= t:
                acc += c * u[t - m]
        u[t] = -acc / p0
    trunc = None if s.trunc is None else s.trunc - 2 * lead
    coeffs = {-lead + Fraction(t, den): u[t] for t in range(steps + 1) if u[t]}
    return scalar_series(coeffs, trunc, weight=-s.weight)


def eta_pow(k: int, trunc) -> QSeries:
    """eta(tau)^k = q^{k/24} * prod(1-q^n)^k for k >= 0."""
    trunc = Fraction(trunc)
    shift = Fraction(k, 24)
    base = scalar_pow(euler_function(trunc - shift + 1), k).restrict(trunc - shift)
    out = {((), n + shift): c for ((_, n), c) in base.coeffs.items()}
    return QSeries(_TRIVIAL, Fraction(k, 2), out, trunc)


def delta(trunc) -> QSeries:
    return eta_pow(24, trunc)


def delta_inverse(trunc) -> QSeries:
    trunc = Fraction(trunc)
    return scalar_inverse(delta(trunc + 2))


def j_function(trunc) -> QSeries:
    """j = E4^3 / Delta = q^{-1} + 744 + ..., complete below trunc."""
    trunc = Fraction(trunc)
    e4cubed = scalar_pow(eisenstein4(trunc + 1), 3)
    dinv = scalar_inverse(delta(trunc + 3))
    out = mul_scalar_series(e4cubed, dinv)
    return QSeries(_TRIVIAL, 0, out.coeffs, trunc)


def scalar_catalog(name: str, trunc) -> QSeries:
    """Catalog lookup: E4 | E6 | Delta | j | eta^k (also eta_pow(k))."""
    if name == "E4":
        return eisenstein4(trunc)
    if name == "E6":
        return eisenstein6(trunc)
    if name == "Delta":
        return delta(trunc)
    if name == "j":
        return j_function(trunc)
    if name.startswith("eta^"):
        return eta_pow(int(name[4:]), trunc)
    if name.startswith("eta_pow(") and name.endswith(")"):
        return eta_pow(int(name[8:-1]), trunc)
    raise ValueError(f"unknown scalar catalog name {name!r}")
