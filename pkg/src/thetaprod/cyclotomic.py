"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored as a rational combination of roots of unity e(a/N)
reduced to a canonical basis, so equality is decidable and structural.
The canonical basis of Q(zeta_N) is the tensor product over prime powers
q = p^e || N of the power bases {zeta_q^i : 0 <= i < phi(q)}; a term whose
p-part exponent falls in the excluded top block is rewritten through
1 + zeta_q^{q/p} + ... + zeta_q^{(p-1)q/p} = 0.

Conductors are merged via zeta_N = zeta_M^{M/N} for N | M and reduced back
to the minimal level after every operation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .matrices import xgcd


def _factor(n: int) -> list[tuple[int, int]]:
    """Prime-power factorization [(p, p^e), ...] of n >= 1."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            q = 1
            while n % d == 0:
                n //= d
                q *= d
            out.append((d, q))
        d += 1
    if n > 1:
        out.append((n, n))
    return out


@lru_cache(maxsize=None)
def _reduce_table(n: int) -> tuple:
    """For each exponent a mod n, its expansion over the canonical basis.

    Entry a is a tuple of (basis_exponent, sign) pairs such that
    e(a/n) = sum sign * e(basis_exponent/n).
    """
    if n == 1:
        return (((0, 1),),)
    idem = {}
    for p, q in _factor(n):
        m = n // q
        if m == 1:
            idem[q] = (p, 1 % n)
            continue
        _, _, y = xgcd(q, m)
        idem[q] = (p, (y * m) % n)
    table = []
    for a in range(n):
        terms = {a: 1}
        for p, q in _factor(n):
            step = q // p
            uq = idem[q][1]
            new: dict[int, int] = {}
            for e, c in terms.items():
                aq = e % q
                t = aq // step
                if t <= p - 2:
                    new[e] = new.get(e, 0) + c
                else:
                    r = aq % step
                    for k in range(p - 1):
                        e2 = (e + (r + k * step - aq) * uq) % n
                        new[e2] = new.get(e2, 0) - c
            terms = {e: c for e, c in new.items() if c}
        table.append(tuple(sorted(terms.items())))
    return tuple(table)


def _canonical(n: int, coeffs: dict) -> tuple[int, dict]:
    """Reduce to canonical basis at level n, then to minimal conductor."""
    while True:
        table = _reduce_table(n)
        out: dict[int, Fraction] = {}
        for a, c in coeffs.items():
            if not c:
                continue
            for b, s in table[a % n]:
                v = out.get(b)
                v = c * s if v is None else v + c * s
                if v:
                    out[b] = v
                elif b in out:
                    del out[b]
        if not out:
            return 1, {}
        g = n
        for a in out:
            g = gcd(g, a)
            if g == 1:
                break
        if g == 1 or n == 1:
            return n, out
        n //= g
        coeffs = {a // g: c for a, c in out.items()}


class CycNum:
    """An element of a cyclotomic field, canonicalized on construction."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs: dict):
        self.n, self.c = _canonical(n, coeffs)

    @staticmethod
    def zero() -> "CycNum":
        return CycNum(1, {})

    @staticmethod
    def from_rational(r) -> "CycNum":
        return CycNum(1, {0: Fraction(r)})

    @staticmethod
    def root_of_unity(z: Fraction) -> "CycNum":
        """e(z) = exp(2*pi*i*z) for rational z."""
        z = Fraction(z)
        b = z.denominator
        a = z.numerator % b
        return CycNum(b, {a: Fraction(1)})

    def _lift(self, m: int) -> dict:
        k = m // self.n
        return {a * k: c for a, c in self.c.items()}

    def __add__(self, other):
        if not isinstance(other, CycNum):
            other = CycNum.from_rational(other)
        m = self.n * other.n // gcd(self.n, other.n)
        out = self._lift(m)
        for a, c in other._lift(m).items():
            out[a] = out.get(a, Fraction(0)) + c
        return CycNum(m, out)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.n, {a: -c for a, c in self.c.items()})

    def __sub__(self, other):
        if not isinstance(other, CycNum):
            other = CycNum.from_rational(other)
        return self + (-other)

    def __rsub__(self, other):
        return CycNum.from_rational(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, CycNum):
            q = Fraction(other)
            if not q:
                return CycNum.zero()
            return CycNum(self.n, {a: c * q for a, c in self.c.items()})
        if self.n == 1:
            r = self.c.get(0, Fraction(0))
            return other * r
        if other.n == 1:
            return self * other.c.get(0, Fraction(0))
        m = self.n * other.n // gcd(self.n, other.n)
        a1 = self._lift(m)
        a2 = other._lift(m)
        out: dict[int, Fraction] = {}
        for a, c in a1.items():
            for b, d in a2.items():
                e = (a + b) % m
                out[e] = out.get(e, Fraction(0)) + c * d
        return CycNum(m, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # division by a rational scalar only; general inversion is not needed
        q = Fraction(other)
        return self * (1 / q)

    def conjugate(self) -> "CycNum":
        return CycNum(self.n, {(-a) % self.n: c for a, c in self.c.items()})

    def __eq__(self, other):
        if not isinstance(other, CycNum):
            if self.n != 1:
                return False
            return self.c.get(0, Fraction(0)) == Fraction(other)
        return self.n == other.n and self.c == other.c

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.c.items()))))

    def __bool__(self):
        return bool(self.c)

    @property
    def is_rational(self) -> bool:
        return self.n == 1

    def as_rational(self) -> Fraction:
        if self.n != 1:
            raise ValueError("not a rational cyclotomic number")
        return self.c.get(0, Fraction(0))

    def __repr__(self):
        if not self.c:
            return "CycNum(0)"
        parts = [f"{c}*e({a}/{self.n})" if a else str(c)
                 for a, c in sorted(self.c.items())]
        return "CycNum(" + " + ".join(parts) + ")"


ONE = CycNum.from_rational(1)


def cyc_e(z) -> CycNum:
    """e(z) for rational z."""
    return CycNum.root_of_unity(Fraction(z))


def cyc_arith(a: CycNum, b: CycNum, op: str) -> CycNum:
    """Exact field arithmetic; conductors are merged to the lcm."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * m with m squarefree; returns (s, m)."""
    s, m = 1, 1
    for p, q in _factor(n):
        e = 0
        while q > 1:
            q //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


@lru_cache(maxsize=None)
def sqrt_int(n: int) -> CycNum:
    """The positive square root of a positive integer as an exact CycNum.

    sqrt(2) = zeta_8 + zeta_8^{-1}; for an odd prime p the quadratic Gauss
    sum gives sqrt(p) (times i when p = 3 mod 4).  Validated by squaring.
    """
    if n <= 0:
        raise ValueError("need a positive integer")
    s, m = _squarefree_split(n)
    out = CycNum.from_rational(s)
    for p, _ in _factor(m):
        if p == 2:
            root = CycNum(8, {1: Fraction(1), 7: Fraction(1)})
        else:
            gauss: dict[int, Fraction] = {}
            for j in range(p):
                a = (j * j) % p
                gauss[a] = gauss.get(a, Fraction(0)) + 1
            root = CycNum(p, gauss)
            if p % 4 == 3:
                root = root * cyc_e(Fraction(-1, 4))
        out = out * root
    if out * out != CycNum.from_rational(n):
        raise AssertionError("square root construction failed")
    return out
