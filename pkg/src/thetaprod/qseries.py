"""Truncated vector-valued q-expansions with exact rational coefficients.

A series stores only coefficients at exponents strictly below ``trunc``;
those are guaranteed complete.  ``trunc = None`` means the expansion is
complete at every exponent (used for series that are exactly known, e.g.
constants).  Every operation computes the tightest provable truncation of
its result, so prefix stability holds across pipelines.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fqm import Fqm, FqmLinMap

Key = tuple  # (element tuple, exponent Fraction)


def _tr_add(a, b):
    """trunc + leading with None acting as +infinity."""
    if a is None or b is None:
        return None
    return a + b


def _tr_min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class QSeries:
    """A truncated q-expansion valued in the group ring of an FQM."""

    __slots__ = ("fqm", "weight", "coeffs", "trunc")

    def __init__(self, fqm: Fqm, weight, coeffs: dict, trunc):
        self.fqm = fqm
        self.weight = Fraction(weight)
        self.trunc = Fraction(trunc) if trunc is not None else None
        clean = {}
        for (lam, n), c in coeffs.items():
            c = Fraction(c)
            if not c:
                continue
            n = Fraction(n)
            if self.trunc is not None and n >= self.trunc:
                continue
            clean[(fqm.reduce(lam), n)] = c
        self.coeffs = clean

    # -- basic structure ----------------------------------------------------

    @staticmethod
    def zero(fqm: Fqm, weight, trunc) -> "QSeries":
        return QSeries(fqm, weight, {}, trunc)

    @property
    def leading(self):
        """Minimal stored exponent; None for a (known-)zero series."""
        if not self.coeffs:
            return None
        return min(n for (_, n) in self.coeffs)

    @property
    def effective_leading(self):
        """Lower bound for the true leading exponent (trunc if no terms)."""
        lead = self.leading
        return lead if lead is not None else self.trunc

    def coeff(self, lam, n) -> Fraction:
        return self.coeffs.get((self.fqm.reduce(lam), Fraction(n)), Fraction(0))

    def support_elems(self):
        return sorted({lam for (lam, _) in self.coeffs})

    def restrict(self, trunc) -> "QSeries":
        return QSeries(self.fqm, self.weight, self.coeffs,
                       _tr_min(self.trunc, Fraction(trunc)))

    def __eq__(self, other):
        return (isinstance(other, QSeries) and self.fqm == other.fqm
                and self.weight == other.weight and self.trunc == other.trunc
                and self.coeffs == other.coeffs)

    def __repr__(self):
        terms = sorted(self.coeffs.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        shown = ", ".join(f"{c}*q^{n}*e{list(lam)}" for (lam, n), c in terms[:6])
        if len(terms) > 6:
            shown += ", ..."
        return f"QSeries(w={self.weight}, trunc={self.trunc}: {shown})"

    # -- linear operations ----------------------------------------------------

    def _check_compatible(self, other: "QSeries"):
        if self.fqm != other.fqm:
            raise ValueError("mismatched finite quadratic modules")
        if self.weight != other.weight:
            raise ValueError("mismatched weights")

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return QSeries(self.fqm, self.weight, out,
                       _tr_min(self.trunc, other.trunc))

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries(self.fqm, self.weight,
                       {k: c * v for k, v in self.coeffs.items()}, self.trunc)

    def __neg__(self) -> "QSeries":
        return self.scale(-1)


def add(f: QSeries, g: QSeries) -> QSeries:
    return f + g


def scale(f: QSeries, c) -> QSeries:
    return f.scale(c)


def _product_trunc(f: QSeries, g: QSeries):
    return _tr_min(_tr_add(f.trunc, g.effective_leading),
                   _tr_add(g.trunc, f.effective_leading))


def mul_scalar_series(s: QSeries, f: QSeries) -> QSeries:
    """Cauchy product of a scalar series with f; weights add."""
    if not s.fqm.is_trivial:
        raise ValueError("left factor must be a scalar series")
    trunc = _product_trunc(s, f)
    out: dict = {}
    for (_, m), a in s.coeffs.items():
        for (lam, k), b in f.coeffs.items():
            n = m + k
            if trunc is not None and n >= trunc:
                continue
            key = (lam, n)
            out[key] = out.get(key, Fraction(0)) + a * b
    return QSeries(f.fqm, s.weight + f.weight, out, trunc)


def contract(f: QSeries, g: QSeries) -> QSeries:
    """Pairing sum_lam f_lam * g_lam for g valued in the (-1)-scaled module.

    Realizes the contraction through the canonical identification of the
    (-1)-scaling with the dual representation; the result is scalar and the
    weights add.
    """
    if f.fqm.scaled_minus1() != g.fqm:
        raise ValueError("second factor must live on the (-1)-scaled module")
    trunc = _product_trunc(f, g)
    by_elem: dict = {}
    for (lam, k), b in g.coeffs.items():
        by_elem.setdefault(lam, []).append((k, b))
    out: dict = {}
    for (lam, m), a in f.coeffs.items():
        for k, b in by_elem.get(lam, ()):
            n = m + k
            if trunc is not None and n >= trunc:
                continue
            key = ((), n)
            out[key] = out.get(key, Fraction(0)) + a * b
    return QSeries(Fqm.trivial(), f.weight + g.weight, out, trunc)


def apply_linmap(m: FqmLinMap, f: QSeries) -> QSeries:
    """Coefficientwise image of f under a linear map of group rings."""
    if m.source != f.fqm:
        raise ValueError("map source does not match the series module")
    out: dict = {}
    for (lam, n), c in f.coeffs.items():
        for tgt, w in m.cols[lam]:
            key = (tgt, n)
            val = out.get(key, Fraction(0)) + w * c
            if val:
                out[key] = val
            elif key in out:
                del out[key]
    return QSeries(m.target, f.weight, out, f.trunc)


class PrincipalPart:
    """The singular part of a series: terms at n < 0, plus the constant
    term when the weight is zero."""

    __slots__ = ("terms", "constant")

    def __init__(self, terms: dict, constant: dict | None = None):
        self.terms = {}
        for (lam, n), c in terms.items():
            n = Fraction(n)
            c = Fraction(c)
            if n >= 0:
                raise ValueError("principal part terms need negative exponents")
            if c:
                self.terms[(tuple(lam), n)] = c
        self.constant = None
        if constant is not None:
            self.constant = {tuple(lam): Fraction(c)
                             for lam, c in constant.items() if Fraction(c)}

    def is_symmetric(self, fqm: Fqm) -> bool:
        for (lam, n), c in self.terms.items():
            if self.terms.get((fqm.neg(lam), n)) != c:
                return False
        if self.constant:
            for lam, c in self.constant.items():
                if self.constant.get(fqm.neg(lam)) != c:
                    return False
        return True

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(math.ceil(-n) for (_, n) in self.terms)

    def __eq__(self, other):
        return (isinstance(other, PrincipalPart) and self.terms == other.terms
                and self.constant == other.constant)

    def __repr__(self):
        return f"PrincipalPart(terms={self.terms}, constant={self.constant})"


def principal_part(f: QSeries) -> PrincipalPart:
    """The terms with n < 0 (and the constant term in weight 0)."""
    if f.trunc is not None and f.trunc <= 0:
        raise ValueError("truncation does not determine the principal part")
    terms = {k: c for k, c in f.coeffs.items() if k[1] < 0}
    constant = None
    if f.weight == 0:
        constant = {lam: c for (lam, n), c in f.coeffs.items() if n == 0}
    return PrincipalPart(terms, constant)


def filtration_degree(f: QSeries) -> int:
    """Smallest natural d with all stored exponents >= -d."""
    return principal_part(f).degree()


def check_symmetry(f: QSeries) -> bool:
    """c_{-lam}(n) = c_lam(n) on all stored coefficients."""
    for (lam, n), c in f.coeffs.items():
        if f.coeffs.get((f.fqm.neg(lam), n)) != c:
            return False
    return True


def agree_on_common(f: QSeries, g: QSeries) -> bool:
    """Exact equality of all coefficients below the common truncation."""
    t = _tr_min(f.trunc, g.trunc)
    fa = f if t == f.trunc else f.restrict(t)
    ga = g if t == g.trunc else g.restrict(t)
    return fa.coeffs == ga.coeffs


def common_window(f: QSeries, g: QSeries):
    return _tr_min(f.trunc, g.trunc)


def tensor(f: QSeries, g: QSeries, fqm, relabel) -> QSeries:
    """Outer product of two series as a series on ``fqm``.

    ``relabel(lam_f, lam_g)`` must return the element of ``fqm`` matching
    the pair of classes; exponents add and the weights add.
    """
    trunc = _product_trunc(f, g)
    out: dict = {}
    for (lam1, m), a in f.coeffs.items():
        for (lam2, k), b in g.coeffs.items():
            n = m + k
            if trunc is not None and n >= trunc:
                continue
            key = (relabel(lam1, lam2), n)
            out[key] = out.get(key, Fraction(0)) + a * b
    return QSeries(fqm, f.weight + g.weight, out, trunc)
