"""Concrete modular forms: weak Jacobi forms of small index, the
correspondence with vector-valued forms, and the principal-part solver.

Two-variable building blocks are kept internally as EZ-style dicts
(n, r) -> coefficient with r the integer elliptic exponent; they are
converted to JacobiExpansion (exponents as dual-lattice vectors) at the
API boundary.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .lattice import EvenLattice, enumerate_vectors, norm_counts, pairing_counts
from .matrices import mat_transpose, solve_left
from .qseries import PrincipalPart, QSeries, mul_scalar_series, principal_part
from .scalars import (
    eisenstein4,
    eisenstein6,
    eta_pow,
    j_function,
    scalar_inverse,
    scalar_series,
)
from .theta import JacobiExpansion, fqm_relabel
from .qseries import apply_linmap


class _EZ:
    """Internal two-variable series: coeffs[(n, r)] with integer r."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: dict, trunc):
        self.trunc = Fraction(trunc) if trunc is not None else None
        self.coeffs = {(Fraction(n), int(r)): Fraction(c)
                       for (n, r), c in coeffs.items()
                       if c and (self.trunc is None or Fraction(n) < self.trunc)}

    @property
    def leading(self):
        return min((n for (n, _) in self.coeffs), default=None)

    def scale(self, c):
        c = Fraction(c)
        return _EZ({k: c * v for k, v in self.coeffs.items()}, self.trunc)

    def __add__(self, other):
        t = _min_tr(self.trunc, other.trunc)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return _EZ(out, t)

    def mul(self, other: "_EZ") -> "_EZ":
        t = _prod_tr(self, other)
        out: dict = {}
        for (n1, r1), c1 in self.coeffs.items():
            for (n2, r2), c2 in other.coeffs.items():
                n = n1 + n2
                if t is not None and n >= t:
                    continue
                key = (n, r1 + r2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return _EZ(out, t)

    def mul_scalar(self, s: QSeries) -> "_EZ":
        t = _prod_tr(self, s)
        out: dict = {}
        for (n1, r), c1 in self.coeffs.items():
            for (_, n2), c2 in s.coeffs.items():
                n = n1 + n2
                if t is not None and n >= t:
                    continue
                key = (n, r)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return _EZ(out, t)

    def restrict(self, trunc):
        return _EZ(self.coeffs, _min_tr(self.trunc, Fraction(trunc)))


def _min_tr(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _eff_lead(x):
    lead = x.leading
    return lead if lead is not None else x.trunc


def _prod_tr(a, b):
    la, lb = _eff_lead(a), _eff_lead(b)
    cands = []
    if a.trunc is not None and lb is not None:
        cands.append(a.trunc + lb)
    if b.trunc is not None and la is not None:
        cands.append(b.trunc + la)
    if a.trunc is None and b.trunc is None:
        return None
    return min(cands) if cands else None


def _theta_pair_sq(trunc, parity: str, signs: bool) -> _EZ:
    """Squares of the classical theta functions as two-variable series.

    parity 'odd': exponents (2m+1)^2/8, half-integral characteristics
    (theta_2, and with signs the odd theta); parity 'even': exponents
    m^2/2 (theta_3, theta_4 with signs).
    """
    trunc = Fraction(trunc)
    out: dict = {}
    if parity == "odd":
        top = math.isqrt(int(8 * trunc) + 1) + 2
        terms = []
        for m in range(-top, top + 1):
            e = Fraction((2 * m + 1) ** 2, 8)
            if e < trunc:
                terms.append((m, e))
    else:
        top = math.isqrt(int(2 * trunc) + 1) + 2
        terms = []
        for m in range(-top, top + 1):
            e = Fraction(m * m, 2)
            if e < trunc:
                terms.append((m, e))
    for m1, e1 in terms:
        for m2, e2 in terms:
            n = e1 + e2
            if n >= trunc:
                continue
            if parity == "odd":
                r = m1 + m2 + 1
                sign = (-1) ** (m1 + m2) if signs else 1
            else:
                r = m1 + m2
                sign = (-1) ** (m1 + m2) if signs else 1
            key = (n, r)
            out[key] = out.get(key, Fraction(0)) + sign
    return _EZ(out, trunc)


def _ez_z0(ez: _EZ) -> QSeries:
    out: dict = {}
    for (n, _), c in ez.coeffs.items():
        out[n] = out.get(n, Fraction(0)) + c
    return scalar_series(out, ez.trunc)


def weak_jacobi_m21_ez(trunc) -> _EZ:
    """phi_{-2,1} = -theta_1(tau,z)^2 / eta^6, with expansion
    (y - 2 + 1/y) + O(q)."""
    trunc = Fraction(trunc)
    vt2 = _theta_pair_sq(trunc + 1, "odd", signs=True)
    eta6_inv = scalar_inverse(eta_pow(6, trunc + 1))
    return vt2.mul_scalar(eta6_inv).restrict(trunc)


def jacobi_eisenstein_e41_ez(trunc) -> _EZ:
    """The weight-4 index-1 Jacobi form from the E8 theta series with the
    elliptic variable along a root: 1 + q(y^2 + 56y + 126 + ...) + ..."""
    trunc = Fraction(trunc)
    e8 = _e8_lattice()
    counts = pairing_counts(e8, [0] * 8, trunc, [1, 0, 0, 0, 0, 0, 0, 0])
    return _EZ({(n, int(r)): c for (n, r), c in counts.items()}, trunc)


def _e8_lattice() -> EvenLattice:
    return EvenLattice([
        [2, -1, 0, 0, 0, 0, 0, 0],
        [-1, 2, -1, 0, 0, 0, 0, 0],
        [0, -1, 2, -1, 0, 0, 0, 0],
        [0, 0, -1, 2, -1, 0, 0, 0],
        [0, 0, 0, -1, 2, -1, 0, -1],
        [0, 0, 0, 0, -1, 2, -1, 0],
        [0, 0, 0, 0, 0, -1, 2, 0],
        [0, 0, 0, 0, -1, 0, 0, 2]])


def weak_jacobi_01_ez(trunc) -> _EZ:
    """phi_{0,1} = (12 E_{4,1} + E_6 phi_{-2,1}) / E_4, with expansion
    (y + 10 + 1/y) + O(q)."""
    trunc = Fraction(trunc)
    t = trunc + 1
    num = (jacobi_eisenstein_e41_ez(t).scale(12)
           + weak_jacobi_m21_ez(t).mul_scalar(eisenstein6(t)))
    return num.mul_scalar(scalar_inverse(eisenstein4(t))).restrict(trunc)


def weak_jacobi_01_oracle_ez(trunc) -> _EZ:
    """Independent construction of phi_{0,1} as 4 * sum of the three even
    theta-square quotients."""
    trunc = Fraction(trunc)
    t = trunc + 1
    total = None
    for parity, signs in (("odd", False), ("even", False), ("even", True)):
        num = _theta_pair_sq(t, parity, signs)
        den_inv = scalar_inverse(_ez_z0(num))
        quot = num.mul_scalar(den_inv)
        total = quot if total is None else total + quot
    return total.scale(4).restrict(trunc)


def ez_to_jacobi(ez: _EZ, index: int, weight) -> JacobiExpansion:
    """Interpret an EZ-style index-t series on the lattice <2t>: the
    elliptic exponent r becomes the dual vector (r/2t)."""
    lat = EvenLattice([[2 * index]])
    coeffs = {(n, (Fraction(r, 2 * index),)): c
              for (n, r), c in ez.coeffs.items()}
    return JacobiExpansion(lat, weight, coeffs, ez.trunc)


def ez_jacobi(name: str, trunc) -> QSeries:
    """Catalog: the vector-valued forms from phi_0_1 / phi_m2_1.

    phi_0_1 gives the weight -1/2 form q^{-1/4} e_1 + 10 e_0 + O(q^{3/4});
    phi_m2_1 the weight -5/2 form q^{-1/4} e_1 - 2 e_0 + O(q^{3/4}).
    """
    trunc = Fraction(trunc)
    if name == "phi_0_1":
        ez = weak_jacobi_01_ez(trunc + Fraction(1, 2))
        w = 0
    elif name == "phi_m2_1":
        ez = weak_jacobi_m21_ez(trunc + Fraction(1, 2))
        w = -2
    else:
        raise ValueError(f"unknown Jacobi catalog name {name!r}")
    return vv_from_jacobi(ez_to_jacobi(ez, 1, w))


def vv_from_jacobi(phi: JacobiExpansion, weight=None) -> QSeries:
    """Theta decomposition: the vector-valued form of type rho_K with
    c_{[l]}(n - (l,l)/2) = c_phi(n, l).

    Checks that the coefficients are constant on decomposition classes
    (including implicit zeros), which is the invertibility condition.
    """
    kplus = phi.lattice
    k_lat = kplus.negated()
    discp = kplus.disc()
    disck = k_lat.disc()
    w = Fraction(weight) if weight is not None else phi.weight
    out: dict = {}
    for (n, r), c in phi.coeffs.items():
        lam = disck.proj(r)
        m = n - kplus.norm(r) / 2
        key = (lam, m)
        if key in out and out[key] != c:
            raise ValueError("coefficients are not constant on theta "
                             "decomposition classes")
        out[key] = c
    # consistency against implicit zeros, and per-class truncation
    if phi.trunc is None:
        trunc = None
    else:
        trunc = None
        for lam_plus in discp.fqm.elements():
            rep = discp.dual_rep(lam_plus)
            minq = min(norm_counts(kplus, rep, _rep_bound(kplus, rep)))
            t = phi.trunc - minq
            trunc = t if trunc is None else min(trunc, t)
        for (lam, m), c in list(out.items()):
            rep = disck.dual_rep(lam)
            bound = phi.trunc - m
            for v in enumerate_vectors(kplus, rep, bound):
                n = m + kplus.norm(v) / 2
                if n >= phi.trunc:
                    continue
                if phi.coeffs.get((n, v), Fraction(0)) != c:
                    raise ValueError("coefficients are not constant on theta "
                                     "decomposition classes")
    return QSeries(disck.fqm, w - Fraction(kplus.rank, 2), out, trunc)


def _rep_bound(lat: EvenLattice, rep) -> Fraction:
    b = lat.norm(rep) / 2
    return b if b > 0 else Fraction(1)


def jacobi_from_vv(f: QSeries, kplus: EvenLattice) -> JacobiExpansion:
    """Inverse theta decomposition: c_phi(n, l) = c_{f,[l]}(n - (l,l)/2)."""
    disck = kplus.negated().disc()
    if f.fqm != disck.fqm:
        raise ValueError("series does not live on the discriminant form "
                         "of the negated index lattice")
    out: dict = {}
    for (lam, m), c in f.coeffs.items():
        rep = disck.dual_rep(lam)
        if f.trunc is None:
            bound = max(Fraction(0), -m) + 4
        else:
            bound = f.trunc - m
        for v in enumerate_vectors(kplus, rep, bound):
            n = m + kplus.norm(v) / 2
            if f.trunc is not None and n >= f.trunc:
                continue
            out[(n, v)] = c
    return JacobiExpansion(kplus, f.weight + Fraction(kplus.rank, 2),
                           out, f.trunc)


def vv_on_lattice(f: QSeries, src: EvenLattice, dst: EvenLattice, rows) -> QSeries:
    """Transport a series on disc(src) to disc(dst) along an embedding of
    src into dst (rows = src basis in dst coordinates) inducing an
    isomorphism of discriminant forms."""
    dsrc = src.disc()
    ddst = dst.disc()
    if f.fqm != dsrc.fqm:
        raise ValueError("series does not live on disc(src)")
    rows = [list(r) for r in rows]

    def image(lam):
        rep = dsrc.dual_rep(lam)
        x = [sum(Fraction(rep[i]) * rows[i][j] for i in range(len(rows)))
             for j in range(dst.rank)]
        return ddst.proj(x)

    rel = fqm_relabel(dsrc.fqm, ddst.fqm, image)
    return apply_linmap(rel, f)


def solve_principal_part(generators, target: PrincipalPart, trunc):
    """Find polynomials P_i in j with sum P_i(j) * g_i matching the target
    principal part (and constant term in weight 0).

    Returns (coeff_table, series): coeff_table[i][k] is the coefficient of
    j^k applied to generator i.  Raises ValueError when the target is not
    in the span ("obstructed") or data is insufficient.
    """
    if not generators:
        raise ValueError("no generators supplied")
    trunc = Fraction(trunc)
    fqm = generators[0].fqm
    w = generators[0].weight
    for g in generators:
        if g.fqm != fqm or g.weight != w:
            raise ValueError("generators must share module and weight")
    if not target.is_symmetric(fqm):
        raise ValueError("target principal part must be symmetric")
    if w == 0 and target.constant is None:
        raise ValueError("weight 0 requires the constant term of the target")
    d_t = target.degree()
    max_lead = 0
    for g in generators:
        le = g.effective_leading
        if le is not None and le < 0:
            max_lead = max(max_lead, math.ceil(-le))
    kmax = d_t + max_lead
    jt = trunc + kmax + 1
    jays = [scalar_series({0: 1}, None)]
    if kmax:
        jays.append(j_function(jt))
        for k in range(2, kmax + 1):
            jays.append(mul_scalar_series(jays[1], jays[k - 1]))
    candidates = []
    slots = []
    for i, g in enumerate(generators):
        for k in range(kmax + 1):
            h = mul_scalar_series(jays[k], g)
            if h.trunc is not None and h.trunc <= 0:
                raise ValueError("generator truncation too small for the "
                                 "requested j-degree")
            candidates.append(h)
            slots.append((i, k))
    rows = set()
    for h in candidates:
        for (lam, n), _ in h.coeffs.items():
            if n < 0 or (w == 0 and n == 0):
                rows.add((min(lam, fqm.neg(lam)), n))
    for (lam, n) in target.terms:
        rows.add((min(lam, fqm.neg(lam)), n))
    if target.constant:
        for lam in target.constant:
            rows.add((min(lam, fqm.neg(lam)), Fraction(0)))
    rows = sorted(rows)
    mat = [[h.coeff(lam, n) for h in candidates] for (lam, n) in rows]
    rhs = []
    for (lam, n) in rows:
        if n < 0:
            rhs.append(target.terms.get((lam, n), Fraction(0)))
        else:
            rhs.append((target.constant or {}).get(lam, Fraction(0)))
    x = solve_left(mat_transpose(mat), rhs)
    if x is None:
        raise ValueError("insufficient generators or obstructed principal part")
    result = None
    for c, h in zip(x, candidates):
        if not c:
            continue
        term = h.scale(c)
        result = term if result is None else result + term
    if result is None:
        result = QSeries.zero(fqm, w, trunc)
    if result.trunc is not None and result.trunc < trunc:
        raise ValueError("generator truncation too small for the requested "
                         "result truncation")
    result = result.restrict(trunc)
    check = principal_part(result)
    want = PrincipalPart(dict(target.terms),
                         target.constant if w == 0 else None)
    if check != want:
        raise AssertionError("solver result does not reproduce the target")
    table = [[Fraction(0)] * (kmax + 1) for _ in generators]
    for c, (i, k) in zip(x, slots):
        table[i][k] = c
    return table, result
