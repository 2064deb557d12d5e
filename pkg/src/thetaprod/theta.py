"""Theta series of even positive-definite lattices.

The one-variable theta series is a holomorphic vector-valued form of
weight rk/2 whose coefficients count lattice vectors per dual coset; the
two-variable (Jacobi) version keeps the vectors themselves as elliptic
exponents.
"""

from __future__ import annotations

from fractions import Fraction

from .fqm import FqmLinMap, FqmSubgroup, Subquotient
from .lattice import EvenLattice, Sublattice, norm_counts, short_vectors, sum_lattice
from .matrices import qmat_inv, vec_mat
from .qseries import QSeries, agree_on_common, apply_linmap

_THETA_CACHE: dict = {}


def theta_series(n_lat: EvenLattice, trunc) -> QSeries:
    """Theta series of a positive-definite even lattice, to the given trunc.

    The coefficient at (lam, n) counts vectors l in lam + N with (l,l) = 2n;
    all coefficients are nonnegative integers and c_0(0) = 1.
    """
    trunc = Fraction(trunc)
    disc = n_lat.disc()
    coeffs: dict = {}
    for lam in disc.fqm.elements():
        rep = disc.dual_rep(lam)
        for n, count in norm_counts(n_lat, rep, trunc).items():
            coeffs[(lam, n)] = count
    return QSeries(disc.fqm, Fraction(n_lat.rank, 2), coeffs, trunc)


def theta_series_cached(n_lat: EvenLattice, trunc) -> QSeries:
    """theta_series with a per-Gram cache of the widest expansion so far."""
    trunc = Fraction(trunc)
    cached = _THETA_CACHE.get(n_lat.gram)
    if cached is None or cached.trunc < trunc:
        cached = theta_series(n_lat, trunc)
        _THETA_CACHE[n_lat.gram] = cached
    return cached.restrict(trunc) if cached.trunc != trunc else cached


def overlattice_from_isotropic(n_lat: EvenLattice, h: FqmSubgroup):
    """The even overlattice N' with N'/N = H, as (lattice, basis, relabel).

    ``basis`` rows express the N'-basis in N-coordinates and ``relabel`` is
    the exact isomorphism from H^perp/H onto the discriminant form of N'.
    """
    disc = n_lat.disc()
    if h.parent != disc.fqm:
        raise ValueError("subgroup does not live on the discriminant form")
    gens = [disc.dual_rep(g) for g in h.gens]
    nprime, basis, index = sum_lattice(n_lat, Sublattice(n_lat, gens)
                                       if gens else Sublattice(n_lat, []))
    if index != h.order:
        raise AssertionError("overlattice index disagrees with subgroup order")
    sq = Subquotient(disc.fqm, h)
    binv = qmat_inv([list(r) for r in basis])
    dprime = nprime.disc()

    def image(lam):
        rep = [Fraction(0)] * n_lat.rank
        lifted = sq.lift(lam)
        x = disc.dual_rep(lifted)
        for j in range(n_lat.rank):
            rep[j] = x[j]
        return dprime.proj(vec_mat(rep, binv))

    relabel = fqm_relabel(sq.fqm, dprime.fqm, image)
    return nprime, basis, sq, relabel


def fqm_relabel(source, target, image) -> FqmLinMap:
    """Permutation map realizing an isomorphism elem -> image(elem).

    Verifies that the assignment is a form-preserving bijection before
    returning it.
    """
    mapping = {}
    seen = set()
    for x in source.elements():
        y = image(x)
        if y is None or y in seen:
            raise ValueError("relabel image is not a bijection")
        seen.add(y)
        if source.q(x) != target.q(y):
            raise ValueError("relabel does not preserve the quadratic form")
        mapping[x] = y
    for g1 in source.elements():
        if any(g1):
            for g2 in source.elements():
                if source.b(g1, g2) != target.b(mapping[g1], mapping[g2]):
                    raise ValueError("relabel does not preserve the pairing")
            break
    if len(seen) != target.size:
        raise ValueError("relabel image is not onto")
    return FqmLinMap(source, target,
                     {x: ((y, Fraction(1)),) for x, y in mapping.items()})


def theta_overlattice_check(n_lat: EvenLattice, h: FqmSubgroup, trunc) -> bool:
    """Does pushing the theta series along H reproduce the overlattice theta?

    Both sides are enumerated independently and compared exactly on the
    common truncation window.
    """
    trunc = Fraction(trunc)
    nprime, _, sq, relabel = overlattice_from_isotropic(n_lat, h)
    pushed = apply_linmap(relabel.compose(sq.pushforward_map()),
                          theta_series(n_lat, trunc))
    direct = theta_series(nprime, trunc)
    return pushed.fqm == direct.fqm and agree_on_common(pushed, direct)


class JacobiExpansion:
    """A two-variable expansion: coefficients keyed by (n, r) where the
    elliptic exponent r is an exact dual-lattice vector of the index
    lattice.  Complete for n < trunc."""

    __slots__ = ("lattice", "weight", "coeffs", "trunc")

    def __init__(self, lattice: EvenLattice, weight, coeffs: dict, trunc):
        self.lattice = lattice
        self.weight = Fraction(weight)
        self.trunc = Fraction(trunc) if trunc is not None else None
        clean = {}
        for (n, r), c in coeffs.items():
            c = Fraction(c)
            n = Fraction(n)
            if not c or (self.trunc is not None and n >= self.trunc):
                continue
            clean[(n, tuple(Fraction(x) for x in r))] = c
        self.coeffs = clean

    def restrict(self, trunc) -> "JacobiExpansion":
        t = Fraction(trunc)
        if self.trunc is not None:
            t = min(t, self.trunc)
        return JacobiExpansion(self.lattice, self.weight, self.coeffs, t)

    def at_z0(self) -> QSeries:
        """Collapse Z = 0: sum over elliptic exponents, as a scalar series."""
        from .fqm import Fqm
        out: dict = {}
        for (n, _), c in self.coeffs.items():
            key = ((), n)
            out[key] = out.get(key, Fraction(0)) + c
        return QSeries(Fqm.trivial(), self.weight, out, self.trunc)

    def scale(self, c) -> "JacobiExpansion":
        c = Fraction(c)
        return JacobiExpansion(self.lattice, self.weight,
                               {k: c * v for k, v in self.coeffs.items()},
                               self.trunc)

    def __add__(self, other: "JacobiExpansion") -> "JacobiExpansion":
        if self.lattice != other.lattice or self.weight != other.weight:
            raise ValueError("mismatched Jacobi expansions")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        t = self.trunc if other.trunc is None else (
            other.trunc if self.trunc is None else min(self.trunc, other.trunc))
        return JacobiExpansion(self.lattice, self.weight, out, t)

    def mul_scalar(self, s: QSeries) -> "JacobiExpansion":
        """Multiply by a scalar q-series (weights add)."""
        if not s.fqm.is_trivial:
            raise ValueError("scalar series required")
        lead = self.leading
        slead = s.leading
        cand = []
        if self.trunc is not None:
            cand.append(self.trunc + (slead if slead is not None else 0))
        if s.trunc is not None:
            cand.append(s.trunc + (lead if lead is not None else 0))
        trunc = min(cand) if cand else None
        out: dict = {}
        for (n, r), c in self.coeffs.items():
            for (_, m), a in s.coeffs.items():
                key = (n + m, r)
                if trunc is not None and key[0] >= trunc:
                    continue
                out[key] = out.get(key, Fraction(0)) + c * a
        return JacobiExpansion(self.lattice, self.weight + s.weight, out, trunc)

    @property
    def leading(self):
        if not self.coeffs:
            return None
        return min(n for (n, _) in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, JacobiExpansion)
                and self.lattice == other.lattice
                and self.weight == other.weight and self.trunc == other.trunc
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return (f"JacobiExpansion(w={self.weight}, trunc={self.trunc}, "
                f"{len(self.coeffs)} terms)")


def jacobi_agree_on_common(a: JacobiExpansion, b: JacobiExpansion) -> bool:
    ts = [t for t in (a.trunc, b.trunc) if t is not None]
    t = min(ts) if ts else None
    ra = a if t is None else a.restrict(t)
    rb = b if t is None else b.restrict(t)
    return ra.coeffs == rb.coeffs


def jacobi_theta(kplus: EvenLattice, trunc) -> dict:
    """The two-variable theta series, one JacobiExpansion per dual coset.

    The component at lam is sum_{l in lam+K+} q^{(l,l)/2} zeta^l with the
    elliptic exponent recorded as the vector l itself.  Collapsing Z = 0
    reproduces theta_series componentwise.
    """
    trunc = Fraction(trunc)
    disc = kplus.disc()
    out = {}
    for lam in disc.fqm.elements():
        rep = disc.dual_rep(lam)
        coeffs: dict = {}
        for v, n in short_vectors(kplus, rep, trunc):
            coeffs[(n, v)] = coeffs.get((n, v), Fraction(0)) + 1
        out[lam] = JacobiExpansion(kplus, Fraction(kplus.rank, 2), coeffs, trunc)
    return out
