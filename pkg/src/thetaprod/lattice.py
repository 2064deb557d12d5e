"""Even lattices, dual lattices, discriminant forms and vector enumeration.

Conventions: vectors are coordinate rows in the basis of the ambient
lattice; sublattices are row matrices of basis vectors; elements of the
dual lattice are rational coordinate rows in the same ambient basis.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fqm import Fqm, mod1
from .matrices import (
    left_kernel,
    mat_det,
    mat_mul,
    mat_rank,
    matrix_hnf,
    matrix_snf,
    qmat_inv,
    rational_ldl,
    saturate,
    vec_mat,
)


def _lcm(*vals: int) -> int:
    out = 1
    for v in vals:
        out = out * v // math.gcd(out, v)
    return out


def _as_int(x) -> int:
    f = Fraction(x)
    if f.denominator != 1:
        raise ValueError(f"expected an integer, got {f}")
    return f.numerator


class EvenLattice:
    """A nondegenerate even lattice given by its Gram matrix."""

    __slots__ = ("gram", "rank", "_disc", "_sig")

    def __init__(self, gram):
        g = tuple(tuple(_as_int(x) for x in row) for row in gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            if g[i][i] % 2:
                raise ValueError("diagonal entries must be even")
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        if n and mat_det([list(r) for r in g]) == 0:
            raise ValueError("Gram matrix must be nondegenerate")
        self.gram = g
        self.rank = n
        self._disc = None
        self._sig = None

    @property
    def det(self) -> int:
        return _as_int(mat_det([list(r) for r in self.gram]))

    def pair(self, x, y) -> Fraction:
        return sum((Fraction(a) * sum(Fraction(gij) * Fraction(b)
                                      for gij, b in zip(grow, y))
                    for a, grow in zip(x, self.gram)), Fraction(0))

    def norm(self, x) -> Fraction:
        return self.pair(x, x)

    def scaled(self, c: int) -> "EvenLattice":
        return EvenLattice([[c * x for x in row] for row in self.gram])

    def negated(self) -> "EvenLattice":
        return self.scaled(-1)

    def signature(self) -> tuple[int, int]:
        if self._sig is None:
            self._sig = signature(self)
        return self._sig

    def disc(self) -> "DiscForm":
        if self._disc is None:
            self._disc = DiscForm(self)
        return self._disc

    def __eq__(self, other):
        return isinstance(other, EvenLattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"EvenLattice(rank={self.rank}, gram={self.gram})"


def signature(lat: EvenLattice) -> tuple[int, int]:
    """Signature (p, q) via exact rational congruence diagonalization."""
    n = lat.rank
    a = [[Fraction(x) for x in row] for row in lat.gram]
    p = q = 0
    for k in range(n):
        if a[k][k] == 0:
            j = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                # all remaining diagonal zero; mix in a row with a nonzero
                # off-diagonal pairing to create one
                found = next(((i, j) for i in range(k, n)
                              for j in range(i + 1, n) if a[i][j] != 0))
                i, j = found
                for col in range(n):
                    a[i][col] += a[j][col]
                for row in a:
                    row[i] += row[j]
                if i != k:
                    a[k], a[i] = a[i], a[k]
                    for row in a:
                        row[k], row[i] = row[i], row[k]
        piv = a[k][k]
        if piv > 0:
            p += 1
        else:
            q += 1
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / piv
                for col in range(n):
                    a[i][col] -= f * a[k][col]
                for row in a:
                    row[i] -= f * row[k]
    return p, q


class DiscForm:
    """The discriminant form A_L = L^dual / L on SNF-canonical generators.

    ``proj`` reduces a dual vector (rational row in the ambient basis) to
    its class; ``dual_rep`` returns the canonical dual vector of a class.
    """

    def __init__(self, lat: EvenLattice):
        self.lattice = lat
        n = lat.rank
        g = [list(r) for r in lat.gram]
        if n == 0:
            self.fqm = Fqm.trivial()
            self._keep = []
            self._dd = []
            self._v = []
            self._gen_reps = []
            return
        _, d, v = matrix_snf(g)
        dd = [d[i][i] for i in range(n)]
        keep = [i for i in range(n) if dd[i] > 1]
        vinv = qmat_inv(v)
        ginv = qmat_inv(g)
        vg = mat_mul(vinv, ginv)
        reps = [tuple(vg[i]) for i in keep]
        orders = [dd[i] for i in keep]
        qdiag = [mod1(lat.norm(r) / 2) for r in reps]
        bmat = [[mod1(lat.pair(r1, r2)) for r2 in reps] for r1 in reps]
        self.fqm = Fqm(orders, qdiag, bmat)
        self._keep = keep
        self._dd = dd
        self._v = v
        self._gen_reps = reps

    def proj(self, x) -> tuple:
        """Class of a dual vector; raises if x is not in the dual lattice."""
        n = self.lattice.rank
        if n == 0:
            return ()
        w = [self.lattice.pair(x, [1 if j == i else 0 for j in range(n)])
             for i in range(n)]
        w = [_as_int(c) for c in w]
        c = vec_mat(w, self._v)
        return tuple(c[i] % self._dd[i] for i in self._keep)

    def dual_rep(self, elem) -> tuple:
        """Canonical dual-vector representative of a class."""
        n = self.lattice.rank
        out = [Fraction(0)] * n
        for coord, rep in zip(elem, self._gen_reps):
            if coord:
                for j in range(n):
                    out[j] += coord * rep[j]
        return tuple(out)


def discriminant_form(lat: EvenLattice) -> DiscForm:
    return lat.disc()


class Sublattice:
    """A sublattice given by basis rows in the coordinates of the ambient
    lattice (rational rows for sublattices of the dual)."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: EvenLattice, basis):
        rows = tuple(tuple(Fraction(x) for x in row) for row in basis)
        if any(len(row) != ambient.rank for row in rows):
            raise ValueError("basis rows must match the ambient rank")
        if rows and mat_rank([list(r) for r in rows]) != len(rows):
            raise ValueError("basis rows must be linearly independent")
        self.ambient = ambient
        self.basis = rows

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram(self) -> list:
        return [[self.ambient.pair(r1, r2) for r2 in self.basis]
                for r1 in self.basis]

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.basis for x in row)

    def hnf_key(self):
        num, den = _int_rows(self.basis)
        h, _ = matrix_hnf(num)
        return den, tuple(tuple(r) for r in h if any(r))

    def __eq__(self, other):
        return (isinstance(other, Sublattice) and self.ambient == other.ambient
                and self.hnf_key() == other.hnf_key())

    def __repr__(self):
        return f"Sublattice(rank={self.rank}, basis={self.basis})"


def _int_rows(rows) -> tuple[list, int]:
    """Scale rational rows to integers: returns (den*rows, den)."""
    den = _lcm(*(Fraction(x).denominator for row in rows for x in row)) if rows else 1
    out = [[_as_int(Fraction(x) * den) for x in row] for row in rows]
    return out, den


def orthogonal_complement(s: Sublattice) -> Sublattice:
    """The saturated sublattice pairing to zero with every row of s."""
    lat = s.ambient
    n = lat.rank
    cols = [[lat.pair([1 if j == i else 0 for j in range(n)], b)
             for b in s.basis] for i in range(n)]
    num, _ = _int_rows(cols)
    ker = left_kernel(num)
    if not ker:
        return Sublattice(lat, [])
    h, _ = matrix_hnf(ker)
    return Sublattice(lat, [row for row in h if any(row)])


def primitive_hull(s: Sublattice, in_dual: bool = False) -> Sublattice:
    """S_Q ∩ L, or S_Q ∩ L^dual when in_dual is set."""
    lat = s.ambient
    if not s.basis:
        return Sublattice(lat, [])
    if not in_dual:
        num, _ = _int_rows(s.basis)
        return Sublattice(lat, saturate(num))
    g = [list(r) for r in lat.gram]
    w = mat_mul([list(r) for r in s.basis], g)
    num, _ = _int_rows(w)
    sat = saturate(num)
    ginv = qmat_inv(g)
    return Sublattice(lat, mat_mul(sat, ginv))


def is_maximal_isotropic(i: Sublattice) -> bool:
    """Primitive, totally isotropic, of rank equal to the positive index."""
    lat = i.ambient
    if not i.is_integral():
        return False
    if any(x != 0 for row in i.gram() for x in row):
        return False
    p, _ = lat.signature()
    if i.rank != p:
        return False
    return primitive_hull(i).hnf_key() == i.hnf_key()


def sum_lattice(lat: EvenLattice, s: Sublattice):
    """The lattice generated by L and a sublattice of its dual.

    Returns (Lstar, basis, index) where ``basis`` rows express the basis of
    Lstar in the coordinates of L and ``index`` = [Lstar : L].  Raises when
    the generated lattice is not even integral.
    """
    n = lat.rank
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows += [list(r) for r in s.basis]
    num, den = _int_rows(rows)
    h, _ = matrix_hnf(num)
    basis = [[Fraction(x, den) for x in row] for row in h[:n]]
    if any(any(row) for row in h[n:]):
        raise AssertionError("stacked generators exceed expected rank")
    gram2 = [[lat.pair(r1, r2) for r2 in basis] for r1 in basis]
    for i in range(n):
        if gram2[i][i].denominator != 1 or gram2[i][i].numerator % 2:
            raise ValueError("generated lattice is not even")
        for j in range(n):
            if gram2[i][j].denominator != 1:
                raise ValueError("generated lattice is not integral")
    det_h = abs(_as_int(mat_det(h[:n])))
    index = den ** n // det_h
    lstar = EvenLattice([[int(x) for x in row] for row in gram2])
    return lstar, tuple(tuple(r) for r in basis), index


# -- short vector enumeration (exact Fincke-Pohst) --------------------------


def _fp_setup(lat: EvenLattice, coset):
    n = lat.rank
    try:
        lw, dmat = rational_ldl([list(r) for r in lat.gram])
    except ValueError as exc:
        raise ValueError("positive-definite lattice required") from exc
    dvals = [dmat[i][i] for i in range(n)]
    if any(d <= 0 for d in dvals):
        raise ValueError("positive-definite lattice required")
    coset = [Fraction(x) for x in coset]
    if len(coset) != n:
        raise ValueError("coset vector has wrong length")
    den = _lcm(*(c.denominator for c in coset)) if n else 1
    a = [_as_int(c * den) for c in coset]
    gam_frac = [[lw[j][i] for j in range(n)] for i in range(n)]  # C[i][j]=lw[j][i]
    kappa = _lcm(*(gam_frac[i][j].denominator
                   for i in range(n) for j in range(i + 1, n))) if n > 1 else 1
    gam = [[_as_int(gam_frac[i][j] * kappa) if j > i else 0 for j in range(n)]
           for i in range(n)]
    delta = _lcm(*(d.denominator for d in dvals)) if n else 1
    pvals = [_as_int(d * delta) for d in dvals]
    scale = delta * kappa * kappa * den * den
    return n, den, a, kappa, gam, pvals, scale


def _fp_run(lat: EvenLattice, coset, bound: Fraction, want_vectors: bool):
    bound = Fraction(bound)
    n, den, a, kappa, gam, pvals, scale = _fp_setup(lat, coset)
    counts: dict[int, int] = {}
    vecs: list = []
    if n == 0:
        if bound >= 0:
            counts[0] = 1
            vecs.append(())
        return counts, vecs, scale
    total = 2 * bound * scale
    if total < 0:
        return counts, vecs, scale
    r_total = total.numerator // total.denominator
    u = [0] * n
    kden = kappa * den
    isqrt = math.isqrt

    def rec(i: int, r_rem: int, acc: int):
        gi = gam[i]
        v = 0
        for j in range(i + 1, n):
            v += gi[j] * u[j]
        p = pvals[i]
        s = isqrt(r_rem // p)
        base = -v - kappa * a[i]
        kmin = -((s - base) // kden)  # ceil((base - s)/kden)
        kmax = (base + s) // kden
        for k in range(kmin, kmax + 1):
            ui = a[i] + den * k
            t = kappa * ui + v
            term = p * t * t
            if term > r_rem:
                continue
            u[i] = ui
            if i == 0:
                acc2 = acc + term
                if want_vectors:
                    vecs.append(tuple(Fraction(x, den) for x in u))
                counts[acc2] = counts.get(acc2, 0) + 1
            else:
                rec(i - 1, r_rem - term, acc + term)
        u[i] = 0

    rec(n - 1, r_total, 0)
    return counts, vecs, scale


def norm_counts(lat: EvenLattice, coset, bound) -> dict:
    """Counts of vectors v in coset+L by half-norm (v,v)/2 <= bound."""
    counts, _, scale = _fp_run(lat, coset, bound, want_vectors=False)
    return {Fraction(acc, 2 * scale): c for acc, c in sorted(counts.items())}


def pairing_counts(lat: EvenLattice, coset, bound, wvec) -> dict:
    """Counts of vectors v in coset+L with (v,v)/2 <= bound, keyed by
    ((v,v)/2, (v, wvec)); the whole sweep runs in integer arithmetic."""
    bound = Fraction(bound)
    n, den, a, kappa, gam, pvals, scale = _fp_setup(lat, coset)
    out: dict = {}
    if n == 0:
        if bound >= 0:
            out[(Fraction(0), Fraction(0))] = 1
        return out
    w = [Fraction(x) for x in wvec]
    t = [sum(Fraction(lat.gram[j][b]) * w[b] for b in range(n)) for j in range(n)]
    denw = _lcm(*(x.denominator for x in t))
    t_int = [_as_int(x * denw) for x in t]
    total = 2 * bound * scale
    if total < 0:
        return out
    r_total = total.numerator // total.denominator
    u = [0] * n
    kden = kappa * den
    isqrt = math.isqrt
    counts: dict = {}

    def rec(i: int, r_rem: int, acc: int, dot: int):
        gi = gam[i]
        v = 0
        for j in range(i + 1, n):
            v += gi[j] * u[j]
        p = pvals[i]
        s = isqrt(r_rem // p)
        base = -v - kappa * a[i]
        kmin = -((s - base) // kden)
        kmax = (base + s) // kden
        ti = t_int[i]
        for k in range(kmin, kmax + 1):
            ui = a[i] + den * k
            tt = kappa * ui + v
            term = p * tt * tt
            if term > r_rem:
                continue
            u[i] = ui
            if i == 0:
                key = (acc + term, dot + ui * ti)
                counts[key] = counts.get(key, 0) + 1
            else:
                rec(i - 1, r_rem - term, acc + term, dot + ui * ti)
        u[i] = 0

    rec(n - 1, r_total, 0, 0)
    dd = den * denw
    for (acc, dot), c in sorted(counts.items()):
        out[(Fraction(acc, 2 * scale), Fraction(dot, dd))] = c
    return out


def enumerate_vectors(lat: EvenLattice, coset, bound) -> list:
    """All v in coset+L with (v,v)/2 <= bound, lexicographically sorted."""
    _, vecs, _ = _fp_run(lat, coset, bound, want_vectors=True)
    return sorted(vecs)


def short_vectors(lat: EvenLattice, coset, bound) -> list:
    """Like enumerate_vectors but pairs each vector with its half-norm."""
    vecs = enumerate_vectors(lat, coset, bound)
    return [(v, lat.norm(v) / 2) for v in vecs]
