"""The theta-product algebra attached to an even lattice with a maximal
isotropic sublattice.

Given (L, I), the context realizes the negative-definite lattice K inside
the canonical even overlattice L* through an explicit hyperbolic split,
carries the pushforward map from the discriminant form of L onto that of
K, and caches the theta series of K(-1).  The product is
f * g = xi(f) . g with xi(f) the contraction of the pushforward of f
against the theta series.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fqm import FqmSubgroup, Subquotient
from .lattice import (
    EvenLattice,
    Sublattice,
    is_maximal_isotropic,
    norm_counts,
    primitive_hull,
    sum_lattice,
)
from .matrices import (
    left_kernel,
    mat_mul,
    mat_transpose,
    matrix_hnf,
    qmat_inv,
    solve_left,
    vec_mat,
)
from .qseries import QSeries, apply_linmap, contract, mul_scalar_series
from .scalars import j_function
from .theta import fqm_relabel, theta_series_cached


def hyperbolic_split(lstar: EvenLattice, istar_rows, rng=None):
    """Split off one hyperbolic plane per isotropic basis vector.

    ``istar_rows`` is a basis (rows, lstar coordinates) of a maximal
    isotropic sublattice that is primitive in lstar and pairs onto Z.
    Returns (pairs, ktilde_rows): the hyperbolic pairs (l_i, m_i) and a
    basis of their orthogonal complement, all in lstar coordinates.
    Passing an rng randomizes every pivot choice; the induced map on
    discriminant forms must not depend on it.
    """
    gram = [list(r) for r in lstar.gram]
    n = lstar.rank
    to_top = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    jrows = [[int(x) for x in row] for row in istar_rows]
    pairs = []
    while jrows:
        k = len(jrows)
        if rng is None:
            coeff = [1] + [0] * (k - 1)
        else:
            while True:
                coeff = [rng.randint(-2, 2) for _ in range(k)]
                if any(coeff) and math.gcd(*coeff) == 1:
                    break
        l = [sum(coeff[i] * jrows[i][j] for i in range(k)) for j in range(len(jrows[0]))]
        m = len(l)
        w = [sum(gram[a][b] * l[b] for b in range(m)) for a in range(m)]
        h, u = matrix_hnf([[x] for x in w])
        if h[0][0] != 1:
            raise ValueError("isotropic vector does not pair onto Z; "
                             "the split precondition is violated")
        mvec = list(u[0])
        if rng is not None:
            for krow in u[1:]:
                c = rng.randint(-2, 2)
                if c:
                    mvec = [mvec[a] + c * krow[a] for a in range(m)]
        mm = sum(mvec[a] * gram[a][b] * mvec[b] for a in range(m) for b in range(m))
        half = mm // 2
        mvec = [mvec[a] - half * l[a] for a in range(m)]
        pairs.append((vec_mat(l, to_top), vec_mat(mvec, to_top)))
        # orthogonal complement of <l, m> in the current lattice
        cols = [[sum(gram[a][b] * vv[b] for b in range(m)) for vv in (l, mvec)]
                for a in range(m)]
        comp = left_kernel(cols)
        if len(comp) != m - 2:
            raise AssertionError("hyperbolic plane did not split off")
        # the isotropic part inside the complement: rows of J pairing to 0
        # with m (pairing with l vanishes already since J is isotropic)
        pair_m = [[sum(row[a] * gram[a][b] * mvec[b]
                       for a in range(m) for b in range(m))] for row in jrows]
        newj = []
        for y in left_kernel(pair_m):
            row = [sum(y[i] * jrows[i][j] for i in range(k))
                   for j in range(m)]
            z = solve_left(comp, row)
            if z is None:
                raise AssertionError("isotropic vector escaped the complement")
            newj.append([int(x) for x in z])
        newj_h, _ = matrix_hnf(newj) if newj else ([], None)
        newj = [r for r in newj_h if any(r)]
        if len(newj) != k - 1:
            raise AssertionError("isotropic rank did not drop by one")
        gram = [[sum(comp[i][a] * gram[a][b] * comp[j][b]
                     for a in range(m) for b in range(m))
                 for j in range(len(comp))] for i in range(len(comp))]
        to_top = mat_mul(comp, to_top)
        jrows = newj
    return pairs, [tuple(r) for r in to_top]


class AlgebraContext:
    """All derived data for the pair (L, I): I*, L*, J, K, K+ and the
    pushforward from the discriminant form of L to that of K.

    Immutable after construction except for the write-once theta cache.
    """

    def __init__(self, lat: EvenLattice, iso: Sublattice, trunc=Fraction(8)):
        if iso.ambient != lat:
            raise ValueError("isotropic sublattice must live in L")
        if not is_maximal_isotropic(iso):
            raise ValueError("I must be a primitive isotropic sublattice "
                             "of rank equal to the positive index")
        self.L = lat
        self.I = iso
        p, q = lat.signature()
        self.sigma_half = Fraction(p - q, 2)
        self.Istar = primitive_hull(iso, in_dual=True)
        self.Lstar, self.lstar_basis, self.index_IstarI = sum_lattice(lat, self.Istar)
        discl = lat.disc()
        self.J = FqmSubgroup(discl.fqm, [discl.proj(r) for r in self.Istar.basis])
        if self.J.order != self.index_IstarI:
            raise AssertionError("index of I*/I disagrees with |J|")
        self._sq = Subquotient(discl.fqm, self.J)
        sinv = qmat_inv([list(r) for r in self.lstar_basis])
        istar_in_lstar = [[int(x) for x in vec_mat(list(r), sinv)]
                          for r in self.Istar.basis]
        self._sinv = sinv
        self._istar_in_lstar = istar_in_lstar
        pairs, ktilde = hyperbolic_split(self.Lstar, istar_in_lstar)
        self._pairs = pairs
        self._ktilde = ktilde
        gram_k = [[self.Lstar.pair(r1, r2) for r2 in ktilde] for r1 in ktilde]
        self.K = EvenLattice([[int(x) for x in row] for row in gram_k])
        kp, kq = self.K.signature()
        if kp != 0 or kq != q - p:
            raise AssertionError("K is not negative definite of rank q - p")
        self.Kplus = self.K.negated()
        self._proj_fixed = _ortho_projector(self.Lstar, ktilde)
        self.down_LK = self._build_down(self._proj_fixed)
        self._theta = None
        self._theta_relabel = None
        if discl.fqm.size != self.K.disc().fqm.size * self.index_IstarI ** 2:
            raise AssertionError("|A_K| != |A_L| / |I*/I|^2")
        self.theta_kplus(trunc)

    # -- construction helpers -------------------------------------------------

    def _down_image(self, projector):
        discl = self.L.disc()
        disck = self.K.disc()
        sq = self._sq
        gens_reps = [discl.dual_rep(g) for g in sq.gens]
        ktilde = self._ktilde

        def image(lam):
            x = [Fraction(0)] * self.L.rank
            for c, rep in zip(lam, gens_reps):
                if c:
                    for i in range(self.L.rank):
                        x[i] += c * rep[i]
            y = vec_mat(x, self._sinv)
            yk = projector(y)
            c = solve_left([list(r) for r in ktilde], yk)
            if c is None:
                raise AssertionError("projected vector left the K-span")
            return disck.proj(c)

        return image

    def _build_down(self, projector):
        relabel = fqm_relabel(self._sq.fqm, self.K.disc().fqm,
                              self._down_image(projector))
        return relabel.compose(self._sq.pushforward_map())

    def down_dense(self):
        return tuple(tuple(row) for row in self.down_LK.to_dense())

    def down_dense_from_split(self, rng):
        """The down map built through an independently randomized split.

        The randomized complement is re-identified with the fixed K by
        orthogonal projection (the two complements differ by the isotropic
        part, which projects to zero).
        """
        pairs, ktilde = hyperbolic_split(self.Lstar, self._istar_in_lstar, rng)
        proj_r = _ortho_projector(self.Lstar, ktilde)
        proj_fixed = self._proj_fixed

        def projector(y):
            return proj_fixed(proj_r(y))

        down = self._build_down(projector)
        return tuple(tuple(row) for row in down.to_dense())

    # -- theta cache -----------------------------------------------------------

    def theta_kplus(self, trunc) -> QSeries:
        """Theta series of K(-1), relabeled onto the (-1)-scaling of A_K so
        it contracts against pushforwards.  Cached at the widest trunc."""
        trunc = Fraction(trunc)
        if self._theta is None or self._theta.trunc < trunc:
            disck = self.K.disc()
            discp = self.Kplus.disc()
            if self._theta_relabel is None:
                self._theta_relabel = fqm_relabel(
                    discp.fqm, disck.fqm.scaled_minus1(),
                    lambda lam: disck.proj(discp.dual_rep(lam)))
            raw = theta_series_cached(self.Kplus, trunc)
            self._theta = apply_linmap(self._theta_relabel, raw)
        return (self._theta if self._theta.trunc == trunc
                else self._theta.restrict(trunc))

    def theta_count(self, nu, half_norm) -> int:
        """Number of vectors of K+ in the coset nu (an A_K class) with
        (l,l)/2 equal to half_norm; independent of the series pipeline."""
        rep = self.K.disc().dual_rep(nu)
        counts = norm_counts(self.Kplus, rep, half_norm)
        return counts.get(Fraction(half_norm), 0)

    def __repr__(self):
        return (f"AlgebraContext(L rank {self.L.rank}, |J|={self.J.order}, "
                f"K rank {self.K.rank})")


def _ortho_projector(lstar: EvenLattice, basis_rows):
    """Orthogonal projection onto the rational span of basis_rows."""
    rows = [list(r) for r in basis_rows]
    if not rows:
        zero = [Fraction(0)] * lstar.rank
        return lambda y: list(zero)
    g = [list(r) for r in lstar.gram]
    bt = mat_transpose(rows)
    gbt = mat_mul(g, bt)
    m = mat_mul(rows, gbt)
    minv = qmat_inv(m)
    # projection matrix P with y -> y * P
    p = mat_mul(gbt, mat_mul(minv, rows))

    def projector(y):
        return vec_mat(list(y), p)

    return projector


def build_context(lat: EvenLattice, iso: Sublattice, trunc=Fraction(8)) -> AlgebraContext:
    return AlgebraContext(lat, iso, trunc)


def _check_form(ctx: AlgebraContext, f: QSeries):
    if f.fqm != ctx.L.disc().fqm:
        raise ValueError("form does not live on the discriminant form of L")
    if f.weight != ctx.sigma_half:
        raise ValueError(f"form weight {f.weight} != sigma(L)/2 = {ctx.sigma_half}")


def xi(ctx: AlgebraContext, f: QSeries) -> QSeries:
    """xi(f) = <f down, Theta_{K+}>, a scalar weight-0 series complete to
    the truncation of f (theta is expanded to trunc(f) + |leading|)."""
    _check_form(ctx, f)
    fd = apply_linmap(ctx.down_LK, f)
    if fd.trunc is None and not fd.coeffs:
        from .fqm import Fqm
        return QSeries(Fqm.trivial(), 0, {}, None)
    lead = fd.effective_leading
    lead = Fraction(0) if lead is None else min(Fraction(0), lead)
    if fd.trunc is None:
        theta_trunc = max(n for (_, n) in fd.coeffs) - lead + 1
    else:
        theta_trunc = fd.trunc - lead
    theta = ctx.theta_kplus(theta_trunc)
    return contract(fd, theta)


def star(ctx: AlgebraContext, f: QSeries, g: QSeries) -> QSeries:
    """The theta-product f * g = xi(f) . g."""
    _check_form(ctx, f)
    _check_form(ctx, g)
    return mul_scalar_series(xi(ctx, f), g)


def bracket(ctx: AlgebraContext, f: QSeries, g: QSeries) -> QSeries:
    """Commutator [f, g] = f*g - g*f; always annihilated by xi."""
    return star(ctx, f, g) - star(ctx, g, f)


def star_trunc_bound(ctx: AlgebraContext, f: QSeries, g: QSeries):
    """A provable lower bound for the truncation of star(ctx, f, g)."""
    cands = []
    if f.trunc is not None:
        le = g.effective_leading
        if le is not None:
            cands.append(f.trunc + le)
    if g.trunc is not None:
        le = f.effective_leading
        if le is not None:
            cands.append(g.trunc + le)
    return min(cands) if cands else None


def star_coeff_oracle(ctx: AlgebraContext, f: QSeries, g: QSeries, lam, n) -> Fraction:
    """Coefficient of q^n e_lam in f*g by the direct triple-sum formula,
    independent of the xi/contraction pipeline."""
    _check_form(ctx, f)
    _check_form(ctx, g)
    n = Fraction(n)
    bound = star_trunc_bound(ctx, f, g)
    if bound is not None and n >= bound:
        raise ValueError("coefficient lies beyond the provable truncation")
    lam = f.fqm.reduce(lam)
    total = Fraction(0)
    for (mu, m), cf in f.coeffs.items():
        col = ctx.down_LK.cols[mu]
        if not col:
            continue
        nu = col[0][0]
        for (lam2, k), cg in g.coeffs.items():
            if lam2 != lam:
                continue
            half = n - m - k
            if half < 0:
                continue
            cnt = ctx.theta_count(nu, half)
            if cnt:
                total += cf * cnt * cg
    return total


def fit_j_polynomial(s: QSeries) -> list:
    """The unique polynomial P with P(j) = s, as [c0, c1, ...].

    P is read off from the exponents <= 0 and then verified against every
    known coefficient of s; a mismatch raises ValueError (the input is not
    a weight-0 weakly holomorphic form, or a pipeline bug).
    """
    if not s.fqm.is_trivial:
        raise ValueError("scalar series required")
    if s.weight != 0:
        raise ValueError("weight-0 series required")
    if s.trunc is not None and s.trunc <= 0:
        raise ValueError("constant term unknown at this truncation")
    lead = s.leading
    if lead is None:
        return []
    deg = max(0, math.ceil(-lead))
    if s.trunc is not None:
        jt = s.trunc + deg
    else:
        jt = max(n for (_, n) in s.coeffs) + deg + 1
    jays = [None, j_function(jt)] if deg else [None]
    for k in range(2, deg + 1):
        jays.append(mul_scalar_series(jays[1], jays[k - 1]))
    rem = s
    coeffs = [Fraction(0)] * (deg + 1)
    for k in range(deg, 0, -1):
        c = rem.coeff((), -k)
        coeffs[k] = c
        if c:
            rem = rem - jays[k].restrict(rem.trunc if rem.trunc is not None else jt).scale(c)
    coeffs[0] = rem.coeff((), 0)
    if coeffs[0]:
        rem = rem - QSeries(s.fqm, 0, {((), Fraction(0)): coeffs[0]}, None)
    if rem.coeffs:
        bad = sorted(rem.coeffs.items())[:3]
        raise ValueError("input is not a weight-0 weakly holomorphic form: "
                         f"residual terms {bad}")
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def in_theta_perp(ctx: AlgebraContext, f: QSeries) -> bool:
    """Is f in the left annihilator (the kernel of xi)?  Exact decision by
    weight-0 rigidity of the fitted polynomial."""
    if f.trunc is not None and f.trunc <= 0:
        raise ValueError("need trunc > 0 for an exact decision")
    return fit_j_polynomial(xi(ctx, f)) == []


def is_left_unit(ctx: AlgebraContext, f: QSeries) -> bool:
    """Left units are exactly the forms with xi(f) = 1."""
    if f.trunc is not None and f.trunc <= 0:
        raise ValueError("need trunc > 0 for an exact decision")
    return fit_j_polynomial(xi(ctx, f)) == [Fraction(1)]


def has_right_unit(ctx: AlgebraContext) -> bool:
    """Right units exist only for L = pU: trivial A_L and K = 0."""
    return ctx.L.disc().fqm.is_trivial and ctx.K.rank == 0


def is_two_sided_unit(ctx: AlgebraContext, f: QSeries) -> bool:
    return has_right_unit(ctx) and is_left_unit(ctx, f)
