"""Finite quadratic modules (A, q) with Q/Z-valued forms.

A module is presented on generators with elementary divisor orders
d1 | d2 | ... (all > 1); elements are coordinate tuples reduced mod the
orders.  Subgroups carry a canonical HNF basis of their preimage in Z^k,
which makes membership, equality and deterministic enumeration cheap.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .cyclotomic import CycNum, cyc_e, sqrt_int
from .matrices import matrix_hnf, matrix_snf, qmat_inv, vec_mat


def mod1(x) -> Fraction:
    return Fraction(x) % 1


def _as_int(x) -> int:
    f = Fraction(x)
    if f.denominator != 1:
        raise ValueError(f"expected an integer, got {f}")
    return f.numerator


class Fqm:
    """A finite quadratic module in SNF presentation."""

    __slots__ = ("orders", "qdiag", "bmat", "_elements")

    def __init__(self, orders, qdiag, bmat, check: bool = True):
        self.orders = tuple(int(d) for d in orders)
        self.qdiag = tuple(mod1(x) for x in qdiag)
        self.bmat = tuple(tuple(mod1(x) for x in row) for row in bmat)
        self._elements = None
        if check:
            self._validate()

    def _validate(self):
        k = len(self.orders)
        if any(d < 2 for d in self.orders):
            raise ValueError("orders must all exceed 1")
        if any(self.orders[i + 1] % self.orders[i] for i in range(k - 1)):
            raise ValueError("orders must form a divisibility chain")
        if len(self.qdiag) != k or len(self.bmat) != k:
            raise ValueError("inconsistent presentation sizes")
        for i in range(k):
            if mod1(2 * self.qdiag[i] - self.bmat[i][i]) != 0:
                raise ValueError("2*q(g_i) must equal b(g_i,g_i) mod 1")
            for j in range(k):
                if self.bmat[i][j] != self.bmat[j][i]:
                    raise ValueError("bilinear form must be symmetric")
            # values must kill the generator orders
            if mod1(self.qdiag[i] * self.orders[i] * self.orders[i]) != 0:
                raise ValueError("q value incompatible with generator order")

    # -- structure ---------------------------------------------------------

    @staticmethod
    def trivial() -> "Fqm":
        return Fqm((), (), ())

    @property
    def size(self) -> int:
        n = 1
        for d in self.orders:
            n *= d
        return n

    @property
    def is_trivial(self) -> bool:
        return not self.orders

    def elements(self) -> tuple:
        if self._elements is None:
            self._elements = tuple(itertools.product(*[range(d) for d in self.orders]))
        return self._elements

    def reduce(self, x) -> tuple:
        return tuple(int(a) % d for a, d in zip(x, self.orders))

    def neg(self, x) -> tuple:
        return tuple((-a) % d for a, d in zip(x, self.orders))

    def add(self, x, y) -> tuple:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def sub(self, x, y) -> tuple:
        return tuple((a - b) % d for a, b, d in zip(x, y, self.orders))

    def zero(self) -> tuple:
        return (0,) * len(self.orders)

    def q(self, x) -> Fraction:
        x = self.reduce(x)
        total = Fraction(0)
        for i, a in enumerate(x):
            if not a:
                continue
            total += a * a * self.qdiag[i]
            for j in range(i + 1, len(x)):
                if x[j]:
                    total += a * x[j] * self.bmat[i][j]
        return mod1(total)

    def b(self, x, y) -> Fraction:
        x = self.reduce(x)
        y = self.reduce(y)
        total = Fraction(0)
        for i, a in enumerate(x):
            if not a:
                continue
            for j, bb in enumerate(y):
                if bb:
                    total += a * bb * self.bmat[i][j]
        return mod1(total)

    def scaled_minus1(self) -> "Fqm":
        """The (-1)-scaling A(-1): same group, negated forms."""
        return Fqm(self.orders,
                   tuple(mod1(-x) for x in self.qdiag),
                   tuple(tuple(mod1(-x) for x in row) for row in self.bmat),
                   check=False)

    def is_nondegenerate(self) -> bool:
        """Exhaustive nondegeneracy test (size must be modest)."""
        for x in self.elements():
            if not any(x):
                continue
            if all(self.b(x, y) == 0 for y in self.elements()):
                return False
        return True

    def __eq__(self, other):
        return (isinstance(other, Fqm) and self.orders == other.orders
                and self.qdiag == other.qdiag and self.bmat == other.bmat)

    def __hash__(self):
        return hash((self.orders, self.qdiag, self.bmat))

    def __repr__(self):
        return f"Fqm(orders={self.orders}, q={self.qdiag})"


def q_eval(a: Fqm, x) -> Fraction:
    return a.q(x)


def b_eval(a: Fqm, x, y) -> Fraction:
    return a.b(x, y)


class FqmSubgroup:
    """A subgroup, canonicalized by the HNF basis of its preimage in Z^k."""

    __slots__ = ("parent", "gens", "hnf_basis", "_elements")

    def __init__(self, parent: Fqm, gens):
        self.parent = parent
        self.gens = tuple(parent.reduce(g) for g in gens)
        k = len(parent.orders)
        stack = [list(g) for g in self.gens]
        stack += [[parent.orders[i] if j == i else 0 for j in range(k)]
                  for i in range(k)]
        if k == 0:
            self.hnf_basis = ()
        else:
            h, _ = matrix_hnf(stack)
            self.hnf_basis = tuple(tuple(row) for row in h[:k])
        self._elements = None

    def contains(self, x) -> bool:
        x = list(self.parent.reduce(x))
        for i, row in enumerate(self.hnf_basis):
            piv = row[i]
            if x[i] % piv:
                return False
            f = x[i] // piv
            if f:
                for j in range(i, len(x)):
                    x[j] -= f * row[j]
        return not any(x)

    def elements(self) -> tuple:
        if self._elements is None:
            self._elements = tuple(x for x in self.parent.elements()
                                   if self.contains(x))
        return self._elements

    @property
    def order(self) -> int:
        det = 1
        for i, row in enumerate(self.hnf_basis):
            det *= row[i]
        return self.parent.size // det if det else 1

    def is_isotropic(self) -> bool:
        return all(self.parent.q(x) == 0 for x in self.elements())

    def key(self):
        return self.hnf_basis

    def __eq__(self, other):
        return (isinstance(other, FqmSubgroup) and self.parent == other.parent
                and self.hnf_basis == other.hnf_basis)

    def __hash__(self):
        return hash((self.parent, self.hnf_basis))

    def __repr__(self):
        return f"FqmSubgroup(order={self.order}, gens={self.gens})"


def subgroup_perp(h: FqmSubgroup) -> FqmSubgroup:
    """All x with b(x, g) = 0 for every generator g of h."""
    a = h.parent
    perp = [x for x in a.elements()
            if all(a.b(x, g) == 0 for g in h.gens)]
    return FqmSubgroup(a, perp)


def subgroup_intersection(h1: FqmSubgroup, h2: FqmSubgroup) -> FqmSubgroup:
    els = set(h1.elements())
    return FqmSubgroup(h1.parent, [x for x in h2.elements() if x in els])


class Subquotient:
    """The finite quadratic module I^perp / I for an isotropic subgroup I.

    Carries the projection (defined exactly on I^perp) and a section, both
    needed to realize the pullback/pushforward maps.
    """

    def __init__(self, parent: Fqm, iso: FqmSubgroup):
        if iso.parent != parent:
            raise ValueError("subgroup does not belong to the module")
        if not iso.is_isotropic():
            raise ValueError("subgroup is not isotropic")
        self.parent = parent
        self.iso = iso
        self.perp = subgroup_perp(iso)
        k = len(parent.orders)
        bh = [list(r) for r in self.perp.hnf_basis]
        ci = FqmSubgroup(parent, iso.gens).hnf_basis
        if k == 0:
            self.fqm = Fqm.trivial()
            self._keep = []
            self._dd = []
            self.gens = []
            return
        bh_inv = qmat_inv(bh)
        w = [[_as_int(x) for x in vec_mat(list(row), bh_inv)] for row in ci]
        _, d, v = matrix_snf(w)
        self._bh = bh
        self._bh_inv = bh_inv
        self._v = v
        self._v_inv = [[_as_int(x) for x in row] for row in qmat_inv(v)]
        dd = [d[i][i] for i in range(k)]
        self._dd = dd
        self._keep = [i for i in range(k) if dd[i] > 1]
        gens = []
        for i in self._keep:
            y = self._v_inv[i]
            gens.append(parent.reduce(vec_mat(y, bh)))
        self.gens = gens
        orders = [dd[i] for i in self._keep]
        qdiag = [parent.q(g) for g in gens]
        bmat = [[parent.b(g1, g2) for g2 in gens] for g1 in gens]
        self.fqm = Fqm(orders, qdiag, bmat)

    def proj(self, x):
        """Image of x in I^perp/I; None when x is outside I^perp."""
        if not self.perp.contains(x):
            return None
        if not self._keep:
            return ()
        x = list(self.parent.reduce(x))
        y = [_as_int(v) for v in vec_mat(x, self._bh_inv)]
        c = vec_mat(y, self._v)
        return tuple(c[i] % self._dd[i] for i in self._keep)

    def lift(self, lam):
        """A preimage in I^perp of an element of the subquotient."""
        k = len(self.parent.orders)
        if k == 0:
            return ()
        y = [0] * k
        for idx, i in enumerate(self._keep):
            if lam[idx]:
                for j in range(k):
                    y[j] += lam[idx] * self._v_inv[i][j]
        return self.parent.reduce(vec_mat(y, self._bh))

    def pullback_map(self) -> "FqmLinMap":
        cols = {}
        fibers = {lam: [] for lam in self.fqm.elements()}
        for mu in self.perp.elements():
            fibers[self.proj(mu)].append(mu)
        for lam, mus in fibers.items():
            cols[lam] = tuple((mu, Fraction(1)) for mu in sorted(mus))
        return FqmLinMap(self.fqm, self.parent, cols)

    def pushforward_map(self) -> "FqmLinMap":
        cols = {}
        for mu in self.parent.elements():
            if self.perp.contains(mu):
                cols[mu] = ((self.proj(mu), Fraction(1)),)
            else:
                cols[mu] = ()
        return FqmLinMap(self.parent, self.fqm, cols)


def subquotient(a: Fqm, iso: FqmSubgroup) -> Subquotient:
    return Subquotient(a, iso)


def pullback_map(a: Fqm, iso: FqmSubgroup) -> "FqmLinMap":
    return Subquotient(a, iso).pullback_map()


def pushforward_map(a: Fqm, iso: FqmSubgroup) -> "FqmLinMap":
    return Subquotient(a, iso).pushforward_map()


class FqmLinMap:
    """A linear map C[source] -> C[target] with exact rational entries.

    Stored column-wise: cols[x] lists the (target element, coefficient)
    pairs in the image of the basis vector e_x.
    """

    __slots__ = ("source", "target", "cols")

    def __init__(self, source: Fqm, target: Fqm, cols: dict):
        self.source = source
        self.target = target
        norm = {}
        for x in source.elements():
            entries = [(t, Fraction(c)) for t, c in cols.get(x, ()) if c]
            merged: dict = {}
            for t, c in entries:
                merged[t] = merged.get(t, Fraction(0)) + c
            norm[x] = tuple(sorted((t, c) for t, c in merged.items() if c))
        self.cols = norm

    @staticmethod
    def identity(a: Fqm) -> "FqmLinMap":
        return FqmLinMap(a, a, {x: ((x, Fraction(1)),) for x in a.elements()})

    @staticmethod
    def scalar(a: Fqm, c) -> "FqmLinMap":
        return FqmLinMap(a, a, {x: ((x, Fraction(c)),) for x in a.elements()})

    def compose(self, inner: "FqmLinMap") -> "FqmLinMap":
        """self o inner (inner applied first)."""
        if inner.target != self.source:
            raise ValueError("composition type mismatch")
        cols = {}
        for x in inner.source.elements():
            acc: dict = {}
            for mid, c in inner.cols[x]:
                for t, d in self.cols[mid]:
                    acc[t] = acc.get(t, Fraction(0)) + c * d
            cols[x] = tuple(sorted((t, c) for t, c in acc.items() if c))
        return FqmLinMap(inner.source, self.target, cols)

    def scale(self, c) -> "FqmLinMap":
        c = Fraction(c)
        return FqmLinMap(self.source, self.target,
                         {x: tuple((t, c * d) for t, d in col)
                          for x, col in self.cols.items()})

    def to_dense(self) -> list:
        tgt = {t: i for i, t in enumerate(self.target.elements())}
        rows = [[Fraction(0)] * len(self.source.elements())
                for _ in range(len(tgt))]
        for j, x in enumerate(self.source.elements()):
            for t, c in self.cols[x]:
                rows[tgt[t]][j] = c
        return rows

    def __eq__(self, other):
        return (isinstance(other, FqmLinMap) and self.source == other.source
                and self.target == other.target and self.cols == other.cols)

    def __hash__(self):
        return hash((self.source, self.target,
                     tuple(sorted(self.cols.items()))))

    def __repr__(self):
        return f"FqmLinMap({len(self.source.elements())} -> {len(self.target.elements())})"


def milgram_signature(a: Fqm) -> int:
    """Signature mod 8, via the Gauss sum sum_x e(q(x)) = sqrt|A| e(sig/8)."""
    gauss = CycNum.zero()
    for x in a.elements():
        gauss = gauss + cyc_e(a.q(x))
    root = sqrt_int(a.size)
    for k in range(8):
        if gauss == root * cyc_e(Fraction(k, 8)):
            return k
    raise ValueError("Gauss sum does not match any signature candidate; "
                     "input is not a nondegenerate finite quadratic module")


def enumerate_isotropic_subgroups(a: Fqm, cap: int = 100) -> list:
    """Every isotropic subgroup exactly once, in a deterministic order."""
    if a.size > cap:
        raise ValueError(f"module order {a.size} exceeds cap {cap}")
    iso_elems = [x for x in a.elements() if a.q(x) == 0]
    zero = FqmSubgroup(a, [])
    seen = {zero.key(): zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for h in frontier:
            hel = h.elements()
            for x in iso_elems:
                if h.contains(x):
                    continue
                if any(a.b(x, g) != 0 for g in h.gens):
                    continue
                h2 = FqmSubgroup(a, list(h.gens) + [x])
                if h2.key() not in seen and h2.is_isotropic():
                    seen[h2.key()] = h2
                    nxt.append(h2)
        frontier = nxt
    return sorted(seen.values(), key=lambda h: (h.order, h.elements()))


def pullpush_compose_check(a: Fqm, i1: FqmSubgroup, i2: FqmSubgroup) -> bool:
    """Exact matrix identity relating the two pull/push routes A1 -> A2.

    Builds the intermediate module from the image of I1^perp ∩ I2^perp in
    A1 = I1^perp/I1, cross-checks it against the image in A2, and verifies
    down_{A2} o up_{A1} = |I1 ∩ I2| * up_{A'} o down_{A'}.
    """
    s1 = Subquotient(a, i1)
    s2 = Subquotient(a, i2)
    common = [x for x in s1.perp.elements() if s2.perp.contains(x)]

    i2p = FqmSubgroup(s1.fqm, [s1.proj(x) for x in i2.elements()
                               if s1.perp.contains(x)])
    i1p = FqmSubgroup(s2.fqm, [s2.proj(x) for x in i1.elements()
                               if s2.perp.contains(x)])
    sq1 = Subquotient(s1.fqm, i2p)   # A' as quotient inside A1
    sq2 = Subquotient(s2.fqm, i1p)   # the second description, inside A2

    # natural identification of the two descriptions of A'
    iso: dict = {}
    for x in common:
        u = sq1.proj(s1.proj(x))
        v = sq2.proj(s2.proj(x))
        if u is None or v is None:
            return False
        if iso.get(u, v) != v:
            return False
        iso[u] = v
    if len(iso) != sq1.fqm.size or len(set(iso.values())) != sq2.fqm.size:
        return False
    relabel = FqmLinMap(sq1.fqm, sq2.fqm,
                        {x: ((iso[x], Fraction(1)),) for x in iso})

    lhs = s2.pushforward_map().compose(s1.pullback_map())
    rhs = sq2.pullback_map().compose(relabel).compose(sq1.pushforward_map())
    factor = subgroup_intersection(i1, i2).order
    return lhs == rhs.scale(factor)
