"""Exact Weil representation matrices on the group ring of an FQM.

The generator images are computed from the standard formulas; the
metaplectic relations and the intertwining property of pullback and
pushforward are verified by exact cyclotomic matrix identities.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import CycNum, cyc_e, sqrt_int
from .fqm import Fqm, FqmLinMap, FqmSubgroup, Subquotient, milgram_signature

Grid = list  # list of rows of CycNum


class WeilMatrix:
    """A square matrix over a cyclotomic field, indexed by FQM elements.

    entries[i][j] is the coefficient of e_{elements[i]} in the image of
    e_{elements[j]}.
    """

    __slots__ = ("fqm", "entries")

    def __init__(self, fqm: Fqm, entries: Grid):
        self.fqm = fqm
        self.entries = [list(row) for row in entries]

    @staticmethod
    def identity(fqm: Fqm) -> "WeilMatrix":
        n = fqm.size
        one = CycNum.from_rational(1)
        zero = CycNum.zero()
        return WeilMatrix(fqm, [[one if i == j else zero for j in range(n)]
                                for i in range(n)])

    def matmul(self, other: "WeilMatrix") -> "WeilMatrix":
        return WeilMatrix(self.fqm, _mul(self.entries, other.entries))

    def scaled(self, c: CycNum) -> "WeilMatrix":
        return WeilMatrix(self.fqm,
                          [[c * x for x in row] for row in self.entries])

    def dagger(self) -> "WeilMatrix":
        n = len(self.entries)
        return WeilMatrix(self.fqm,
                          [[self.entries[j][i].conjugate() for j in range(n)]
                           for i in range(n)])

    def is_unitary(self) -> bool:
        return self.matmul(self.dagger()) == WeilMatrix.identity(self.fqm)

    def __eq__(self, other):
        return (isinstance(other, WeilMatrix) and self.fqm == other.fqm
                and self.entries == other.entries)

    def __repr__(self):
        return f"WeilMatrix(size={len(self.entries)})"


def _mul(a: Grid, b: Grid) -> Grid:
    n = len(a)
    m = len(b[0]) if b else 0
    k = len(b)
    out = []
    for i in range(n):
        arow = a[i]
        row = []
        for j in range(m):
            acc = CycNum.zero()
            for t in range(k):
                x = arow[t]
                y = b[t][j]
                if x.c and y.c:
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def rho_T(a: Fqm) -> WeilMatrix:
    """rho(T): diagonal with entries e(q(lambda))."""
    elems = a.elements()
    zero = CycNum.zero()
    n = len(elems)
    rows = [[zero] * n for _ in range(n)]
    for j, lam in enumerate(elems):
        rows[j][j] = cyc_e(a.q(lam))
    return WeilMatrix(a, rows)


def _s_kernel(a: Fqm) -> Grid:
    """The unscaled S-kernel F with F[mu][lam] = e(-(lam, mu))."""
    elems = a.elements()
    return [[cyc_e(-a.b(lam, mu)) for lam in elems] for mu in elems]


def _s_prefactor(a: Fqm) -> CycNum:
    sig = milgram_signature(a)
    return cyc_e(Fraction(-sig, 8)) * (sqrt_int(a.size) / a.size)


def rho_S(a: Fqm) -> WeilMatrix:
    """rho(S) = e(-sig(A)/8)/sqrt|A| * (e(-(lam,mu)))_{mu,lam}."""
    c = _s_prefactor(a)
    return WeilMatrix(a, [[c * x for x in row] for row in _s_kernel(a)])


def rho_Z(a: Fqm) -> WeilMatrix:
    """rho(Z): e(-sig(A)/4) times the permutation lambda -> -lambda."""
    sig = milgram_signature(a)
    c = cyc_e(Fraction(-sig, 4))
    elems = a.elements()
    idx = {lam: i for i, lam in enumerate(elems)}
    zero = CycNum.zero()
    n = len(elems)
    rows = [[zero] * n for _ in range(n)]
    for j, lam in enumerate(elems):
        rows[idx[a.neg(lam)]][j] = c
    return WeilMatrix(a, rows)


def check_mp2_relations(a: Fqm) -> bool:
    """(ST)^3 = S^2 = Z, ZT = TZ, Z^4 = id, S unitary — all exact.

    Products are arranged so that at most one factor per multiplication has
    multi-term cyclotomic entries, keeping the arithmetic cheap.
    """
    elems = a.elements()
    n = len(elems)
    f = _s_kernel(a)
    c = _s_prefactor(a)
    z = rho_Z(a)
    # S^2 = c^2 * F^2
    f2 = _mul(f, f)
    s2 = WeilMatrix(a, [[c * c * x for x in row] for row in f2])
    if s2 != z:
        return False
    # (S T)^3 = c^3 * H^3 with H = F * diag(e(q))
    tdiag = [cyc_e(a.q(lam)) for lam in elems]
    h = [[f[i][j] * tdiag[j] for j in range(n)] for i in range(n)]
    h3 = _mul(_mul(h, h), h)
    c3 = c * c * c
    if WeilMatrix(a, [[c3 * x for x in row] for row in h3]) != z:
        return False
    t = rho_T(a)
    if z.matmul(t) != t.matmul(z):
        return False
    z2 = z.matmul(z)
    if z2.matmul(z2) != WeilMatrix.identity(a):
        return False
    # unitarity of S: F F^dagger = |A| * id
    fd = [[f[j][i].conjugate() for j in range(n)] for i in range(n)]
    prod = _mul(f, fd)
    size = CycNum.from_rational(a.size)
    for i in range(n):
        for j in range(n):
            want = size if i == j else CycNum.zero()
            if prod[i][j] != want:
                return False
    return True


def _linmap_to_weil(m: FqmLinMap) -> Grid:
    """Dense cyclotomic grid (target x source) of a rational linear map."""
    src = m.source.elements()
    tgt = {t: i for i, t in enumerate(m.target.elements())}
    zero = CycNum.zero()
    rows = [[zero] * len(src) for _ in range(len(tgt))]
    for j, x in enumerate(src):
        for t, c in m.cols[x]:
            rows[tgt[t]][j] = CycNum.from_rational(c)
    return rows


def check_intertwine(a: Fqm, iso: FqmSubgroup) -> bool:
    """Pullback and pushforward commute with rho(T) and rho(S), exactly."""
    sq = Subquotient(a, iso)
    ap = sq.fqm
    up = _linmap_to_weil(sq.pullback_map())
    down = _linmap_to_weil(sq.pushforward_map())
    for big, small in ((rho_T(a), rho_T(ap)), (rho_S(a), rho_S(ap))):
        if _mul(big.entries, up) != _mul(up, small.entries):
            return False
        if _mul(down, big.entries) != _mul(small.entries, down):
            return False
    return True
