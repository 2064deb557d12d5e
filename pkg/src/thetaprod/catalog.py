"""Named lattices, contexts and forms for the CLI and the check suites."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra import AlgebraContext, build_context
from .forms import ez_jacobi, ez_to_jacobi, solve_principal_part, vv_from_jacobi, vv_on_lattice
from .forms import weak_jacobi_01_ez, weak_jacobi_m21_ez
from .fqm import Fqm
from .lattice import EvenLattice, Sublattice
from .qseries import PrincipalPart, QSeries, mul_scalar_series
from .scalars import delta_inverse, eisenstein4, eisenstein6, scalar_catalog, scalar_pow


def direct_sum(*grams):
    n = sum(len(g) for g in grams)
    out = [[0] * n for _ in range(n)]
    o = 0
    for g in grams:
        for i, row in enumerate(g):
            for j, x in enumerate(row):
                out[o + i][o + j] = x
        o += len(g)
    return out


U_GRAM = [[0, 1], [1, 0]]

E8_GRAM = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, -1],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, 0, 0, -1, 0, 0, 2]]

D8_GRAM = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, -1],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, 0, 0, 0, -1, 0, 2]]

A2_GRAM = [[2, -1], [-1, 2]]


def _neg(g):
    return [[-x for x in row] for row in g]


@lru_cache(maxsize=None)
def lattices() -> dict:
    """The named lattice catalog."""
    grams = {
        "U": U_GRAM,
        "2U": direct_sum(U_GRAM, U_GRAM),
        "A1": [[2]],
        "A1m": [[-2]],
        "m4": [[-4]],
        "m6": [[-6]],
        "m8": [[-8]],
        "m18": [[-18]],
        "A2": A2_GRAM,
        "A2m": _neg(A2_GRAM),
        "A2pA2m": direct_sum(A2_GRAM, _neg(A2_GRAM)),
        "U2": [[0, 2], [2, 0]],
        "U2U2": direct_sum([[0, 2], [2, 0]], [[0, 2], [2, 0]]),
        "d22": [[2, 0], [0, 2]],
        "d44": [[4, 0], [0, 4]],
        "m4p4": direct_sum([[-4]], [[4]]),
        "E8": E8_GRAM,
        "E8m": _neg(E8_GRAM),
        "D8": D8_GRAM,
        "2U+A1m": direct_sum(U_GRAM, U_GRAM, [[-2]]),
        "2U+m4": direct_sum(U_GRAM, U_GRAM, [[-4]]),
        "2U+m6": direct_sum(U_GRAM, U_GRAM, [[-6]]),
        "2U+m8": direct_sum(U_GRAM, U_GRAM, [[-8]]),
        "2U+E8m": direct_sum(U_GRAM, U_GRAM, _neg(E8_GRAM)),
        "2U+A1m+A1m": direct_sum(U_GRAM, U_GRAM, [[-2]], [[-2]]),
        "U2+U+A1m": direct_sum([[0, 2], [2, 0]], U_GRAM, [[-2]]),
    }
    return {name: EvenLattice(g) for name, g in grams.items()}


# FQM suite for the exhaustive checks; all orders are <= 36
FQM_SUITE_NAMES = ("U", "A1", "A1m", "A2", "A2m", "U2", "d22", "m6", "m8",
                   "D8", "m4p4", "A2pA2m", "U2U2", "m18")

# lattices for the Milgram signature cross-check
MILGRAM_SUITE_NAMES = ("U", "2U", "A1", "A1m", "2U+A1m", "2U+m4", "2U+m6",
                       "2U+m8", "2U+E8m", "d22", "m8", "E8", "D8", "U2",
                       "A2", "A2m")

# contexts: lattice name -> isotropic basis rows
CONTEXT_SPECS = {
    "2U": [[1, 0, 0, 0], [0, 0, 1, 0]],
    "2U+A1m": [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]],
    "2U+m4": [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]],
    "2U+m6": [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]],
    "2U+m8": [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]],
    "2U+E8m": [[1, 0] + [0] * 10, [0, 0, 1, 0] + [0] * 8],
    "2U+A1m+A1m": [[1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]],
    "U2+U+A1m": [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]],
}


def fqm_catalog() -> list:
    return [(name, lattices()[name].disc().fqm) for name in FQM_SUITE_NAMES]


def standard_isotropic(name: str) -> Sublattice:
    lat = lattices()[name]
    return Sublattice(lat, CONTEXT_SPECS[name])


@lru_cache(maxsize=None)
def standard_context(name: str, trunc=Fraction(8)) -> AlgebraContext:
    lat = lattices()[name]
    return build_context(lat, standard_isotropic(name), trunc)


def _last_coordinate_rows(src_rank: int, dst_rank: int):
    rows = []
    for i in range(src_rank):
        row = [0] * dst_rank
        row[dst_rank - src_rank + i] = 1
        rows.append(row)
    return rows


def vv_on_named_lattice(f: QSeries, src: EvenLattice, name: str) -> QSeries:
    """Transport a form on disc(src) onto the named lattice, embedding src
    as the trailing block."""
    dst = lattices()[name]
    return vv_on_lattice(f, src, dst,
                         _last_coordinate_rows(src.rank, dst.rank))


def scalar_e42e6_over_delta(trunc) -> QSeries:
    """E4^2 E6 / Delta: weight 2, leading exponent -1."""
    trunc = Fraction(trunc)
    e4sq = scalar_pow(eisenstein4(trunc + 2), 2)
    top = mul_scalar_series(e4sq, eisenstein6(trunc + 2))
    return mul_scalar_series(top, delta_inverse(trunc + 2)).restrict(trunc)


def generators_2U_A1m(trunc) -> list:
    """The two generators used to solve principal parts over 2U + <-2>:
    the reflective form from phi_0_1 and phi_m2_1 * E4^2 E6 / Delta."""
    trunc = Fraction(trunc)
    a1m = lattices()["A1m"]
    g1 = vv_on_named_lattice(ez_jacobi("phi_0_1", trunc), a1m, "2U+A1m")
    base = vv_on_named_lattice(ez_jacobi("phi_m2_1", trunc + 2), a1m, "2U+A1m")
    g2 = mul_scalar_series(scalar_e42e6_over_delta(trunc + 2), base)
    return [g1, g2.restrict(g2.trunc)]


def generators_index_t(t: int, trunc) -> list:
    """Weight-0 index-t monomials in phi_0_1, phi_m2_1 with E4/E6
    coefficients, as vector-valued forms over 2U + <-2t>."""
    if t not in (2, 3, 4):
        raise ValueError("index must be 2, 3 or 4")
    trunc = Fraction(trunc)
    ez_t = trunc + Fraction(t, 4) + 1
    p0 = weak_jacobi_01_ez(ez_t)
    pm = weak_jacobi_m21_ez(ez_t)
    mons = []
    for b in range(t + 1):
        wt = 2 * b
        if wt == 2:
            continue  # there is no weight-2 form on SL2(Z)
        ez = None
        for _ in range(t - b):
            ez = p0 if ez is None else ez.mul(p0)
        for _ in range(b):
            ez = pm if ez is None else ez.mul(pm)
        if wt == 4:
            ez = ez.mul_scalar(eisenstein4(ez_t))
        elif wt == 6:
            ez = ez.mul_scalar(eisenstein6(ez_t))
        elif wt == 8:
            ez = ez.mul_scalar(scalar_pow(eisenstein4(ez_t), 2))
        mons.append(ez)
    src = EvenLattice([[-2 * t]])
    out = []
    for ez in mons:
        f = vv_from_jacobi(ez_to_jacobi(ez, t, 0))
        out.append(vv_on_named_lattice(f, src, f"2U+m{2 * t}"))
    return out


def form_f1(trunc) -> QSeries:
    """q^{-1/4} e_1 + 10 e_0 + ... over 2U + <-2>."""
    return vv_on_named_lattice(ez_jacobi("phi_0_1", trunc),
                               lattices()["A1m"], "2U+A1m")


def form_f0(trunc) -> QSeries:
    """The solver form q^{-1} e_0 + O(1) over 2U + <-2>."""
    trunc = Fraction(trunc)
    gens = generators_2U_A1m(trunc + 1)
    a = lattices()["2U+A1m"].disc().fqm
    target = PrincipalPart({((0,), Fraction(-1)): Fraction(1)})
    _, f0 = solve_principal_part(gens, target, trunc)
    return f0


def form_ft(t: int, trunc) -> QSeries:
    """The index-t reflective form q^{-1/4t}(e_1 + e_{-1}) + a_t e_0 + ...
    over 2U + <-2t>."""
    trunc = Fraction(trunc)
    gens = generators_index_t(t, trunc + 1)
    a = lattices()[f"2U+m{2 * t}"].disc().fqm
    one = (1,)
    target = {}
    target[(one, Fraction(-1, 4 * t))] = Fraction(1)
    if a.neg(one) != one:
        target[(a.neg(one), Fraction(-1, 4 * t))] = Fraction(1)
    _, ft = solve_principal_part(gens, PrincipalPart(target), trunc)
    return ft


def form_catalog(name: str, trunc) -> QSeries:
    """Form lookup by catalog name (vector-valued and scalar entries)."""
    if name in ("E4", "E6", "Delta", "j") or name.startswith("eta"):
        return scalar_catalog(name, trunc)
    if name in ("phi_0_1", "phi_m2_1"):
        return ez_jacobi(name, trunc)
    if name == "f1":
        return form_f1(trunc)
    if name == "f0":
        return form_f0(trunc)
    if name in ("ft2", "ft3", "ft4"):
        return form_ft(int(name[2]), trunc)
    raise ValueError(f"unknown catalog form {name!r}")
