"""Invariants of several vectors and covectors: bracket monomials, double coset
representatives, and the degree-6 invariant outside the bracket span."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial, prod

from .divpow import DPElement, IntPoly, dp_gamma, dp_mul, dp_power
from .invsolver import build_module, group_invariants, lie_invariants, span, subspace_compare
from .partitions import YoungData
from .symmfunc import VecCovecCtx, bracket
from .tensorinv import compose, inverse

__all__ = ["VecCovecCtx", "BracketMatrix", "bracket_matrices", "bracket_monomial",
           "orbit_representative", "young_intersection_order", "verify_bracket_basis",
           "degree_table", "outside_span_element"]


@dataclass(frozen=True)
class BracketMatrix:
    m: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.m)
        if not rows or len({len(row) for row in rows}) != 1:
            raise ValueError("bracket matrix must be a nonempty rectangle")
        if any(x < 0 for row in rows for x in row):
            raise ValueError("bracket matrix entries must be nonnegative")
        object.__setattr__(self, "m", rows)

    @property
    def m1(self) -> int:
        return len(self.m)

    @property
    def m2(self) -> int:
        return len(self.m[0])

    @property
    def r(self) -> int:
        return sum(map(sum, self.m))

    @property
    def alpha1(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.m)

    @property
    def alpha2(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.m))

    def to_json(self) -> dict:
        return {"m": [list(row) for row in self.m]}

    @classmethod
    def from_json(cls, data) -> BracketMatrix:
        return cls(tuple(tuple(row) for row in data["m"]))


def bracket_matrices(m1: int, m2: int, r: int) -> list[BracketMatrix]:
    cells = m1 * m2
    out = []
    for flat in _weak_compositions(r, cells):
        out.append(BracketMatrix(tuple(flat[i * m2:(i + 1) * m2] for i in range(m1))))
    return out


def _weak_compositions(r, k):
    if k == 1:
        yield (r,)
        return
    for x in range(r, -1, -1):
        for rest in _weak_compositions(r - x, k - 1):
            yield (x,) + rest


def bracket_monomial(bm: BracketMatrix, vctx: VecCovecCtx, divided: bool = True) -> DPElement:
    """prod gamma_{m_ij}(<x_i, y_j>), or the plain product when ``divided`` is false."""
    if bm.m1 > vctx.m1 or bm.m2 > vctx.m2:
        raise ValueError("bracket matrix larger than the vector/covector context")
    out = DPElement.one(vctx.varset, vctx.ctx)
    for i, row in enumerate(bm.m, start=1):
        for j, k in enumerate(row, start=1):
            if k:
                b = bracket(i, j, vctx)
                out = dp_mul(out, dp_gamma(k, b) if divided else dp_power(b, k))
    return out


def orbit_representative(bm: BracketMatrix) -> tuple[int, ...]:
    """The permutation carrying each piece Delta2_ij increasingly onto Delta1_ij.

    Delta1_i (block i of alpha1) is cut into consecutive pieces of sizes
    m_i1, ..., m_i,m2 and Delta2_j into pieces of sizes m_1j, ..., m_m1,j.
    """
    r = bm.r
    y1, y2 = YoungData(bm.alpha1), YoungData(bm.alpha2)
    piece1, piece2 = {}, {}
    for i, blk in enumerate(y1.blocks):
        start = blk.start
        for j in range(bm.m2):
            piece1[i, j] = range(start, start + bm.m[i][j])
            start += bm.m[i][j]
    for j, blk in enumerate(y2.blocks):
        start = blk.start
        for i in range(bm.m1):
            piece2[i, j] = range(start, start + bm.m[i][j])
            start += bm.m[i][j]
    perm = [0] * r
    for key, src in piece2.items():
        for a, b in zip(src, piece1[key]):
            perm[a] = b
    return tuple(perm)


def young_intersection_order(perm, alpha1, alpha2) -> int:
    """|S_alpha1 cap perm S_alpha2 perm^-1| by brute force."""
    y1, y2 = YoungData(tuple(alpha1)), YoungData(tuple(alpha2))
    inv = inverse(perm)
    return sum(1 for tau in y2.young_subgroup()
               if y1.in_young_subgroup(compose(perm, compose(tau, inv))))


def expected_intersection_order(bm: BracketMatrix) -> int:
    return prod(factorial(x) for row in bm.m for x in row)


def verify_bracket_basis(n: int, m1: int, m2: int, p: int, r: int, s: int | None = None,
                         cap: int | None = None) -> dict:
    """Compare the invariants of bidegree (r, r) with the span of the divided
    bracket monomials."""
    vctx = VecCovecCtx(n, m1, m2, p)
    kwargs = {} if cap is None else {"cap": cap}
    module = build_module("veccovec", n, p, s=s, m1=m1, m2=m2, bidegree=(r, r), **kwargs)
    inv = group_invariants(module)
    monos = [bracket_monomial(bm, vctx) for bm in bracket_matrices(m1, m2, r)]
    sp = span(module, monos)
    cmp = subspace_compare(sp, inv)
    return {"n": n, "m1": m1, "m2": m2, "p": p, "s": s, "r": r,
            "span_dim": sp.dim, "module_dim": inv.dim, "monomials": len(monos),
            "independent": sp.dim == len(monos), "span_in_invariants": cmp["A_in_B"],
            "equal": cmp["equal"], "missing": inv.dim - sp.dim}


def degree_table(n: int, m1: int, m2: int, p: int, s: int | None, degree_max: int,
                 with_lie: bool = False) -> list[dict]:
    """Per total degree d: invariant dimension (summed over bidegrees r1 + r2 = d)
    and the dimension of the bracket-monomial span."""
    vctx = VecCovecCtx(n, m1, m2, p)
    rows = []
    for d in range(degree_max + 1):
        dim_g = dim_l = span_dim = 0
        for r1 in range(d + 1):
            module = build_module("veccovec", n, p, s=s, m1=m1, m2=m2, bidegree=(r1, d - r1))
            dim_g += group_invariants(module).dim
            if with_lie:
                dim_l += lie_invariants(module).dim
            if 2 * r1 == d:
                span_dim += span(module, [bracket_monomial(bm, vctx)
                                          for bm in bracket_matrices(m1, m2, r1)]).dim
        row = {"degree": d, "dim_G": dim_g, "span": span_dim}
        if with_lie:
            row["dim_g"] = dim_l
        rows.append(row)
    return rows


def outside_span_element(vctx: VecCovecCtx, swapped: bool = False) -> DPElement:
    """x1 x2 (x1 y21 - x2 y22)(y12 y31 - y11 y32) with x_a = x_1[a] and
    y_jb = y_j[b] (the b-th component of the j-th covector).

    With ``swapped`` the covector subscripts are read the other way round
    (y_jb = y_b[j]).  The product is formed in the ordinary polynomial ring
    and moved to divided coordinates.
    """
    vs = vctx.varset

    def x(a):
        return IntPoly.var(vs, f"x1[{a}]")

    def y(j, b):
        j, b = (b, j) if swapped else (j, b)
        name = f"y{j}[{b}]"
        if name not in vs.index:
            raise ValueError(f"{name} does not exist for n={vctx.n}, m2={vctx.m2}")
        return IntPoly.var(vs, name)

    f = x(1) * x(2) * (x(1) * y(2, 1) - x(2) * y(2, 2)) * (y(1, 2) * y(3, 1) - y(1, 1) * y(3, 2))
    return f.to_divided(vctx.ctx)
