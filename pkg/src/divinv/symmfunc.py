"""Concrete invariants: e_i, h_i, p_i of one matrix, their pattern versions on
several matrices, bracket functions for vectors and covectors, and the
divided families built from them.

Everything is expanded as an integer polynomial first and only then moved
to divided power coordinates over F_p.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .divpow import (DPElement, IntPoly, VarSet, determinant, dp_gamma, dp_mul,
                     int_matrix, mat_mul, matrix_varset, trace)
from .modarith import PrimeCtx, as_ctx
from .partitions import CyclePattern, MultiPartition, Partition, YoungData
from .tensorinv import CycleTypeSum, class_sum, to_dp_element


@dataclass(frozen=True)
class MatrixVarCtx:
    n: int
    p: int
    m: int = 1

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        as_ctx(self.p)

    @property
    def ctx(self) -> PrimeCtx:
        return as_ctx(self.p)

    @cached_property
    def varset(self) -> VarSet:
        return matrix_varset(self.n, self.m)

    def matrix(self, slot: int = 1):
        if not 1 <= slot <= self.m:
            raise ValueError(f"slot {slot} out of range")
        return int_matrix(self.varset, self.n, None if self.m == 1 else slot)


@dataclass(frozen=True)
class VecCovecCtx:
    """W = V^m1 + (V*)^m2 with coordinates x{i}[a] and y{j}[a]."""

    n: int
    m1: int
    m2: int
    p: int

    def __post_init__(self):
        if self.n < 1 or self.m1 < 0 or self.m2 < 0:
            raise ValueError("bad vector/covector sizes")
        as_ctx(self.p)

    @property
    def ctx(self) -> PrimeCtx:
        return as_ctx(self.p)

    @cached_property
    def varset(self) -> VarSet:
        names, groups = [], []
        for i in range(1, self.m1 + 1):
            for a in range(1, self.n + 1):
                names.append(f"x{i}[{a}]")
                groups.append("x")
        for j in range(1, self.m2 + 1):
            for a in range(1, self.n + 1):
                names.append(f"y{j}[{a}]")
                groups.append("y")
        # keep the bigrading (vector degree, covector degree) even if a side is empty
        return VarSet(tuple(names), tuple(groups))

    def x(self, i: int, a: int) -> int:
        return self.varset.index[f"x{i}[{a}]"]

    def y(self, j: int, a: int) -> int:
        return self.varset.index[f"y{j}[{a}]"]

    def bidegree(self, mono) -> tuple[int, int]:
        r1 = sum(e for e, g in zip(mono, self.varset.groups) if g == "x")
        return r1, sum(mono) - r1


# ---------------------------------------------------------------- matrix functions

def principal_minor_sum(mat, i: int) -> IntPoly:
    n = len(mat)
    vs = mat[0][0].varset
    if i == 0:
        return IntPoly.const(vs, 1)
    out = IntPoly(vs, {})
    for rows in itertools.combinations(range(n), i):
        out = out + determinant([[mat[a][b] for b in rows] for a in rows])
    return out


def e_of(mat, i: int) -> IntPoly:
    """tr of the i-th exterior power: the sum of i x i principal minors."""
    return principal_minor_sum(mat, i)


def h_of(mat, i: int) -> IntPoly:
    """tr of the i-th symmetric power, from the e_j by the Jacobi-Trudi recursion
    h_k = sum_{j=1}^{k} (-1)^(j-1) e_j h_{k-j} (integer coefficients only)."""
    n = len(mat)
    vs = mat[0][0].varset
    es = [e_of(mat, j) for j in range(min(i, n) + 1)]
    hs = [IntPoly.const(vs, 1)]
    for k in range(1, i + 1):
        acc = IntPoly(vs, {})
        for j in range(1, min(k, n) + 1):
            term = es[j] * hs[k - j]
            acc = acc + (term if j % 2 else -term)
        hs.append(acc)
    return hs[i]


def p_of(mat, i: int) -> IntPoly:
    power = mat
    for _ in range(i - 1):
        power = mat_mul(power, mat)
    return trace(power)


_KINDS = {"e": e_of, "h": h_of, "p": p_of}


def _check_degree(i: int):
    if i < 1:
        raise ValueError("degree must be positive")


def elementary_e(i: int, mctx: MatrixVarCtx) -> DPElement:
    """e_i(X) in divided coordinates; zero when i > n."""
    _check_degree(i)
    if i > mctx.n:
        return DPElement.zero(mctx.varset, mctx.ctx)
    return e_of(mctx.matrix(), i).to_divided(mctx.ctx)


def complete_h(i: int, mctx: MatrixVarCtx) -> DPElement:
    _check_degree(i)
    return h_of(mctx.matrix(), i).to_divided(mctx.ctx)


def power_p(i: int, mctx: MatrixVarCtx) -> DPElement:
    _check_degree(i)
    return p_of(mctx.matrix(), i).to_divided(mctx.ctx)


def classical_poly(kind: str, i: int, mctx: MatrixVarCtx) -> IntPoly:
    """e_i, h_i or p_i as an ordinary polynomial, coefficients reduced mod p.

    This is the element of the coordinate ring k[g] (and of A_s); the
    functions above give its image in the divided power algebra, where
    x^t = t! x^(t) may vanish.
    """
    _check_degree(i)
    if kind not in _KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    return _KINDS[kind](mctx.matrix(), i).mod(mctx.p)


@lru_cache(maxsize=None)
def _pattern_poly(kind: str, i: int, word: tuple[int, ...], mctx: MatrixVarCtx) -> IntPoly:
    mat = mctx.matrix(word[0])
    for q in word[1:]:
        mat = mat_mul(mat, mctx.matrix(q))
    return _KINDS[kind](mat, i)


def pattern_function(kind: str, i: int, b: CyclePattern | tuple, mctx: MatrixVarCtx) -> DPElement:
    """f_b = f(X_{b_1} X_{b_2} ... X_{b_t}) for f one of e_i, h_i, p_i."""
    _check_degree(i)
    if kind not in _KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    b = b if isinstance(b, CyclePattern) else CyclePattern(tuple(b))
    if b.alphabet_size > mctx.m:
        raise ValueError(f"pattern {b} needs {b.alphabet_size} matrices")
    return _pattern_poly(kind, i, b.word, mctx).to_divided(mctx.ctx)


def divided_family(lam, kind: str, mctx: MatrixVarCtx) -> DPElement:
    """Divided e_lambda / h_lambda / p_lambda (or their boldlambda versions).

    e and h: prod_i gamma_{m_i}(f_i), pattern by pattern for a MultiPartition.
    p: the conjugacy class sum (S_r or S_alpha) in divided coordinates.
    """
    ctx = mctx.ctx
    if isinstance(lam, MultiPartition):
        return _divided_family_multi(lam, kind, mctx)
    if not isinstance(lam, Partition):
        lam = Partition(tuple(lam))
    if kind == "p":
        return to_dp_element(CycleTypeSum(lam.size, ctx, {lam: 1}), mctx.n)
    if kind not in ("e", "h"):
        raise ValueError(f"unknown kind {kind!r}")
    base = elementary_e if kind == "e" else complete_h
    out = DPElement.one(mctx.varset, ctx)
    for i, m in sorted(lam.multiplicities.items()):
        out = dp_mul(out, dp_gamma(m, base(i, mctx)))
    return out


def _divided_family_multi(blam: MultiPartition, kind: str, mctx: MatrixVarCtx) -> DPElement:
    ctx = mctx.ctx
    if kind == "p":
        alpha = blam.content(mctx.m)
        young = YoungData(alpha)
        spec = {"type": "alpha-class", "alpha": list(alpha), "blambda": blam}
        return to_dp_element(class_sum(spec, ctx), mctx.n, young)
    if kind not in ("e", "h"):
        raise ValueError(f"unknown kind {kind!r}")
    out = DPElement.one(mctx.varset, ctx)
    for b, lam in blam.items:
        for i, m in sorted(lam.multiplicities.items()):
            out = dp_mul(out, dp_gamma(m, pattern_function(kind, i, b, mctx)))
    return out


# ---------------------------------------------------------------- vectors and covectors

def bracket(i: int, j: int, vctx: VecCovecCtx) -> DPElement:
    """<x_i, y_j> = sum_a x_i[a] y_j[a]."""
    if not (1 <= i <= vctx.m1 and 1 <= j <= vctx.m2):
        raise ValueError(f"bracket index ({i},{j}) out of range")
    vs = vctx.varset
    terms = {}
    for a in range(1, vctx.n + 1):
        mono = [0] * len(vs)
        mono[vctx.x(i, a)] = 1
        mono[vctx.y(j, a)] = 1
        terms[tuple(mono)] = 1
    return DPElement(vs, vctx.ctx, terms)


# ---------------------------------------------------------------- named queries

_QUERY = re.compile(r"^(div\s+)?(e|h|p)\[([\d,\s]+)\](?:@\[([\d,\s]+)\])?$")


def named_invariant(query: str, n: int, p: int, m: int = 1) -> DPElement:
    """Evaluate "e[2]", "h[2,1]", "p[3]@[1,2]", "div e[2,2]" or "bracket[1,2]".

    Without "div" the entries are multiplied as ordinary polynomials; with it
    the divided lambda family is returned.
    """
    query = query.strip()
    br = re.match(r"^bracket\[(\d+),\s*(\d+)\]$", query)
    if br:
        i, j = int(br.group(1)), int(br.group(2))
        return bracket(i, j, VecCovecCtx(n, max(m, i), max(m, j), p))
    hit = _QUERY.match(query)
    if not hit:
        raise ValueError(f"cannot parse invariant query {query!r}")
    divided, kind, entries, pattern = hit.groups()
    parts = tuple(int(x) for x in entries.split(","))
    if pattern:
        b = CyclePattern(tuple(int(x) for x in pattern.split(",")))
        m = max(m, b.alphabet_size)
    mctx = MatrixVarCtx(n, p, m)
    if divided:
        lam = Partition(parts)
        if pattern:
            return divided_family(MultiPartition(((b, lam),)), kind, mctx)
        if m != 1:
            raise ValueError("divided families on several matrices need a pattern")
        return divided_family(lam, kind, mctx)
    out = DPElement.one(mctx.varset, mctx.ctx)
    for i in parts:
        f = pattern_function(kind, i, b, mctx) if pattern else \
            {"e": elementary_e, "h": complete_h, "p": power_p}[kind](i, mctx)
        out = dp_mul(out, f)
    return out
