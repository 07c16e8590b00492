"""The divided power algebra D(V) over F_p on a finite set of variables.

A monomial prod y_v^(t_v) is stored as a dense exponent tuple aligned with
its VarSet.  Ordinary integer polynomials (IntPoly) are kept alongside so
that invariants defined by determinants and traces can be expanded over Z
and only then moved to divided coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .modarith import (PrimeCtx, as_ctx, binom_mod_p, factorial_unit_mod_p,
                       gamma_compose_coeff, multinomial_power_mod_p, p_adic_digits)

GAMMA_GUARD = 200_000

Mono = tuple[int, ...]


@dataclass(frozen=True)
class VarSet:
    """Ordered variable names; ``groups`` gives a grading label per variable."""

    names: tuple[str, ...]
    groups: tuple = None

    def __post_init__(self):
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        object.__setattr__(self, "names", names)
        groups = tuple(self.groups) if self.groups is not None else (0,) * len(names)
        if len(groups) != len(names):
            raise ValueError("one grading label per variable")
        object.__setattr__(self, "groups", groups)

    def __len__(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.names)}

    @cached_property
    def group_labels(self) -> tuple:
        return tuple(dict.fromkeys(self.groups))

    def multidegree(self, mono: Mono) -> tuple[int, ...]:
        out = dict.fromkeys(self.group_labels, 0)
        for g, e in zip(self.groups, mono):
            out[g] += e
        return tuple(out.values())

    def unit(self, v: str | int) -> Mono:
        k = v if isinstance(v, int) else self.index[v]
        return tuple(int(i == k) for i in range(len(self)))


def matrix_varset(n: int, m: int = 1) -> VarSet:
    """x[i,j] for one matrix, x{q}[i,j] for slot q of several (1-based)."""
    if m == 1:
        return VarSet(tuple(f"x[{i},{j}]" for i in range(1, n + 1) for j in range(1, n + 1)))
    names, groups = [], []
    for q in range(1, m + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                names.append(f"x{q}[{i},{j}]")
                groups.append(q)
    return VarSet(tuple(names), tuple(groups))


def monomials(nvars: int, degree: int, max_exp: int | None = None):
    """All exponent tuples of the given total degree, lexicographically descending."""
    cap = degree if max_exp is None else min(degree, max_exp)

    def rec(k, remaining):
        if k == nvars - 1:
            if remaining <= cap:
                yield (remaining,)
            return
        for e in range(min(cap, remaining), -1, -1):
            for rest in rec(k + 1, remaining - e):
                yield (e,) + rest

    if nvars == 0:
        if degree == 0:
            yield ()
        return
    yield from rec(0, degree)


def _mono_key(mono: Mono):
    # graded lexicographic, descending
    return (-sum(mono), tuple(-e for e in mono))


@dataclass(frozen=True)
class DPElement:
    varset: VarSet
    ctx: PrimeCtx
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        p = self.ctx.p
        clean = {}
        for mono, c in self.terms.items():
            c %= p
            if c:
                if len(mono) != len(self.varset):
                    raise ValueError("monomial length does not match the variable set")
                clean[tuple(mono)] = c
        object.__setattr__(self, "terms", clean)

    # -- construction
    @classmethod
    def zero(cls, varset: VarSet, ctx) -> DPElement:
        return cls(varset, as_ctx(ctx), {})

    @classmethod
    def one(cls, varset: VarSet, ctx) -> DPElement:
        return cls(varset, as_ctx(ctx), {(0,) * len(varset): 1})

    @classmethod
    def var(cls, varset: VarSet, ctx, v, power: int = 1, coeff: int = 1) -> DPElement:
        mono = tuple(e * power for e in varset.unit(v))
        return cls(varset, as_ctx(ctx), {mono: coeff})

    # -- queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DPElement):
            return NotImplemented
        return (self.varset == other.varset and self.ctx == other.ctx
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.varset, self.ctx, frozenset(self.terms.items())))

    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def sorted_terms(self) -> list[tuple[Mono, int]]:
        return sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]))

    def coefficient(self, mono: Mono) -> int:
        return self.terms.get(tuple(mono), 0)

    def vector(self, basis_index: dict) -> dict[int, int]:
        """Sparse coordinates with respect to a monomial basis."""
        out = {}
        for mono, c in self.terms.items():
            if mono not in basis_index:
                raise KeyError(f"monomial {mono} not in the basis")
            out[basis_index[mono]] = c
        return out

    # -- arithmetic
    def _check(self, other: DPElement):
        if self.varset != other.varset or self.ctx != other.ctx:
            raise ValueError("elements live in different algebras")

    def __add__(self, other: DPElement) -> DPElement:
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return DPElement(self.varset, self.ctx, terms)

    def __neg__(self) -> DPElement:
        return self.scale(-1)

    def __sub__(self, other: DPElement) -> DPElement:
        return self + (-other)

    def scale(self, c: int) -> DPElement:
        return DPElement(self.varset, self.ctx, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return dp_mul(self, other)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            factors = [f"{self.varset.names[k]}^({e})" for k, e in enumerate(mono) if e]
            pieces.append("*".join([str(c)] + factors))
        return " + ".join(pieces)

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str, varset: VarSet, ctx) -> DPElement:
        ctx = as_ctx(ctx)
        text = text.strip()
        if text == "0":
            return cls.zero(varset, ctx)
        terms = {}
        for piece in text.split(" + "):
            factors = piece.strip().split("*")
            c = int(factors[0])
            mono = [0] * len(varset)
            for f in factors[1:]:
                name, _, exp = f.rpartition("^(")
                mono[varset.index[name]] += int(exp.rstrip(")"))
            mono = tuple(mono)
            terms[mono] = terms.get(mono, 0) + c
        return cls(varset, ctx, terms)


def _mono_mul_coeff(a: Mono, b: Mono, ctx: PrimeCtx) -> int:
    c = 1
    for x, y in zip(a, b):
        if x and y:
            c = c * binom_mod_p(x + y, x, ctx) % ctx.p
            if not c:
                return 0
    return c


def dp_mul(a: DPElement, b: DPElement) -> DPElement:
    a._check(b)
    ctx = a.ctx
    p = ctx.p
    out: dict[Mono, int] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            c = _mono_mul_coeff(ma, mb, ctx)
            if c:
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = (out.get(m, 0) + c * ca * cb) % p
    return DPElement(a.varset, ctx, out)


def dp_power(a: DPElement, k: int) -> DPElement:
    """Ordinary k-th power in the algebra D(V)."""
    out = DPElement.one(a.varset, a.ctx)
    base = a
    while k:
        if k & 1:
            out = dp_mul(out, base)
        k >>= 1
        if k:
            base = dp_mul(base, base)
    return out


def _gamma_monomial(j: int, mono: Mono, c: int, ctx: PrimeCtx) -> tuple[Mono, int]:
    """gamma_j(c * mono) = coefficient * mono^(j) for a monomial of positive degree."""
    p = ctx.p
    coeff = pow(c, j, p)
    first = True
    for e in mono:
        if not e or not coeff:
            continue
        if first:
            coeff = coeff * gamma_compose_coeff(j, e, ctx) % p
            first = False
        else:
            coeff = coeff * multinomial_power_mod_p(e, j, ctx) % p
    if first:
        raise ValueError("gamma_j is only defined on elements without constant term")
    return tuple(j * e for e in mono), coeff


def dp_gamma(i: int, x: DPElement, guard: int = GAMMA_GUARD) -> DPElement:
    """The divided power x^(i) of an element without constant term."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    zero_mono = (0,) * len(x.varset)
    if zero_mono in x.terms:
        raise ValueError("gamma_i needs an element without constant term")
    if i * max(len(x.terms), 1) > guard:
        raise ValueError(f"gamma_{i} of a {len(x.terms)}-term element exceeds the guard {guard}")
    one = DPElement.one(x.varset, x.ctx)
    if i == 0:
        return one
    zero = DPElement.zero(x.varset, x.ctx)
    # acc[d] = gamma_d of the sum of the terms seen so far
    acc = [one] + [zero] * i
    for mono, c in x.sorted_terms():
        powers = [one]
        for j in range(1, i + 1):
            m, cj = _gamma_monomial(j, mono, c, x.ctx)
            powers.append(DPElement(x.varset, x.ctx, {m: cj}))
        new = []
        for d in range(i + 1):
            total = zero
            for j in range(d + 1):
                if acc[d - j] and powers[j]:
                    total = total + dp_mul(acc[d - j], powers[j])
            new.append(total)
        acc = new
    return acc[i]


def is_in_Ds(x: DPElement, s: int) -> bool:
    q = x.ctx.p ** s
    return all(e < q for mono in x.terms for e in mono)


def homogeneous_component(x: DPElement, degree) -> DPElement:
    """Terms of total degree ``degree`` (int) or of the given multidegree (tuple)."""
    if isinstance(degree, int):
        keep = {m: c for m, c in x.terms.items() if sum(m) == degree}
    else:
        degree = tuple(degree)
        keep = {m: c for m, c in x.terms.items() if x.varset.multidegree(m) == degree}
    return DPElement(x.varset, x.ctx, keep)


def _check_phi_domain(u: DPElement):
    p = u.ctx.p
    for mono in u.terms:
        if sum(mono) < 2:
            raise ValueError("phi_p needs an element without constant or linear terms")
        if any(e >= p for e in mono):
            raise ValueError("phi_p needs all exponents < p")


def phi_p(u: DPElement) -> DPElement:
    """u^p / p, which reduces to -gamma_p(u) since (p-1)! = -1 mod p."""
    _check_phi_domain(u)
    return -dp_gamma(u.ctx.p, u)


def divided_power_via_phi(u: DPElement, m: int) -> DPElement:
    """u^(m) = q^-1 * prod_i phi_p^i(u)^(a_i) with m = sum a_i p^i and m! = q p^nu."""
    _check_phi_domain(u)
    ctx = u.ctx
    out = DPElement.one(u.varset, ctx)
    if m == 0:
        return out
    cur = u
    for k, a in enumerate(p_adic_digits(m, ctx)):
        if k:
            cur = phi_p(cur)
        if a:
            out = dp_mul(out, dp_power(cur, a))
    return out.scale(ctx.inv(factorial_unit_mod_p(m, ctx)))


def enumerate_Ds_monomials(nvars: int, degree: int, ctx, s: int):
    return monomials(nvars, degree, as_ctx(ctx).p ** s - 1)


# ------------------------------------------------------------ integer polynomials

@dataclass(frozen=True)
class IntPoly:
    """An ordinary polynomial with integer coefficients in the variables of a VarSet."""

    varset: VarSet
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {tuple(m): c for m, c in self.terms.items() if c})

    @classmethod
    def var(cls, varset: VarSet, v, coeff: int = 1) -> IntPoly:
        return cls(varset, {varset.unit(v): coeff})

    @classmethod
    def const(cls, varset: VarSet, c: int) -> IntPoly:
        return cls(varset, {(0,) * len(varset): c})

    def __add__(self, other: IntPoly) -> IntPoly:
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return IntPoly(self.varset, terms)

    def __neg__(self) -> IntPoly:
        return IntPoly(self.varset, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(self.varset, {m: c * other for m, c in self.terms.items()})
        out: dict[Mono, int] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = out.get(m, 0) + ca * cb
        return IntPoly(self.varset, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPoly:
        out = IntPoly.const(self.varset, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self.varset == other.varset and self.terms == other.terms

    def __hash__(self):
        return hash((self.varset, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def substitute(self, values: dict[int, IntPoly]) -> IntPoly:
        """Replace variable k by values[k] (variables not listed stay)."""
        out = IntPoly(self.varset, {})
        for mono, c in self.terms.items():
            term = IntPoly.const(self.varset, c)
            rest = list(mono)
            for k, e in enumerate(mono):
                if e and k in values:
                    term = term * values[k] ** e
                    rest[k] = 0
            out = out + term * IntPoly(self.varset, {tuple(rest): 1})
        return out

    def to_divided(self, ctx) -> DPElement:
        """prod y^t = (prod t!) prod y^(t), reduced mod p."""
        ctx = as_ctx(ctx)
        p = ctx.p
        out = {}
        for mono, c in self.terms.items():
            f = c % p
            for e in mono:
                if not f:
                    break
                for k in range(2, e + 1):
                    f = f * k % p
            if f:
                out[mono] = f
        return DPElement(self.varset, ctx, out)

    def mod(self, p: int) -> IntPoly:
        return IntPoly(self.varset, {m: c % p for m, c in self.terms.items()})

    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for mono, c in sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0])):
            factors = [self.varset.names[k] + (f"^{e}" if e > 1 else "") for k, e in enumerate(mono) if e]
            pieces.append("*".join([str(c)] + factors))
        return " + ".join(pieces)

    __repr__ = __str__


def int_matrix(varset: VarSet, n: int, slot: int | None = None) -> list[list[IntPoly]]:
    """The n x n matrix of coordinate functions (slot q of several matrices)."""
    name = "x" if slot is None else f"x{slot}"
    return [[IntPoly.var(varset, f"{name}[{i},{j}]") for j in range(1, n + 1)]
            for i in range(1, n + 1)]


def mat_mul(a, b):
    n = len(a)
    vs = a[0][0].varset
    return [[sum((a[i][k] * b[k][j] for k in range(n)), IntPoly(vs, {})) for j in range(n)]
            for i in range(n)]


def trace(a) -> IntPoly:
    vs = a[0][0].varset
    return sum((a[i][i] for i in range(len(a))), IntPoly(vs, {}))


def perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for k in range(len(perm)):
        if seen[k]:
            continue
        length = 0
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def determinant(a) -> IntPoly:
    n = len(a)
    vs = a[0][0].varset
    out = IntPoly(vs, {})
    for perm in itertools.permutations(range(n)):
        term = IntPoly.const(vs, perm_sign(perm))
        for i in range(n):
            term = term * a[i][perm[i]]
        out = out + term
    return out
