"""Multilinear invariants of matrices through permutations.

A permutation pi acts as the functional E_pi on r-tuples of elementary
matrices: E_pi(E_{i_1 j_1}, ..., E_{i_r j_r}) = 1 iff j_l = i_{pi(l)} for all
l, i.e. the product of traces along the cycles of pi.  Tuples are read as
arcs i_l -> j_l; a permutation contributes iff it sends each arc to an arc
starting where the previous one ends.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .divpow import DPElement, VarSet, matrix_varset, monomials
from .modarith import PrimeCtx, as_ctx
from .partitions import (MultiPartition, Partition, YoungData, check_perm, cycle_type,
                         perm_cycles, s_alpha_cycle_type, s_reduce, s_reduce_multi)

EXPLICIT_GUARD = 8
TUPLE_GUARD = 5


# ---------------------------------------------------------------- permutations

def format_perm(perm: tuple[int, ...]) -> str:
    """Cycle notation with 1-based labels; fixed points omitted, identity is '()'."""
    cycles = [c for c in perm_cycles(perm) if len(c) > 1]
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(l + 1) for l in c) + ")" for c in cycles)


def parse_perm(text: str, r: int) -> tuple[int, ...]:
    perm = list(range(r))
    body = text.replace(" ", ",").strip()
    for chunk in body.split(")"):
        chunk = chunk.strip().lstrip("(").strip(",")
        if not chunk:
            continue
        labels = [int(x) - 1 for x in chunk.split(",") if x]
        for a, b in zip(labels, labels[1:] + labels[:1]):
            perm[a] = b
    return check_perm(perm, r)


def compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """(a o b)(l) = a(b(l))."""
    return tuple(a[x] for x in b)


def inverse(a: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(a)
    for l, x in enumerate(a):
        out[x] = l
    return tuple(out)


def conjugate(perm: tuple[int, ...], sigma: tuple[int, ...]) -> tuple[int, ...]:
    """sigma o perm o sigma^-1."""
    return compose(sigma, compose(perm, inverse(sigma)))


# ---------------------------------------------------------------- basis tuples

@dataclass(frozen=True)
class BasisTuple:
    """(E_{i_1 j_1}, ..., E_{i_r j_r}) with 1-based indices."""

    i: tuple[int, ...]
    j: tuple[int, ...]

    def __post_init__(self):
        if len(self.i) != len(self.j):
            raise ValueError("i and j must have the same length")
        object.__setattr__(self, "i", tuple(self.i))
        object.__setattr__(self, "j", tuple(self.j))

    @property
    def r(self) -> int:
        return len(self.i)

    def permuted(self, sigma: tuple[int, ...]) -> BasisTuple:
        """Positions moved by sigma: entry l goes to position sigma(l)."""
        inv = inverse(sigma)
        return BasisTuple(tuple(self.i[inv[l]] for l in range(self.r)),
                          tuple(self.j[inv[l]] for l in range(self.r)))

    def content(self, n: int) -> tuple[int, ...]:
        """Arc multiplicities in the x[i,j] variable order."""
        out = [0] * (n * n)
        for a, b in zip(self.i, self.j):
            out[(a - 1) * n + (b - 1)] += 1
        return tuple(out)


def matches(perm: tuple[int, ...], t: BasisTuple) -> bool:
    return all(t.j[l] == t.i[perm[l]] for l in range(len(perm)))


def tuple_of_content(content: tuple[int, ...], n: int) -> BasisTuple:
    i, j = [], []
    for k, c in enumerate(content):
        a, b = divmod(k, n)
        i += [a + 1] * c
        j += [b + 1] * c
    return BasisTuple(tuple(i), tuple(j))


def is_balanced(content: tuple[int, ...], n: int) -> bool:
    out = [0] * n
    inn = [0] * n
    for k, c in enumerate(content):
        if c:
            a, b = divmod(k, n)
            out[a] += c
            inn[b] += c
    return out == inn


def _compositions(r: int, n: int, sorted_only: bool):
    def rec(k, remaining, cap):
        if k == n - 1:
            if remaining <= cap:
                yield (remaining,)
            return
        for d in range(min(remaining, cap), -1, -1):
            for rest in rec(k + 1, remaining - d, d if sorted_only else r):
                yield (d,) + rest
    if n == 0:
        if r == 0:
            yield ()
        return
    yield from rec(0, r, r)


def _transport(rows: tuple[int, ...], cols: list[int]):
    """Nonnegative matrices (flattened) with the given row and column sums."""
    n = len(cols)

    def fill_row(k, remaining, caps):
        if k == n - 1:
            if remaining <= caps[k]:
                yield (remaining,)
            return
        for x in range(min(remaining, caps[k]), -1, -1):
            for rest in fill_row(k + 1, remaining - x, caps):
                yield (x,) + rest

    def rec(a, caps):
        if a == len(rows):
            if not any(caps):
                yield ()
            return
        for row in fill_row(0, rows[a], caps):
            new_caps = [c - x for c, x in zip(caps, row)]
            for rest in rec(a + 1, new_caps):
                yield row + rest

    yield from rec(0, list(cols))


def balanced_contents(n: int, r: int, up_to_relabelling: bool = False):
    """Arc contents on n vertices with in-degree = out-degree at every vertex.

    With ``up_to_relabelling`` only degree vectors in decreasing order are
    produced, which still meets every orbit under relabelling the vertices.
    """
    for d in _compositions(r, n, up_to_relabelling):
        yield from _transport(d, list(d))


# ---------------------------------------------------------------- class sums

@dataclass(frozen=True)
class PermClassSum:
    """sum_pi c_pi E_pi with explicit support."""

    r: int
    ctx: PrimeCtx
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        p = self.ctx.p
        clean = {}
        for perm, c in self.coeffs.items():
            perm = check_perm(perm, self.r)
            c = (clean.get(perm, 0) + c) % p
            if c:
                clean[perm] = c
            else:
                clean.pop(perm, None)
        object.__setattr__(self, "coeffs", clean)

    def __add__(self, other: PermClassSum) -> PermClassSum:
        if self.r != other.r or self.ctx != other.ctx:
            raise ValueError("class sums of different shape")
        coeffs = dict(self.coeffs)
        for perm, c in other.coeffs.items():
            coeffs[perm] = coeffs.get(perm, 0) + c
        return PermClassSum(self.r, self.ctx, coeffs)

    def scale(self, c: int) -> PermClassSum:
        return PermClassSum(self.r, self.ctx, {k: v * c for k, v in self.coeffs.items()})

    def conjugated(self, sigma: tuple[int, ...]) -> PermClassSum:
        return PermClassSum(self.r, self.ctx,
                            {conjugate(perm, sigma): c for perm, c in self.coeffs.items()})

    def is_symmetric(self, young: YoungData | None = None) -> bool:
        """Invariance under conjugation by S_r (or by S_alpha)."""
        young = young or YoungData((self.r,))
        for blk in young.blocks:
            for a, b in zip(blk, list(blk)[1:]):
                sigma = list(range(self.r))
                sigma[a], sigma[b] = b, a
                if self.conjugated(tuple(sigma)) != self:
                    return False
        return True

    def class_coefficients(self) -> dict[Partition, int]:
        """Coefficient per cycle type; requires constancy on conjugacy classes."""
        by_type: dict[Partition, set[int]] = {}
        counts: Counter = Counter()
        for perm, c in self.coeffs.items():
            lam = cycle_type(perm)
            by_type.setdefault(lam, set()).add(c)
            counts[lam] += 1
        out = {}
        for lam, cs in by_type.items():
            if len(cs) != 1 or counts[lam] != class_size(lam):
                raise ValueError("the sum is not constant on conjugacy classes")
            out[lam] = cs.pop()
        return out

    def to_cycle_type_sum(self) -> CycleTypeSum:
        return CycleTypeSum(self.r, self.ctx, self.class_coefficients())

    def __len__(self) -> int:
        return len(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        items = sorted(self.coeffs.items(), key=lambda kv: (cycle_type(kv[0]).parts[::-1], kv[0]))
        return " + ".join(f"{c}*E{format_perm(perm)}" for perm, c in items)

    def to_json(self) -> dict:
        return {"r": self.r, "p": self.ctx.p,
                "terms": [[format_perm(k), v] for k, v in sorted(self.coeffs.items())]}


def class_size(lam: Partition) -> int:
    from math import factorial
    from .partitions import centraliser_orders
    return factorial(lam.size) // centraliser_orders(lam)[0]


@dataclass(frozen=True)
class CycleTypeSum:
    """sum_lambda c_lambda (sum of the conjugacy class lambda), kept lazy."""

    r: int
    ctx: PrimeCtx
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        p = self.ctx.p
        clean = {}
        for lam, c in self.coeffs.items():
            if lam.size != self.r:
                raise ValueError(f"{lam} is not a partition of {self.r}")
            if c % p:
                clean[lam] = c % p
        object.__setattr__(self, "coeffs", clean)

    def __add__(self, other: CycleTypeSum) -> CycleTypeSum:
        coeffs = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            coeffs[lam] = coeffs.get(lam, 0) + c
        return CycleTypeSum(self.r, self.ctx, coeffs)

    def __str__(self) -> str:
        """"1*C[2] + 1*C[1+1]": C[lambda] is the sum of the class of cycle type lambda."""
        if not self.coeffs:
            return "0"
        items = sorted(self.coeffs.items(), key=lambda kv: kv[0].parts, reverse=True)
        return " + ".join(f"{c}*C[{lam}]" for lam, c in items)

    def explicit(self) -> PermClassSum:
        if self.r > EXPLICIT_GUARD:
            raise ValueError(f"r = {self.r} exceeds the explicit guard {EXPLICIT_GUARD}")
        out = {}
        for perm in itertools.permutations(range(self.r)):
            c = self.coeffs.get(cycle_type(perm), 0)
            if c:
                out[perm] = c
        return PermClassSum(self.r, self.ctx, out)


@lru_cache(maxsize=None)
def _cover_counts(content: tuple[int, ...], n: int, p: int) -> dict[tuple[int, ...], int]:
    """For labelled arcs with the given multiplicities: cycle type -> number of
    permutations sending every arc to an arc leaving its head, mod p.
    Cycle types are ascending tuples."""
    if not any(content):
        return {(): 1}
    c0 = next(k for k, c in enumerate(content) if c)
    a, b = divmod(c0, n)
    rest = list(content)
    rest[c0] -= 1
    return _open_cycle(tuple(rest), b, a, 1, n, p)


@lru_cache(maxsize=None)
def _open_cycle(content, v, target, k, n, p):
    out: dict[tuple[int, ...], int] = {}
    if v == target:
        for lam, c in _cover_counts(content, n, p).items():
            key = tuple(sorted(lam + (k,)))
            out[key] = (out.get(key, 0) + c) % p
    for w in range(n):
        idx = v * n + w
        mult = content[idx]
        if not mult:
            continue
        rest = list(content)
        rest[idx] -= 1
        for lam, c in _open_cycle(tuple(rest), w, target, k + 1, n, p).items():
            out[lam] = (out.get(lam, 0) + mult * c) % p
    return {lam: c for lam, c in out.items() if c}


def cover_counts(content: tuple[int, ...], n: int, ctx) -> dict[Partition, int]:
    p = as_ctx(ctx).p
    return {Partition(lam): c for lam, c in _cover_counts(tuple(content), n, p).items()}


def eval_class_sum(u, t: BasisTuple, n: int | None = None) -> int:
    p = u.ctx.p
    if t.r != u.r:
        raise ValueError(f"tuple of length {t.r} for a sum on S_{u.r}")
    if isinstance(u, CycleTypeSum):
        n = n or max(t.i + t.j, default=1)
        counts = cover_counts(t.content(n), n, u.ctx)
        return sum(c * counts.get(lam, 0) for lam, c in u.coeffs.items()) % p
    return sum(c for perm, c in u.coeffs.items() if matches(perm, t)) % p


# ---------------------------------------------------------------- class specs

def _all_perms(r: int):
    if r > EXPLICIT_GUARD:
        raise ValueError(f"r = {r} exceeds the explicit guard {EXPLICIT_GUARD}")
    return itertools.permutations(range(r))


def _partition_arg(x) -> Partition:
    if isinstance(x, Partition):
        return x
    if isinstance(x, str):
        return Partition.parse(x)
    return Partition(tuple(x))


def _multipartition_arg(x) -> MultiPartition:
    if isinstance(x, MultiPartition):
        return x
    from .partitions import CyclePattern
    if isinstance(x, dict):
        return MultiPartition(tuple((CyclePattern.parse(k) if isinstance(k, str) else k,
                                     _partition_arg(v)) for k, v in x.items()))
    raise ValueError(f"cannot read a multipartition from {x!r}")


def class_sum(spec, ctx: PrimeCtx | int) -> PermClassSum:
    """Sum with coefficient 1 over a conjugacy class, an s-equivalence class,
    an S_alpha class, an (s, alpha)-class or an S_a1 x S_a2 double-coset orbit.

    ``spec`` is a dict (or its JSON text) with key "type" among
    class, s-class, alpha-class, s-alpha-class, orbit.
    """
    ctx = as_ctx(ctx)
    if isinstance(spec, str):
        spec = json.loads(spec)
    kind = spec["type"]
    if kind in ("class", "s-class"):
        lam = _partition_arg(spec["lambda"])
        r = lam.size
        if kind == "class":
            keep = lambda perm: cycle_type(perm) == lam
        else:
            s = int(spec["s"])
            target = s_reduce(lam, ctx, s)
            keep = lambda perm: s_reduce(cycle_type(perm), ctx, s) == target
    elif kind in ("alpha-class", "s-alpha-class"):
        young = YoungData(tuple(spec["alpha"]))
        blam = _multipartition_arg(spec["blambda"])
        r = young.r
        if kind == "alpha-class":
            keep = lambda perm: s_alpha_cycle_type(perm, young) == blam
        else:
            s = int(spec["s"])
            target = s_reduce_multi(blam, ctx, s)
            keep = lambda perm: s_reduce_multi(s_alpha_cycle_type(perm, young), ctx, s) == target
    elif kind == "orbit":
        y1 = YoungData(tuple(spec["alpha1"]))
        y2 = YoungData(tuple(spec["alpha2"]))
        r = y1.r
        if y2.r != r:
            raise ValueError("alpha1 and alpha2 must have the same size")
        base = spec["perm"]
        base = parse_perm(base, r) if isinstance(base, str) else check_perm(base, r)
        orbit = orbit_of(base, y1, y2)
        return PermClassSum(r, ctx, dict.fromkeys(orbit, 1))
    else:
        raise ValueError(f"unknown class spec type {kind!r}")
    return PermClassSum(r, ctx, {perm: 1 for perm in _all_perms(r) if keep(perm)})


def orbit_of(perm, y1: YoungData, y2: YoungData) -> set[tuple[int, ...]]:
    """{sigma pi tau^-1 : sigma in S_a1, tau in S_a2}."""
    if y1.r > EXPLICIT_GUARD:
        raise ValueError("orbit enumeration guard exceeded")
    g2 = [inverse(t) for t in y2.young_subgroup()]
    return {compose(sigma, compose(perm, tau_inv)) for sigma in y1.young_subgroup() for tau_inv in g2}


def s_class_sums(r: int, ctx, s: int) -> list[CycleTypeSum]:
    """Merged class sums, one per s-equivalence class of partitions of r."""
    from .partitions import s_equivalence_classes
    ctx = as_ctx(ctx)
    return [CycleTypeSum(r, ctx, dict.fromkeys(cls, 1)) for cls in s_equivalence_classes(r, ctx, s)]


# ---------------------------------------------------------------- D_s membership

def _restricted_growth_tuples(length: int, n: int):
    """Value sequences over 1..n up to relabelling of values."""
    def rec(prefix, used):
        if len(prefix) == length:
            yield prefix
            return
        for v in range(1, min(used + 1, n) + 1):
            yield from rec(prefix + (v,), max(used, v))
    yield from rec((), 0)


def _heavy_contents(n: int, r: int, q: int):
    """Balanced arc contents with some arc repeated at least q times, one per
    relabelling orbit at least, as (content, number of vertices) pairs."""
    rest = r - q
    nv = min(n, r, 2 + 2 * rest)
    arcs = nv * nv
    if comb(arcs + rest - 1, rest) * 2 * (rest + 1) > comb(min(n, r) ** 2 + r - 1, r):
        nv = min(n, r)
        for t in balanced_contents(nv, r, up_to_relabelling=True):
            if max(t) >= q:
                yield t, nv
        return
    seen = set()
    heavy = [0] if nv == 1 else [0, 1]     # the loop (1,1) or the arc (1,2)
    for arc in heavy:
        for k in range(q, r + 1):
            for others in itertools.combinations_with_replacement(range(arcs), r - k):
                t = [0] * arcs
                t[arc] += k
                for a in others:
                    t[a] += 1
                t = tuple(t)
                if t not in seen and is_balanced(t, nv):
                    seen.add(t)
                    yield t, nv


def is_in_Ds_tensor(u, n: int, ctx, s: int, mode: str = "auto") -> bool:
    """True iff u vanishes on every basis tuple with at least p^s equal pairs.

    Symmetric sums are checked per arc content; other sums through tuples up
    to relabelling of the matrix indices ("auto") or through every tuple
    ("full", an independent oracle for small r).
    """
    ctx = as_ctx(ctx)
    q = ctx.p ** s
    r = u.r
    if r < q:
        return True
    if mode == "auto":
        sym = u if isinstance(u, CycleTypeSum) else None
        if sym is None:
            try:
                sym = u.to_cycle_type_sum()
            except ValueError:
                sym = None
        if sym is not None:
            for t, nv in _heavy_contents(n, r, q):
                if eval_class_sum(sym, tuple_of_content(t, nv), nv):
                    return False
            return True
        if r > TUPLE_GUARD:
            raise ValueError("non-symmetric membership check limited to r <= 5")
        for flat in _restricted_growth_tuples(2 * r, n):
            t = BasisTuple(flat[0::2], flat[1::2])
            if max(Counter(zip(t.i, t.j)).values()) >= q and eval_class_sum(u, t):
                return False
        return True
    if mode == "full":
        if r > TUPLE_GUARD:
            raise ValueError("full enumeration limited to r <= 5")
        if isinstance(u, CycleTypeSum):
            u = u.explicit()
        for pairs in itertools.product(itertools.product(range(1, n + 1), repeat=2), repeat=r):
            if max(Counter(pairs).values()) < q:
                continue
            t = BasisTuple(tuple(a for a, _ in pairs), tuple(b for _, b in pairs))
            if eval_class_sum(u, t):
                return False
        return True
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------- divided coordinates

def to_dp_element(u, n: int, young: YoungData | None = None) -> DPElement:
    """The symmetric functional as an element of D^r(g*) (or D^alpha of several matrices).

    The coefficient of prod x[i,j]^(t) is the value at any tuple of content t.
    """
    ctx = u.ctx
    if young is None or young.m == 1:
        vs = matrix_varset(n)
        if isinstance(u, PermClassSum):
            u = u.to_cycle_type_sum()
        terms = {}
        for t in balanced_contents(n, u.r):
            c = eval_class_sum(u, tuple_of_content(t, n), n)
            if c:
                terms[t] = c
        return DPElement(vs, ctx, terms)
    if isinstance(u, CycleTypeSum):
        u = u.explicit()
    if young.r != u.r:
        raise ValueError("composition does not match r")
    if not u.is_symmetric(young):
        raise ValueError("the sum is not invariant under conjugation by S_alpha")
    vs = matrix_varset(n, young.m)
    nn = n * n
    terms = {}
    for parts in itertools.product(*(list(monomials(nn, a)) for a in young.alpha)):
        i, j = [], []
        for t in parts:
            arr = tuple_of_content(t, n)
            i += arr.i
            j += arr.j
        c = eval_class_sum(u, BasisTuple(tuple(i), tuple(j)))
        if c:
            terms[sum(parts, ())] = c
    return DPElement(vs, ctx, terms)


# ---------------------------------------------------------------- polarisation

@dataclass(frozen=True)
class Polarised:
    """The multilinear functional P_alpha(f) on tuples of coordinate basis vectors."""

    varset: VarSet
    ctx: PrimeCtx
    young: YoungData
    poly: dict
    slot_of_var: tuple[int, ...]

    def __call__(self, positions: tuple[int, ...]) -> int:
        """``positions[l]`` is the index of the basis vector placed at position l."""
        if len(positions) != self.young.r:
            raise ValueError("wrong number of arguments")
        for l, v in enumerate(positions):
            if self.slot_of_var[v] != self.young.zeta[l]:
                raise ValueError(f"argument {l + 1} lies in the wrong slot")
        t = [0] * len(self.varset)
        for v in positions:
            t[v] += 1
        p = self.ctx.p
        c = self.poly.get(tuple(t), 0)
        for e in t:
            for k in range(2, e + 1):
                c = c * k % p
        return c % p

    def to_dp_element(self) -> DPElement:
        """The symmetric functional in divided coordinates: coefficients c_t * prod t!."""
        p = self.ctx.p
        terms = {}
        for mono, c in self.poly.items():
            for e in mono:
                for k in range(2, e + 1):
                    c = c * k % p
            if c % p:
                terms[mono] = c
        return DPElement(self.varset, self.ctx, terms)


def polarise(poly: dict, varset: VarSet, ctx, young: YoungData) -> Polarised:
    """``poly`` maps ordinary exponent tuples to coefficients; it must have multidegree alpha."""
    ctx = as_ctx(ctx)
    labels = varset.group_labels
    slot_of_var = tuple(labels.index(g) + 1 for g in varset.groups)
    alpha = tuple(young.alpha) if len(labels) > 1 else (young.r,)
    clean = {}
    for mono, c in poly.items():
        if c % ctx.p == 0:
            continue
        if varset.multidegree(mono) != alpha:
            raise ValueError("polynomial is not homogeneous of multidegree alpha")
        clean[tuple(mono)] = c % ctx.p
    return Polarised(varset, ctx, young, clean, slot_of_var)
