"""Partitions, centraliser orders, s-reduction and cycle-pattern combinatorics.

Permutations throughout the package are 0-based tuples ``perm`` with
``perm[l]`` the image of ``l``.  Cycle patterns and Young blocks use the
1-based labels of the text formats.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from math import factorial, prod

from .modarith import PrimeCtx, as_ctx

THETA_GUARD = 8


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(x <= 0 for x in parts):
            raise ValueError(f"parts must be positive: {parts}")
        object.__setattr__(self, "parts", tuple(sorted(parts, reverse=True)))

    @classmethod
    def from_multiplicities(cls, mult: dict[int, int]) -> Partition:
        return cls(tuple(itertools.chain.from_iterable([i] * m for i, m in mult.items())))

    @classmethod
    def parse(cls, text: str) -> Partition:
        text = text.strip()
        if text in ("", "0", "()"):
            return cls(())
        return cls(tuple(int(x) for x in text.replace(",", "+").split("+")))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    @cached_property
    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def m(self, i: int) -> int:
        return self.multiplicities.get(i, 0)

    def __str__(self) -> str:
        return "+".join(map(str, self.parts)) if self.parts else "0"


def enumerate_partitions(r: int, max_length: int | None = None,
                         max_ones: int | None = None) -> list[Partition]:
    """Partitions of ``r`` in reverse-lexicographic order.

    ``max_ones`` is a strict bound: only partitions with fewer than
    ``max_ones`` parts equal to 1 are kept.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    out = []

    def rec(remaining, largest, prefix):
        if remaining == 0:
            out.append(prefix)
            return
        if max_length is not None and len(prefix) >= max_length:
            return
        for part in range(min(remaining, largest), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(r, r, ())
    parts = [Partition(t) for t in out]
    if max_ones is not None:
        parts = [lam for lam in parts if lam.m(1) < max_ones]
    return parts


def centraliser_orders(lam: Partition) -> tuple[int, int]:
    """(z_lambda, u_lambda) = (prod i^m_i m_i!, prod m_i!)."""
    z = prod(i ** m * factorial(m) for i, m in lam.multiplicities.items())
    u = prod(factorial(m) for m in lam.multiplicities.values())
    return z, u


def s_reduce(lam: Partition, ctx: PrimeCtx | int, s: int) -> Partition:
    """Replace p^s ones by p^(s-1) parts equal to p until fewer than p^s ones remain."""
    if s < 1:
        raise ValueError("s must be >= 1")
    p = as_ctx(ctx).p
    q = p ** s
    mult = dict(lam.multiplicities)
    ones = mult.pop(1, 0)
    k, ones = divmod(ones, q)
    if k:
        mult[p] = mult.get(p, 0) + k * p ** (s - 1)
    if ones:
        mult[1] = ones
    return Partition.from_multiplicities(mult)


def is_s_reduced(lam: Partition, ctx: PrimeCtx | int, s: int) -> bool:
    return lam.m(1) < as_ctx(ctx).p ** s


def s_equivalence_classes(r: int, ctx: PrimeCtx | int, s: int,
                          max_length: int | None = None) -> list[list[Partition]]:
    classes: dict[Partition, list[Partition]] = {}
    for lam in enumerate_partitions(r, max_length=max_length):
        classes.setdefault(s_reduce(lam, ctx, s), []).append(lam)
    return list(classes.values())


# ---------------------------------------------------------------- cycle patterns

def _least_rotation(word: tuple[int, ...]) -> tuple[int, ...]:
    return min(word[k:] + word[:k] for k in range(len(word)))


@dataclass(frozen=True, order=True)
class CyclePattern:
    word: tuple[int, ...]

    def __post_init__(self):
        word = tuple(self.word)
        if not word:
            raise ValueError("cycle pattern must be nonempty")
        if any(x < 1 for x in word):
            raise ValueError("pattern letters are 1-based")
        object.__setattr__(self, "word", _least_rotation(word))

    def __len__(self) -> int:
        return len(self.word)

    def content(self, m: int) -> tuple[int, ...]:
        c = Counter(self.word)
        return tuple(c.get(i, 0) for i in range(1, m + 1))

    def power(self, l: int) -> CyclePattern:
        return CyclePattern(self.word * l)

    @property
    def is_primitive(self) -> bool:
        return primitive_decompose(self)[1] == 1

    @property
    def alphabet_size(self) -> int:
        return max(self.word)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.word)) + "]"

    @classmethod
    def parse(cls, text: str) -> CyclePattern:
        body = text.strip().strip("[]")
        return cls(tuple(int(x) for x in body.split(",")))


def canonical_pattern(word) -> CyclePattern:
    return CyclePattern(tuple(word))


def primitive_decompose(b: CyclePattern) -> tuple[CyclePattern, int]:
    w = b.word
    t = len(w)
    for d in range(1, t + 1):
        if t % d == 0 and w[:d] * (t // d) == w:
            return CyclePattern(w[:d]), t // d
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class MultiPartition:
    """A finitely supported map from primitive cycle patterns to partitions."""

    items: tuple[tuple[CyclePattern, Partition], ...] = ()

    def __post_init__(self):
        merged = {}
        for b, lam in self.items:
            if not b.is_primitive:
                raise ValueError(f"pattern {b} is not primitive")
            if b in merged:
                raise ValueError(f"pattern {b} repeated")
            if lam.parts:
                merged[b] = lam
        object.__setattr__(self, "items", tuple(sorted(merged.items(), key=lambda kv: kv[0].word,
                                                       reverse=True)))

    @classmethod
    def from_dict(cls, d: dict) -> MultiPartition:
        return cls(tuple(d.items()))

    def as_dict(self) -> dict[CyclePattern, Partition]:
        return dict(self.items)

    def __getitem__(self, b: CyclePattern) -> Partition:
        return self.as_dict().get(b, Partition(()))

    def content(self, m: int) -> tuple[int, ...]:
        total = [0] * m
        for b, lam in self.items:
            for i, c in enumerate(b.content(m)):
                total[i] += lam.size * c
        return tuple(total)

    @property
    def z(self) -> int:
        return prod(centraliser_orders(lam)[0] for _, lam in self.items)

    @property
    def u(self) -> int:
        return prod(centraliser_orders(lam)[1] for _, lam in self.items)

    def cycle_type(self) -> Partition:
        """The ordinary S_r cycle type: one part |b|*l per entry l of boldlambda(b)."""
        return Partition(tuple(len(b) * l for b, lam in self.items for l in lam.parts))

    def __str__(self) -> str:
        return "{" + ", ".join(f"{b}: {lam}" for b, lam in self.items) + "}"


@dataclass(frozen=True)
class YoungData:
    alpha: tuple[int, ...]

    def __post_init__(self):
        alpha = tuple(self.alpha)
        if any(a < 0 for a in alpha) or not alpha:
            raise ValueError("alpha must be a nonempty composition")
        object.__setattr__(self, "alpha", alpha)

    @property
    def r(self) -> int:
        return sum(self.alpha)

    @property
    def m(self) -> int:
        return len(self.alpha)

    @cached_property
    def blocks(self) -> tuple[range, ...]:
        """Delta_i as 0-based position ranges."""
        starts = list(itertools.accumulate((0,) + self.alpha))
        return tuple(range(starts[i], starts[i + 1]) for i in range(self.m))

    @cached_property
    def zeta(self) -> tuple[int, ...]:
        """Block label (1-based) of each 0-based position."""
        return tuple(i + 1 for i, blk in enumerate(self.blocks) for _ in blk)

    def in_young_subgroup(self, perm: tuple[int, ...]) -> bool:
        return all(self.zeta[perm[l]] == self.zeta[l] for l in range(self.r))

    def young_subgroup(self):
        """Iterate S_alpha as 0-based permutation tuples."""
        for pieces in itertools.product(*(itertools.permutations(blk) for blk in self.blocks)):
            yield tuple(itertools.chain.from_iterable(pieces))


def perm_cycles(perm: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Disjoint cycles (i, perm(i), perm(perm(i)), ...) including fixed points."""
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        l = start
        while not seen[l]:
            seen[l] = True
            cyc.append(l)
            l = perm[l]
        cycles.append(tuple(cyc))
    return cycles


def check_perm(perm, r: int | None = None) -> tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != list(range(len(perm))) or (r is not None and len(perm) != r):
        raise ValueError(f"not a permutation of 0..{len(perm) - 1}: {perm}")
    return perm


def cycle_type(perm: tuple[int, ...]) -> Partition:
    return Partition(tuple(len(c) for c in perm_cycles(perm)))


def s_alpha_cycle_type(perm, young: YoungData) -> MultiPartition:
    perm = check_perm(perm, young.r)
    acc: dict[CyclePattern, list[int]] = {}
    for cyc in perm_cycles(perm):
        root, l = primitive_decompose(CyclePattern(tuple(young.zeta[i] for i in cyc)))
        acc.setdefault(root, []).append(l)
    return MultiPartition(tuple((b, Partition(tuple(ls))) for b, ls in acc.items()))


def primitive_patterns(alpha: tuple[int, ...]) -> list[CyclePattern]:
    """Primitive patterns whose content fits inside ``alpha``."""
    m = len(alpha)
    letters = [i + 1 for i in range(m) if alpha[i] > 0]
    found = set()
    for t in range(1, sum(alpha) + 1):
        for word in itertools.product(letters, repeat=t):
            b = CyclePattern(word)
            if b in found or not b.is_primitive:
                continue
            if all(c <= a for c, a in zip(b.content(m), alpha)):
                found.add(b)
    return sorted(found, key=lambda b: (len(b), b.word))


def enumerate_theta_alpha(young: YoungData) -> list[MultiPartition]:
    """All boldlambda with content alpha."""
    if young.r > THETA_GUARD:
        raise ValueError(f"|alpha| = {young.r} exceeds the enumeration guard {THETA_GUARD}")
    alpha = young.alpha
    m = len(alpha)
    patterns = primitive_patterns(alpha)
    out = []

    def rec(idx, remaining, chosen):
        if not any(remaining):
            out.append(MultiPartition(tuple(chosen)))
            return
        if idx == len(patterns):
            return
        b = patterns[idx]
        cb = b.content(m)
        k = 0
        while all(k * c <= rem for c, rem in zip(cb, remaining)):
            rest = tuple(rem - k * c for c, rem in zip(cb, remaining))
            for lam in (enumerate_partitions(k) if k else [Partition(())]):
                rec(idx + 1, rest, chosen + ([(b, lam)] if k else []))
            k += 1

    rec(0, alpha, [])
    return out


def s_reduce_multi(blam: MultiPartition, ctx: PrimeCtx | int, s: int, m: int | None = None) -> MultiPartition:
    """Apply the s-reduction to boldlambda([j]) for every single-letter pattern [j]."""
    return MultiPartition(tuple(
        (b, s_reduce(lam, ctx, s) if len(b) == 1 else lam) for b, lam in blam.items))


def is_s_reduced_multi(blam: MultiPartition, ctx: PrimeCtx | int, s: int) -> bool:
    return all(is_s_reduced(lam, ctx, s) for b, lam in blam.items if len(b) == 1)


def s_equivalence_classes_multi(young: YoungData, ctx: PrimeCtx | int, s: int) -> list[list[MultiPartition]]:
    classes: dict[MultiPartition, list[MultiPartition]] = {}
    for blam in enumerate_theta_alpha(young):
        classes.setdefault(s_reduce_multi(blam, ctx, s), []).append(blam)
    return list(classes.values())
