"""Arithmetic in the prime field F_p and p-adic combinatorics.

Binomial coefficients are reduced digitwise (Lucas) and factorials are only
ever handled through their p-adic valuation (Legendre) and unit part, so no
large integer factorial is materialised.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, isqrt


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for d in range(3, isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeCtx:
    """The characteristic p, threaded explicitly through every computation."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p!r}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return pow(a, -1, self.p)

    def power(self, s: int) -> int:
        """p**s"""
        return self.p ** s


@lru_cache(maxsize=None)
def prime_ctx(p: int) -> PrimeCtx:
    return PrimeCtx(p)


def as_ctx(ctx: PrimeCtx | int) -> PrimeCtx:
    return ctx if isinstance(ctx, PrimeCtx) else prime_ctx(ctx)


def p_adic_digits(a: int, ctx: PrimeCtx | int) -> list[int]:
    """Base-p digits of ``a``, least significant first; ``[]`` for 0."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    p = as_ctx(ctx).p
    digits = []
    while a:
        a, d = divmod(a, p)
        digits.append(d)
    return digits


def digit_sum(a: int, ctx: PrimeCtx | int) -> int:
    return sum(p_adic_digits(a, ctx))


@lru_cache(maxsize=None)
def _small_binom_table(p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(comb(a, b) % p for b in range(p)) for a in range(p))


def binom_mod_p(a: int, b: int, ctx: PrimeCtx | int) -> int:
    """binom(a, b) mod p via Lucas's theorem (0 when b > a)."""
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    if b > a:
        return 0
    p = as_ctx(ctx).p
    table = _small_binom_table(p)
    result = 1
    while b:
        a, ai = divmod(a, p)
        b, bi = divmod(b, p)
        if bi > ai:
            return 0
        result = result * table[ai][bi] % p
    return result


def nu_p_factorial(a: int, ctx: PrimeCtx | int) -> int:
    """p-adic valuation of a! by Legendre: (a - s_p(a)) / (p - 1)."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    p = as_ctx(ctx).p
    return (a - digit_sum(a, p)) // (p - 1)


def factorial_unit_mod_p(a: int, ctx: PrimeCtx | int) -> int:
    """The unit q mod p in a! = q * p**nu_p(a!).

    Each level contributes (-1)**(a // p) * (a mod p)!: the residues coprime
    to p in a full block of length p multiply to -1 (Wilson), and the
    multiples of p leave (a // p)! for the next level.
    """
    if a < 0:
        raise ValueError("a must be nonnegative")
    p = as_ctx(ctx).p
    fact = _factorials_mod(p)
    q = 1
    while a:
        a, d = divmod(a, p)
        q = q * fact[d] % p
        if a % 2:
            q = -q % p
    return q


@lru_cache(maxsize=None)
def _factorials_mod(p: int) -> tuple[int, ...]:
    out = [1]
    for k in range(1, p):
        out.append(out[-1] * k % p)
    return tuple(out)


def factorial_ratio_mod_p(num: list[int], den: list[int], ctx: PrimeCtx | int) -> int:
    """(prod num_i!) / (prod den_j!) reduced mod p.

    The ratio must be an integer (nonnegative total valuation); returns 0 when
    the valuation is positive.
    """
    c = as_ctx(ctx)
    val = sum(nu_p_factorial(a, c) for a in num) - sum(nu_p_factorial(b, c) for b in den)
    if val < 0:
        raise ValueError("factorial ratio is not p-integral")
    if val > 0:
        return 0
    q = 1
    for a in num:
        q = q * factorial_unit_mod_p(a, c) % c.p
    for b in den:
        q = q * c.inv(factorial_unit_mod_p(b, c)) % c.p
    return q


def gamma_compose_coeff(i: int, j: int, ctx: PrimeCtx | int) -> int:
    """Coefficient c with gamma_i(gamma_j(x)) = c * gamma_{ij}(x), i.e.
    (ij)! / ((j!)**i * i!) mod p.
    """
    if i < 0 or j < 0:
        raise ValueError("i and j must be nonnegative")
    if j == 0:
        # gamma_0(x) = 1 has a constant term; only gamma_0, gamma_1 apply to it
        if i <= 1:
            return 1
        raise ValueError("gamma_i(gamma_0(x)) is undefined for i >= 2")
    return factorial_ratio_mod_p([i * j], [j] * i + [i], ctx)


def multinomial_power_mod_p(a: int, j: int, ctx: PrimeCtx | int) -> int:
    """(ja)! / (a!)**j mod p: the coefficient in (y^(a))**j = c * y^(ja)."""
    c = as_ctx(ctx)
    out = 1
    for k in range(1, j):
        out = out * binom_mod_p((k + 1) * a, a, c) % c.p
        if not out:
            return 0
    return out
