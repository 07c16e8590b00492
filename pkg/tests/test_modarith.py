from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from divinv.modarith import (PrimeCtx, binom_mod_p, digit_sum, factorial_ratio_mod_p,
                             factorial_unit_mod_p, gamma_compose_coeff, is_prime,
                             multinomial_power_mod_p, nu_p_factorial, p_adic_digits, prime_ctx)

PRIMES = [2, 3, 5, 7]


def valuation(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def test_prime_ctx_rejects_composites():
    for bad in (0, 1, 4, 9, 15):
        with pytest.raises(ValueError):
            PrimeCtx(bad)
    assert prime_ctx(7).inv(3) == 5
    with pytest.raises(ZeroDivisionError):
        prime_ctx(7).inv(14)
    assert [q for q in range(30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_digits_examples():
    assert p_adic_digits(0, 2) == []
    assert p_adic_digits(5, 2) == [1, 0, 1]
    assert p_adic_digits(9, 3) == [0, 0, 1]
    assert digit_sum(9, 3) == 1


@given(st.integers(0, 10 ** 9), st.sampled_from(PRIMES))
def test_digits_resum(a, p):
    d = p_adic_digits(a, p)
    assert sum(x * p ** i for i, x in enumerate(d)) == a
    assert all(0 <= x < p for x in d)
    assert not d or d[-1] != 0


def test_binom_examples():
    assert binom_mod_p(6, 3, 7) == 6
    for p in PRIMES:
        assert all(binom_mod_p(p, i, p) == 0 for i in range(1, p))
        assert binom_mod_p(123, 0, p) == 1
    assert binom_mod_p(3, 5, 2) == 0


def test_lucas_and_legendre_exhaustive():
    # the acceptance sweep: a, b <= 300 against exact integers
    facts = [factorial(a) for a in range(301)]
    for p in PRIMES:
        for a in range(301):
            for b in range(a + 1):
                assert binom_mod_p(a, b, p) == comb(a, b) % p
            if a:
                v, unit = valuation(facts[a], p)
                assert nu_p_factorial(a, p) == v
                assert factorial_unit_mod_p(a, p) == unit % p


def test_factorial_examples():
    assert nu_p_factorial(4, 2) == 3
    assert nu_p_factorial(9, 3) == 4
    assert factorial_unit_mod_p(4, 2) == 1
    for p in PRIMES:
        assert nu_p_factorial(p, p) == 1
        assert factorial_unit_mod_p(p - 1, p) == p - 1
    v, unit = valuation(factorial(10), 3)
    assert factorial_unit_mod_p(10, 3) == unit % 3 and nu_p_factorial(10, 3) == v


def test_gamma_compose_examples():
    assert gamma_compose_coeff(2, 2, 2) == 1
    for p in (3, 5, 7):
        for j in range(2, p):
            assert gamma_compose_coeff(p, j, p) == 0
    for j in range(6):
        assert gamma_compose_coeff(1, j, 5) == 1
    assert gamma_compose_coeff(0, 0, 2) == 1
    with pytest.raises(ValueError):
        gamma_compose_coeff(2, 0, 2)


@given(st.integers(1, 12), st.integers(1, 12), st.sampled_from(PRIMES))
def test_gamma_compose_matches_integers(i, j, p):
    exact = factorial(i * j) // (factorial(j) ** i * factorial(i))
    assert gamma_compose_coeff(i, j, p) == exact % p


def test_gamma_compose_prime_power_chain():
    # (p^(i+1))! / ((p^i)!^p p!) is a unit
    for p in (2, 3, 5):
        for i in range(5):
            assert gamma_compose_coeff(p, p ** i, p) != 0


@given(st.integers(0, 20), st.integers(0, 6), st.sampled_from(PRIMES))
def test_multinomial_power(a, j, p):
    exact = factorial(j * a) // factorial(a) ** j
    assert multinomial_power_mod_p(a, j, p) == exact % p


@given(st.lists(st.integers(0, 30), max_size=4), st.lists(st.integers(0, 30), max_size=4),
       st.sampled_from(PRIMES))
def test_factorial_ratio(num, den, p):
    top = 1
    for a in num:
        top *= factorial(a)
    bottom = 1
    for b in den:
        bottom *= factorial(b)
    vt, _ = valuation(top, p)
    vb, _ = valuation(bottom, p)
    if vt < vb:
        with pytest.raises(ValueError):
            factorial_ratio_mod_p(num, den, p)
    else:
        from fractions import Fraction
        q = Fraction(top, bottom)
        expect = 0 if vt > vb else (q.numerator * pow(q.denominator, -1, p)) % p
        assert factorial_ratio_mod_p(num, den, p) == expect
