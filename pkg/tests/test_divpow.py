"""Divided power algebra tests.

The oracle works in Q[y]: a divided monomial y^(t) is y^t / t!, so every
F_p operation can be checked by doing the same thing with Fractions over
the integer form and reducing at the end.
"""

import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from divinv.divpow import (DPElement, IntPoly, VarSet, divided_power_via_phi, dp_gamma, dp_mul,
                           dp_power, homogeneous_component, is_in_Ds, matrix_varset, phi_p)
from divinv.modarith import binom_mod_p, gamma_compose_coeff, prime_ctx


# ---------------------------------------------------------------- Q-form oracle

def to_q(terms):
    """{divided mono: int} -> {ordinary mono: Fraction}"""
    out = {}
    for mono, c in terms.items():
        den = 1
        for e in mono:
            den *= factorial(e)
        out[mono] = out.get(mono, 0) + Fraction(c, den)
    return out


def from_q(poly, p):
    """{ordinary mono: Fraction} -> {divided mono: int mod p}; the coefficient of
    y^(t) is c * t!, which must be integral."""
    out = {}
    for mono, c in poly.items():
        f = c
        for e in mono:
            f *= factorial(e)
        assert f.denominator == 1, "left the integral form"
        if f.numerator % p:
            out[mono] = f.numerator % p
    return out


def q_mul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def q_gamma(i, a, nvars):
    out = {(0,) * nvars: Fraction(1)}
    for _ in range(i):
        out = q_mul(out, a)
    return {m: c / factorial(i) for m, c in out.items()}


def integral_terms(rng, nvars, max_terms=3, max_exp=4):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        mono = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        if sum(mono):
            terms[mono] = rng.randint(-5, 5)
    return terms


def dp(vs, p, terms):
    return DPElement(vs, prime_ctx(p), terms)


# ---------------------------------------------------------------- examples

def test_mul_examples():
    y = VarSet(("y",))
    assert dp_mul(dp(y, 2, {(1,): 1}), dp(y, 2, {(1,): 1})).is_zero()
    assert dp_mul(dp(y, 3, {(1,): 1}), dp(y, 3, {(2,): 1})).is_zero()
    xy = VarSet(("x", "y"))
    assert dp_mul(dp(xy, 5, {(2, 0): 1}), dp(xy, 5, {(1, 1): 1})) == dp(xy, 5, {(3, 1): 3})


def test_gamma_examples():
    vs = matrix_varset(2)
    ctx = prime_ctx(3)
    x = DPElement.var(vs, ctx, "x[1,1]") + DPElement.var(vs, ctx, "x[2,2]")
    assert str(dp_gamma(2, x)) == "1*x[1,1]^(2) + 1*x[1,1]^(1)*x[2,2]^(1) + 1*x[2,2]^(2)"
    assert dp_gamma(1, x) == x
    assert dp_gamma(0, x) == DPElement.one(vs, ctx)
    y = VarSet(("y",))
    assert dp_gamma(2, dp(y, 2, {(2,): 1})) == dp(y, 2, {(4,): 1})
    with pytest.raises(ValueError):
        dp_gamma(2, DPElement.one(vs, ctx) + x)


def e2(p):
    vs = matrix_varset(2)
    return dp(vs, p, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1})


def test_in_Ds_examples():
    y = VarSet(("y",))
    for p, s in ((2, 1), (3, 2)):
        q = p ** s
        assert not is_in_Ds(dp(y, p, {(q,): 1}), s)
        assert is_in_Ds(dp(y, p, {(q - 1,): 1}), s)
    g = dp_gamma(2, e2(2))
    assert not g.is_zero() and is_in_Ds(g, 1)


def test_phi_examples():
    xy = VarSet(("x", "y"))
    assert phi_p(dp(xy, 2, {(1, 1): 1})).is_zero()
    assert phi_p(DPElement.zero(xy, prime_ctx(2))).is_zero()
    u = e2(2)
    oracle = from_q({m: c / 2 for m, c in q_mul(to_q({(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}),
                                                   to_q({(1, 0, 0, 1): 1, (0, 1, 1, 0): -1})).items()}, 2)
    assert phi_p(u).terms == oracle
    assert phi_p(u) == dp_gamma(2, u)   # -1 = 1 mod 2
    assert divided_power_via_phi(u, 0) == DPElement.one(u.varset, u.ctx)
    assert divided_power_via_phi(u, 1) == u
    assert divided_power_via_phi(u, 2) == dp_gamma(2, u)
    with pytest.raises(ValueError):
        phi_p(dp(xy, 3, {(1, 0): 1}))
    with pytest.raises(ValueError):
        phi_p(dp(xy, 3, {(3, 1): 1}))


def test_homogeneous_component_examples():
    y = VarSet(("y",))
    x = dp(y, 3, {(1,): 1, (2,): 1})
    assert homogeneous_component(x, 2) == dp(y, 3, {(2,): 1})
    assert homogeneous_component(DPElement.zero(y, prime_ctx(3)), 4).is_zero()
    vs = matrix_varset(2)
    g = dp_gamma(2, dp(vs, 3, {(1, 0, 0, 0): 1, (0, 0, 0, 1): 1}))
    assert homogeneous_component(g, 2) == g
    grouped = VarSet(("a", "b"), ("x", "y"))
    z = dp(grouped, 5, {(1, 2): 1, (2, 1): 2})
    assert homogeneous_component(z, (2, 1)) == dp(grouped, 5, {(2, 1): 2})


def test_text_format_golden():
    vs = matrix_varset(2)
    x = dp(vs, 3, {(0, 3, 0, 0): 2, (2, 0, 0, 1): 1})
    text = "1*x[1,1]^(2)*x[2,2]^(1) + 2*x[1,2]^(3)"
    assert str(x) == text
    assert DPElement.parse(text, vs, 3) == x
    assert str(DPElement.zero(vs, prime_ctx(3))) == "0"
    assert DPElement.parse("0", vs, 3).is_zero()


def test_intpoly_to_divided():
    vs = VarSet(("y",))
    y = IntPoly.var(vs, "y")
    assert (y ** 2).to_divided(prime_ctx(2)).is_zero()
    assert (y ** 2).to_divided(prime_ctx(3)) == dp(vs, 3, {(2,): 2})
    assert str(y * y + IntPoly.const(vs, 3)) == "1*y^2 + 3"


# ---------------------------------------------------------------- oracle agreement

@pytest.mark.parametrize("p", [2, 3, 5])
def test_q_form_oracle(p):
    rng = random.Random(p)
    for _ in range(150):
        nv = rng.randint(1, 3)
        vs = VarSet(tuple(f"y{k}" for k in range(nv)))
        a, b = integral_terms(rng, nv), integral_terms(rng, nv)
        A, B = dp(vs, p, a), dp(vs, p, b)
        assert dp_mul(A, B).terms == from_q(q_mul(to_q(a), to_q(b)), p)
        i = rng.randint(0, 3)
        assert dp_gamma(i, A).terms == from_q(q_gamma(i, to_q(a), nv), p)
        k = rng.randint(0, 3)
        pw = {(0,) * nv: Fraction(1)}
        for _ in range(k):
            pw = q_mul(pw, to_q(a))
        assert dp_power(A, k).terms == from_q(pw, p)


# ---------------------------------------------------------------- properties

small_terms = st.dictionaries(
    st.tuples(st.integers(0, 7), st.integers(0, 7), st.integers(0, 7)),
    st.integers(1, 4), max_size=3)


@settings(max_examples=150, deadline=None)
@given(small_terms, small_terms, small_terms, st.sampled_from([2, 3, 5]))
def test_mul_ring_axioms(a, b, c, p):
    vs = VarSet(("a", "b", "c"))
    A, B, C = dp(vs, p, a), dp(vs, p, b), dp(vs, p, c)
    one = DPElement.one(vs, prime_ctx(p))
    assert dp_mul(dp_mul(A, B), C) == dp_mul(A, dp_mul(B, C))
    assert dp_mul(A, B) == dp_mul(B, A)
    assert dp_mul(A, one) == A
    assert dp_mul(A, B + C) == dp_mul(A, B) + dp_mul(A, C)


positive_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any),
    st.integers(1, 4), max_size=2)


@settings(max_examples=150, deadline=None)
@given(positive_terms, positive_terms, st.integers(0, 4), st.integers(0, 4), st.sampled_from([2, 3]))
def test_gamma_identities(x, y, i, j, p):
    vs = VarSet(("u", "v"))
    X, Y = dp(vs, p, x), dp(vs, p, y)
    rhs = DPElement.zero(vs, prime_ctx(p))
    for k in range(i + 1):
        rhs = rhs + dp_mul(dp_gamma(k, X), dp_gamma(i - k, Y))
    assert dp_gamma(i, X + Y) == rhs
    assert dp_mul(dp_gamma(i, X), dp_gamma(j, X)) == dp_gamma(i + j, X).scale(binom_mod_p(i + j, i, p))
    if X.is_homogeneous() and X:
        assert dp_gamma(i, X).degrees() <= {i * d for d in X.degrees()}


@settings(max_examples=150, deadline=None)
@given(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any), st.integers(1, 4),
       st.integers(0, 3), st.integers(1, 3), st.sampled_from([2, 3]))
def test_gamma_compose_single_term(mono, c, i, j, p):
    vs = VarSet(("u", "v"))
    X = dp(vs, p, {mono: c})
    assert dp_gamma(i, dp_gamma(j, X)) == dp_gamma(i * j, X).scale(gamma_compose_coeff(i, j, p))


@settings(max_examples=100, deadline=None)
@given(positive_terms, st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)),
                                       st.integers(1, 4), max_size=2),
       st.integers(0, 4), st.sampled_from([2, 3]))
def test_gamma_of_product(y, z, i, p):
    vs = VarSet(("u", "v"))
    Y, Z = dp(vs, p, y), dp(vs, p, z)
    assert dp_gamma(i, dp_mul(Z, Y)) == dp_mul(dp_power(Z, i), dp_gamma(i, Y))


def in_B(x, p):
    return all(sum(m) >= 2 and max(m) < p for m in x.terms)


@settings(max_examples=150, deadline=None)
@given(st.data(), st.sampled_from([2, 3]))
def test_B_closure(data, p):
    mono = st.tuples(*[st.integers(0, p - 1)] * 3).filter(lambda m: sum(m) >= 2)
    b1 = data.draw(st.dictionaries(mono, st.integers(1, p - 1), max_size=3))
    b2 = data.draw(st.dictionaries(mono, st.integers(1, p - 1), max_size=3))
    i = data.draw(st.integers(1, p * p))
    vs = VarSet(("a", "b", "c"))
    B1, B2 = dp(vs, p, b1), dp(vs, p, b2)
    assert in_B(dp_mul(B1, B2), p)
    assert in_B(dp_gamma(i, B1), p)


@settings(max_examples=60, deadline=None)
@given(st.data(), st.sampled_from([2, 3]))
def test_phi_route_matches_gamma(data, p):
    mono = st.tuples(*[st.integers(0, p - 1)] * 3).filter(lambda m: sum(m) >= 2)
    u = dp(VarSet(("a", "b", "c")), p, data.draw(st.dictionaries(mono, st.integers(1, p - 1), max_size=2)))
    m = data.draw(st.integers(0, p ** 3))
    assert divided_power_via_phi(u, m) == dp_gamma(m, u)


def test_gamma_guard():
    vs = VarSet(tuple(f"y{k}" for k in range(6)))
    x = dp(vs, 7, {tuple(int(k == v) for k in range(6)): 1 for v in range(6)})
    with pytest.raises(ValueError):
        dp_gamma(40, x, guard=10)
