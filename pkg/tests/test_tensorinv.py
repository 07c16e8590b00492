import itertools
import random

import numpy as np
import pytest

from divinv import fplinalg
from divinv.divpow import IntPoly, matrix_varset
from divinv.modarith import prime_ctx
from divinv.partitions import Partition, YoungData, enumerate_partitions, perm_cycles
from divinv.symmfunc import MatrixVarCtx, e_of, p_of
from divinv.tensorinv import (BasisTuple, CycleTypeSum, PermClassSum, balanced_contents,
                              class_sum, compose, eval_class_sum, format_perm, inverse,
                              is_in_Ds_tensor, parse_perm, polarise, s_class_sums,
                              to_dp_element)


def E(n, a, b):
    m = np.zeros((n, n), dtype=np.int64)
    m[a - 1, b - 1] = 1
    return m


def trace_oracle(perm, t: BasisTuple, n):
    """f_pi = product over cycles (l, pi(l), pi^2(l), ...) of tr(X_l X_pi(l) ...)."""
    mats = [E(n, a, b) for a, b in zip(t.i, t.j)]
    val = 1
    for cyc in perm_cycles(perm):
        prod = np.eye(n, dtype=np.int64)
        for l in cyc:
            prod = prod @ mats[l]
        val *= int(np.trace(prod))
    return val


def all_tuples(n, r):
    for pairs in itertools.product(itertools.product(range(1, n + 1), repeat=2), repeat=r):
        yield BasisTuple(tuple(a for a, _ in pairs), tuple(b for _, b in pairs))


def test_perm_text_roundtrip():
    perm = parse_perm("(1 2 3)(4 5)", 6)
    assert perm == (1, 2, 0, 4, 3, 5)
    assert format_perm(perm) == "(1 2 3)(4 5)"
    assert format_perm(tuple(range(3))) == "()"
    for perm in itertools.permutations(range(4)):
        assert parse_perm(format_perm(perm), 4) == perm


def test_eval_examples():
    ctx = prime_ctx(3)
    ident = PermClassSum(2, ctx, {(0, 1): 1})
    assert eval_class_sum(ident, BasisTuple((1, 2), (1, 2))) == 1
    swap = PermClassSum(2, ctx, {(1, 0): 1})
    assert eval_class_sum(swap, BasisTuple((1, 2), (2, 1))) == 1
    cls = class_sum({"type": "class", "lambda": [2]}, 2)
    assert eval_class_sum(cls, BasisTuple((1, 1), (1, 1))) == 1
    with pytest.raises(ValueError):
        eval_class_sum(ident, BasisTuple((1,), (1,)))


def test_dense_tensor_oracle():
    for n in (1, 2, 3):
        for r in (1, 2, 3):
            ctx = prime_ctx(5)
            for perm in itertools.permutations(range(r)):
                u = PermClassSum(r, ctx, {perm: 1})
                for t in all_tuples(n, r):
                    assert eval_class_sum(u, t) == trace_oracle(perm, t, n) % 5


def test_lazy_class_sums_match_explicit():
    rng = random.Random(1)
    for r in range(1, 6):
        for lam in enumerate_partitions(r):
            lazy = CycleTypeSum(r, prime_ctx(3), {lam: 1})
            exp = lazy.explicit()
            for _ in range(40):
                n = rng.randint(1, 3)
                t = BasisTuple(tuple(rng.randint(1, n) for _ in range(r)),
                               tuple(rng.randint(1, n) for _ in range(r)))
                assert eval_class_sum(lazy, t, n) == eval_class_sum(exp, t)


def test_class_sum_examples():
    ctx = prime_ctx(2)
    assert class_sum({"type": "class", "lambda": [1, 1]}, ctx).coeffs == {(0, 1): 1}
    trans = class_sum({"type": "class", "lambda": "2+1"}, 3)
    assert set(trans.coeffs) == {(1, 0, 2), (2, 1, 0), (0, 2, 1)}
    assert set(trans.coeffs.values()) == {1}
    merged = class_sum('{"type": "s-class", "lambda": [1, 1], "s": 1}', ctx)
    assert merged.coeffs == {(0, 1): 1, (1, 0): 1}
    assert str(merged.to_cycle_type_sum()) == "1*C[2] + 1*C[1+1]"
    orbit = class_sum({"type": "orbit", "alpha1": [1, 1], "alpha2": [2], "perm": "()"}, 3)
    assert len(orbit.coeffs) == 2
    with pytest.raises(ValueError):
        class_sum({"type": "class", "lambda": [9]}, 2)


def test_equivariance():
    rng = random.Random(7)
    ctx = prime_ctx(5)
    for _ in range(1000):
        r = rng.randint(1, 4)
        n = rng.randint(1, 3)
        perms = list(itertools.permutations(range(r)))
        u = PermClassSum(r, ctx, {rng.choice(perms): rng.randint(1, 4) for _ in range(3)})
        sigma = rng.choice(perms)
        t = BasisTuple(tuple(rng.randint(1, n) for _ in range(r)),
                       tuple(rng.randint(1, n) for _ in range(r)))
        assert eval_class_sum(u.conjugated(sigma), t.permuted(sigma)) == eval_class_sum(u, t)


def test_Ds_examples():
    ident = PermClassSum(2, prime_ctx(2), {(0, 1): 1})
    assert not is_in_Ds_tensor(ident, 2, 2, 1)
    assert not is_in_Ds_tensor(ident, 1, 2, 1)
    assert is_in_Ds_tensor(PermClassSum(3, prime_ctx(5), {(0, 1, 2): 1}), 3, 5, 1)


@pytest.mark.parametrize("p,s", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_merged_class_sums_in_Ds(p, s):
    q = p ** s
    for r in range(1, q + 3):
        for u in s_class_sums(r, p, s):
            assert is_in_Ds_tensor(u, r, p, s)
            if r <= 4:
                assert is_in_Ds_tensor(u, r, p, s, mode="full")
        # a lone class that shares its s-class with another one is not in D_s
        for cls in s_class_sums(r, p, s):
            if len(cls.coeffs) > 1:
                lam = next(iter(cls.coeffs))
                assert not is_in_Ds_tensor(CycleTypeSum(r, prime_ctx(p), {lam: 1}), r, p, s)


def test_Ds_auto_matches_full_on_random_sums():
    rng = random.Random(3)
    for _ in range(30):
        r = rng.randint(2, 4)
        perms = list(itertools.permutations(range(r)))
        u = PermClassSum(r, prime_ctx(2), {rng.choice(perms): 1 for _ in range(rng.randint(1, 4))})
        n = rng.randint(1, 3)
        assert is_in_Ds_tensor(u, n, 2, 1) == is_in_Ds_tensor(u, n, 2, 1, mode="full")


def test_worked_example_p2():
    ctx = prime_ctx(2)
    u = class_sum({"type": "class", "lambda": [2, 1]}, ctx) + class_sum({"type": "class", "lambda": [1, 1, 1]}, ctx)
    n = 2

    def tr(m):
        return int(np.trace(m))

    for t in all_tuples(n, 3):
        x, y, z = (E(n, a, b) for a, b in zip(t.i, t.j))
        expect = tr(x @ y) * tr(z) + tr(x @ z) * tr(y) + tr(y @ z) * tr(x) + tr(x) * tr(y) * tr(z)
        assert eval_class_sum(u, t) == expect % 2
        pairs = list(zip(t.i, t.j))
        if len(set(pairs)) < 3:
            assert eval_class_sum(u, t) == 0
    assert eval_class_sum(u, BasisTuple((1, 2, 1), (2, 1, 1))) == 1


def test_to_dp_examples():
    vs1 = matrix_varset(1)
    assert str(to_dp_element(PermClassSum(1, prime_ctx(3), {(0,): 1}), 1)) == "1*x[1,1]^(1)"
    zero = CycleTypeSum(2, prime_ctx(3), {})
    assert to_dp_element(zero, 2).is_zero()
    # divided p_2 = p_2 / 2 over Z, reduced mod 3
    for p in (3, 5):
        mctx = MatrixVarCtx(2, p)
        p2 = p_of(mctx.matrix(), 2)
        half = IntPoly(p2.varset, {m: c * pow(2, -1, p) for m, c in p2.terms.items()})
        u = class_sum({"type": "class", "lambda": [2]}, p)
        assert to_dp_element(u, 2) == half.to_divided(p)
    assert vs1.names == ("x[1,1]",)


def test_to_dp_rejects_asymmetric():
    u = PermClassSum(3, prime_ctx(2), {(1, 0, 2): 1})
    with pytest.raises(ValueError):
        to_dp_element(u, 2)


def test_to_dp_injective():
    for p in (2, 3):
        for r in range(1, 5):
            n = r
            vs = matrix_varset(n)
            images = [to_dp_element(CycleTypeSum(r, prime_ctx(p), {lam: 1}), n)
                      for lam in enumerate_partitions(r)]
            monos = sorted({m for e in images for m in e.terms})
            idx = {m: k for k, m in enumerate(monos)}
            mat = np.zeros((len(images), len(monos)), dtype=np.int64)
            for a, e in enumerate(images):
                for m, c in e.terms.items():
                    mat[a, idx[m]] = c
            assert fplinalg.rank(mat, p) == len(images)
            assert len(vs) == n * n


def test_balanced_contents_counts():
    # all contents versus the filtered monomials
    from divinv.divpow import monomials
    from divinv.tensorinv import is_balanced
    for n, r in ((2, 3), (3, 3), (2, 5)):
        brute = {m for m in monomials(n * n, r) if is_balanced(m, n)}
        assert set(balanced_contents(n, r)) == brute


def test_polarise_examples():
    ctx = prime_ctx(2)
    vs1 = matrix_varset(1)
    f = polarise({(2,): 1}, vs1, ctx, YoungData((2,)))
    assert f((0, 0)) == 0
    g = polarise({(1,): 1}, vs1, ctx, YoungData((1,)))
    assert g((0,)) == 1
    for p in (3, 5):
        mctx = MatrixVarCtx(2, p)
        e2 = e_of(mctx.matrix(), 2)
        P = polarise(e2.terms, mctx.varset, prime_ctx(p), YoungData((2,)))
        for a, b in itertools.product(range(4), repeat=2):
            x, y = E(2, a // 2 + 1, a % 2 + 1), E(2, b // 2 + 1, b % 2 + 1)
            expect = int(np.trace(x)) * int(np.trace(y)) - int(np.trace(x @ y))
            assert P((a, b)) == expect % p
    with pytest.raises(ValueError):
        polarise({(1, 0, 0, 0): 1, (2, 0, 0, 0): 1}, matrix_varset(2), ctx, YoungData((2,)))


def test_compose_inverse():
    for perm in itertools.permutations(range(4)):
        assert compose(perm, inverse(perm)) == tuple(range(4))
