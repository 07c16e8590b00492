"""Verification routines and the claim registry.

Each check computes observed values only; expectations live in the data
file ``claims.json`` (and are pinned separately in the acceptance tests).
"""

from __future__ import annotations

import itertools
import json
import random
import time
from importlib import resources
from math import comb, factorial

import numpy as np

from . import fplinalg
from .divpow import (DPElement, VarSet, dp_gamma, dp_mul, dp_power, divided_power_via_phi,
                     monomials)
from .invsolver import (build_module, group_invariants, lie_invariants, n2_series, n2_total,
                        restrict, span, subspace_compare)
from .modarith import (as_ctx, binom_mod_p, factorial_unit_mod_p, gamma_compose_coeff,
                       nu_p_factorial)
from .partitions import (YoungData, enumerate_partitions, enumerate_theta_alpha,
                         is_s_reduced_multi, s_equivalence_classes, s_equivalence_classes_multi)
from .symmfunc import MatrixVarCtx, VecCovecCtx, divided_family
from .tensorinv import class_sum, polarise, s_class_sums, to_dp_element
from .vecscovecs import (bracket_matrices, bracket_monomial, degree_table,
                         outside_span_element, verify_bracket_basis)


# ---------------------------------------------------------------- arithmetic

def check_arith(primes=(2, 3, 5, 7), bound=300) -> dict:
    bad = 0
    facts = [factorial(a) for a in range(bound + 1)]
    for p in primes:
        for a in range(bound + 1):
            for b in range(bound + 1):
                if binom_mod_p(a, b, p) != comb(a, b) % p:
                    bad += 1
            if a >= 1:
                v = nu_p_factorial(a, p)
                f = facts[a]
                exact = 0
                while f % p == 0:
                    f //= p
                    exact += 1
                if v != exact or factorial_unit_mod_p(a, p) != f % p:
                    bad += 1
    return {"mismatches": bad}


# ---------------------------------------------------------------- divided powers

def random_element(rng, vs, ctx, max_terms=3, max_exp=7, min_degree=1, max_var_exp=None) -> DPElement:
    terms = {}
    top = max_exp if max_var_exp is None else max_var_exp
    size = rng.randint(1, max_terms)
    for _ in range(50 * size):
        if len(terms) >= size:
            break
        mono = tuple(rng.randint(0, top) for _ in range(len(vs)))
        if sum(mono) >= min_degree:
            terms[mono] = rng.randint(1, ctx.p - 1)
    return DPElement(vs, ctx, terms)


def _in_B(x: DPElement) -> bool:
    p = x.ctx.p
    return all(sum(m) >= 2 and max(m) < p for m in x.terms)


def check_dp_identities(primes=(2, 3), trials=1000, seed=0) -> dict:
    """Randomised identities (1)-(5) and closure of the span B of divided
    monomials of degree >= 2 with exponents < p."""
    rng = random.Random(seed)
    failures = {k: 0 for k in ("unit", "sum", "product", "binomial", "compose", "closure",
                               "assoc")}
    for p in primes:
        ctx = as_ctx(p)
        for t in range(trials):
            vs = VarSet(tuple(f"y{k}" for k in range(rng.randint(1, 4))))
            x = random_element(rng, vs, ctx, max_terms=2, max_exp=3)
            y = random_element(rng, vs, ctx, max_terms=2, max_exp=3)
            i, j = rng.randint(0, 4), rng.randint(0, 4)
            one = DPElement.one(vs, ctx)
            gi = dp_gamma(i, x)
            if dp_gamma(0, x) != one or dp_gamma(1, x) != x or (i and (0,) * len(vs) in gi.terms):
                failures["unit"] += 1
            rhs = DPElement.zero(vs, ctx)
            for k in range(i + 1):
                rhs = rhs + dp_mul(dp_gamma(k, x), dp_gamma(i - k, y))
            if dp_gamma(i, x + y) != rhs:
                failures["sum"] += 1
            z = random_element(rng, vs, ctx, max_terms=2, max_exp=2, min_degree=0)
            if dp_gamma(i, dp_mul(z, y)) != dp_mul(dp_power(z, i), dp_gamma(i, y)):
                failures["product"] += 1
            if dp_mul(gi, dp_gamma(j, x)) != dp_gamma(i + j, x).scale(binom_mod_p(i + j, i, ctx)):
                failures["binomial"] += 1
            a, b = rng.randint(0, 3), rng.randint(1, 3)
            x1 = random_element(rng, vs, ctx, max_terms=1 if t % 2 else 2, max_exp=2)
            if dp_gamma(a, dp_gamma(b, x1)) != dp_gamma(a * b, x1).scale(gamma_compose_coeff(a, b, ctx)):
                failures["compose"] += 1
            u = random_element(rng, vs, ctx, max_terms=2, max_var_exp=p - 1, min_degree=2) \
                if len(vs) > 1 or p > 2 else None
            if u is not None and _in_B(u):
                w = random_element(rng, vs, ctx, max_terms=2, max_var_exp=p - 1, min_degree=2)
                k = rng.randint(1, p * p)
                if (_in_B(w) and not _in_B(dp_mul(u, w))) or not _in_B(dp_gamma(k, u)):
                    failures["closure"] += 1
            if dp_mul(dp_mul(x, y), z) != dp_mul(x, dp_mul(y, z)) or dp_mul(x, y) != dp_mul(y, x):
                failures["assoc"] += 1
    return {"failures": sum(failures.values()), "by_identity": failures}


def check_phi(primes=(2, 3), trials=20, seed=0) -> dict:
    rng = random.Random(seed)
    bad = 0
    count = 0
    for p in primes:
        ctx = as_ctx(p)
        for _ in range(trials):
            vs = VarSet(tuple(f"y{k}" for k in range(rng.randint(2, 3))))
            u = random_element(rng, vs, ctx, max_terms=2, max_var_exp=p - 1, min_degree=2)
            for m in range(p ** 3 + 1):
                count += 1
                if divided_power_via_phi(u, m) != dp_gamma(m, u):
                    bad += 1
    return {"failures": bad, "cases": count}


# ---------------------------------------------------------------- one matrix

def _same_span(module, inv, elements):
    return subspace_compare(span(module, elements), inv)["equal"]


def check_invs2(p: int, s: int, r: int, n: int | None = None) -> dict:
    n = n or max(r, 1)
    module = build_module("ds", n, p, r, s)
    inv = group_invariants(module)
    mctx = MatrixVarCtx(n, p)
    classes = s_equivalence_classes(r, p, s)
    reduced = enumerate_partitions(r, max_ones=p ** s)
    merged = [to_dp_element(u, n) for u in s_class_sums(r, p, s)]
    fam_e = [divided_family(lam, "e", mctx) for lam in reduced]
    fam_h = [divided_family(lam, "h", mctx) for lam in reduced]
    return {"dim_G": inv.dim, "classes": len(classes),
            "p_equal": _same_span(module, inv, merged),
            "e_equal": _same_span(module, inv, fam_e),
            "h_equal": _same_span(module, inv, fam_h),
            "p_count": len(merged), "e_count": len(fam_e)}


def partitions_with_few_ones(q: int, bound: int) -> int:
    return len(enumerate_partitions(q, max_ones=bound))


def check_centre_filtration(p: int, s: int, r: int) -> dict:
    n = max(r, 1)
    dims, expected = [], []
    for q in range(r + 1):
        dims.append(group_invariants(build_module("ds", n, p, q, s)).dim)
        expected.append(partitions_with_few_ones(q, p ** s))
    cum = list(itertools.accumulate(dims))
    exp_cum = list(itertools.accumulate(expected))
    return {"cumulative": cum, "expected": exp_cum, "match": cum == exp_cum}


def check_group_vs_lie(kind: str, p: int, r: int, n: int, s: int | None = None, **kw) -> dict:
    module = build_module(kind, n, p, r, s, **kw)
    g = group_invariants(module)
    l = lie_invariants(module)
    cmp = subspace_compare(g, l)
    return {"dim_G": g.dim, "dim_g": l.dim, "G_in_g": cmp["A_in_B"], "equal": cmp["equal"]}


def lie_not_group_element(module) -> dict:
    """(E11 + E22) (x) E12 (x) E12 summed over its three position permutations."""
    n = module.n
    e11, e22, e12 = 0, n + 1, 1
    out = {}
    for pos in range(3):
        for d in (e11, e22):
            word = [e12, e12, e12]
            word[pos] = d
            out[tuple(word)] = out.get(tuple(word), 0) + 1
    return out


def check_inf_gap(n: int, p: int, r: int, element: bool = False) -> dict:
    module = build_module("tensor", n, p, r)
    g = group_invariants(module)
    l = lie_invariants(module)
    out = {"dim_g": l.dim, "dim_G": g.dim}
    if element:
        e = lie_not_group_element(module)
        out["element_lie"] = l.contains(e)
        out["element_group"] = g.contains(e)
    return out


def check_n2_closed_form(p: int, s: int) -> dict:
    q = p ** s
    top = 4 * (q - 1)
    dims = [group_invariants(build_module("as", 2, p, r, s)).dim for r in range(top + 1)]
    series = n2_series(p, s)
    series += [0] * (len(dims) - len(series))
    return {"per_degree": dims, "series": series, "match": dims == series,
            "total": sum(dims), "closed_total": n2_total(p, s)}


def restriction_pair(module) -> list[dict]:
    """The two degree-10 elements spanning the GL_2-invariants of A_2^10 at p = 2."""
    def mono(e11, e12, e21, e22):
        return (e11, e12, e21, e22)
    first = {mono(2, 3, 3, 2): 1, mono(3, 2, 2, 3): 1}
    second = {mono(3, 3, 3, 1): 1, mono(2, 3, 3, 2): 1, mono(1, 3, 3, 3): 1}
    return [first, second]


def check_restriction_as(p: int = 2, s: int = 2, r: int = 10) -> dict:
    down = build_module("as", 2, p, r, s)
    up = build_module("as", 3, p, r, s)
    inv_down = group_invariants(down)
    first, second = restriction_pair(down)
    pair = span(down, [first, second])
    borel = lie_invariants(up, "borel", weight_filter=lambda w: w[2] == 0)
    image = restrict(borel, up, down)
    group_up = group_invariants(up, weight_filter=lambda w: w[2] == 0)
    group_image = restrict(group_up, up, down)
    lie_down = lie_invariants(down)
    return {"dim_G2": inv_down.dim,
            "G2_equals_pair": subspace_compare(pair, inv_down)["equal"],
            "image_dim": image.dim,
            "image_equals_first": subspace_compare(image, span(down, [first]))["equal"],
            "group_image_dim": group_image.dim,
            "lie_down_dim": lie_down.dim,
            "group_surjective": subspace_compare(group_image, inv_down)["equal"],
            "lie_surjective": subspace_compare(lie_down, image)["A_in_B"]}


def check_ds_restriction(n: int, r: int, p: int, s: int) -> dict:
    module = build_module("ds", n, p, r, s)
    inv = group_invariants(module)
    sp = span(module, [to_dp_element(u, n) for u in s_class_sums(r, p, s)])
    return {"span": sp.dim, "dim_G": inv.dim, "span_in_G": subspace_compare(sp, inv)["A_in_B"]}


# ---------------------------------------------------------------- several matrices

def check_several(p: int, s: int, alpha, n: int | None = None) -> dict:
    alpha = tuple(alpha)
    r = sum(alpha)
    n = n or max(r, 1)
    m = len(alpha)
    module = build_module("several", n, p, s=s, alpha=alpha)
    inv = group_invariants(module)
    young = YoungData(alpha)
    classes = s_equivalence_classes_multi(young, p, s)
    mctx = MatrixVarCtx(n, p, m)
    reduced = [b for b in enumerate_theta_alpha(young) if is_s_reduced_multi(b, p, s)]
    fam_e = [divided_family(b, "e", mctx) for b in reduced]
    fam_h = [divided_family(b, "h", mctx) for b in reduced]
    merged = []
    for cls in classes:
        u = None
        for blam in cls:
            spec = {"type": "alpha-class", "alpha": list(alpha), "blambda": blam}
            c = class_sum(spec, p)
            u = c if u is None else u + c
        merged.append(to_dp_element(u, n, young))
    return {"dim_G": inv.dim, "classes": len(classes),
            "e_basis": _same_span(module, inv, fam_e) and len(fam_e) == inv.dim,
            "h_basis": _same_span(module, inv, fam_h) and len(fam_h) == inv.dim,
            "p_basis": _same_span(module, inv, merged) and len(merged) == inv.dim}


# ---------------------------------------------------------------- vectors and covectors

def check_veccovec_remark(p: int = 3, n: int = 2, m1: int = 1, m2: int = 3, degree_max: int = 8) -> dict:
    rows = degree_table(n, m1, m2, p, 1, degree_max)
    vctx = VecCovecCtx(n, m1, m2, p)
    elem = outside_span_element(vctx)
    module = build_module("veccovec", n, p, s=1, m1=m1, m2=m2, bidegree=(3, 3))
    inv = group_invariants(module)
    sp = span(module, [bracket_monomial(bm, vctx) for bm in bracket_matrices(m1, m2, 3)])
    return {"dims": [r["dim_G"] for r in rows], "span": [r["span"] for r in rows],
            "element_invariant": inv.contains(elem), "element_in_span": sp.contains(elem)}


def check_bracket_grid(p: int, n_max: int = 3, r_max: int = 3, shapes=((1, 1), (1, 2), (2, 1), (2, 2))) -> dict:
    bad = []
    cases = 0
    for n in range(1, n_max + 1):
        for r in range(0, min(n, r_max) + 1):
            for m1, m2 in shapes:
                cases += 1
                rep = verify_bracket_basis(n, m1, m2, p, r)
                module = build_module("veccovec", n, p, m1=m1, m2=m2, bidegree=(r, r))
                g = group_invariants(module)
                l = lie_invariants(module)
                if not (rep["equal"] and rep["independent"] and subspace_compare(g, l)["equal"]):
                    bad.append([n, m1, m2, r])
    return {"cases": cases, "failures": len(bad), "failed": bad}


# ---------------------------------------------------------------- polarisation

def check_polarisation(n: int, p: int, r: int) -> dict:
    """P on A^r: matrix of values on all r-tuples of basis vectors."""
    from .divpow import matrix_varset
    vs = matrix_varset(n)
    ctx = as_ctx(p)
    young = YoungData((r,))
    nv = len(vs)
    monos = list(monomials(nv, r))
    tuples = list(itertools.product(range(nv), repeat=r))
    mat = np.zeros((len(monos), len(tuples)), dtype=np.int64)
    for a, mono in enumerate(monos):
        f = polarise({mono: 1}, vs, ctx, young)
        for b, tup in enumerate(tuples):
            mat[a, b] = f(tup)
    d1 = [m for m in monos if max(m, default=0) < p]
    i1 = [m for m in monos if max(m, default=0) >= p]
    # the functional "content equals t" for each t in D_1^r
    indicator = np.zeros((len(d1), len(tuples)), dtype=np.int64)
    for a, mono in enumerate(d1):
        for b, tup in enumerate(tuples):
            content = [0] * nv
            for v in tup:
                content[v] += 1
            indicator[a, b] = tuple(content) == mono
    rank = fplinalg.rank(mat, p)
    image_equal = fplinalg.rank(np.vstack([mat, indicator]), p) == rank == fplinalg.rank(indicator, p)
    kernel = fplinalg.nullspace(mat.T.copy(), p)   # coefficient vectors over monos
    kernel_basis = np.zeros((len(i1), len(monos)), dtype=np.int64)
    pos = {m: k for k, m in enumerate(monos)}
    for a, mono in enumerate(i1):
        kernel_basis[a, pos[mono]] = 1
    kr = fplinalg.rank(kernel, p) if kernel.size else 0
    kb = fplinalg.rank(kernel_basis, p) if kernel_basis.size else 0
    joint = fplinalg.rank(np.vstack([kernel, kernel_basis]), p) if kr + kb else 0
    return {"rank": rank, "dim_D1": len(d1), "image_equals_D1": bool(image_equal),
            "kernel_dim": kr, "dim_I1": len(i1), "kernel_equals_I1": kr == kb == joint}


# ---------------------------------------------------------------- registry

CHECKS = {
    "arith": check_arith,
    "dp-identities": check_dp_identities,
    "phi": check_phi,
    "invs2": check_invs2,
    "centre-filtration": check_centre_filtration,
    "group-vs-lie": check_group_vs_lie,
    "inf-gap": check_inf_gap,
    "n2-closed-form": check_n2_closed_form,
    "restriction-as": check_restriction_as,
    "ds-restriction": check_ds_restriction,
    "several": check_several,
    "veccovec-remark": check_veccovec_remark,
    "bracket-grid": check_bracket_grid,
    "polarisation": check_polarisation,
}


def load_manifest(path=None) -> list[dict]:
    if path is None:
        text = resources.files("divinv").joinpath("claims.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)["claims"]


def run_claim(claim: dict) -> dict:
    check = CHECKS[claim["check"]]
    start = time.perf_counter()
    observed = check(**claim.get("params", {}))
    elapsed = time.perf_counter() - start
    expect = claim.get("expect", {})
    mismatched = {k: {"expected": v, "observed": observed.get(k)}
                  for k, v in expect.items() if observed.get(k) != v}
    return {"id": claim["id"], "suite": claim.get("suite", "default"), "pass": not mismatched,
            "seconds": round(elapsed, 3), "observed": observed, "mismatched": mismatched}


def select_claims(claims, ids=None, suite="default") -> list[dict]:
    if ids:
        by_id = {c["id"]: c for c in claims}
        unknown = [i for i in ids if i not in by_id]
        if unknown:
            raise KeyError(f"unknown claim id(s): {', '.join(unknown)}")
        return [by_id[i] for i in ids]
    if suite == "extended":
        return list(claims)
    return [c for c in claims if c.get("suite", "default") == suite]
