"""Brute-force invariants of GL_n and gl_n in explicit graded modules.

A module is a finite basis with torus weights and, for each root pair
(a, b), the action of the one-parameter subgroup I + t E_ab computed by
substitution and expanded as a polynomial in t.  A vector is GL_n-invariant
iff its weight is exactly zero and every positive t-coefficient kills it;
it is gl_n-invariant iff the t^1 coefficients kill it and its weight
vanishes mod p.  Both conditions respect the decomposition into exact
weight spaces, so the kernel is computed one weight block at a time.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse

from . import fplinalg
from .divpow import DPElement, IntPoly, VarSet, matrix_varset, monomials
from .modarith import PrimeCtx, as_ctx, binom_mod_p
from .symmfunc import VecCovecCtx

log = logging.getLogger(__name__)

DEFAULT_CAP = 200_000
KINDS = ("as", "ds", "several", "veccovec", "tensor")


class CapExceeded(ValueError):
    pass


# ---------------------------------------------------------------- modules

@dataclass(eq=False)
class GradedModuleSpec:
    """One graded piece with a basis of monomials (or tensor words).

    ``mode`` is "poly" (ordinary monomials, exponents >= ``trunc`` vanish),
    "divided" (divided power monomials) or "tensor" (ordered words of
    variables, i.e. tensor products of basis vectors).
    """

    kind: str
    n: int
    ctx: PrimeCtx
    varset: VarSet
    basis: list
    mode: str
    var_weights: np.ndarray
    forms: object            # (a, b) -> per-variable list of (tdeg, var, coeff)
    trunc: int | None = None
    params: dict = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.ctx.p

    def __len__(self) -> int:
        return len(self.basis)

    @cached_property
    def index(self) -> dict:
        return {label: k for k, label in enumerate(self.basis)}

    @cached_property
    def weights(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.n), dtype=np.int64)
        if self.mode == "tensor":
            counts = np.zeros((len(self.basis), len(self.varset)), dtype=np.int64)
            for k, word in enumerate(self.basis):
                for v in word:
                    counts[k, v] += 1
        else:
            counts = np.array(self.basis, dtype=np.int64).reshape(len(self.basis), len(self.varset))
        return counts @ self.var_weights

    def root_pairs(self):
        return [(a, b) for a in range(self.n) for b in range(self.n) if a != b]

    @cached_property
    def _form_cache(self) -> dict:
        return {}

    def _forms(self, a: int, b: int):
        key = (a, b)
        if key not in self._form_cache:
            self._form_cache[key] = self.forms(a, b)
        return self._form_cache[key]

    def act(self, label, a: int, b: int, tcap: int | None = None) -> dict:
        """Coefficients of t^m (m >= 1) of (I + t E_ab) acting on a basis label,
        as {(m, target_label): coeff}."""
        forms = self._forms(a, b)
        p = self.p
        if self.mode == "tensor":
            return _act_tensor(label, forms, p, tcap)
        return _act_monomial(label, forms, p, tcap, self.mode, self.trunc)

    # -- coordinates
    def vector(self, element) -> np.ndarray:
        """Coordinates of a DPElement, IntPoly or {label: coeff} dict."""
        if isinstance(element, (DPElement, IntPoly)):
            if element.varset != self.varset:
                raise ValueError("element lives over a different variable set")
            items = element.terms.items()
        else:
            items = element.items()
        v = np.zeros(len(self.basis), dtype=np.int64)
        for label, c in items:
            if label not in self.index:
                if c % self.p:
                    raise KeyError(f"{label} is not a basis label of this module")
                continue
            v[self.index[label]] = (v[self.index[label]] + c) % self.p
        return v

    def element(self, vec) -> dict:
        return {self.basis[k]: int(c) for k, c in enumerate(vec) if c % self.p}

    def format_label(self, label) -> str:
        names = self.varset.names
        if self.mode == "tensor":
            return "(x)".join(names[v] for v in label) or "1"
        mark = "^({})" if self.mode == "divided" else "^{}"
        parts = [names[k] + mark.format(e) for k, e in enumerate(label) if e]
        return "*".join(parts) or "1"

    def format_vector(self, vec) -> str:
        terms = [f"{int(c)}*{self.format_label(self.basis[k])}" for k, c in enumerate(vec) if c % self.p]
        return " + ".join(terms) or "0"


def _multinomial_mod(parts, p) -> int:
    c, total = 1, 0
    for k in parts:
        total += k
        c = c * binom_mod_p(total, k, p) % p
        if not c:
            return 0
    return c


def _compositions(e: int, length: int):
    if length == 1:
        yield (e,)
        return
    for k in range(e, -1, -1):
        for rest in _compositions(e - k, length - 1):
            yield (k,) + rest


def _power_of_form(form, e, p, mode, tcap):
    """Terms of L^e (poly) or gamma_e(L) (divided) for a linear form L."""
    out = []
    for ks in _compositions(e, len(form)):
        c = 1 if mode == "divided" else _multinomial_mod(ks, p)
        tdeg = 0
        delta = []
        for k, (d, w, cw) in zip(ks, form):
            if k:
                c = c * pow(cw, k, p) % p
                tdeg += d * k
                delta.append((w, k))
        if c and (tcap is None or tdeg <= tcap):
            out.append((tdeg, delta, c))
    return out


def _act_monomial(mono, forms, p, tcap, mode, trunc):
    base = list(mono)
    moving = []
    for v, e in enumerate(mono):
        if e and len(forms[v]) > 1:
            base[v] = 0
            moving.append((v, e))
    states = {(0, tuple(base)): 1}
    for v, e in moving:
        pieces = _power_of_form(forms[v], e, p, mode, tcap)
        new = {}
        for (tdeg, m), c in states.items():
            for d, delta, cp in pieces:
                td = tdeg + d
                if tcap is not None and td > tcap:
                    continue
                mm = list(m)
                coeff = c * cp % p
                for w, k in delta:
                    if mode == "divided" and mm[w]:
                        coeff = coeff * binom_mod_p(mm[w] + k, k, p) % p
                    mm[w] += k
                if not coeff:
                    continue
                if mode == "poly" and trunc is not None and any(mm[w] >= trunc for w, _ in delta):
                    continue
                key = (td, tuple(mm))
                new[key] = (new.get(key, 0) + coeff) % p
        states = {k: c for k, c in new.items() if c}
    return {k: c for k, c in states.items() if k[0] > 0}


def _act_tensor(word, forms, p, tcap):
    states = {(0, ()): 1}
    for v in word:
        new = {}
        for (tdeg, w), c in states.items():
            for d, u, cu in forms[v]:
                td = tdeg + d
                if tcap is not None and td > tcap:
                    continue
                key = (td, w + (u,))
                new[key] = (new.get(key, 0) + c * cu) % p
        states = {k: c for k, c in new.items() if c}
    return {k: c for k, c in states.items() if k[0] > 0}


# -- substitution rules

def _conj_coordinate_forms(n, slots, p):
    """x[i,j] -> entries of (I - tE_ab) X (I + tE_ab), for every slot."""
    def forms(a, b):
        out = []
        for q in range(slots):
            off = q * n * n
            for i in range(n):
                for j in range(n):
                    f = [(0, off + i * n + j, 1)]
                    if j == b:
                        f.append((1, off + i * n + a, 1))
                    if i == a:
                        f.append((1, off + b * n + j, p - 1))
                    if i == a and j == b:
                        f.append((2, off + b * n + a, p - 1))
                    out.append(f)
        return out
    return forms


def _conj_tensor_forms(n, p):
    """E_ij -> (I + tE_ab) E_ij (I - tE_ab)."""
    def forms(a, b):
        out = []
        for i in range(n):
            for j in range(n):
                f = [(0, i * n + j, 1)]
                if i == b:
                    f.append((1, a * n + j, 1))
                if j == a:
                    f.append((1, i * n + b, p - 1))
                if i == b and j == a:
                    f.append((2, a * n + b, p - 1))
                out.append(f)
        return out
    return forms


def _veccovec_forms(vctx: VecCovecCtx, p):
    """x_i[c] -> x_i[c] - t d_ca x_i[b];  y_j[c] -> y_j[c] + t d_cb y_j[a]."""
    n = vctx.n

    def forms(a, b):
        out = []
        for i in range(1, vctx.m1 + 1):
            for c in range(n):
                f = [(0, vctx.x(i, c + 1), 1)]
                if c == a:
                    f.append((1, vctx.x(i, b + 1), p - 1))
                out.append(f)
        for j in range(1, vctx.m2 + 1):
            for c in range(n):
                f = [(0, vctx.y(j, c + 1), 1)]
                if c == b:
                    f.append((1, vctx.y(j, a + 1), 1))
                out.append(f)
        return out
    return forms


def _matrix_var_weights(n, slots):
    w = np.zeros((slots * n * n, n), dtype=np.int64)
    for q in range(slots):
        for i in range(n):
            for j in range(n):
                w[q * n * n + i * n + j, i] += 1
                w[q * n * n + i * n + j, j] -= 1
    return w


def _check_cap(size, cap):
    if size > cap:
        raise CapExceeded(f"basis of size {size} exceeds the cap {cap}")


def _capped_monomials(nvars, degree, max_exp, cap):
    out = []
    for m in monomials(nvars, degree, max_exp):
        out.append(m)
        if len(out) > cap:
            raise CapExceeded(f"basis exceeds the cap {cap}")
    return out


def build_module(kind: str, n: int, p: int, r=None, s: int | None = None, *, alpha=None,
                 m1: int = 1, m2: int = 1, bidegree=None, cap: int = DEFAULT_CAP) -> GradedModuleSpec:
    """Construct one graded piece.

    as        A_s^r(g): ordinary monomials in x[i,j], exponents < p^s, degree r
    ds        D_s^r(g*): divided monomials, exponents < p^s (all if s is None)
    several   D_s^alpha of m = len(alpha) matrices
    veccovec  D_s^{r1,r2} of m1 vectors and m2 covectors, bidegree=(r1, r2)
    tensor    g^{(x) r} with the conjugation action
    """
    ctx = as_ctx(p)
    if n < 1:
        raise ValueError("n must be positive")
    trunc = None if s is None else p ** s
    max_exp = None if trunc is None else trunc - 1
    params = {"kind": kind, "n": n, "p": p, "s": s}
    if kind in ("as", "ds"):
        if r is None or r < 0:
            raise ValueError("degree r required")
        if kind == "as" and s is None:
            raise ValueError("A_s needs s")
        vs = matrix_varset(n)
        basis = _capped_monomials(n * n, r, max_exp, cap)
        params["r"] = r
        return GradedModuleSpec(kind, n, ctx, vs, basis, "poly" if kind == "as" else "divided",
                                _matrix_var_weights(n, 1), _conj_coordinate_forms(n, 1, p),
                                trunc, params)
    if kind == "several":
        alpha = tuple(alpha)
        m = len(alpha)
        vs = matrix_varset(n, m)
        nn = n * n
        pieces = [_capped_monomials(nn, a, max_exp, cap) for a in alpha]
        size = int(np.prod([len(x) for x in pieces]))
        _check_cap(size, cap)
        basis = [sum(parts, ()) for parts in itertools.product(*pieces)]
        params["alpha"] = list(alpha)
        return GradedModuleSpec(kind, n, ctx, vs, basis, "divided", _matrix_var_weights(n, m),
                                _conj_coordinate_forms(n, m, p), trunc, params)
    if kind == "veccovec":
        r1, r2 = bidegree
        vctx = VecCovecCtx(n, m1, m2, p)
        vs = vctx.varset
        xs = _capped_monomials(m1 * n, r1, max_exp, cap)
        ys = _capped_monomials(m2 * n, r2, max_exp, cap)
        _check_cap(len(xs) * len(ys), cap)
        basis = [x + y for x in xs for y in ys]
        w = np.zeros((len(vs), n), dtype=np.int64)
        for k, name in enumerate(vs.names):
            c = int(name.split("[")[1].rstrip("]")) - 1
            w[k, c] = -1 if name.startswith("x") else 1
        params.update(m1=m1, m2=m2, bidegree=[r1, r2])
        return GradedModuleSpec(kind, n, ctx, vs, basis, "divided", w, _veccovec_forms(vctx, p),
                                trunc, params)
    if kind == "tensor":
        vs = matrix_varset(n)
        _check_cap((n * n) ** r, cap)
        basis = list(itertools.product(range(n * n), repeat=r))
        params["r"] = r
        return GradedModuleSpec(kind, n, ctx, vs, basis, "tensor", _matrix_var_weights(n, 1),
                                _conj_tensor_forms(n, p), None, params)
    raise ValueError(f"unknown module kind {kind!r}; expected one of {KINDS}")


# ---------------------------------------------------------------- subspaces

@dataclass(eq=False)
class InvariantSubspace:
    module: GradedModuleSpec
    rows: np.ndarray          # reduced row echelon form

    @property
    def dim(self) -> int:
        return int(self.rows.shape[0])

    def contains(self, element) -> bool:
        v = element if isinstance(element, np.ndarray) else self.module.vector(element)
        return fplinalg.in_row_space(self.rows, v, self.module.p)

    def elements(self) -> list[dict]:
        return [self.module.element(row) for row in self.rows]

    def dump(self) -> str:
        """One row per basis vector, coefficients in [0, p)."""
        return "\n".join(" ".join(str(int(c)) for c in row) for row in self.rows)


def span(module: GradedModuleSpec, elements) -> InvariantSubspace:
    vecs = [e if isinstance(e, np.ndarray) else module.vector(e) for e in elements]
    if not vecs:
        return InvariantSubspace(module, np.zeros((0, len(module)), dtype=np.int64))
    return InvariantSubspace(module, fplinalg.row_space(np.array(vecs), module.p, len(module)))


def subspace_compare(a: InvariantSubspace, b: InvariantSubspace) -> dict:
    if a.module is not b.module and (a.module.basis != b.module.basis or a.module.p != b.module.p):
        raise ValueError("subspaces live in different ambient modules")
    p = a.module.p
    joint = fplinalg.rank(np.vstack([a.rows, b.rows]), p) if a.dim + b.dim else 0
    a_in_b = joint == b.dim
    b_in_a = joint == a.dim
    return {"dim_A": a.dim, "dim_B": b.dim, "A_in_B": a_in_b, "B_in_A": b_in_a,
            "equal": a_in_b and b_in_a}


# ---------------------------------------------------------------- solving

def _weight_blocks(module: GradedModuleSpec, keep) -> dict:
    blocks: dict[tuple, list[int]] = {}
    for k, w in enumerate(map(tuple, module.weights.tolist())):
        if keep(w):
            blocks.setdefault(w, []).append(k)
    return blocks


def _block_kernel(module, cols, operators, tcap):
    """Basis (rows) of the common kernel of the t-coefficient operators on a block."""
    p = module.p
    kern = np.eye(len(cols), dtype=np.int64)
    for a, b in operators:
        if kern.shape[0] == 0:
            break
        rows_of = {}
        ri, ci, vals = [], [], []
        for col, k in enumerate(cols):
            for key, c in module.act(module.basis[k], a, b, tcap).items():
                ri.append(rows_of.setdefault(key, len(rows_of)))
                ci.append(col)
                vals.append(c)
        if not rows_of:
            continue
        op = sparse.csr_matrix((np.array(vals, dtype=np.int64), (ri, ci)),
                               shape=(len(rows_of), len(cols)))
        image = np.asarray((op @ kern.T) % p, dtype=np.int64)
        null = fplinalg.nullspace(image, p)
        kern = (null @ kern) % p
    return kern


def _solve(module, keep, operators, tcap) -> InvariantSubspace:
    pieces = []
    for w, cols in sorted(_weight_blocks(module, keep).items()):
        kern = _block_kernel(module, cols, operators, tcap)
        log.debug("weight %s: block %d, kernel %d", w, len(cols), kern.shape[0])
        if kern.shape[0]:
            full = np.zeros((kern.shape[0], len(module)), dtype=np.int64)
            full[:, cols] = kern
            pieces.append(full)
    if not pieces:
        return InvariantSubspace(module, np.zeros((0, len(module)), dtype=np.int64))
    rows, _ = fplinalg.rref(np.vstack(pieces), module.p)
    return InvariantSubspace(module, rows)


def group_invariants(module: GradedModuleSpec, weight_filter=None) -> InvariantSubspace:
    """GL_n-invariants: weight exactly zero and every t^m (m >= 1) coefficient vanishes."""
    def keep(w):
        return not any(w) and (weight_filter is None or weight_filter(w))
    return _solve(module, keep, module.root_pairs(), None)


def _generators(module, generators):
    n = module.n
    if generators in ("all", None):
        return module.root_pairs(), list(range(n))
    if generators == "borel":
        return [(a, b) for a in range(n) for b in range(n) if a < b], list(range(n))
    roots = [(a, b) for a, b in generators if a != b]
    diag = [a for a, b in generators if a == b]
    return roots, diag


def lie_invariants(module: GradedModuleSpec, generators="all", weight_filter=None) -> InvariantSubspace:
    """Vectors killed by the chosen elements of gl_n.

    ``generators`` is "all", "borel" (upper triangular) or a list of 0-based
    pairs (a, b), where (a, a) stands for the diagonal E_aa.
    """
    roots, diag = _generators(module, generators)
    p = module.p

    def keep(w):
        return all(w[a] % p == 0 for a in diag) and (weight_filter is None or weight_filter(w))
    return _solve(module, keep, roots, 1)


# ---------------------------------------------------------------- restriction

def restriction_target(module: GradedModuleSpec) -> GradedModuleSpec:
    if module.kind not in ("as", "veccovec"):
        raise ValueError(f"restriction is only defined for A_s and vector/covector modules, "
                         f"not {module.kind!r}")
    if module.n < 2:
        raise ValueError("cannot restrict below n = 1")
    pr = module.params
    if module.kind == "as":
        return build_module("as", module.n - 1, module.p, pr["r"], pr["s"])
    return build_module("veccovec", module.n - 1, module.p, s=pr["s"], m1=pr["m1"], m2=pr["m2"],
                        bidegree=tuple(pr["bidegree"]))


def _restrict_map(module, target):
    index = target.varset.index
    keep = {k: index[name] for k, name in enumerate(module.varset.names) if name in index}
    return keep


def restrict(x, module: GradedModuleSpec, target: GradedModuleSpec | None = None):
    """Set every coordinate involving the index n to zero.

    ``x`` is an InvariantSubspace (returns the image subspace) or a single
    vector / element of ``module`` (returns a vector of the target).
    """
    target = target or restriction_target(module)
    keep = _restrict_map(module, target)
    nv = len(target.varset)

    def map_vec(vec):
        out = np.zeros(len(target), dtype=np.int64)
        for k, c in enumerate(vec):
            if not c:
                continue
            mono = module.basis[k]
            if any(e and v not in keep for v, e in enumerate(mono)):
                continue
            down = [0] * nv
            for v, e in enumerate(mono):
                if e:
                    down[keep[v]] = e
            out[target.index[tuple(down)]] = (out[target.index[tuple(down)]] + c) % module.p
        return out

    if isinstance(x, InvariantSubspace):
        return span(target, [map_vec(row) for row in x.rows])
    vec = x if isinstance(x, np.ndarray) else module.vector(x)
    return map_vec(vec)


def restrict_element(x, varset: VarSet):
    """Restrict a DPElement / IntPoly to the variables that survive in ``varset``."""
    index = varset.index
    names = x.varset.names
    terms = {}
    for mono, c in x.terms.items():
        if any(e and names[v] not in index for v, e in enumerate(mono)):
            continue
        down = [0] * len(varset)
        for v, e in enumerate(mono):
            if e:
                down[index[names[v]]] = e
        terms[tuple(down)] = c
    if isinstance(x, DPElement):
        return DPElement(varset, x.ctx, terms)
    return IntPoly(varset, terms)


# ---------------------------------------------------------------- n = 2 closed form

def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_divexact(a, b):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        q[k] = a[k + len(b) - 1] // b[-1]
        for j, y in enumerate(b):
            a[k + j] -= q[k] * y
    if any(a):
        raise ArithmeticError("division is not exact")
    return q


def n2_series(p: int, s: int) -> list[int]:
    """Coefficients of (1 - T^q)/(1 - T) * (1 - T^(3(q-1)+2))/(1 - T^2), q = p^s."""
    q = p ** s
    num = _poly_mul([1] + [0] * (q - 1) + [-1], [1] + [0] * (3 * (q - 1) + 1) + [-1])
    den = [1, -1, -1, 1]  # (1 - T)(1 - T^2)
    coeffs = _poly_divexact(num, den)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def n2_total(p: int, s: int) -> int:
    q = p ** s
    return q * q + q * (q - 1) // 2
