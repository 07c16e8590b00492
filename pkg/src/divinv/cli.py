"""Command line: dimension tables, basis dumps and the claim registry.

    divinv dims   --module as --p 2 --s 1 --n 2 --degree-max 4
    divinv basis  --family e --p 2 --s 1 --n 3 --r 3
    divinv verify inf-gap-p2-n2-r3 restriction-As-s2-p2
    divinv verify --suite default
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import dataclass, field

from . import claims as claimreg
from .divpow import DPElement, is_in_Ds
from .invsolver import (DEFAULT_CAP, KINDS, CapExceeded, build_module, group_invariants,
                        lie_invariants, n2_series, n2_total, span)
from .modarith import as_ctx
from .partitions import (Partition, YoungData, enumerate_partitions, s_equivalence_classes,
                         s_equivalence_classes_multi, enumerate_theta_alpha)
from .symmfunc import MatrixVarCtx, VecCovecCtx, classical_poly, divided_family
from .tensorinv import CycleTypeSum, class_sum, s_class_sums, to_dp_element
from .vecscovecs import bracket_matrices, bracket_monomial

FAMILIES = ("e", "h", "p", "p-class", "class", "bracket")
EXIT_FAIL = 1
EXIT_TRUNCATED = 3


@dataclass
class JobConfig:
    command: str
    p: int = 2
    s: int | None = 1
    n: int = 2
    r: int | None = None
    degree_max: int | None = None
    module: str = "as"
    family: str = "e"
    fmt: str = "text"
    cap: int = DEFAULT_CAP
    alpha: tuple[int, ...] | None = None
    m1: int = 1
    m2: int = 1
    lie: bool = True
    ids: list[str] = field(default_factory=list)
    suite: str = "default"
    manifest: str | None = None
    timings: bool = True

    def validate(self):
        as_ctx(self.p)
        if self.n < 1:
            raise ValueError("--n must be positive")
        if self.s is not None and self.s < 1:
            raise ValueError("--s must be positive")
        if self.cap < 1:
            raise ValueError("--cap-basis must be positive")
        if self.module not in KINDS:
            raise ValueError(f"unknown module {self.module!r}")
        if self.module == "as" and self.s is None:
            raise ValueError("the as module needs --s")
        if self.module == "several" and not self.alpha:
            raise ValueError("the several module needs --alpha")
        for name in ("r", "degree_max"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"--{name.replace('_', '-')} must be nonnegative")
        return self

    def degrees(self) -> list[int]:
        if self.r is not None:
            return [self.r]
        if self.degree_max is not None:
            return list(range(self.degree_max + 1))
        if self.module == "as":
            # A_s is finite dimensional: nothing above n^2 (p^s - 1)
            return list(range(self.n * self.n * (self.p ** self.s - 1) + 1))
        raise ValueError("give --r or --degree-max")


# ---------------------------------------------------------------- classical invariants

def _truncate(poly, q):
    return {m: c for m, c in poly.terms.items() if max(m, default=0) < q}


def classical_elements(module) -> list:
    """Images of the characteristic zero style invariants in one graded piece:
    products of e_i (as), merged class sums (ds, several), bracket monomials
    (veccovec) and the Schur-Weyl elements E_pi (tensor)."""
    kind, n, p = module.kind, module.n, module.p
    s = module.params["s"]
    if kind == "as":
        r = module.params["r"]
        mctx = MatrixVarCtx(n, p)
        es = {i: classical_poly("e", i, mctx) for i in range(1, min(r, n) + 1)}
        out = []
        for lam in enumerate_partitions(r):
            if lam.parts and lam.parts[0] > n:
                continue
            f = None
            for i in lam.parts:
                f = es[i] if f is None else f * es[i]
            out.append({(0,) * (n * n): 1} if f is None else _truncate(f.mod(p), p ** s))
        return out
    if kind == "ds":
        r = module.params["r"]
        sums = s_class_sums(r, p, s) if s is not None else \
            [CycleTypeSum(r, as_ctx(p), {lam: 1}) for lam in enumerate_partitions(r)]
        out = [to_dp_element(u, n) for u in sums]
        return [e for e in out if s is None or is_in_Ds(e, s)]
    if kind == "several":
        alpha = tuple(module.params["alpha"])
        young = YoungData(alpha)
        groups = s_equivalence_classes_multi(young, p, s) if s is not None else \
            [[b] for b in enumerate_theta_alpha(young)]
        out = []
        for cls in groups:
            u = None
            for blam in cls:
                c = class_sum({"type": "alpha-class", "alpha": list(alpha), "blambda": blam}, p)
                u = c if u is None else u + c
            e = to_dp_element(u, n, young)
            if s is None or is_in_Ds(e, s):
                out.append(e)
        return out
    if kind == "veccovec":
        r1, r2 = module.params["bidegree"]
        if r1 != r2:
            return []
        vctx = VecCovecCtx(n, module.params["m1"], module.params["m2"], p)
        out = [bracket_monomial(bm, vctx) for bm in bracket_matrices(vctx.m1, vctx.m2, r1)]
        return [e for e in out if s is None or is_in_Ds(e, s)]
    if kind == "tensor":
        r = module.params["r"]
        out = []
        for perm in itertools.permutations(range(r)):
            words = {}
            for rows in itertools.product(range(n), repeat=r):
                words[tuple(rows[l] * n + rows[perm[l]] for l in range(r))] = 1
            out.append(words)
        return out
    raise ValueError(kind)


# ---------------------------------------------------------------- dims

def _modules_for_degree(cfg: JobConfig, r: int):
    common = dict(cap=cfg.cap)
    if cfg.module == "veccovec":
        return [build_module("veccovec", cfg.n, cfg.p, s=cfg.s, m1=cfg.m1, m2=cfg.m2,
                             bidegree=(r1, r - r1), **common) for r1 in range(r + 1)]
    if cfg.module == "several":
        raise ValueError("use --alpha for the several module; it has a single multidegree")
    return [build_module(cfg.module, cfg.n, cfg.p, r, cfg.s, **common)]


def _row(cfg: JobConfig, modules, r) -> dict:
    dim_g_total = dim_l_total = dim_img = 0
    for module in modules:
        g = group_invariants(module)
        dim_g_total += g.dim
        if cfg.lie:
            dim_l_total += lie_invariants(module).dim
        dim_img += span(module, classical_elements(module)).dim
    row = {"r": r, "dim_G": dim_g_total, "dim_image": dim_img}
    if cfg.lie:
        row["dim_g"] = dim_l_total
    return row


def cmd_dims(cfg: JobConfig) -> tuple[dict, int]:
    params = {"p": cfg.p, "s": cfg.s, "n": cfg.n, "module": cfg.module}
    rows, truncated = [], False
    if cfg.module == "several":
        params["alpha"] = list(cfg.alpha)
        degrees = [sum(cfg.alpha)]
    else:
        degrees = cfg.degrees()
    if cfg.module == "veccovec":
        params.update(m1=cfg.m1, m2=cfg.m2)
    for r in degrees:
        try:
            if cfg.module == "several":
                modules = [build_module("several", cfg.n, cfg.p, s=cfg.s, alpha=cfg.alpha, cap=cfg.cap)]
            else:
                modules = _modules_for_degree(cfg, r)
            rows.append(_row(cfg, modules, r))
        except CapExceeded as exc:
            rows.append({"r": r, "truncated": True, "reason": str(exc)})
            truncated = True
            break
    table = {"params": params, "rows": rows}
    if truncated:
        table["truncated"] = True
    if cfg.module == "as" and cfg.n == 2:
        table["series"] = {"coefficients": n2_series(cfg.p, cfg.s), "total": n2_total(cfg.p, cfg.s)}
        if not truncated and cfg.r is None and cfg.degree_max is None:
            table["series"]["computed_total"] = sum(row["dim_G"] for row in rows)
    return table, EXIT_TRUNCATED if truncated else 0


# ---------------------------------------------------------------- basis

def _family_elements(cfg: JobConfig) -> list[tuple[str, object]]:
    r, p, s, n = cfg.r, cfg.p, cfg.s, cfg.n
    fam = cfg.family
    if r is None:
        raise ValueError("basis needs --r")
    q = None if s is None else p ** s
    if fam in ("e", "h"):
        mctx = MatrixVarCtx(n, p)
        return [(f"div {fam}_({lam})", divided_family(lam, fam, mctx))
                for lam in enumerate_partitions(r, max_ones=q)]
    if fam in ("p", "p-class", "class"):
        if s is None:
            groups = [[lam] for lam in enumerate_partitions(r)]
        else:
            groups = s_equivalence_classes(r, p, s)
        out = []
        for cls in groups:
            u = CycleTypeSum(r, as_ctx(p), dict.fromkeys(cls, 1))
            name = "div p_[" + " ~ ".join(f"({lam})" for lam in cls) + "]"
            out.append((name, u if fam == "class" else to_dp_element(u, n)))
        return out
    if fam == "bracket":
        vctx = VecCovecCtx(n, cfg.m1, cfg.m2, p)
        return [("bracket " + json.dumps(bm.to_json()["m"]), bracket_monomial(bm, vctx))
                for bm in bracket_matrices(cfg.m1, cfg.m2, r)]
    raise ValueError(f"unknown family {fam!r}")


def _invariance_module(cfg: JobConfig, element: DPElement, in_ds: bool):
    s = cfg.s if in_ds else None
    if cfg.family == "bracket":
        return build_module("veccovec", cfg.n, cfg.p, s=s, m1=cfg.m1, m2=cfg.m2,
                            bidegree=(cfg.r, cfg.r), cap=cfg.cap)
    return build_module("ds", cfg.n, cfg.p, cfg.r, s, cap=cfg.cap)


def cmd_basis(cfg: JobConfig) -> tuple[dict, int]:
    elements = _family_elements(cfg)
    truncated = len(elements) > cfg.cap
    elements = elements[:cfg.cap]
    solved = {}
    out = []
    status = 0
    for name, elem in elements:
        entry = {"name": name}
        if isinstance(elem, CycleTypeSum):
            entry["text"] = str(elem)
            elem = to_dp_element(elem, cfg.n)
            entry["dp"] = str(elem)
        else:
            entry["text"] = str(elem)
        entry["in_Ds"] = None if cfg.s is None else is_in_Ds(elem, cfg.s)
        key = bool(entry["in_Ds"])
        try:
            if key not in solved:
                module = _invariance_module(cfg, elem, key)
                solved[key] = (module, group_invariants(module))
            module, inv = solved[key]
            entry["invariant"] = inv.contains(elem)
        except CapExceeded:
            entry["invariant"] = None
            truncated = True
        out.append(entry)
    result = {"params": {"family": cfg.family, "p": cfg.p, "s": cfg.s, "n": cfg.n, "r": cfg.r},
              "elements": out}
    if truncated:
        result["truncated"] = True
        status = EXIT_TRUNCATED
    return result, status


# ---------------------------------------------------------------- verify

def cmd_verify(cfg: JobConfig) -> tuple[dict, int]:
    manifest = claimreg.load_manifest(cfg.manifest)
    chosen = claimreg.select_claims(manifest, cfg.ids or None, cfg.suite)
    reports = []
    for claim in chosen:
        rep = claimreg.run_claim(claim)
        if not cfg.timings:
            rep.pop("seconds")
        reports.append(rep)
    ok = all(rep["pass"] for rep in reports)
    result = {"suite": None if cfg.ids else cfg.suite, "passed": sum(r["pass"] for r in reports),
              "failed": sum(not r["pass"] for r in reports), "reports": reports}
    return result, 0 if ok else EXIT_FAIL


# ---------------------------------------------------------------- output

def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    cols = []
    for row in rows:
        cols += [k for k in row if k not in cols]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in row.items()})
    return buf.getvalue()


def render(command: str, result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, indent=1, sort_keys=False)
    if command == "dims":
        rows = result["rows"]
    elif command == "basis":
        rows = result["elements"]
    else:
        rows = [{"id": r["id"], "suite": r["suite"], "pass": r["pass"], "seconds": r.get("seconds"),
                 "observed": r["observed"]} for r in result["reports"]]
    if fmt == "csv":
        return _csv(rows)
    lines = []
    if command == "dims":
        lines.append("  ".join(f"{k}={v}" for k, v in result["params"].items() if v is not None))
        for row in rows:
            lines.append("  ".join(f"{k}={v}" for k, v in row.items()))
        if "series" in result:
            lines.append(f"series {result['series']['coefficients']} total {result['series']['total']}")
    elif command == "basis":
        for row in rows:
            flags = f"D_s={row['in_Ds']} invariant={row['invariant']}"
            lines.append(f"{row['name']}  [{flags}]")
            lines.append(f"  {row['text']}")
    else:
        for rep in result["reports"]:
            verdict = "PASS" if rep["pass"] else "FAIL"
            secs = f" ({rep['seconds']:.2f}s)" if "seconds" in rep else ""
            lines.append(f"{verdict} {rep['id']}{secs}")
            for k, v in rep["mismatched"].items():
                lines.append(f"    {k}: expected {v['expected']} observed {v['observed']}")
        lines.append(f"{result['passed']} passed, {result['failed']} failed")
    if result.get("truncated"):
        lines.append("TRUNCATED: basis cap exceeded")
    return "\n".join(lines)


# ---------------------------------------------------------------- argparse

def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x)


def _s_arg(text: str):
    return None if text.lower() in ("none", "inf") else int(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="divinv", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, default=2)
        sp.add_argument("--s", type=_s_arg, default=1, help="Frobenius level; 'none' for all of D")
        sp.add_argument("--n", type=int, default=2)
        sp.add_argument("--r", type=int)
        sp.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
        sp.add_argument("--cap-basis", dest="cap", type=int, default=DEFAULT_CAP)
        sp.add_argument("--m1", type=int, default=1)
        sp.add_argument("--m2", type=int, default=1)

    d = sub.add_parser("dims", help="invariant dimensions per degree")
    common(d)
    d.add_argument("--degree-max", type=int)
    d.add_argument("--module", choices=KINDS, default="as")
    d.add_argument("--alpha", type=_ints)
    d.add_argument("--no-lie", dest="lie", action="store_false",
                   help="skip the Lie algebra invariants")

    b = sub.add_parser("basis", help="print a family of invariants with membership flags")
    common(b)
    b.add_argument("--family", choices=FAMILIES, default="e")

    v = sub.add_parser("verify", help="run registered claims")
    v.add_argument("ids", nargs="*")
    v.add_argument("--suite", choices=("default", "extended"), default="default")
    v.add_argument("--manifest")
    v.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
    v.add_argument("--no-timings", dest="timings", action="store_false")
    return ap


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    known = {k: v for k, v in vars(ns).items() if k in JobConfig.__dataclass_fields__}
    return JobConfig(**known).validate()


COMMANDS = {"dims": cmd_dims, "basis": cmd_basis, "verify": cmd_verify}


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        result, status = COMMANDS[cfg.command](cfg)
    except (ValueError, KeyError) as exc:
        print(f"divinv: error: {exc}", file=sys.stderr)
        return 2
    text = render(cfg.command, result, cfg.fmt)
    if text:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
