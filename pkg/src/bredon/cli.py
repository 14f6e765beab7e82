"""Command-line front end.

Every verb builds a plain ``dict`` report, prints it as text or JSON and maps
failures to exit codes: 2 for unreadable input, 3 for exceeded budgets and 1
for failed mathematical validation.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bredon_module import (LEFT, RIGHT, FunctorialityError, ModuleParseError, VarianceMismatch, left_free,
                            random_module, read_module_file, right_free, trivial_module)
from .cwdata import (BoundarySquareNonzero, CWParseError, format_equivariant_cw, format_quotient_cw,
                     read_equivariant_cw, read_quotient_cw)
from .group_core import (FamilyError, FiniteGroup, GroupParseError, GroupTooLarge, build_family,
                         enumerate_subgroups, format_cycles, minimal_generators, parse_subgroup_line,
                         read_group_file, read_subgroup_file)
from .intlinalg import AbGroupInvariants, BoundaryMismatch, BudgetExceeded
from .orbit_category import CategoryTooLarge, OrbitCategory
from .resolutions import (DEFAULT_BUDGET, FamilyNotSemiFull, StabilizerOutsideFamilyError, estimate_standard,
                          standard_resolution, standard_to_cw)

log = logging.getLogger("bredon")

PARSE_ERRORS = (GroupParseError, FamilyError, ModuleParseError, CWParseError, FileNotFoundError,
                IsADirectoryError, VarianceMismatch)
BUDGET_ERRORS = (BudgetExceeded, GroupTooLarge, CategoryTooLarge)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    verb: str
    sub: str | None = None
    group: str | None = None
    group2: str | None = None
    family: str = "trivial"
    degree: int | None = None
    coeff: str = "trivial"
    fmt: str = "text"
    threads: int = 1
    seed: int | None = None
    budget: int = DEFAULT_BUDGET
    paths: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)


# --- input helpers ----------------------------------------------------------

_BUILTIN = re.compile(r"(C|S|A|D|Dic|Q)(\d+)")


def _builtin_group(token: str) -> FiniteGroup:
    m = _BUILTIN.fullmatch(token)
    if not m:
        raise GroupParseError(f"unknown group {token!r} (use a file or C<n>, S<n>, A<n>, D<2n>, Q8, Dic<4n>)")
    kind, n = m.group(1), int(m.group(2))
    if n < 1 or n > 10_000:
        raise GroupParseError(f"bad group size in {token!r}")
    if kind == "C":
        return FiniteGroup.cyclic(n)
    if kind == "S":
        if n > 7:
            raise GroupTooLarge(f"S{n} is too large")
        return FiniteGroup.symmetric(n)
    if kind == "A":
        if n > 7:
            raise GroupTooLarge(f"A{n} is too large")
        return FiniteGroup.alternating(n)
    if kind == "D":
        if n % 2 or n < 4:
            raise GroupParseError("dihedral groups are named by their order D<2n>, n >= 2")
        return FiniteGroup.dihedral(n // 2)
    if kind == "Q" and n == 8:
        return FiniteGroup.dicyclic(2)
    if kind == "Dic" and n % 4 == 0:
        return FiniteGroup.dicyclic(n // 4)
    raise GroupParseError(f"unknown group {token!r}")


def load_group(spec: str | None) -> FiniteGroup:
    """A group file, a builtin name, or a product ``AxB`` of builtin names."""
    if spec is None:
        raise UsageError("--group is required")
    p = Path(spec)
    if p.exists():
        return read_group_file(p)
    parts = spec.split("x")
    if len(parts) > 1 and all(parts):
        G = _builtin_group(parts[0])
        for t in parts[1:]:
            G = FiniteGroup.direct_product(G, _builtin_group(t))
        return G
    if p.suffix or "/" in spec:
        raise FileNotFoundError(f"group file {spec!r} not found")
    return _builtin_group(spec)


def load_coefficients(spec: str, cat: OrbitCategory, variance: str):
    if spec == "trivial":
        return trivial_module(cat, variance)
    if spec.startswith("free:"):
        try:
            j = int(spec[5:])
        except ValueError:
            raise ModuleParseError(f"bad object index in {spec!r}") from None
        if not 0 <= j < cat.n_objects:
            raise ModuleParseError(f"object {j} out of range (0..{cat.n_objects - 1})")
        return right_free(cat, j) if variance == RIGHT else left_free(cat, j)
    if spec.startswith("custom:"):
        M = read_module_file(spec[7:], cat)
        if M.variance != variance:
            raise VarianceMismatch(f"coefficient module is {M.variance}, this verb needs a {variance} module")
        return M
    raise ModuleParseError(f"unknown coefficient spec {spec!r}")


def _groups(H: list[AbGroupInvariants], sign: str) -> list[dict]:
    return [{"n": n, "group": str(h), "rank": h.rank, "torsion": list(h.torsion), "label": f"H{sign}{n}"}
            for n, h in enumerate(H)]


def _group_info(G: FiniteGroup) -> dict:
    return {"name": G.name or "G", "order": G.order}


def _homology_lines(rows: list[dict]) -> list[str]:
    return [f"{r['label']} = {r['group']}" for r in rows]


def _parallel(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# --- verbs ----------------------------------------------------------------------


def cmd_subgroups(cfg: RunConfig) -> dict:
    G = load_group(cfg.group)
    subs = enumerate_subgroups(G)
    rows = []
    for k, H in enumerate(subs):
        gens = [format_cycles(G.elements[g]) for g in minimal_generators(H)]
        rows.append({"index": k, "order": H.order, "generators": gens, "normal": H.is_normal()})
    return {"command": "subgroups", "group": _group_info(G), "count": len(subs), "subgroups": rows}


def _category(cfg: RunConfig):
    G = load_group(cfg.group)
    F = build_family(G, cfg.family)
    return G, F, OrbitCategory(F)


def cmd_orbit_cat(cfg: RunConfig) -> dict:
    G, F, cat = _category(cfg)
    objs = [{"index": o.index, "subgroup": o.subgroup.label(), "order": o.subgroup.order,
             "cosets": G.order // o.subgroup.order} for o in cat.objects]
    return {"command": "orbit-cat", "group": _group_info(G), "family": cfg.family,
            "family_description": F.describe(), "objects": objs,
            "hom_sizes": cat.hom_sizes().astype(int).tolist()}


def _bredon(cfg: RunConfig, homological: bool) -> dict:
    from .homology_engine import _resolution
    G, F, cat = _category(cfg)
    n = 3 if cfg.degree is None else cfg.degree
    variance = LEFT if homological else RIGHT
    M = load_coefficients(cfg.coeff, cat, variance)
    if cfg.options.get("dry_run"):
        return {"command": "homology" if homological else "cohomology", "group": _group_info(G),
                "family": cfg.family, "dry_run": estimate_standard(G, F, n + 1)}
    if not M.check_functorial():
        raise FunctorialityError("coefficient module is not a functor")
    t0 = time.perf_counter()
    support = M.support()
    if support:
        res = _resolution(cat, n + 1, support, cfg.budget)
        if not res.check_square_zero():
            raise BoundaryMismatch("resolution fails d o d = 0")
        sizes = res.basis_sizes()
    else:
        res, sizes = None, [0] * (n + 2)
    if homological:
        if res is None:
            H = [AbGroupInvariants(0)] * (n + 1)
        else:
            C = res.tensor_chain_complex(M, n + 1)
            H = _parallel(C.homology, range(n + 1), cfg.threads)
    else:
        if res is None:
            H = [AbGroupInvariants(0)] * (n + 1)
        else:
            D = res.hom_cochain_complex(M, n + 1)
            H = _parallel(D.cohomology, range(n + 1), cfg.threads)
    return {"command": "homology" if homological else "cohomology", "group": _group_info(G),
            "family": cfg.family, "coefficients": cfg.coeff,
            "degrees": _groups(H, "_" if homological else "^"),
            "provenance": {"truncation": n + 1, "basis_sizes": sizes,
                           "resolution": "none" if res is None else res.kind,
                           "seconds": round(time.perf_counter() - t0, 3)}}


def cmd_homology(cfg: RunConfig) -> dict:
    return _bredon(cfg, True)


def cmd_cohomology(cfg: RunConfig) -> dict:
    return _bredon(cfg, False)


def cmd_quotient_homology(cfg: RunConfig) -> dict:
    from .gcw_models import quotient_complex
    t0 = time.perf_counter()
    if cfg.paths.get("gcw"):
        G = load_group(cfg.group)
        F = build_family(G, cfg.family)
        X = read_equivariant_cw(cfg.paths["gcw"], G)
        if not X.boundary_square_zero():
            raise BoundarySquareNonzero("equivariant boundary of boundary is nonzero")
        Q = quotient_complex(X, F)
        source = "equivariant"
    elif cfg.paths.get("cw"):
        Q = read_quotient_cw(cfg.paths["cw"])
        source = "quotient"
    else:
        raise UsageError("quotient-homology needs --cw <file> or --gcw <file> with --group")
    if not Q.check():
        raise BoundarySquareNonzero("d o d is nonzero")
    top = Q.dimension if cfg.degree is None else cfg.degree
    C = Q.chain_complex()
    H = [C.homology(k) if k <= Q.dimension else AbGroupInvariants(0) for k in range(top + 1)]
    return {"command": "quotient-homology", "source": source, "cells": list(Q.counts),
            "degrees": _groups(H, "_"), "provenance": {"seconds": round(time.perf_counter() - t0, 3)}}


def cmd_dims(cfg: RunConfig) -> dict:
    from .homology_engine import dimension_bounds
    G, F, cat = _category(cfg)
    N = 4 if cfg.degree is None else cfg.degree
    b = dimension_bounds(cat, N, budget=cfg.budget)
    return {"command": "dims", "group": _group_info(G), "family": cfg.family, "degrees_examined": N,
            "cd_zero": b.cd_zero, "cd_lower": b.cd_lower, "hd_lower": b.hd_lower,
            "witnesses": {k: list(v) for k, v in sorted(b.witnesses.items())}}


def _table(rows: list[dict]) -> dict:
    return {"rows": rows, "passed": all(r["pass"] for r in rows)}


def cmd_check(cfg: RunConfig) -> dict:
    sub = cfg.sub
    if sub == "cd-zero":
        from .homology_engine import is_cd_zero
        G = load_group(cfg.group)
        F = build_family(G, cfg.family)
        r = is_cd_zero(F)
        row = {"name": "cd-zero", "value": r.value, "group_in_family": r.group_in_family,
               "agree": r.agree, "explanation": r.explanation, "pass": r.agree is not False}
        return {"command": "check cd-zero", "group": _group_info(G), "family": cfg.family, **_table([row])}
    if sub == "yoneda":
        from .functor_algebra import tensor_collapse_check, yoneda_check
        G, F, cat = _category(cfg)
        seed = 0 if cfg.seed is None else cfg.seed
        rng = np.random.default_rng(seed)
        rows = []
        trials = cfg.options.get("trials", 10)
        for t in range(trials):
            if cfg.coeff != "trivial":
                M, N = load_coefficients(cfg.coeff, cat, RIGHT), None
            else:
                M, N = random_module(cat, RIGHT, rng), random_module(cat, LEFT, rng)
            K = int(rng.integers(cat.n_objects))
            y = yoneda_check(K, M)
            ten = tensor_collapse_check(K, N) if N is not None else None
            rows.append({"trial": t, "object": K, "yoneda": y, "tensor": ten,
                         "pass": bool(y and ten is not False)})
        return {"command": "check yoneda", "group": _group_info(G), "family": cfg.family, "seed": seed,
                **_table(rows)}
    if sub == "shapiro":
        from .functor_algebra import shapiro_check
        G, F, cat = _category(cfg)
        text = cfg.options.get("subgroup")
        if not text:
            raise UsageError("check shapiro needs --subgroup '{perm; ...}' or a subgroup file")
        K = read_subgroup_file(G, Path(text))[0] if Path(text).exists() else parse_subgroup_line(G, text)
        n = 3 if cfg.degree is None else cfg.degree
        rep = shapiro_check(cat, K, n, budget=cfg.budget)
        rows = [{"side": side + str(k), "subgroup": a, "induced": b, "pass": ok}
                for side, k, a, b, ok in rep.rows()]
        return {"command": "check shapiro", "group": _group_info(G), "family": cfg.family,
                "subgroup": K.label(), **_table(rows)}
    if sub == "kunneth":
        from .functor_algebra import kunneth_check
        G1 = load_group(cfg.group)
        G2 = load_group(cfg.group2 or cfg.group)
        c1, c2 = OrbitCategory(build_family(G1, cfg.family)), OrbitCategory(build_family(G2, cfg.family))
        n = 3 if cfg.degree is None else cfg.degree
        rows = []
        for k in range(n + 1):
            r = kunneth_check(c1, c2, k)
            rows.append({"n": k, "left": str(r.left), "middle": str(r.middle), "right": str(r.right),
                         "tensor_model": str(r.middle_tensor_model), "consistent": r.consistent,
                         "split": r.split, "pass": r.ok})
        return {"command": "check kunneth", "groups": [_group_info(G1), _group_info(G2)],
                "family": cfg.family, **_table(rows)}
    raise UsageError(f"unknown check {sub!r}")


def _base(name: str):
    from .gcw_models import circle_base, loop_base, point_base
    if name == "point":
        return point_base()
    if name == "loop":
        return loop_base()
    if name == "circle":
        return circle_base()
    return read_quotient_cw(name)


def cmd_build(cfg: RunConfig) -> dict:
    from .gcw_models import AttachmentSpec, bs1m_quotient, jpl_attach, quotient_complex, telescope, z2_join_quotient
    sub, opt = cfg.sub, cfg.options
    extra = {}
    if sub == "z2-join":
        Q = z2_join_quotient(opt.get("pieces") or 1)
        extra["pieces"] = opt.get("pieces") or 1
    elif sub == "jpl":
        k = 1 if opt.get("cells") is None else opt["cells"]
        degs = opt.get("degrees")
        base = opt.get("base") or "loop"
        if base == "loop":
            Q = bs1m_quotient(k, degs, cfg.seed)
        else:
            Y = _base(base)
            cycles = None
            if degs is not None:
                n1 = Y.counts[1] if len(Y.counts) > 1 else 0
                cycles = [[d] + [0] * (n1 - 1) for d in degs]
            Q = jpl_attach(Y, AttachmentSpec(k, 0, cycles))
        extra.update(base=base, cells=k)
    elif sub == "telescope":
        base = opt.get("base") or "point"
        Y = _base(base)
        deg = 1 if opt.get("map_degree") is None else opt["map_degree"]
        f = [np.eye(c, dtype=np.int64) * (deg if n == 1 else 1) for n, c in enumerate(Y.counts)]
        W = 3 if opt.get("window") is None else opt["window"]
        Q = telescope(Y, f, W)
        extra.update(base=base, window=W, map_degree=deg)
    elif sub == "standard-model":
        G, F, cat = _category(cfg)
        N = 3 if cfg.degree is None else cfg.degree
        res = standard_resolution(G, F, N, category=cat, budget=cfg.budget)
        X = standard_to_cw(res)
        Q = quotient_complex(X, F, cat)
        extra.update(group=_group_info(G), family=cfg.family, truncation=N)
        if opt.get("equivariant_output"):
            Path(opt["equivariant_output"]).write_text(format_equivariant_cw(X))
    else:
        raise UsageError(f"unknown builder {sub!r}")
    if not Q.check():
        raise BoundarySquareNonzero("built complex fails d o d = 0")
    C = Q.chain_complex()
    H = [C.homology(k) for k in range(Q.dimension + 1)]
    reduced_zero = all(h.is_zero() for h in H[1:]) and str(H[0]) == "Z"
    text = format_quotient_cw(Q)
    out = {"command": f"build {sub}", **extra, "cells": list(Q.counts), "degrees": _groups(H, "_"),
           "acyclic": reduced_zero}
    if opt.get("output"):
        Path(opt["output"]).write_text(text)
        out["file"] = str(opt["output"])
    else:
        out["cw"] = text
    return out


VERBS = {
    "subgroups": cmd_subgroups, "orbit-cat": cmd_orbit_cat, "homology": cmd_homology,
    "cohomology": cmd_cohomology, "quotient-homology": cmd_quotient_homology, "dims": cmd_dims,
    "check": cmd_check, "build": cmd_build,
}


# --- rendering ------------------------------------------------------------------


def render_text(rep: dict) -> str:
    cmd = rep.get("command", "")
    lines = []
    if "group" in rep and isinstance(rep["group"], dict):
        lines.append(f"group {rep['group']['name']} (order {rep['group']['order']})"
                     + (f", family {rep['family']}" if "family" in rep else ""))
    if cmd == "subgroups":
        lines.append(f"{rep['count']} subgroups")
        for r in rep["subgroups"]:
            lines.append(f"  [{r['index']}] order {r['order']} <{', '.join(r['generators'])}>"
                         + (" normal" if r["normal"] else ""))
    elif cmd == "orbit-cat":
        lines.append(rep["family_description"])
        for o in rep["objects"]:
            lines.append(f"  G/H{o['index']}: H = {o['subgroup']} (order {o['order']}, {o['cosets']} coset{'s' if o['cosets'] != 1 else ''})")
        lines.append("hom sizes:")
        lines += ["  " + " ".join(f"{x:3d}" for x in row) for row in rep["hom_sizes"]]
    elif "dry_run" in rep:
        d = rep["dry_run"]
        lines.append(f"dry run: |Delta_0| = {d['delta0']}")
        for n, (s, o) in enumerate(zip(d["simplices"], d["orbits"])):
            lines.append(f"  degree {n}: {s} simplices, {o} orbits")
    elif cmd == "dims":
        lines.append(f"cd_F = 0: {'yes' if rep['cd_zero'] else 'no'}")
        lines.append(f"cd_F >= {rep['cd_lower']}")
        lines.append(f"hd_F >= {rep['hd_lower']}")
        lines.append(f"(lower bounds from degrees <= {rep['degrees_examined']})")
    elif cmd.startswith("check"):
        for r in rep["rows"]:
            cells = [f"{k}={v}" for k, v in r.items() if k != "pass"]
            lines.append(f"{'PASS' if r['pass'] else 'FAIL'}  " + "  ".join(cells))
        lines.append("all passed" if rep["passed"] else "FAILURES")
    if cmd.startswith("build"):
        lines.append(f"cells per dimension: {rep['cells']}")
        if "file" in rep:
            lines.append(f"wrote {rep['file']}")
        else:
            lines.append(rep["cw"].rstrip("\n"))
    elif cmd == "quotient-homology":
        lines.append(f"cells per dimension: {rep['cells']}")
    if "degrees" in rep:
        lines += _homology_lines(rep["degrees"])
    if cmd.startswith("build"):
        lines.append("reduced homology vanishes: " + ("yes" if rep["acyclic"] else "no"))
    return "\n".join(lines) + "\n"


def render_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=True) + "\n"


def parse_report(text: str) -> dict:
    return json.loads(text)


# --- argument parsing -------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", help="group file or builtin name (C4, S3, D8, Q8, C2xC2, ...)")
    p.add_argument("--family", default="trivial", help="trivial | all | cyclic | p:<prime> | custom:<file>")
    p.add_argument("--degree", type=int, help="top degree to report")
    p.add_argument("--coeff", default="trivial", help="trivial | free:<object> | custom:<file>")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--budget-cells", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bredon", description="Bredon (co)homology over orbit categories")
    verbs = ap.add_subparsers(dest="verb", required=True)
    for name in ("subgroups", "orbit-cat", "homology", "cohomology", "dims"):
        p = verbs.add_parser(name)
        _common(p)
        if name in ("homology", "cohomology"):
            p.add_argument("--dry-run", action="store_true", help="print standard-resolution sizes only")
    p = verbs.add_parser("quotient-homology")
    _common(p)
    p.add_argument("--cw", help="quotient CW file")
    p.add_argument("--gcw", help="equivariant CW file (needs --group and --family)")
    chk = verbs.add_parser("check").add_subparsers(dest="sub", required=True)
    for name in ("yoneda", "shapiro", "kunneth", "cd-zero"):
        p = chk.add_parser(name)
        _common(p)
        if name == "yoneda":
            p.add_argument("--trials", type=int, default=10)
        if name == "shapiro":
            p.add_argument("--subgroup", help="'{perm; perm}' or a subgroup file")
        if name == "kunneth":
            p.add_argument("--group2", help="second factor (defaults to --group)")
    bld = verbs.add_parser("build").add_subparsers(dest="sub", required=True)
    for name in ("z2-join", "jpl", "telescope", "standard-model"):
        p = bld.add_parser(name)
        _common(p)
        p.add_argument("--output", help="write the quotient CW file here")
        if name == "z2-join":
            p.add_argument("--pieces", type=int, default=1)
        if name in ("jpl", "telescope"):
            p.add_argument("--base", help="point | loop | circle | quotient CW file")
        if name == "jpl":
            p.add_argument("--cells", type=int)
            p.add_argument("--degrees", help="comma separated attaching degrees")
        if name == "telescope":
            p.add_argument("--window", type=int)
            p.add_argument("--map-degree", type=int)
        if name == "standard-model":
            p.add_argument("--equivariant-output", help="also write the orbit-cell description here")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.threads < 1:
        raise UsageError("--threads must be positive")
    if ns.budget_cells < 1:
        raise UsageError("--budget-cells must be positive")
    if ns.degree is not None and ns.degree < 0:
        raise UsageError("--degree must be nonnegative")
    opts = {}
    for key in ("dry_run", "trials", "subgroup", "output", "pieces", "base", "cells", "window", "map_degree",
                "equivariant_output"):
        if hasattr(ns, key):
            opts[key] = getattr(ns, key)
    if getattr(ns, "degrees", None):
        try:
            opts["degrees"] = [int(x) for x in ns.degrees.split(",")]
        except ValueError:
            raise UsageError(f"bad --degrees {ns.degrees!r}") from None
        if ns.cells is not None and len(opts["degrees"]) != ns.cells:
            raise UsageError("--degrees needs one entry per cell")
        if ns.cells is None:
            opts["cells"] = len(opts["degrees"])
    for key in ("pieces", "cells", "window"):
        if opts.get(key) is not None and opts[key] < (1 if key == "pieces" else 0):
            raise UsageError(f"--{key} out of range")
    if ns.verb in ("subgroups", "orbit-cat", "homology", "cohomology", "dims") and not ns.group:
        raise UsageError("--group is required")
    paths = {k: getattr(ns, k) for k in ("cw", "gcw") if getattr(ns, k, None)}
    return RunConfig(ns.verb, getattr(ns, "sub", None), ns.group, getattr(ns, "group2", None), ns.family,
                     ns.degree, ns.coeff, ns.format, ns.threads, ns.seed, ns.budget_cells, paths, opts)


def run(cfg: RunConfig) -> tuple[int, dict]:
    rep = VERBS[cfg.verb](cfg)
    code = 0
    if rep.get("passed") is False:
        code = 1
    return code, rep


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_args(ns)
        code, rep = run(cfg)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"bredon: error: {exc}", file=sys.stderr)
        return 2
    except PARSE_ERRORS as exc:
        print(f"bredon: input error: {exc}", file=sys.stderr)
        return 2
    except BUDGET_ERRORS as exc:
        print(f"bredon: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (BoundarySquareNonzero, BoundaryMismatch, FunctorialityError, StabilizerOutsideFamilyError,
            FamilyNotSemiFull) as exc:
        print(f"bredon: validation failed: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # remaining value errors come from malformed builder inputs (non-cycles, non-chain maps)
        print(f"bredon: validation failed: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(render_json(rep) if cfg.fmt == "json" else render_text(rep))
    return code


if __name__ == "__main__":
    sys.exit(main())
