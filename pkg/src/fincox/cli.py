"""Command-line front end: ``fincox {verify,min-elements,tables,classify}``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass

from . import __version__
from .affine_weyl import AffineElement, AffineWeylGroup, OmegaElement
from .case_tables import (
    class_representative,
    coset_class_representatives,
    derive_entry,
    load_type_a_fixture,
    render_table,
    table_entries,
    verify_entry,
)
from .classification import CoinvariantGroup, classify_representative, kottwitz, lattice_identity_check
from .conjugacy import (
    CHECK_NAMES,
    DEFAULT_NODE_BUDGET,
    BudgetExceeded,
    descent_closure,
    has_finite_coxeter_part,
    random_conjugate,
    verify_main_theorem,
)
from .root_system import RootSystemError, build_root_system, twist_permutation

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    type_letter: str | None = None
    rank: int | None = None
    max_rank: int = 7
    twist: str = "id"
    tau: str | None = None
    delta_pow: int | None = None
    representative: str = "from-table"
    conjugates: int = 10
    conjugate_length: int = 6
    seed: int = 0
    budget: int = DEFAULT_NODE_BUDGET
    output_format: str = "text"
    output: str | None = None
    edges: bool = False

    def validate(self):
        if self.budget <= 0:
            raise UsageError("--budget must be positive")
        if self.conjugates < 0 or self.conjugate_length < 0:
            raise UsageError("--conjugates and --conj-length must be non-negative")


def _group(cfg: RunConfig) -> AffineWeylGroup:
    if cfg.type_letter is None or cfg.rank is None:
        raise UsageError("--type and --rank are required")
    try:
        rs = build_root_system(cfg.type_letter, cfg.rank)
        return AffineWeylGroup(rs, twist_permutation(rs, cfg.twist))
    except (RootSystemError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _parse_rep(g: AffineWeylGroup, text: str) -> AffineElement:
    try:
        x = g.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return x


def _coset_of(g: AffineWeylGroup, x: AffineElement) -> OmegaElement:
    for om in g.omega_group(with_delta=True):
        if g.in_affine_weyl_group(g.multiply(x, g.inverse(om.element))):
            return om
    raise AssertionError("every element lies in some W_a tau")  # pragma: no cover


def _selected_taus(g: AffineWeylGroup, cfg: RunConfig) -> list[OmegaElement]:
    if cfg.tau is None:
        return g.omega_group(with_delta=True)
    k = cfg.delta_pow
    if k is None:
        k = 0 if cfg.twist == "id" else 1
    if cfg.tau in ("identity", "e"):
        return [g.tau(None, k)]
    try:
        i = int(cfg.tau)
    except ValueError:
        raise UsageError(f"--tau expects a minuscule index or 'identity', got {cfg.tau!r}")
    try:
        return [g.tau(i, k)]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_line(checks: dict[str, bool]) -> str:
    return " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in checks.items())


def _fmt_set(s) -> str:
    return "{" + ",".join(str(j) for j in sorted(s)) + "}"


# verify


def cmd_verify(cfg: RunConfig) -> tuple[int, dict, list[str]]:
    g = _group(cfg)
    jobs: list[tuple[OmegaElement, AffineElement, str]] = []
    if cfg.representative != "from-table":
        x = _parse_rep(g, cfg.representative)
        tau = _coset_of(g, x)
        if cfg.tau is not None:
            wanted = _selected_taus(g, cfg)[0]
            if wanted.element != tau.element:
                raise UsageError(f"representative lies in W_a {tau}, not W_a {wanted}")
        if not has_finite_coxeter_part(x):
            raise UsageError(f"{x} does not have finite Coxeter part")
        jobs.append((tau, x, "command line"))
    else:
        for tau in _selected_taus(g, cfg):
            for x, origin in coset_class_representatives(g, tau):
                jobs.append((tau, x, origin))

    rng = random.Random(cfg.seed)
    results, lines = [], []
    ok = True
    for tau, x, origin in jobs:
        starts = [x] + [random_conjugate(x, rng, cfg.conjugate_length) for _ in range(cfg.conjugates)]
        reference = None
        for n, start in enumerate(starts):
            report = verify_main_theorem(x, tau, cfg.budget, start=start, log_edges=cfg.edges)
            if reference is None:
                reference = set(report.minimal_set)
            else:
                report.checks["same_minimal_as_representative"] = set(report.minimal_set) == reference
            ok = ok and report.passed
            d = report.to_dict(include_edges=cfg.edges)
            d["checks"].update({k: v for k, v in report.checks.items() if k not in CHECK_NAMES})
            d["origin"] = origin
            d["start_index"] = n
            results.append(d)
            verdict = "PASS" if report.passed else "FAIL"
            lines.append(
                f"{g.name} {tau.label} [{origin}] start#{n} {d['start']}: "
                f"J={_fmt_set(report.J_found or ())} |O_min|={len(report.minimal_set)} "
                f"min_length={report.min_length} closure={report.closure_size} {verdict}"
            )
            if n == 0 or not report.passed:
                lines.append("  " + _check_line(report.checks))
            if n == 0:
                lines.append("  O_min: " + "; ".join(d["minimal_set"]))
    return (EXIT_OK if ok else EXIT_FAIL), {"reports": results}, lines


# min-elements


def cmd_min_elements(cfg: RunConfig) -> tuple[int, dict, list[str]]:
    g = _group(cfg)
    if cfg.representative != "from-table":
        x = _parse_rep(g, cfg.representative)
        tau = _coset_of(g, x)
    else:
        taus = _selected_taus(g, cfg)
        if len(taus) != 1:
            raise UsageError("give --rep or a single --tau")
        tau = taus[0]
        x, _ = class_representative(g, tau)
    closure = descent_closure(x, cfg.budget)
    finite_cox = has_finite_coxeter_part(x)
    minimal = sorted(closure.minimal, key=AffineElement.sort_key)
    rows = []
    lines = [f"{g.name} class of {x} in W_a {tau.label}"]
    if not finite_cox:
        lines.append("  note: no finite Coxeter part; this stratum only bounds the minimal length from above")
    if closure.overflow:
        lines.append(f"  PARTIAL: node budget {cfg.budget} exceeded")
    for m in minimal:
        supp = sorted(g.support(m, tau))
        rows.append({"element": str(m), "length": m.length(), "support": supp, "word": g.affine_word_text(m)})
        lines.append(f"{m}  length={m.length()}  support={_fmt_set(supp)}  word={g.affine_word_text(m)}")
    data = {
        "representative": str(x),
        "tau": tau.label,
        "finite_coxeter_part": finite_cox,
        "partial": closure.overflow,
        "closure_size": len(closure.reachable),
        "minimal": rows,
    }
    return (EXIT_BUDGET if closure.overflow else EXIT_OK), data, lines


# tables

_TABLE_SCOPE = [
    ("A", "id", 1),
    ("A", "flip", 2),
    ("B", "id", 2),
    ("C", "id", 2),
    ("D", "id", 4),
    ("D", "flip", 4),
    ("D", "triality", 4),
    ("E", "id", 6),
    ("E", "flip", 6),
]


def _table_jobs(cfg: RunConfig) -> list[tuple[str, int, str]]:
    jobs = []
    for t, tw, lo in _TABLE_SCOPE:
        if cfg.type_letter and t != cfg.type_letter.upper():
            continue
        if cfg.twist != "id" and tw != cfg.twist:
            continue
        if cfg.rank is not None:
            ranks = [cfg.rank]
        else:
            ranks = range(lo, cfg.max_rank + 1)
        for n in ranks:
            if tw == "triality" and n != 4:
                continue
            if t == "E" and (n not in (6, 7) or (tw == "flip" and n != 6)):
                continue
            try:
                twist_permutation(build_root_system(t, n), tw)
            except RootSystemError:
                continue
            jobs.append((t, n, tw))
    if not jobs:
        raise UsageError("no table rows in the requested scope")
    return jobs


def cmd_tables(cfg: RunConfig) -> tuple[int, dict, list[str]]:
    fixture = {(e.rank, e.index): e for e in load_type_a_fixture()}
    results, verified, lines = [], [], []
    ok = True
    for t, n, tw in _table_jobs(cfg):
        for e in table_entries(t, n, tw):
            r = verify_entry(e)
            d = r.to_dict()
            if t == "A" and tw == "id":
                fresh = derive_entry("A", n, e.index)
                match = fixture.get((n, e.index)) == fresh
                d["fixture_match"] = match
                ok = ok and match
            ok = ok and r.passed
            results.append(d)
            verified.append(r)
    lines.append(render_table(verified))
    mism = [d["label"] for d in results if d.get("fixture_match") is False]
    if mism:
        lines.append("type A rows differing from the fixture: " + ", ".join(mism))
    lines.append(f"{sum(r.passed for r in verified)}/{len(verified)} rows pass")
    return (EXIT_OK if ok else EXIT_FAIL), {"entries": results}, lines


# classify


def cmd_classify(cfg: RunConfig) -> tuple[int, dict, list[str]]:
    g = _group(cfg)
    k = cfg.delta_pow if cfg.delta_pow is not None else (0 if cfg.twist == "id" else 1)
    fin = g.finite
    c = fin.standard_coxeter_element(k)
    cg = CoinvariantGroup(g, k)
    cert = lattice_identity_check(c)
    reps = []
    for v in cg.elements():
        x = classify_representative(c, v, g)
        reps.append({
            "kottwitz": list(v),
            "representative": str(x),
            "kottwitz_of_representative": list(kottwitz(x, k, cg)),
            "finite_coxeter_part": has_finite_coxeter_part(x),
        })
    ok = bool(cert) and all(r["finite_coxeter_part"] and r["kottwitz"] == r["kottwitz_of_representative"] for r in reps)
    lines = [
        f"{g.name} coset W0 d^{k}: coinvariants (P/Q)_delta = {cg.describe()} (order {cg.order})",
        f"Coxeter element: {c}",
        f"(1 - c delta) P = (1 - delta) P + Q: {'true' if cert.equal else 'FALSE'}",
        f"inclusion (1 - c delta) P in (1 - delta) P + Q: {'true' if cert.inclusion else 'FALSE'}",
        f"simple coroots in (1 - c delta) P: {'true' if cert.coroots_in_image else 'FALSE'}",
    ]
    for i, pre in sorted(cert.preimages.items()):
        lines.append(f"  alpha{i}^vee = (1 - c delta) {list(pre)}")
    for r in reps:
        lines.append(f"  kappa={r['kottwitz']}: {r['representative']}")
    data = {"coinvariants": cg.to_dict(), "certificate": cert.to_dict(), "representatives": reps}
    return (EXIT_OK if ok else EXIT_FAIL), data, lines


COMMANDS = {
    "verify": cmd_verify,
    "min-elements": cmd_min_elements,
    "tables": cmd_tables,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fincox", description="Minimal-length elements of classes with finite Coxeter part.")
    p.add_argument("--version", action="version", version=f"fincox {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, rank_required=True):
        sp.add_argument("--type", dest="type_letter", required=rank_required)
        sp.add_argument("--rank", type=int, required=rank_required)
        sp.add_argument("--twist", default="id", choices=["id", "flip", "triality"])
        sp.add_argument("--json", dest="output_format", action="store_const", const="json", default="text")
        sp.add_argument("-o", "--output")

    for name in ("verify", "min-elements"):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--tau", help="minuscule index, or 'identity'; default: all of Omega'")
        sp.add_argument("--delta-pow", type=int)
        sp.add_argument("--rep", dest="representative", default="from-table")
        sp.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
        if name == "verify":
            sp.add_argument("--conjugates", type=int, default=10)
            sp.add_argument("--conj-length", dest="conjugate_length", type=int, default=6)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--edges", action="store_true", help="include the descent edge log in JSON")

    sp = sub.add_parser("tables")
    common(sp, rank_required=False)
    sp.add_argument("--max-rank", type=int, default=7)

    sp = sub.add_parser("classify")
    common(sp)
    sp.add_argument("--delta-pow", type=int)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields)
    try:
        cfg.validate()
        status, data, lines = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"fincox: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"fincox: node budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if cfg.output_format == "json":
        config = {k: v for k, v in asdict(cfg).items() if k not in ("output", "output_format")}
        text = json.dumps(
            {"schema_version": SCHEMA_VERSION, "command": cfg.command, "config": config,
             "passed": status == EXIT_OK, **data},
            indent=2,
        ) + "\n"
    else:
        text = "\n".join(lines) + "\n" + ("PASS\n" if status == EXIT_OK else "FAIL\n")
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
