"""Command-line front end.

Exit codes: 0 every check passed, 2 some check failed, 3 precondition or
parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .characters import (
    UnsupportedMorphism,
    bracket,
    char_table,
    character_of_derivation,
    check_additivity,
    is_trivial_on_loops,
)
from .config import Context, RunConfig
from .derivations import CentralDerivation, TableDerivation, check_graded_leibniz, leibniz_extend, validate_tau
from .dg import DEMOS, GroupTransport, check_dg, check_iso, validate_automorphism
from .algebra import validate_grading
from .groupoid import ActionGroupoid, check_groupoid_axioms
from .groups import validate_group_map
from .reports import ParseError, PreconditionError

SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 2, 3
CHECKS = ("leibniz", "additivity", "dg", "loops", "groupoid-axioms")


def envelope(command: str, reports: list, window=None, extra: dict | None = None) -> dict:
    status = "pass" if all(r.passed for r in reports) else "fail"
    out = {
        "schema": SCHEMA,
        "command": command,
        "status": status,
        "reports": [r.to_dict() for r in reports],
    }
    if window is not None:
        out["window"] = window.summary()
    if extra:
        out.update(extra)
    return out


def error_envelope(command: str, exc: Exception) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        err["line"] = exc.line
        err["column"] = exc.column
    return {"schema": SCHEMA, "command": command, "status": "error", "error": err}


# -- commands ---------------------------------------------------------------

def cmd_validate(ctx: Context) -> dict:
    w = ctx.window
    reports = [validate_grading(ctx.grading, w)]
    for name in ctx.derivation_names():
        d = ctx.derivation(name)
        if isinstance(d, CentralDerivation):
            r = validate_tau(d.tau, ctx.grading, w)
            r.details["derivation"] = name
            r.details["centrality"] = d.centrality.mode
            reports.append(r)
        elif isinstance(d, TableDerivation):
            _, r = leibniz_extend(ctx.grading, d.table)
            r.details["derivation"] = name
            reports.append(r)
    for name in ctx.automorphism_names():
        f = ctx.automorphism(name)
        if isinstance(f, GroupTransport):
            r = validate_group_map(f.map, w)
            r.details["automorphism"] = name
            reports.append(r)
        r = validate_automorphism(f, w)
        r.details["automorphism"] = name
        reports.append(r)
    return envelope("validate", reports, w)


def _selected(ctx: Context, names):
    return list(names) if names else ctx.derivation_names()


def cmd_check(ctx: Context, check: str, names=None) -> dict:
    cfg = ctx.config
    w = ctx.window
    if check not in CHECKS:
        raise PreconditionError(f"unknown check {check!r}; choose from {', '.join(CHECKS)}")
    reports = []
    if check == "groupoid-axioms":
        reports.append(check_groupoid_axioms(ActionGroupoid(ctx.grading), w, cfg.sample_cap, cfg.seed))
        return envelope("check", reports, w, {"check": check})
    for name in _selected(ctx, names):
        d = ctx.derivation(name)
        if check == "leibniz":
            r = check_graded_leibniz(d, w, cfg.sample_cap, cfg.seed)
        elif check == "additivity":
            r = check_additivity(character_of_derivation(d), w, cfg.sample_cap, cfg.seed)
        elif check == "dg":
            r = check_dg(d, ctx.grading, cfg.mode, w)
        else:
            r = is_trivial_on_loops(character_of_derivation(d), w)
        r.details["name"] = name
        reports.append(r)
    return envelope("check", reports, w, {"check": check})


def cmd_char_table(ctx: Context, name: str) -> dict:
    chi = character_of_derivation(ctx.derivation(name))
    return {"schema": SCHEMA, "command": "char-table", "status": "pass", "derivation": name,
            "window": ctx.window.summary(), "table": char_table(chi, ctx.window)}


def cmd_bracket(ctx: Context, n1: str, n2: str) -> dict:
    chi = bracket(character_of_derivation(ctx.derivation(n1)), character_of_derivation(ctx.derivation(n2)))
    return {"schema": SCHEMA, "command": "bracket", "status": "pass", "derivations": [n1, n2],
            "window": ctx.window.summary(), "table": char_table(chi, ctx.window)}


def cmd_check_iso(ctx: Context, n1: str, n2: str, fname: str) -> dict:
    r = check_iso(ctx.derivation(n1), ctx.derivation(n2), ctx.automorphism(fname), ctx.window)
    r.details["names"] = [n1, n2, fname]
    return envelope("check-iso", [r], ctx.window)


def cmd_demo(name: str, length: int | None = None) -> dict:
    if name not in DEMOS:
        raise PreconditionError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
    bundle = DEMOS[name]() if length is None else DEMOS[name](length=length)
    out = bundle.to_dict()
    return {"schema": SCHEMA, "command": "demo", **out}


# -- rendering --------------------------------------------------------------

def _render_table(table: dict) -> list:
    rows, cols, vals = table["rows"], table["columns"], table["values"]
    width = max([len(s) for s in rows + cols] + [len(v) for row in vals for v in row] + [3])
    lines = [" " * width + " | " + " ".join(c.rjust(width) for c in cols)]
    lines.append("-" * len(lines[0]))
    for r, row in zip(rows, vals):
        lines.append(r.rjust(width) + " | " + " ".join(v.rjust(width) for v in row))
    return lines


def render_text(env: dict) -> str:
    lines = [f"{env['command']}: {env['status'].upper()}"]
    if env["status"] == "error":
        lines.append(f"  {env['error']['type']}: {env['error']['message']}")
        return "\n".join(lines) + "\n"
    if "window" in env:
        lines.append(f"  window: {env['window']['size']} elements")
    reports = env.get("reports", [])
    for r in reports if isinstance(reports, list) else []:
        d = r["details"]
        name = d.get("name") or d.get("derivation") or d.get("automorphism")
        lines.append(f"  [{r['status']}] {r['check']}" + (f" ({name})" if name else ""))
        for cx in r["counterexamples"][:3]:
            lines.append(f"      counterexample: {json.dumps(cx, sort_keys=True)}")
    if isinstance(reports, dict):
        for k, r in reports.items():
            lines.append(f"  [{r['status']}] {k} (expected {env['expected'][k]})")
            for cx in r["counterexamples"][:3]:
                lines.append(f"      counterexample: {json.dumps(cx, sort_keys=True)}")
    if "table" in env:
        lines.extend("  " + s for s in _render_table(env["table"]))
    return "\n".join(lines) + "\n"


def render(env: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(env, indent=2, sort_keys=True) + "\n"
    return render_text(env)


def exit_code(env: dict) -> int:
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(env["status"], EXIT_ERROR)


# -- argument handling ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--window-length", type=int, help="override the window word length")
    common.add_argument("--mode", choices=("cochain", "chain"), help="degree shift of d (+1 or -1)")
    common.add_argument("--format", choices=("text", "json"), help="output format")
    common.add_argument("--seed", type=int, help="seed for sampled checks")

    p = argparse.ArgumentParser(prog="graded-derivations", description="Graded derivations of group algebras.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="audit grading, tau, centrality and maps")
    c = sub.add_parser("check", parents=[common], help="run one property check")
    c.add_argument("--check", required=True, choices=CHECKS)
    c.add_argument("derivations", nargs="*", help="names (default: all)")
    b = sub.add_parser("bracket", parents=[common], help="bracket character over the window")
    b.add_argument("d1")
    b.add_argument("d2")
    t = sub.add_parser("char-table", parents=[common], help="character matrix over the window")
    t.add_argument("derivation")
    i = sub.add_parser("check-iso", parents=[common], help="DG isomorphism test")
    i.add_argument("d1")
    i.add_argument("d2")
    i.add_argument("automorphism")
    d = sub.add_parser("demo", parents=[common], help="built-in demonstrations")
    d.add_argument("name", choices=sorted(DEMOS))
    return p


def _context(args) -> Context:
    if not args.config:
        raise PreconditionError("--config is required for this command")
    cfg = RunConfig.load(args.config)
    if args.window_length is not None:
        cfg.window["length"] = args.window_length
    if args.mode:
        cfg.mode = args.mode
    if args.seed is not None:
        cfg.seed = args.seed
    return Context(cfg)


def run(argv=None) -> tuple:
    """Returns ``(envelope, format)``; never raises for library errors."""
    args = build_parser().parse_args(argv)
    fmt = args.format or "text"
    try:
        if args.command == "demo":
            return cmd_demo(args.name, args.window_length), fmt
        ctx = _context(args)
        fmt = args.format or ctx.config.output
        if args.command == "validate":
            env = cmd_validate(ctx)
        elif args.command == "check":
            env = cmd_check(ctx, args.check, args.derivations)
        elif args.command == "bracket":
            env = cmd_bracket(ctx, args.d1, args.d2)
        elif args.command == "char-table":
            env = cmd_char_table(ctx, args.derivation)
        else:
            env = cmd_check_iso(ctx, args.d1, args.d2, args.automorphism)
        env["config"] = {"seed": ctx.config.seed, "mode": ctx.config.mode}
        return env, fmt
    except (ParseError, PreconditionError, UnsupportedMorphism, OSError, ValueError) as exc:
        return error_envelope(args.command, exc), fmt


def main(argv=None) -> int:
    start = time.perf_counter()
    env, fmt = run(argv)
    env["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    sys.stdout.write(render(env, fmt))
    return exit_code(env)


if __name__ == "__main__":
    sys.exit(main())
