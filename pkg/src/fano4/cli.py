"""Command-line interface: ``fano4 <group> <command>``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import toric
from .catalog import (
    TABLE_1,
    builtin_recipes,
    evaluate_recipe,
    get_recipe,
    recipe_from_json,
    search_d1,
    toric_report,
    verify_table,
)
from .errors import Fano4Error, StructuralError
from .fan import Fan, validate_fan


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(f"error: cannot read {path}: {exc}")


def _emit(obj: dict, fmt: str, text_lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True, indent=2))
    else:
        print("\n".join(text_lines))


def _report_lines(rep) -> list[str]:
    lines = [f"{rep.name}:"]
    for key in ("K4", "K2c2", "chi_mK", "chiO", "rho", "b3", "h22", "h13", "chiT", "delta", "fano"):
        val = getattr(rep, key)
        lines.append(f"  {key:7s} {'n/a' if val is None else val}")
    lines.append(f"  betti   {list(rep.betti)}")
    return lines


def _split_envelope(data: dict) -> tuple[Fan, list[int] | None]:
    if "fan" in data:
        return Fan.from_json(data["fan"]), data.get("divisor")
    return Fan.from_json(data), None


def cmd_fan_validate(args) -> int:
    fan, _ = _split_envelope(_load_json(args.file))
    v = validate_fan(fan)
    print(f"smooth: {v.smooth}")
    print(f"complete: {v.complete}")
    for d in v.diagnostics:
        print(f"  - {d}")
    return 0 if v.smooth and v.complete else 1


def cmd_fan_invariants(args) -> int:
    fan, divisor = _split_envelope(_load_json(args.file))
    rep = toric_report(fan, Path(args.file).stem)
    obj = rep.to_json()
    lines = _report_lines(rep)
    if divisor is not None:
        nef, ample = toric.nef_ample_flags(fan, divisor)
        d4 = toric.intersection_number(fan, [divisor] * fan.dim)
        chi = toric.chi_divisor(fan, divisor)
        obj["divisor"] = {"coefficients": list(divisor), "self_intersection": d4,
                          "chi": chi, "nef": nef, "ample": ample}
        lines.append(f"  divisor {list(divisor)}: D^4={d4} chi={chi} nef={nef} ample={ample}")
    _emit(obj, args.format, lines)
    return 0


def cmd_recipe_eval(args) -> int:
    if Path(args.recipe).is_file():
        recipe = recipe_from_json(_load_json(args.recipe))
    else:
        recipe = get_recipe(args.recipe)
    rep = evaluate_recipe(recipe)
    obj = rep.to_json()
    lines = _report_lines(rep)
    status = 0
    if recipe.expected:
        verdict = verify_table(rep, recipe.expected)
        obj["verdict"] = {"status": verdict.status, "missing": list(verdict.missing),
                          "diffs": {k: list(v) for k, v in verdict.diffs.items()}}
        lines.append(f"  expected: {verdict.describe()}")
        status = 0 if verdict.status != "fail" else 1
    _emit(obj, args.format, lines)
    return status


def cmd_catalog_verify(args) -> int:
    recipes = builtin_recipes()
    if args.name:
        recipes = [r for r in recipes if r.name == args.name]
    ok = True
    hits = None
    for r in recipes:
        if not r.constructible:
            if hits is None:
                hits = search_d1(3)
            found = [h.degrees for h in hits if r.name in h.matches]
            where = f"matched by d=1 search at (b,c)={found[0]}" if found else "no search hit matches"
            print(f"{r.name}: not constructible ({where})")
            continue
        rep = evaluate_recipe(r)
        v = verify_table(rep, r.expected)
        full = verify_table(rep, TABLE_1[r.name])
        ok &= v.passed
        print(f"{r.name}: {v.describe()} (full table row: {full.describe()})")
    return 0 if ok else 1


def cmd_search_d1(args) -> int:
    hits = search_d1(args.max_degree)
    obj = {"max_degree": args.max_degree, "hits": [h.to_json() for h in hits]}
    lines = [f"{len(hits)} distinct Fano configuration(s) with rho=5, delta=3:"]
    for h in hits:
        r = h.report
        extra = f" (also {', '.join(map(str, h.duplicates))})" if h.duplicates else ""
        lines.append(
            f"  (b,c)={h.degrees}{extra}: K4={r.K4} K2c2={r.K2c2} chi(-K)={r.chi_mK} "
            f"chiT={r.chiT} delta={r.delta} table={','.join(h.matches) or '-'}"
        )
    _emit(obj, args.format, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fano4", description=__doc__)
    groups = p.add_subparsers(dest="group", required=True)

    fan = groups.add_parser("fan", help="operations on fan files").add_subparsers(dest="cmd", required=True)
    v = fan.add_parser("validate", help="check smoothness and completeness")
    v.add_argument("file")
    v.set_defaults(func=cmd_fan_validate)
    inv = fan.add_parser("invariants", help="invariants of a smooth complete toric fourfold")
    inv.add_argument("file")
    inv.add_argument("--format", choices=("json", "text"), default="text")
    inv.set_defaults(func=cmd_fan_invariants)

    rec = groups.add_parser("recipe", help="construction recipes").add_subparsers(dest="cmd", required=True)
    ev = rec.add_parser("eval", help="evaluate a recipe file or built-in recipe name")
    ev.add_argument("recipe")
    ev.add_argument("--format", choices=("json", "text"), default="text")
    ev.set_defaults(func=cmd_recipe_eval)

    cat = groups.add_parser("catalog", help="built-in catalog").add_subparsers(dest="cmd", required=True)
    ver = cat.add_parser("verify", help="check built-in recipes against the table")
    ver.add_argument("--name", choices=[r.name for r in builtin_recipes()])
    ver.set_defaults(func=cmd_catalog_verify)

    srch = groups.add_parser("search", help="searches").add_subparsers(dest="cmd", required=True)
    d1 = srch.add_parser("d1", help="toric blow-ups of three sections of P(O+O(b)+O(c))")
    d1.add_argument("--max-degree", type=int, default=3)
    d1.add_argument("--format", choices=("json", "text"), default="text")
    d1.set_defaults(func=cmd_search_d1)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StructuralError as exc:
        print(f"structural error: {exc}", file=sys.stderr)
        return 2
    except Fano4Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
