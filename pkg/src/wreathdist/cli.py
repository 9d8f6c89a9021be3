"""Command-line front end.

Exit codes: 0 ok, 1 property failure, 2 usage or parse error, 3 resource cap.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from .algebra import parse_poly
from .distortion import distortion_exponent
from .exemplary import ExemplarySubgroup
from .reduction import (LaurentMatrix, load_generator_file, parse_generator_file, predict_file, snf_laurent)
from .report import DEFAULT_LS, pqp_rows, sweep
from .tsp import DEFAULT_CAP, SupportCapExceeded
from .verify import SUITES, run_suite
from .wreath import (BallMemoryExceeded, WreathGroup, format_word, parse_element, wr_geodesic_word,
                     wr_len_closed, wr_len_trace)

CACHE_ENV = "WREATHDIST_CACHE_DIR"
SUBJECTS = Path(__file__).parent / "subjects"


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    """``4,8,16`` or ``2..8``."""
    text = str(text).strip()
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------

def cmd_length(args) -> int:
    G = WreathGroup.parse(args.group)
    u = parse_element(args.elem, G)
    if G.d == 1 and not args.heuristic:
        br = wr_len_closed(u)
    else:
        br = wr_len_trace(u, args.support_cap, heuristic=args.heuristic)
    word = wr_geodesic_word(u, args.support_cap) if br.certified else []
    if args.json:
        out = br.to_json()
        out["word"] = word
        print(json.dumps(out, sort_keys=True))
    else:
        print(f"total: {br.total}")
        print(f"a_part: {br.a_part}")
        print(f"trace_part: {br.trace_part}")
        print(f"certified: {br.certified}")
        if br.certified:
            print(f"word: {format_word(word, unicode=True)}")
    return 0


def _subject(args):
    if args.poly and args.gens:
        raise UsageError("give either --poly or --gens")
    if args.poly:
        return ExemplarySubgroup.parse(args.poly)
    if args.gens:
        p = Path(args.gens)
        if not p.exists() and (SUBJECTS / args.gens).exists():
            p = SUBJECTS / args.gens
        return load_generator_file(p)
    raise UsageError("sweep needs --poly or --gens")


def _cache_path(key: dict) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:24]
    return Path(root) / f"sweep-{digest}.json"


def cmd_sweep(args) -> int:
    subject = _subject(args)
    ls = _ints(args.l) if args.l else list(DEFAULT_LS)
    key = {"subject": str(subject), "gens": args.gens and Path(args.gens).name, "ls": ls,
           "exact_max_l": args.exact_max_l, "time_limit": args.time_limit, "fit": args.fit}
    cache = _cache_path(key)
    if cache is not None and cache.exists():
        data = json.loads(cache.read_text())
        csv_text, json_text = data["csv"], data["json"]
    else:
        rep = sweep(subject, ls, args.exact_max_l, args.time_limit, args.fit)
        csv_text, json_text = rep.to_csv(), rep.dumps() + "\n"
        if cache is not None:
            cache.parent.mkdir(parents=True, exist_ok=True)
            cache.write_text(json.dumps({"csv": csv_text, "json": json_text}))
    if args.csv:
        _emit(csv_text, args.csv)
    if args.json:
        _emit(json_text, args.json)
    if not args.csv and not args.json:
        sys.stdout.write(csv_text)
        rep = json.loads(json_text)
        print(f"# predicted exponent {rep['predicted_exponent']}, fitted slope "
              f"{rep['fitted_slope']}, upper slope {rep['fitted_slope_upper']}, "
              f"last doubling log2 {rep['last_doubling_log2']}")
    return 0


def cmd_z2wrz2(args) -> int:
    rows = pqp_rows(args.n, args.k, _ints(args.l), args.support_cap)
    lines = ["l,g_length,g_exact,h_lower,h_upper,h_exact,ratio"]
    for r in rows:
        lines.append(f"{r.l},{r.g_length},{int(r.g_exact)},{r.h_lower},{r.h_upper},{int(r.h_exact)},{r.ratio:.6f}")
    _emit("\n".join(lines) + "\n", args.csv)
    return 0


def cmd_exponent(args) -> int:
    cert = distortion_exponent(parse_poly(args.poly))
    if args.json:
        print(json.dumps(cert.to_json(), sort_keys=True))
    else:
        print(f"h = {cert.h}")
        print(f"kappa = {cert.kappa}, exponent = {cert.exponent}")
        for lv in cert.levels:
            print(f"  level {lv.multiplicity}: {lv.factor}  unit-circle roots {lv.unit_roots.count}, "
                  f"off-circle {lv.unit_roots.off_circle}")
    return 0


def cmd_snf(args) -> int:
    if args.matrix:
        rows = json.loads(args.matrix)
        M = LaurentMatrix([[parse_poly(str(e)) for e in r] for r in rows])
    elif args.gens:
        gf = load_generator_file(args.gens)
        M = LaurentMatrix.from_columns(gf.gens)
    else:
        raise UsageError("snf needs --matrix or --gens")
    res = snf_laurent(M)
    print(json.dumps(res.to_json(), sort_keys=True))
    return 0


def cmd_reduce(args) -> int:
    gf = load_generator_file(args.gens) if args.gens else parse_generator_file(args.inline)
    pred = predict_file(gf)
    if args.json:
        print(json.dumps(pred.to_json(), sort_keys=True))
    else:
        if pred.kind == "abelian":
            print("abelian; undistorted")
        elif pred.reduced is not None:
            r = pred.reduced
            print(f"A' = {r.A}, gens' = b" + "".join(f", ({', '.join(str(p) for p in g)})" for g in r.gens))
        else:
            print("diagonal: " + ", ".join(str(d) for d in pred.diagonal))
        print(f"predicted exponent: {pred.exponent}")
    return 0


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    results = run_suite(args.suite, args.seed)
    for r in results:
        for c in r.checks:
            print(json.dumps({"suite": r.suite, **c.to_json()}, sort_keys=True))
        print(f"{'PASS' if r.passed else 'FAIL'} {r.suite}")
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wreathdist", description="Word length and subgroup distortion in wreath products.")
    p.add_argument("--config", help="JSON file with option values (flags given on the command line win)")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("length", help="word length of an element")
    s.add_argument("--group", required=True, help='e.g. "Z wr Z", "Z2 wr Z^2"')
    s.add_argument("--elem", required=True, help='e.g. "x*a; 0" or "{ (0,0)->1 | (0,0) }"')
    s.add_argument("--support-cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--heuristic", action="store_true", help="non-certified trace for large supports")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_length)

    s = sub.add_parser("sweep", help="distortion curve with fitted slope")
    s.add_argument("--poly", help="exemplary polynomial h, e.g. 1-x")
    s.add_argument("--gens", help="generator file (JSON)")
    s.add_argument("--l", help="l values, e.g. 4,8,16 or 2..8 (default dyadic 4..64)")
    s.add_argument("--exact-max-l", type=int, default=8)
    s.add_argument("--time-limit", type=float, default=20.0, help="seconds per exact solve")
    s.add_argument("--fit", default="lower", choices=["lower", "upper", "exact"])
    s.add_argument("--csv")
    s.add_argument("--json")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("z2wrz2", help="distorted subgroup of Z_n wr Z^k")
    s.add_argument("--l", default="2..8")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--support-cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--csv")
    s.set_defaults(func=cmd_z2wrz2)

    s = sub.add_parser("exponent", help="distortion exponent certificate of a polynomial")
    s.add_argument("--poly", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_exponent)

    s = sub.add_parser("snf", help="Smith normal form over Q[x, 1/x]")
    s.add_argument("--matrix", help='JSON rows, e.g. [["1-x", "0"], ["0", "2"]]')
    s.add_argument("--gens", help="generator file; columns are the generators")
    s.set_defaults(func=cmd_snf)

    s = sub.add_parser("reduce", help="predicted exponent of a generator file")
    s.add_argument("--gens")
    s.add_argument("--inline", help="generator file contents as a JSON string")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("verify", help="run a property suite")
    s.add_argument("suite")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    try:
        cfg = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    sub_actions = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in argv if a in sub_actions.choices), None)
    if command is None:
        command = cfg.get("command")
        if command not in sub_actions.choices:
            raise UsageError("config needs a valid 'command'")
        argv = argv + [command]
    defaults = {k.replace("-", "_"): v for k, v in cfg.items() if k != "command"}
    if "l" in defaults and isinstance(defaults["l"], list):
        defaults["l"] = ",".join(map(str, defaults["l"]))
    sub_actions.choices[command].set_defaults(**defaults)
    return argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_help()
            return 2
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (SupportCapExceeded, BallMemoryExceeded, RecursionError) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError, KeyError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
