"""Command line: ``foldbranch fold|branch|verify``.

Weights are printed as integer arrays in fundamental-weight coordinates of
the folded system, Bourbaki node numbering. Standard output carries only the
requested artifact; logging goes to standard error.

Exit codes: 0 success, 1 verification failed, 2 invalid input, 3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Callable

from . import branching
from .cache import CACHE_ENV, CharacterStore
from .charalg import DEFAULT_TERM_GUARD, configured
from .errors import InvalidInput, ResourceGuardExceeded
from .folding import SUPPORTED_PAIRS, FoldedPair, folded_pair

log = logging.getLogger("foldbranch")

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3
FORMATS = ("json", "csv", "text")
SUITES = ("panyushev", "lemma", "proposition", "theorem", "counterexample", "triality", "all")
MIN_TERM_GUARD = 10**4


@dataclass(frozen=True)
class RunConfig:
    pair: str | None
    d: int = 1
    format: str = "json"
    threads: int = 1
    term_guard: int = DEFAULT_TERM_GUARD
    cache_dir: str | None = None
    allow_large: bool = False
    box: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.pair is not None and self.pair not in SUPPORTED_PAIRS:
            raise InvalidInput(
                f"unsupported pair {self.pair!r}; choose from {', '.join(SUPPORTED_PAIRS)}")
        if self.d < 1:
            raise InvalidInput("--d must be a positive integer")
        if self.format not in FORMATS:
            raise InvalidInput(f"--format must be one of {FORMATS}")
        if self.threads < 1:
            raise InvalidInput("--threads must be positive")
        if self.term_guard < MIN_TERM_GUARD:
            raise InvalidInput(f"--term-guard must be at least {MIN_TERM_GUARD}")

    def folded(self) -> FoldedPair:
        if self.pair is None:
            raise InvalidInput("this command needs --pair")
        return folded_pair(self.pair)


def _pair_header(fp: FoldedPair) -> dict:
    return {"ambient": str(fp.ambient.type), "folded": str(fp.folded.type), "order": fp.order}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- fold -------------------------------------------------------------------


def fold_summary(fp: FoldedPair) -> dict:
    fs = fp.folded
    return {
        "pair": _pair_header(fp),
        "order": fp.order,
        "automorphism": fp.theta.cycles(),
        "orbit_map": [k + 1 for k in fp.orbit_map],
        "short_simple": [i + 1 for i in fp.short_simple_nodes],
        "long_simple": [i + 1 for i in fp.long_simple_nodes],
        "multiplicities": [
            {"root": list(b), "short": fp.is_short(b), "m": fp.multiplicity(b)}
            for b in fs.positive_roots
        ],
        "rho0": list(fs.rho()),
        "rho_s": list(fp.rho_s()),
        "rho_l": list(fp.rho_l()),
        "p_rho": list(fp.p_rho()),
    }


def cmd_fold(config: RunConfig) -> tuple[int, str]:
    summary = fold_summary(config.folded())
    if config.format == "text":
        p = summary["pair"]
        lines = [
            f"{p['ambient']} -> {p['folded']}  automorphism {summary['automorphism']} (order {p['order']})",
            f"short simple nodes: {summary['short_simple']}  long simple nodes: {summary['long_simple']}",
            f"rho0 = {summary['rho0']}  rho_s = {summary['rho_s']}  rho_l = {summary['rho_l']}",
            f"p(rho) = {summary['p_rho']}",
            "positive root (simple-root coords)  short  m",
        ]
        lines += [f"  {m['root']}  {'s' if m['short'] else 'l'}  {m['m']}"
                  for m in summary["multiplicities"]]
        return EXIT_OK, "\n".join(lines) + "\n"
    if config.format == "csv":
        raise InvalidInput("fold supports --format json or text")
    return EXIT_OK, _dump(summary)


# -- branch -----------------------------------------------------------------


def branch_document(fp: FoldedPair, d: int, dec) -> dict:
    fs = fp.folded
    rows = [{"weight": list(w), "multiplicity": m, "dim": fs.weyl_dim(w)} for w, m in dec]
    return {
        "pair": _pair_header(fp),
        "d": d,
        "constituents": rows,
        "mass_audit": {
            "expected": (d + 1) ** fp.ambient.n_positive,
            "actual": sum(r["multiplicity"] * r["dim"] for r in rows),
        },
    }


def cmd_branch(config: RunConfig) -> tuple[int, str]:
    fp = config.folded()
    dec = branching.branch_rho(fp, config.d, allow_large=config.allow_large)
    doc = branch_document(fp, config.d, dec)
    if config.format == "json":
        return EXIT_OK, _dump(doc)
    if config.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["pair", "d", "weight", "multiplicity", "dim"])
        for row in doc["constituents"]:
            writer.writerow([fp.pair_id, config.d, " ".join(map(str, row["weight"])),
                             row["multiplicity"], row["dim"]])
        return EXIT_OK, buf.getvalue()
    lines = [f"res V({config.d} rho) for {fp.pair_id}: {len(doc['constituents'])} constituents"]
    lines += [f"  {r['weight']}  x{r['multiplicity']}  dim {r['dim']}" for r in doc["constituents"]]
    audit = doc["mass_audit"]
    lines.append(f"mass audit: expected {audit['expected']}, actual {audit['actual']}")
    return EXIT_OK, "\n".join(lines) + "\n"


# -- verify -----------------------------------------------------------------


def _counterexample_rank(fp: FoldedPair) -> int | None:
    t = fp.folded.type
    if t.family == "C" and t.rank % 2 == 1 and t.rank in branching.COUNTEREXAMPLE_RANKS:
        return t.rank
    return None


def _run_suite(name: str, fp: FoldedPair, config: RunConfig) -> dict:
    """Run one suite; returns {"suite", "status", "details"}."""
    if name == "panyushev":
        ok = branching.verify_panyushev(fp)
        details = {"identity_holds": ok}
    elif name == "lemma":
        ok = branching.verify_lemma(fp)
        details = {"multiset_equal": ok, "subsets": sum(branching.subset_weights(fp).values())}
    elif name == "proposition":
        rep = branching.verify_proposition(fp, config.box)
        ok, details = rep.passed, rep.to_dict()
    elif name == "theorem":
        rep = branching.verify_theorem(fp, config.d, allow_large=config.allow_large)
        ok, details = rep.passed, rep.to_dict()
    elif name == "counterexample":
        n = _counterexample_rank(fp)
        if n is None:
            raise InvalidInput(f"the counterexample applies to A5C3 or A9C5, not {fp.pair_id}")
        rep = branching.counterexample_demo(n)
        ok, details = rep.passed, rep.to_dict()
    elif name == "triality":
        if fp.pair_id != "D4G2":
            raise InvalidInput(f"the triality check applies to D4G2, not {fp.pair_id}")
        rep = branching.triality_demo(config.d)
        ok, details = rep.passed, rep.to_dict()
    else:
        raise InvalidInput(f"unknown suite {name!r}")
    return {"suite": name, "status": "passed" if ok else "failed", "details": details}


def _applicable(name: str, fp: FoldedPair) -> bool:
    if name in ("panyushev", "lemma", "proposition"):
        return fp.order == 2
    if name == "counterexample":
        return _counterexample_rank(fp) is not None
    if name == "triality":
        return fp.pair_id == "D4G2"
    return True


_DEFAULT_PAIR = {"triality": "D4G2", "counterexample": "A5C3"}


def cmd_verify(config: RunConfig, suite: str) -> tuple[int, str]:
    if suite not in SUITES:
        raise InvalidInput(f"--suite must be one of {SUITES}")
    if config.pair is None and suite in _DEFAULT_PAIR:
        config = RunConfig(**{**config.__dict__, "pair": _DEFAULT_PAIR[suite]})
    fp = config.folded()
    results = []
    if suite == "all":
        for name in SUITES[:-1]:
            if _applicable(name, fp):
                results.append(_run_suite(name, fp, config))
            else:
                results.append({"suite": name, "status": "skipped", "details": {}})
    else:
        results.append(_run_suite(suite, fp, config))
    passed = all(r["status"] != "failed" for r in results)
    doc = {"pair": _pair_header(fp), "d": config.d, "suite": suite,
           "results": results, "passed": passed}
    code = EXIT_OK if passed else EXIT_FAILED
    for r in results:
        log.info("%s %s: %s", fp.pair_id, r["suite"], r["status"])
    if config.format == "text":
        lines = [f"{r['status'].upper():8s} {r['suite']:15s} {fp.pair_id} d={config.d}"
                 for r in results]
        lines += [f"  {r['suite']}: {json.dumps(r['details'])}" for r in results
                  if r["status"] == "failed"]
        return code, "\n".join(lines) + "\n"
    if config.format == "csv":
        raise InvalidInput("verify supports --format json or text")
    return code, _dump(doc)


# -- argument parsing ---------------------------------------------------------


def _parse_box(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--box expects comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pair", help=f"one of {', '.join(SUPPORTED_PAIRS)}")
    common.add_argument("--d", type=int, default=1, help="scale d in V(d rho) (default 1)")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for character products; output does not depend on it")
    common.add_argument("--term-guard", type=int, default=DEFAULT_TERM_GUARD,
                        help="abort (exit 3) when a character grows beyond this many terms")
    common.add_argument("--cache-dir", default=os.environ.get(CACHE_ENV),
                        help=f"directory for cached irreducible characters (default ${CACHE_ENV})")
    common.add_argument("--allow-large", action="store_true",
                        help="permit the E6F4 branching computation")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="foldbranch",
        description="Fold root systems along diagram automorphisms and branch V(d rho). "
                    "Weights are integer arrays in fundamental-weight coordinates of the folded "
                    "system, Bourbaki numbering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("fold", "summarise a folding"),
                            ("branch", "decompose res V(d rho)")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("pair_arg", nargs="?", metavar="PAIR")
    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("pair_arg", nargs="?", metavar="PAIR")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--box", type=_parse_box, help="proposition scan bounds, e.g. 4,4,3")
    return parser


def _config_from_args(args) -> RunConfig:
    pair = args.pair_arg or args.pair
    if args.pair_arg and args.pair and args.pair_arg != args.pair:
        raise InvalidInput(f"conflicting pairs {args.pair_arg!r} and {args.pair!r}")
    return RunConfig(
        pair=pair.upper() if pair else None,
        d=args.d,
        format=args.format,
        threads=args.threads,
        term_guard=args.term_guard,
        cache_dir=args.cache_dir,
        allow_large=args.allow_large,
        box=getattr(args, "box", None),
    )


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    commands: dict[str, Callable[[RunConfig], tuple[int, str]]] = {
        "fold": cmd_fold,
        "branch": cmd_branch,
        "verify": lambda c: cmd_verify(c, args.suite),
    }
    try:
        config = _config_from_args(args)
        store = CharacterStore(config.cache_dir) if config.cache_dir else None
        with configured(term_guard=config.term_guard, workers=config.threads, store=store):
            code, text = commands[args.command](config)
    except InvalidInput as exc:
        print(f"foldbranch: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceGuardExceeded as exc:
        print(f"foldbranch: resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    out.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
