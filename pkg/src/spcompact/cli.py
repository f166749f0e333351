"""Command-line entry point: ``spcompact <command> ...``.

Exit status is 0 when everything passes, 1 when any check fails (or a
document does not validate) and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fixtures
from .fuzzy import AxiomError
from .instance import ParseError, lattice_from_text, parse_instance
from .lattice import BUILTIN_LATTICES, DEFAULT_CAP, Lattice, LatticeError
from .lsets import SpaceError
from .search import DEFAULT_BUDGET, GeneratorError, search
from .theorems import IDS, REGISTRY, HarnessConfig, UnknownTheorem, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--cap-lattice", type=int, default=DEFAULT_CAP, metavar="N",
                   help="largest lattice accepted (default %(default)s)")
    p.add_argument("--cap-family", type=int, default=16, metavar="N",
                   help="largest pool swept exhaustively (default %(default)s)")
    p.add_argument("--samples", type=int, default=10_000, metavar="N",
                   help="sampled families beyond the cap (default %(default)s)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="spcompact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="parse and validate a document")
    p.add_argument("file")

    p = sub.add_parser("compute", parents=[common], help="lattice tables")
    p.add_argument("what", choices=["beta", "molecules", "wbr"])
    p.add_argument("lattice", help="builtin name (" + ", ".join(BUILTIN_LATTICES) + ") or file")

    p = sub.add_parser("operator", parents=[common], help="T_p or T_sp degrees of named L-subsets")
    p.add_argument("op", choices=["tp", "tsp"])
    p.add_argument("doc")
    p.add_argument("--lset", metavar="NAME", help="only this L-subset (default: all)")

    p = sub.add_parser("check", parents=[common], help="run one theorem or the whole registry")
    p.add_argument("--all", action="store_true", help="every registered id")
    p.add_argument("targets", nargs="*", metavar="ID|DOC",
                   help="theorem id (unless --all) then documents; 'builtin' or nothing means "
                        "the bundled fixtures")

    p = sub.add_parser("search", parents=[common], help="random falsification with shrinking")
    p.add_argument("id")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--mutant", action="store_true", help="search against the broken variant")

    p = sub.add_parser("fixtures", parents=[common], help="bundled documents")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    return parser


# ---- helpers

def _config(args) -> HarnessConfig:
    return HarnessConfig(cap_lattice=args.cap_lattice, cap_family=args.cap_family,
                         samples=args.samples, seed=args.seed)


def _load(path: str, args, *, strict: bool):
    if path in fixtures.RECIPES and not Path(path).exists():
        return fixtures.load(path)
    try:
        return parse_instance(path, strict=strict, cap_lattice=args.cap_lattice)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _lattice(spec: str, args) -> Lattice:
    if spec in BUILTIN_LATTICES:
        return BUILTIN_LATTICES[spec]()
    try:
        text = Path(spec).read_text(encoding="utf-8")
    except OSError:
        raise UsageError(f"{spec!r} is neither a builtin lattice nor a readable file") from None
    return lattice_from_text(text, cap=args.cap_lattice)


def _emit(args, payload, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# ---- commands

def cmd_validate(args) -> int:
    doc = _load(args.file, args, strict=True)
    parts = {"lattice": doc.lattice_name, "elements": doc.lattice.n,
             "spaces": list(doc.spaces), "fuzzy": list(doc.fuzzies),
             "lsets": list(doc.lsets), "maps": list(doc.maps)}
    text = (f"ok: lattice {doc.lattice_name} ({doc.lattice.n} elements); "
            f"{len(doc.spaces)} spaces, {len(doc.fuzzies)} degree tables, "
            f"{len(doc.lsets)} L-subsets, {len(doc.maps)} maps")
    _emit(args, {"valid": True, **parts}, text)
    return EXIT_OK


def cmd_compute(args) -> int:
    L = _lattice(args.lattice, args)
    nm = L.names
    if args.what == "beta":
        data = {nm[b]: [nm[a] for a in sorted(L.beta(b))] for b in range(L.n)}
        text = "\n".join(f"beta({k}) = {{{', '.join(v)}}}" for k, v in data.items())
    elif args.what == "molecules":
        data = {"molecules": [nm[a] for a in L.sorted_molecules()],
                "primes": [nm[a] for a in sorted(L.primes())]}
        text = f"M(L) = {{{', '.join(data['molecules'])}}}\nP(L) = {{{', '.join(data['primes'])}}}"
    else:
        data = {nm[a]: [nm[b] for b in range(L.n) if L.wb[a][b]] for a in range(L.n)}
        w = max(len(s) for s in nm)
        rows = [" " * w + " " + " ".join(s.rjust(w) for s in nm)]
        rows += [a.rjust(w) + " " + " ".join(("1" if L.wb[i][j] else ".").rjust(w)
                                             for j in range(L.n)) for i, a in enumerate(nm)]
        text = "\n".join(rows)
    _emit(args, data, text)
    return EXIT_OK


def cmd_operator(args) -> int:
    doc = _load(args.doc, args, strict=False)
    if args.lset and args.lset not in doc.lsets:
        raise UsageError(f"document has no L-subset {args.lset!r}")
    names = doc.lattice.names
    out, lines = [], []
    for fname, spec in doc.fuzzies.items():
        T = spec.topology
        if T is None:
            lines.append(f"{fname}: not an L-fuzzy topology ({spec.defect.axiom}), skipped")
            continue
        S = T.space
        table = T.tp_table if args.op == "tp" else T.tsp_table
        for g, A in doc.lsets_on(spec.space_name).items():
            if args.lset and g != args.lset:
                continue
            v = names[int(table[S.encode(A)])]
            out.append({"table": fname, "lset": g, "value": v})
            lines.append(f"{args.op.upper()}[{fname}]({g}) = {v}    {g} = {S.format(A)}")
    if args.lset and not out:
        raise UsageError(f"no valid degree table lives on the space of {args.lset!r}")
    _emit(args, out, "\n".join(lines))
    return EXIT_OK


def cmd_check(args) -> int:
    targets = list(args.targets)
    if args.all:
        ids = IDS
    else:
        if not targets:
            raise UsageError("check needs a theorem id or --all")
        tid = targets.pop(0)
        if tid not in REGISTRY:
            raise UnknownTheorem(f"unknown theorem id {tid!r}")
        ids = [tid]
    if not targets or targets == ["builtin"]:
        docs = fixtures.load_all()
    else:
        docs = [(Path(t).stem if Path(t).exists() else t, _load(t, args, strict=False))
                for t in targets]
    res = run_suite(docs, _config(args), ids=ids, jobs=args.jobs)
    if args.json:
        payload = {"summary": res.summary(), "counts": res.counts(), "seed": res.seed,
                   "reports": [dict(r.to_dict(), doc=n) for n, r in res.reports]}
        _emit(args, payload, "")
    else:
        single = len(res.reports) == 1
        body = res.reports[0][1].to_text() if single else res.table() + "\n"
        detail = [f"\n[{n}] " + r.to_text() for n, r in res.reports
                  if r.verdict == "fail" and not single]
        print(body + "".join(detail) + res.summary())
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_search(args) -> int:
    if args.budget <= 0:
        raise UsageError("--budget must be positive")
    if args.id not in REGISTRY:
        raise UnknownTheorem(f"unknown theorem id {args.id!r}")
    rep = search(args.id, args.budget, args.seed, config=_config(args), mutant=args.mutant)
    _emit(args, rep.to_dict(), rep.to_text())
    return EXIT_OK if rep.verdict == "pass" else EXIT_FAIL


def cmd_fixtures(args) -> int:
    if args.action == "show":
        if args.name not in fixtures.RECIPES:
            raise UsageError(f"unknown fixture {args.name!r}")
        print(fixtures.text(args.name), end="")
        return EXIT_OK
    rows = []
    for name, doc in fixtures.load_all():
        rows.append({"name": name, "lattice": doc.lattice_name,
                     "spaces": {n: len(s.space.points) for n, s in doc.spaces.items()},
                     "fuzzy": list(doc.fuzzies), "lsets": list(doc.lsets), "maps": list(doc.maps)})
    w = max(len(r["name"]) for r in rows)
    text = "\n".join(
        f"{r['name'].ljust(w)}  {r['lattice']:<6} "
        f"spaces {','.join(f'{n}({k})' for n, k in r['spaces'].items())}; "
        f"tables {','.join(r['fuzzy']) or '-'}; lsets {','.join(r['lsets']) or '-'}; "
        f"maps {','.join(r['maps']) or '-'}" for r in rows)
    _emit(args, rows, text)
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "compute": cmd_compute, "operator": cmd_operator,
            "check": cmd_check, "search": cmd_search, "fixtures": cmd_fixtures}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, UsageError, UnknownTheorem) as exc:
        msg = exc.args[0] if isinstance(exc, UnknownTheorem) else str(exc)
        print(f"spcompact: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except (AxiomError, LatticeError, SpaceError, GeneratorError) as exc:
        print(f"spcompact: invalid: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
