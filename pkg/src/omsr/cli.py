"""Command line: build, verify, search, claims, theorem, export-dot.

Exit codes: 0 success, 1 verified false, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .automorphisms import check_omsr
from .catalog import UnknownGroup, catalog_names, get_group
from .constructions import ConstructionError, ClaimReport, claims, construct, stated_valency, theorem_dispatch, ConstructionId
from .digraph import to_dot
from .mcayley import build
from .search import BudgetExceeded, SearchSpace, certificate_path, find_orr, prove_nonexistence, write_certificate

OK, FALSE, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        d = os.path.dirname(out) or "."
        os.makedirs(d, exist_ok=True)
        tmp = f"{out}.tmp{os.getpid()}"
        with open(tmp, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        os.replace(tmp, out)
    else:
        print(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1)


def _construction(args):
    text = args.construction or args.target
    if not text:
        raise UsageError("a construction id is required, e.g. z2_small:n=3,m=12")
    try:
        cid = ConstructionId.parse(text)
        return cid, construct(cid)
    except (ConstructionError, KeyError, ValueError) as ex:
        raise UsageError(f"bad construction {text!r}: {ex}") from ex


def _group(args):
    name = args.group or args.target
    if not name:
        raise UsageError("a group is required (--group)")
    try:
        return get_group(name)
    except (UnknownGroup, ValueError) as ex:
        raise UsageError(f"unknown group {name!r}; catalog: {', '.join(catalog_names())}") from ex


def cmd_build(args) -> int:
    _, T = _construction(args)
    _emit(_dump(T.to_json(words=True)), args.out)
    return OK


def cmd_verify(args) -> int:
    cid, T = _construction(args)
    v = check_omsr(T.group, T)
    want = stated_valency(T, cid.family, cid.params)
    report = {"construction": str(cid), "vertices": T.m * T.group.order, **v.to_json(),
              "stated_valency": want, "notes": list(T.notes)}
    if args.json or args.out:
        _emit(_dump(report), args.out)
    else:
        word = "is" if v.is_omsr else "is NOT"
        print(f"{cid} {word} an OmSR: |Aut| = {v.aut_order}, |G| = {T.group.order}, "
              f"oriented = {v.oriented}, valency = {v.valency}")
    return OK if v.is_omsr else FALSE


def cmd_search(args) -> int:
    G = _group(args)
    m = args.m if args.m is not None else 1
    reduce = not args.no_reductions
    try:
        if m == 1:
            cert = find_orr(G, reductions=reduce, max_candidates=args.max_candidates)
            space = None
        else:
            space = SearchSpace(G, m, None, reduce and G.order <= 16, reduce)
            cert = prove_nonexistence(space, args.max_candidates, args.workers)
    except BudgetExceeded as ex:
        print(f"budget exceeded: {ex}", file=sys.stderr)
        return BUDGET
    except ValueError as ex:
        raise UsageError(str(ex)) from ex
    if args.out and space is not None and os.path.isdir(args.out):
        path = certificate_path(space, args.out)
        write_certificate(cert, path)
        print(path)
    elif args.out:
        _emit(cert.dumps(), args.out)
    if args.json or not args.out:
        print(cert.dumps() if args.json else
              f"{G.name} m={m}: {cert.kind} after {cert.candidates_examined} candidates")
    return OK


def cmd_claims(args) -> int:
    cid, _ = _construction(args)
    try:
        rep: ClaimReport = claims(cid)
    except ConstructionError as ex:
        raise UsageError(str(ex)) from ex
    if args.json or args.out:
        _emit(_dump(rep.to_json()), args.out)
    else:
        for part in sorted(rep.expected):
            flag = "match" if rep.measured[part] == rep.expected[part] else "MISMATCH"
            print(f"part {part}: measured {rep.measured[part]}, expected {rep.expected[part]} ({flag})")
    return OK if rep.matches else FALSE


def cmd_theorem(args) -> int:
    name = args.group or args.target
    if not name or args.m is None:
        raise UsageError("theorem needs a group and m")
    v = theorem_dispatch(name, args.m)
    if v.verdict == "out_of_catalog":
        raise UsageError(f"unknown group {name!r}; catalog: {', '.join(catalog_names())}")
    if args.json:
        print(_dump(v.to_json()))
    elif v.verdict == "construction":
        print(f"branch (1): {name} admits an O{args.m}SR via {v.construction}")
    else:
        print(f"branch ({v.branch}): {name} has no O{args.m}SR ({v.reason})")
    return OK


def cmd_export_dot(args) -> int:
    cid, T = _construction(args)
    gamma = build(T)
    _emit(to_dot(gamma.digraph, gamma.labels(), name=cid.family), args.out)
    return OK


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "search": cmd_search, "claims": cmd_claims,
            "theorem": cmd_theorem, "export-dot": cmd_export_dot}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omsr", description="Oriented m-semiregular representations.")
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("target", nargs="?", help="construction id or group name")
    p.add_argument("m_pos", nargs="?", type=int, metavar="M", help="m (theorem and search)")
    p.add_argument("--group")
    p.add_argument("--m", type=int)
    p.add_argument("--construction")
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-candidates", type=int)
    p.add_argument("--no-reductions", action="store_true")
    p.add_argument("--json", action="store_true")
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return USAGE if ex.code else OK
    if args.m is None:
        args.m = args.m_pos
    if args.workers < 1 or (args.max_candidates is not None and args.max_candidates < 1):
        print("usage error: budgets must be positive", file=sys.stderr)
        return USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as ex:
        print(f"usage error: {ex}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
