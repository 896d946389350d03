"""Command-line front end.

Exit codes: 0 success (or postulate holds), 1 violation found (check,
corpus mismatch, or fuzz violations of guaranteed postulates), 2 parse
or input error, 3 usage or configuration error, 4 enumeration size limit
exceeded.  The FCMERGE_MAX_ENUM environment variable overrides the
maximal-subset enumeration cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .arbitration import Strategy, arbitrate
from .core import Program, closure
from .errors import (
    ConfigError,
    EmptyProfile,
    IncompleteBinding,
    SizeLimitExceeded,
    SourceError,
)
from .fuzz import FuzzConfig, search
from .merging import Profile, merge
from .postulates import Instance, PostulateId, Status, check, run_corpus
from .revision import Flock, revise_extended_hull, revise_hull, revise_rank
from .textio import parse_profile, parse_program, parse_programs

_PROGRAM_VARS = ("P", "Q", "P1", "P2", "Q1", "Q2", "constraint")
_PROFILE_VARS = ("profile1", "profile2")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_program(path: str) -> Program:
    return parse_program(_read(path))


def _load_flock(path: str) -> Flock:
    programs = parse_programs(_read(path))
    if not programs:
        raise EmptyProfile(f"{path}: no programs in flock file")
    return Flock(programs)


def _emit(args: argparse.Namespace, plain: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(plain)


def _cmd_cns(args: argparse.Namespace) -> int:
    result = closure(_load_program(args.file))
    _emit(args, str(result),
          {"command": "cns", "result": str(result), "is_bottom": result.is_bottom})
    return 0


def _cmd_revise(args: argparse.Namespace) -> int:
    strategy = Strategy.from_token(args.op)
    new = _load_program(args.new)
    if strategy is Strategy.EXTENDED_HULL:
        result = revise_extended_hull(_load_flock(args.base), new)
        kind = "flock"
    else:
        base_program = _load_program(args.base)
        if strategy is Strategy.RANK:
            result = revise_rank(base_program, new)
        else:
            result = revise_hull(base_program, new)
        kind = "program"
    _emit(args, str(result),
          {"command": "revise", "op": args.op, "kind": kind, "result": str(result)})
    return 0


def _cmd_arbitrate(args: argparse.Namespace) -> int:
    strategy = Strategy.from_token(args.op)
    result = arbitrate(_load_program(args.a), _load_program(args.b), strategy)
    _emit(args, str(result),
          {"command": "arbitrate", "op": args.op, "result": str(result),
           "is_bottom": result.is_bottom})
    return 0


def _cmd_merge(args: argparse.Namespace) -> int:
    strategy = Strategy.from_token(args.op)
    constraint = _load_program(args.constraint)
    members = []
    for path in args.programs:
        member = _load_program(path)
        if not member.rules:
            raise EmptyProfile(f"{path}: an empty program cannot join a profile")
        members.append(member)
    profile = Profile(tuple(members))
    result = merge(constraint, profile, strategy)
    _emit(args, str(result),
          {"command": "merge", "op": args.op, "result": str(result),
           "is_bottom": result.is_bottom})
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    pid = PostulateId.parse(args.postulate)
    programs = {
        var: _load_program(getattr(args, var))
        for var in _PROGRAM_VARS
        if getattr(args, var) is not None
    }
    profiles = {
        var: parse_profile(_read(getattr(args, var)))
        for var in _PROFILE_VARS
        if getattr(args, var) is not None
    }
    instance = Instance(Strategy.from_token(args.strategy),
                        programs=programs, profiles=profiles)
    verdict = check(pid, instance)
    lines = [verdict.status.value]
    lines += [f"  {key} = {value}" for key, value in verdict.witness]
    _emit(args, "\n".join(lines),
          {"command": "check", "postulate": pid.value, "strategy": args.strategy,
           "status": verdict.status.value, "witness": verdict.witness_dict,
           "reason": verdict.reason})
    return 1 if verdict.status is Status.VIOLATED else 0


def _parse_postulates(raw: str) -> tuple[PostulateId, ...]:
    try:
        return tuple(PostulateId.parse(tok.strip()) for tok in raw.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _parse_strategies(raw: str) -> tuple[Strategy, ...]:
    try:
        return tuple(Strategy.from_token(tok.strip()) for tok in raw.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _cmd_fuzz(args: argparse.Namespace) -> int:
    cfg = FuzzConfig(
        seed=args.seed,
        trials=args.trials,
        atoms=args.atoms,
        rules=args.rules,
        body_len=args.body_len,
        neg_prob=args.neg_prob,
        strategies=_parse_strategies(args.strategies),
        postulates=_parse_postulates(args.postulates),
    )
    report = search(cfg)
    if args.json:
        print(report.to_json())
    else:
        print(report.to_text())
    return 1 if report.guaranteed_violations else 0


def _cmd_corpus(args: argparse.Namespace) -> int:
    report = run_corpus(Path(args.directory) if args.directory else None)
    if args.json:
        print(json.dumps(report.to_dict(), sort_keys=True, indent=2))
    else:
        print(report.to_text())
    return 0 if report.all_match else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit a machine-readable JSON document")
    parser = _Parser(prog="fcmerge",
                     description="belief revision, arbitration, and merging "
                                 "over forward-chaining rule programs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cns", parents=[common],
                       help="print the consequences of a program")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_cns)

    p = sub.add_parser("revise", parents=[common], help="revise BASE by NEW")
    p.add_argument("--op", choices=["rk", "h", "eh"], default="rk")
    p.add_argument("base")
    p.add_argument("new")
    p.set_defaults(handler=_cmd_revise)

    p = sub.add_parser("arbitrate", parents=[common],
                       help="symmetric merge of two programs")
    p.add_argument("--op", choices=["rk", "h", "eh"], default="rk")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(handler=_cmd_arbitrate)

    p = sub.add_parser("merge", parents=[common],
                       help="merge programs under an integrity constraint")
    p.add_argument("--op", choices=["rk", "h", "eh"], default="rk")
    p.add_argument("constraint")
    p.add_argument("programs", nargs="+", metavar="PROG")
    p.set_defaults(handler=_cmd_merge)

    p = sub.add_parser("check", parents=[common],
                       help="evaluate one postulate on explicit bindings")
    p.add_argument("postulate", type=str.upper,
                   choices=[pid.value for pid in PostulateId])
    p.add_argument("--strategy", choices=["rk", "h", "eh"], default="rk")
    for var in _PROGRAM_VARS:
        p.add_argument(f"--{var}", metavar="FILE")
    for var in _PROFILE_VARS:
        p.add_argument(f"--{var}", metavar="FILE")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("fuzz", parents=[common],
                       help="random search for postulate violations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--atoms", type=int, default=6)
    p.add_argument("--rules", type=int, default=8)
    p.add_argument("--body-len", dest="body_len", type=int, default=3)
    p.add_argument("--neg-prob", dest="neg_prob", type=float, default=0.3)
    p.add_argument("--strategies", default="rk")
    p.add_argument("--postulates",
                   default=",".join(pid.value for pid in PostulateId))
    p.set_defaults(handler=_cmd_fuzz)

    p = sub.add_parser("corpus", parents=[common],
                       help="run the regression corpus")
    p.add_argument("--directory", metavar="DIR",
                   help="alternative corpus directory (default: bundled)")
    p.set_defaults(handler=_cmd_corpus)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"fcmerge: {exc}", file=sys.stderr)
        return 3
    try:
        return args.handler(args)
    except SourceError as exc:
        print(f"fcmerge: parse error: {exc}", file=sys.stderr)
        return 2
    except EmptyProfile as exc:
        print(f"fcmerge: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fcmerge: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, IncompleteBinding) as exc:
        print(f"fcmerge: {exc}", file=sys.stderr)
        return 3
    except SizeLimitExceeded as exc:
        print(f"fcmerge: {exc}", file=sys.stderr)
        return 4


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
