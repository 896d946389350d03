"""Executable checkers for the arbitration (SA) and merging (FP) postulates.

Each postulate is encoded as data: the names of its free variables plus
an evaluation closure over a concrete instance.  The corpus runner and
the fuzzer share this single evaluator.  A verdict carries the evaluated
sub-expressions so violations are self-explaining.

Results of arbitration and merging are literal sets; where a postulate
combines such a result with a program, the literals are adjoined as
facts, and the inconsistent value propagates.  The trichotomy postulate
SA6 is read disjunctively: it holds when any of its three alternatives
matches.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Callable, Mapping

from .arbitration import Strategy, arbitrate, conj, disj
from .core import BOTTOM, ClosedSet, Literal, Program, closure, entails
from .errors import IncompleteBinding
from .merging import Profile, merge
from .textio import parse_profile, parse_program


class PostulateId(Enum):
    SA1 = "SA1"
    SA2 = "SA2"
    SA3 = "SA3"
    SA4 = "SA4"
    SA5 = "SA5"
    SA6 = "SA6"
    SA7 = "SA7"
    SA8 = "SA8"
    FP0 = "FP0"
    FP1 = "FP1"
    FP2 = "FP2"
    FP3 = "FP3"
    FP4 = "FP4"
    FP5 = "FP5"
    FP6 = "FP6"
    FP7 = "FP7"
    FP8 = "FP8"

    @property
    def family(self) -> str:
        return self.value[:2]

    @property
    def index(self) -> int:
        return int(self.value[2:])

    @classmethod
    def parse(cls, token: str) -> PostulateId:
        try:
            return cls(token.upper())
        except ValueError:
            raise ValueError(f"unknown postulate {token!r}") from None


class Status(Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    VACUOUS = "vacuous"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: tuple[tuple[str, str], ...] = ()
    reason: str | None = None

    def __post_init__(self) -> None:
        if self.status is Status.VIOLATED and not self.witness:
            raise ValueError("a violation verdict needs a witness")

    @property
    def witness_dict(self) -> dict[str, str]:
        return dict(self.witness)


@dataclass(eq=True)
class Instance:
    """Concrete bindings for a postulate's free variables."""

    strategy: Strategy
    programs: dict[str, Program] = field(default_factory=dict)
    profiles: dict[str, Profile] = field(default_factory=dict)


def _outcome(condition: bool, witness: tuple[tuple[str, str], ...]) -> Verdict:
    return Verdict(Status.HOLDS if condition else Status.VIOLATED, witness)


def _vacuous(witness: tuple[tuple[str, str], ...]) -> Verdict:
    return Verdict(Status.VACUOUS, witness)


def adjoin_program(result: ClosedSet, program: Program) -> ClosedSet:
    """Closure of the result's literals, taken as facts, pooled with the
    program.  The inconsistent value propagates."""
    if result.is_bottom:
        return BOTTOM
    return closure(program | Program.from_facts(result.literals))


def _fresh_atom(avoid: frozenset[str]) -> str:
    name = "bot"
    i = 0
    while name in avoid:
        name = f"bot{i}"
        i += 1
    return name


def as_program(result: ClosedSet, avoid: frozenset[str]) -> Program:
    """The fact program of a literal set.  The inconsistent value becomes
    a pair of opposed facts over an atom fresh for the given vocabulary,
    which keeps downstream closures vocabulary-independent."""
    if not result.is_bottom:
        return Program.from_facts(result.literals)
    atom = _fresh_atom(avoid)
    return Program.from_facts([Literal(atom), Literal(atom, False)])


# --- SA evaluators ------------------------------------------------------


def _sa1(inst: Instance) -> Verdict:
    p, q = inst.programs["P"], inst.programs["Q"]
    a = arbitrate(p, q, inst.strategy)
    b = arbitrate(q, p, inst.strategy)
    return _outcome(a == b, (("arb(P, Q)", str(a)), ("arb(Q, P)", str(b))))


def _sa2(inst: Instance) -> Verdict:
    p, q = inst.programs["P"], inst.programs["Q"]
    a = arbitrate(p, q, inst.strategy)
    c = conj(p, q)
    return _outcome(a.issubset(c), (("arb(P, Q)", str(a)), ("conj(P, Q)", str(c))))


def _sa3(inst: Instance) -> Verdict:
    p, q = inst.programs["P"], inst.programs["Q"]
    c = conj(p, q)
    if c.is_bottom:
        return _vacuous((("conj(P, Q)", str(c)),))
    a = arbitrate(p, q, inst.strategy)
    return _outcome(c.issubset(a), (("conj(P, Q)", str(c)), ("arb(P, Q)", str(a))))


def _sa4(inst: Instance) -> Verdict:
    p, q = inst.programs["P"], inst.programs["Q"]
    a = arbitrate(p, q, inst.strategy)
    both_bottom = closure(p).is_bottom and closure(q).is_bottom
    witness = (
        ("arb(P, Q)", str(a)),
        ("cns(P)", str(closure(p))),
        ("cns(Q)", str(closure(q))),
    )
    return _outcome(a.is_bottom == both_bottom, witness)


def _sa5(inst: Instance) -> Verdict:
    p1, p2 = inst.programs["P1"], inst.programs["P2"]
    q1, q2 = inst.programs["Q1"], inst.programs["Q2"]
    if closure(p1) != closure(p2) or closure(q1) != closure(q2):
        return _vacuous((
            ("cns(P1)", str(closure(p1))), ("cns(P2)", str(closure(p2))),
            ("cns(Q1)", str(closure(q1))), ("cns(Q2)", str(closure(q2))),
        ))
    a = arbitrate(p1, q1, inst.strategy)
    b = arbitrate(p2, q2, inst.strategy)
    return _outcome(a == b, (("arb(P1, Q1)", str(a)), ("arb(P2, Q2)", str(b))))


def _sa6(inst: Instance) -> Verdict:
    p = inst.programs["P"]
    q1, q2 = inst.programs["Q1"], inst.programs["Q2"]
    vocabulary = p.atoms() | q1.atoms() | q2.atoms()
    joint = as_program(disj(q1, q2), vocabulary)
    lhs = arbitrate(p, joint, inst.strategy)
    o1 = arbitrate(p, q1, inst.strategy)
    o2 = arbitrate(p, q2, inst.strategy)
    o3 = o1.meet(o2)
    witness = (
        ("arb(P, disj(Q1, Q2))", str(lhs)),
        ("arb(P, Q1)", str(o1)),
        ("arb(P, Q2)", str(o2)),
        ("disj(arb(P, Q1), arb(P, Q2))", str(o3)),
    )
    return _outcome(lhs in (o1, o2, o3), witness)


def _sa7(inst: Instance) -> Verdict:
    p, q = inst.programs["P"], inst.programs["Q"]
    d = disj(p, q)
    a = arbitrate(p, q, inst.strategy)
    return _outcome(d.issubset(a), (("disj(P, Q)", str(d)), ("arb(P, Q)", str(a))))


def _sa8(inst: Instance) -> Verdict:
    p, q = inst.programs["P"], inst.programs["Q"]
    if closure(p).is_bottom:
        return _vacuous((("cns(P)", str(closure(p))),))
    a = arbitrate(p, q, inst.strategy)
    combined = adjoin_program(a, p)
    witness = (("arb(P, Q)", str(a)), ("conj(P, arb(P, Q))", str(combined)))
    return _outcome(not combined.is_bottom, witness)


# --- FP evaluators ------------------------------------------------------


def _fp0(inst: Instance) -> Verdict:
    c = inst.programs["constraint"]
    m = merge(c, inst.profiles["profile1"], inst.strategy)
    witness = (("merge", str(m)), ("cns(constraint)", str(closure(c))))
    return _outcome(closure(c).issubset(m), witness)


def _fp1(inst: Instance) -> Verdict:
    c = inst.programs["constraint"]
    if closure(c).is_bottom:
        return _vacuous((("cns(constraint)", str(closure(c))),))
    m = merge(c, inst.profiles["profile1"], inst.strategy)
    return _outcome(not m.is_bottom, (("merge", str(m)),))


def _fp2(inst: Instance) -> Verdict:
    c = inst.programs["constraint"]
    profile = inst.profiles["profile1"]
    pooled = closure(c | profile.union_program())
    if pooled.is_bottom:
        return _vacuous((("cns(constraint + profile)", str(pooled)),))
    m = merge(c, profile, inst.strategy)
    witness = (("cns(constraint + profile)", str(pooled)), ("merge", str(m)))
    return _outcome(m == pooled, witness)


def _fp3(inst: Instance) -> Verdict:
    p, q = inst.programs["P"], inst.programs["Q"]
    ph1, ph2 = inst.profiles["profile1"], inst.profiles["profile2"]
    paired = (
        len(ph1) == len(ph2)
        and closure(p) == closure(q)
        and all(closure(a) == closure(b) for a, b in zip(ph1, ph2))
    )
    if not paired:
        return _vacuous((("cns(P)", str(closure(p))), ("cns(Q)", str(closure(q)))))
    m1 = merge(p, ph1, inst.strategy)
    m2 = merge(q, ph2, inst.strategy)
    witness = (("merge(P, profile1)", str(m1)), ("merge(Q, profile2)", str(m2)))
    return _outcome(m1 == m2, witness)


def _fp4(inst: Instance) -> Verdict:
    c = inst.programs["constraint"]
    p1, p2 = inst.programs["P1"], inst.programs["P2"]
    # profiles hold nonempty programs, so an empty side never forms one
    applicable = (
        bool(p1.rules) and bool(p2.rules)
        and entails(p1, c) and entails(p2, c)
        and not closure(p1).is_bottom and not closure(p2).is_bottom
    )
    if not applicable:
        return _vacuous((
            ("cns(P1)", str(closure(p1))),
            ("cns(P2)", str(closure(p2))),
            ("cns(constraint)", str(closure(c))),
        ))
    m = merge(c, Profile((p1, p2)), inst.strategy)
    with_p1 = adjoin_program(m, p1)
    with_p2 = adjoin_program(m, p2)
    witness = (
        ("merge", str(m)),
        ("cns(merge + P1)", str(with_p1)),
        ("cns(merge + P2)", str(with_p2)),
    )
    return _outcome(with_p1.is_bottom or not with_p2.is_bottom, witness)


def _fp56_parts(inst: Instance) -> tuple[ClosedSet, ClosedSet, tuple[tuple[str, str], ...]]:
    c = inst.programs["constraint"]
    ph1, ph2 = inst.profiles["profile1"], inst.profiles["profile2"]
    m1 = merge(c, ph1, inst.strategy)
    m2 = merge(c, ph2, inst.strategy)
    m12 = merge(c, ph1 + ph2, inst.strategy)
    union = m1.join(m2)
    witness = (
        ("merge(profile1 + profile2)", str(m12)),
        ("merge(profile1)", str(m1)),
        ("merge(profile2)", str(m2)),
        ("union", str(union)),
    )
    return m12, union, witness


def _fp5(inst: Instance) -> Verdict:
    m12, union, witness = _fp56_parts(inst)
    return _outcome(m12.issubset(union), witness)


def _fp6(inst: Instance) -> Verdict:
    m12, union, witness = _fp56_parts(inst)
    if union.is_bottom:
        return _vacuous(witness)
    return _outcome(union.issubset(m12), witness)


def _fp78_parts(inst: Instance) -> tuple[ClosedSet, ClosedSet, tuple[tuple[str, str], ...]]:
    c = inst.programs["constraint"]
    q = inst.programs["Q"]
    profile = inst.profiles["profile1"]
    m = merge(c, profile, inst.strategy)
    lhs = adjoin_program(m, q)
    rhs = merge(c | q, profile, inst.strategy)
    witness = (
        ("merge(constraint, profile)", str(m)),
        ("merge(constraint, profile) + Q", str(lhs)),
        ("merge(constraint + Q, profile)", str(rhs)),
    )
    return lhs, rhs, witness


def _fp7(inst: Instance) -> Verdict:
    lhs, rhs, witness = _fp78_parts(inst)
    return _outcome(rhs.issubset(lhs), witness)


def _fp8(inst: Instance) -> Verdict:
    lhs, rhs, witness = _fp78_parts(inst)
    if lhs.is_bottom:
        return _vacuous(witness)
    return _outcome(lhs.issubset(rhs), witness)


@dataclass(frozen=True)
class PostulateSpec:
    pid: PostulateId
    program_vars: tuple[str, ...]
    profile_vars: tuple[str, ...]
    evaluate: Callable[[Instance], Verdict]


POSTULATES: dict[PostulateId, PostulateSpec] = {
    spec.pid: spec
    for spec in (
        PostulateSpec(PostulateId.SA1, ("P", "Q"), (), _sa1),
        PostulateSpec(PostulateId.SA2, ("P", "Q"), (), _sa2),
        PostulateSpec(PostulateId.SA3, ("P", "Q"), (), _sa3),
        PostulateSpec(PostulateId.SA4, ("P", "Q"), (), _sa4),
        PostulateSpec(PostulateId.SA5, ("P1", "P2", "Q1", "Q2"), (), _sa5),
        PostulateSpec(PostulateId.SA6, ("P", "Q1", "Q2"), (), _sa6),
        PostulateSpec(PostulateId.SA7, ("P", "Q"), (), _sa7),
        PostulateSpec(PostulateId.SA8, ("P", "Q"), (), _sa8),
        PostulateSpec(PostulateId.FP0, ("constraint",), ("profile1",), _fp0),
        PostulateSpec(PostulateId.FP1, ("constraint",), ("profile1",), _fp1),
        PostulateSpec(PostulateId.FP2, ("constraint",), ("profile1",), _fp2),
        PostulateSpec(PostulateId.FP3, ("P", "Q"), ("profile1", "profile2"), _fp3),
        PostulateSpec(PostulateId.FP4, ("constraint", "P1", "P2"), (), _fp4),
        PostulateSpec(PostulateId.FP5, ("constraint",), ("profile1", "profile2"), _fp5),
        PostulateSpec(PostulateId.FP6, ("constraint",), ("profile1", "profile2"), _fp6),
        PostulateSpec(PostulateId.FP7, ("constraint", "Q"), ("profile1",), _fp7),
        PostulateSpec(PostulateId.FP8, ("constraint", "Q"), ("profile1",), _fp8),
    )
}


def check(pid: PostulateId, instance: Instance) -> Verdict:
    """Evaluate one postulate on one instance.

    Bindings must cover exactly the postulate's free variables.  Size
    limits from subset enumeration propagate to the caller.
    """
    spec = POSTULATES[pid]
    missing = [v for v in spec.program_vars if v not in instance.programs]
    missing += [v for v in spec.profile_vars if v not in instance.profiles]
    extra = [v for v in instance.programs if v not in spec.program_vars]
    extra += [v for v in instance.profiles if v not in spec.profile_vars]
    if missing or extra:
        parts = []
        if missing:
            parts.append("missing " + ", ".join(sorted(missing)))
        if extra:
            parts.append("unexpected " + ", ".join(sorted(extra)))
        raise IncompleteBinding(f"{pid.value}: " + "; ".join(parts))
    return spec.evaluate(instance)


def check_sa(pid: PostulateId, instance: Instance) -> Verdict:
    if pid.family != "SA":
        raise ValueError(f"{pid.value} is not an SA postulate")
    return check(pid, instance)


def check_fp(pid: PostulateId, instance: Instance) -> Verdict:
    if pid.family != "FP":
        raise ValueError(f"{pid.value} is not an FP postulate")
    return check(pid, instance)


def guaranteed(pid: PostulateId, strategy: Strategy) -> bool:
    """Whether the postulate is guaranteed to hold for the strategy.

    SA1-SA4, SA7, SA8 hold for all strategies, as do FP0-FP2; FP4 holds
    for rank revision only.  Everything else can be violated.
    """
    if pid in (PostulateId.SA1, PostulateId.SA2, PostulateId.SA3,
               PostulateId.SA4, PostulateId.SA7, PostulateId.SA8):
        return True
    if pid in (PostulateId.FP0, PostulateId.FP1, PostulateId.FP2):
        return True
    if pid is PostulateId.FP4:
        return strategy is Strategy.RANK
    return False


# --- regression corpus --------------------------------------------------


@dataclass(frozen=True)
class CorpusResult:
    name: str
    detail: str
    strategy: str
    expected: str
    actual: str
    matched: bool
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "detail": self.detail,
            "strategy": self.strategy,
            "expected": self.expected,
            "actual": self.actual,
            "matched": self.matched,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class CorpusReport:
    results: tuple[CorpusResult, ...]

    @property
    def all_match(self) -> bool:
        return all(r.matched for r in self.results)

    def to_dict(self) -> dict:
        return {
            "all_match": self.all_match,
            "results": [r.to_dict() for r in self.results],
        }

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            mark = "PASS" if r.matched else "FAIL"
            lines.append(f"{mark}  {r.name} [{r.strategy}] {r.detail}: "
                         f"expected {r.expected}, got {r.actual}")
            for note in r.notes:
                lines.append(f"      {note}")
        verdict = "all entries match" if self.all_match else "MISMATCHES FOUND"
        lines.append(f"{len(self.results)} evaluations: {verdict}")
        return "\n".join(lines)


def _corpus_root() -> Path:
    return Path(str(resources.files("fcmerge") / "corpus"))


def _load_bindings(entry: Mapping, root: Path, strategy: Strategy) -> Instance:
    programs = {
        name: parse_program((root / rel).read_text(encoding="utf-8"))
        for name, rel in entry.get("programs", {}).items()
    }
    profiles = {
        name: parse_profile((root / rel).read_text(encoding="utf-8"))
        for name, rel in entry.get("profiles", {}).items()
    }
    return Instance(strategy=strategy, programs=programs, profiles=profiles)


def _run_postulate_entry(entry: Mapping, root: Path) -> list[CorpusResult]:
    pid = PostulateId.parse(entry["postulate"])
    expected_status = Status(entry["expect"])
    expected_values: dict[str, str] = entry.get("values", {})
    results = []
    for token in entry["strategies"]:
        strategy = Strategy.from_token(token)
        instance = _load_bindings(entry, root, strategy)
        verdict = check(pid, instance)
        notes = []
        got = verdict.witness_dict
        for key, want in expected_values.items():
            if key not in got:
                notes.append(f"missing witness value {key!r}")
            elif got[key] != want:
                notes.append(f"{key}: expected {want!r}, got {got[key]!r}")
        matched = verdict.status is expected_status and not notes
        results.append(CorpusResult(
            name=entry["name"],
            detail=pid.value,
            strategy=token,
            expected=expected_status.value,
            actual=verdict.status.value,
            matched=matched,
            notes=tuple(notes),
        ))
    return results


def _run_arbitration_entry(entry: Mapping, root: Path) -> list[CorpusResult]:
    results = []
    for token, expected in entry["expect_results"].items():
        strategy = Strategy.from_token(token)
        instance = _load_bindings(entry, root, strategy)
        actual = str(arbitrate(instance.programs["P"], instance.programs["Q"], strategy))
        results.append(CorpusResult(
            name=entry["name"],
            detail="arbitration",
            strategy=token,
            expected=expected,
            actual=actual,
            matched=actual == expected,
        ))
    return results


def run_corpus(location: Path | None = None) -> CorpusReport:
    """Evaluate every corpus entry and compare against its expectation.

    The default corpus ships with the package; pass a directory holding
    an ``expectations.json`` to run a different one.
    """
    root = Path(location) if location is not None else _corpus_root()
    table = json.loads((root / "expectations.json").read_text(encoding="utf-8"))
    results: list[CorpusResult] = []
    for entry in table["entries"]:
        if entry["kind"] == "postulate":
            results.extend(_run_postulate_entry(entry, root))
        elif entry["kind"] == "arbitration":
            results.extend(_run_arbitration_entry(entry, root))
        else:
            raise ValueError(f"unknown corpus entry kind {entry['kind']!r}")
    return CorpusReport(tuple(results))
