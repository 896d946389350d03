"""Seeded random search for postulate violations, with witness shrinking.

Randomness comes from ``random.Random`` (the Mersenne Twister).  Every
(postulate, strategy, trial) cell gets its own generator seeded by a
SHA-256 derivation of the master seed, so identical configurations
produce byte-identical reports regardless of evaluation order.

Generation is biased toward useful instances: half the time a pair of
programs shares its atom pool (conflicts, hence non-vacuous guarded
postulates), and syntax-sensitivity postulates receive equal-consequence
variants built by adding redundant or never-firing rules.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .arbitration import Strategy
from .core import Literal, Program, Rule, closure
from .errors import ConfigError, PredicateNotHolding, SizeLimitExceeded
from .merging import Profile
from .postulates import Instance, PostulateId, Status, Verdict, check, guaranteed

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def atom_pool(size: int) -> tuple[str, ...]:
    names = [_LETTERS[i] for i in range(min(size, len(_LETTERS)))]
    names += [f"x{i}" for i in range(len(_LETTERS), size)]
    return tuple(names)


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    trials: int = 100
    atoms: int = 6
    rules: int = 8
    body_len: int = 3
    neg_prob: float = 0.3
    strategies: tuple[Strategy, ...] = tuple(Strategy)
    postulates: tuple[PostulateId, ...] = tuple(PostulateId)

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.atoms < 1:
            raise ConfigError("atoms must be at least 1")
        if self.rules < 0 or self.body_len < 0:
            raise ConfigError("rules and body_len must be nonnegative")
        if not 0.0 <= self.neg_prob <= 1.0:
            raise ConfigError("neg_prob must lie in [0, 1]")
        object.__setattr__(self, "strategies",
                           tuple(sorted(set(self.strategies), key=lambda s: s.value)))
        object.__setattr__(self, "postulates",
                           tuple(sorted(set(self.postulates), key=lambda p: p.value)))
        if not self.strategies:
            raise ConfigError("at least one strategy is required")
        if not self.postulates:
            raise ConfigError("at least one postulate is required")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "atoms": self.atoms,
            "rules": self.rules,
            "body_len": self.body_len,
            "neg_prob": self.neg_prob,
            "strategies": [s.value for s in self.strategies],
            "postulates": [p.value for p in self.postulates],
        }


def _literal(cfg: FuzzConfig, rng: random.Random, pool: tuple[str, ...]) -> Literal:
    return Literal(rng.choice(pool), rng.random() >= cfg.neg_prob)


def _rule(cfg: FuzzConfig, rng: random.Random, pool: tuple[str, ...]) -> Rule:
    body_size = rng.randint(0, cfg.body_len)
    body = frozenset(_literal(cfg, rng, pool) for _ in range(body_size))
    return Rule(body, _literal(cfg, rng, pool))


def gen_program(cfg: FuzzConfig, rng: random.Random,
                pool: tuple[str, ...] | None = None) -> Program:
    """Random program over at most cfg.atoms atoms and cfg.rules rules.
    Deterministic for a given generator state."""
    if pool is None:
        pool = atom_pool(cfg.atoms)
    count = rng.randint(0, cfg.rules)
    return Program(frozenset(_rule(cfg, rng, pool) for _ in range(count)))


def _nonempty(cfg: FuzzConfig, rng: random.Random, pool: tuple[str, ...]) -> Program:
    p = gen_program(cfg, rng, pool)
    if not p.rules:
        p = Program(frozenset({Rule.fact(_literal(cfg, rng, pool))}))
    return p


def _pair_pools(cfg: FuzzConfig, rng: random.Random) -> tuple[tuple[str, ...], tuple[str, ...]]:
    # half the time both programs draw from one pool, so conflicts and
    # non-vacuous antecedents actually occur
    extended = atom_pool(2 * cfg.atoms)
    first = extended[:cfg.atoms]
    if rng.random() < 0.5:
        return first, first
    return first, extended[cfg.atoms:]


def _gen_pair(cfg: FuzzConfig, rng: random.Random) -> tuple[Program, Program]:
    pool_p, pool_q = _pair_pools(cfg, rng)
    return gen_program(cfg, rng, pool_p), gen_program(cfg, rng, pool_q)


def _equivalent_variant(p: Program, cfg: FuzzConfig, rng: random.Random,
                        pool: tuple[str, ...]) -> Program:
    """A syntactic variant of p with identical consequences: adds a rule
    that is either redundant (body and head already derived) or inert
    (body mentions an underived literal)."""
    c = closure(p)
    if c.is_bottom:
        return p | Program(frozenset({_rule(cfg, rng, pool)}))
    derived = sorted(c.literals, key=Literal.sort_key)
    if derived and rng.random() < 0.5:
        body_size = rng.randint(1, max(1, min(cfg.body_len, len(derived))))
        body = frozenset(rng.choice(derived) for _ in range(body_size))
        return p | Program(frozenset({Rule(body, rng.choice(derived))}))
    blocked = [
        lit
        for atom in pool
        for lit in (Literal(atom), Literal(atom, False))
        if lit not in c
    ]
    if not blocked:
        return p
    body = frozenset({rng.choice(blocked)})
    return p | Program(frozenset({Rule(body, _literal(cfg, rng, pool))}))


def _gen_profile(cfg: FuzzConfig, rng: random.Random, pool: tuple[str, ...],
                 max_members: int = 3) -> Profile:
    count = rng.randint(1, max_members)
    return Profile(tuple(_nonempty(cfg, rng, pool) for _ in range(count)))


def _gen_constraint(cfg: FuzzConfig, rng: random.Random,
                    pool: tuple[str, ...]) -> Program:
    p = gen_program(cfg, rng, pool)
    if rng.random() < 0.5:
        p = p | Program.from_facts([_literal(cfg, rng, pool)])
    return p


def _grow_entailing(cfg: FuzzConfig, rng: random.Random, pool: tuple[str, ...],
                    constraint: Program) -> Program:
    # a consistent superset entails the constraint; fall back to the
    # constraint itself when extensions keep collapsing
    for _ in range(4):
        candidate = constraint | gen_program(cfg, rng, pool)
        if not closure(candidate).is_bottom and candidate.rules:
            return candidate
    return constraint if constraint.rules else _nonempty(cfg, rng, pool)


def gen_instance(pid: PostulateId, cfg: FuzzConfig, rng: random.Random,
                 strategy: Strategy) -> Instance:
    """Random bindings covering exactly the postulate's free variables."""
    pool_p, pool_q = _pair_pools(cfg, rng)
    if pid is PostulateId.SA5:
        p1 = gen_program(cfg, rng, pool_p)
        q1 = gen_program(cfg, rng, pool_q)
        return Instance(strategy, programs={
            "P1": p1,
            "P2": _equivalent_variant(p1, cfg, rng, pool_p),
            "Q1": q1,
            "Q2": _equivalent_variant(q1, cfg, rng, pool_q),
        })
    if pid is PostulateId.SA6:
        return Instance(strategy, programs={
            "P": gen_program(cfg, rng, pool_p),
            "Q1": gen_program(cfg, rng, pool_q),
            "Q2": gen_program(cfg, rng, pool_q),
        })
    if pid.family == "SA":
        p, q = gen_program(cfg, rng, pool_p), gen_program(cfg, rng, pool_q)
        return Instance(strategy, programs={"P": p, "Q": q})

    constraint = _gen_constraint(cfg, rng, pool_p)
    if pid is PostulateId.FP3:
        members = tuple(_nonempty(cfg, rng, pool_q) for _ in range(rng.randint(1, 2)))
        variants = tuple(_equivalent_variant(m, cfg, rng, pool_q) for m in members)
        return Instance(
            strategy,
            programs={"P": constraint,
                      "Q": _equivalent_variant(constraint, cfg, rng, pool_p)},
            profiles={"profile1": Profile(members), "profile2": Profile(variants)},
        )
    if pid is PostulateId.FP4:
        def side() -> Program:
            if rng.random() < 0.7:
                return _grow_entailing(cfg, rng, pool_q, constraint)
            return _nonempty(cfg, rng, pool_q)
        return Instance(strategy, programs={
            "constraint": constraint, "P1": side(), "P2": side(),
        })
    if pid in (PostulateId.FP5, PostulateId.FP6):
        return Instance(
            strategy,
            programs={"constraint": constraint},
            profiles={"profile1": _gen_profile(cfg, rng, pool_q, 2),
                      "profile2": _gen_profile(cfg, rng, pool_q, 2)},
        )
    if pid in (PostulateId.FP7, PostulateId.FP8):
        return Instance(
            strategy,
            programs={"constraint": constraint,
                      "Q": gen_program(cfg, rng, pool_q)},
            profiles={"profile1": _gen_profile(cfg, rng, pool_q)},
        )
    # FP0-FP2
    return Instance(
        strategy,
        programs={"constraint": constraint},
        profiles={"profile1": _gen_profile(cfg, rng, pool_q)},
    )


def _stream(seed: int, pid: PostulateId, strategy: Strategy, trial: int) -> random.Random:
    key = f"{seed}:{pid.value}:{strategy.value}:{trial}".encode()
    return random.Random(int.from_bytes(hashlib.sha256(key).digest()[:8], "big"))


def render_instance(instance: Instance) -> dict:
    return {
        "strategy": instance.strategy.value,
        "programs": {name: str(p) for name, p in sorted(instance.programs.items())},
        "profiles": {name: str(p) for name, p in sorted(instance.profiles.items())},
    }


@dataclass(frozen=True)
class EvalRecord:
    postulate: str
    strategy: str
    trial: int
    status: str


@dataclass(frozen=True)
class Violation:
    postulate: str
    strategy: str
    trial: int
    instance: dict
    witness: tuple[tuple[str, str], ...]
    guaranteed: bool

    def to_dict(self) -> dict:
        return {
            "postulate": self.postulate,
            "strategy": self.strategy,
            "trial": self.trial,
            "instance": self.instance,
            "witness": {k: v for k, v in self.witness},
            "guaranteed": self.guaranteed,
        }


@dataclass(frozen=True)
class CellSummary:
    postulate: str
    strategy: str
    holds: int = 0
    violated: int = 0
    vacuous: int = 0
    skipped: int = 0

    @property
    def non_vacuous(self) -> int:
        return self.holds + self.violated

    def to_dict(self) -> dict:
        return {
            "postulate": self.postulate,
            "strategy": self.strategy,
            "holds": self.holds,
            "violated": self.violated,
            "vacuous": self.vacuous,
            "skipped": self.skipped,
            "non_vacuous": self.non_vacuous,
        }


@dataclass(frozen=True)
class FuzzReport:
    config: FuzzConfig
    cells: tuple[CellSummary, ...]
    evaluations: tuple[EvalRecord, ...]
    violations: tuple[Violation, ...]

    @property
    def guaranteed_violations(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.guaranteed)

    def cell(self, pid: PostulateId, strategy: Strategy) -> CellSummary:
        for c in self.cells:
            if c.postulate == pid.value and c.strategy == strategy.value:
                return c
        raise KeyError((pid, strategy))

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "cells": [c.to_dict() for c in self.cells],
            "evaluations": [
                {"postulate": e.postulate, "strategy": e.strategy,
                 "trial": e.trial, "status": e.status}
                for e in self.evaluations
            ],
            "violations": [v.to_dict() for v in self.violations],
            "found_guaranteed_violation": bool(self.guaranteed_violations),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = []
        for c in self.cells:
            lines.append(
                f"{c.postulate} [{c.strategy}]: holds={c.holds} violated={c.violated} "
                f"vacuous={c.vacuous} skipped={c.skipped}"
            )
        for v in self.violations:
            flag = " (GUARANTEED POSTULATE)" if v.guaranteed else ""
            lines.append(f"violation: {v.postulate} [{v.strategy}] trial {v.trial}{flag}")
            for name, text in v.instance["programs"].items():
                lines.append(f"  {name}: {text.replace(chr(10), ' ')}")
            for name, text in v.instance["profiles"].items():
                lines.append(f"  {name}: {text.replace(chr(10), ' | ')}")
            for key, value in v.witness:
                lines.append(f"  {key} = {value}")
        lines.append(
            f"{len(self.evaluations)} evaluations, {len(self.violations)} violations, "
            f"{len(self.guaranteed_violations)} on guaranteed postulates"
        )
        return "\n".join(lines)


def search(cfg: FuzzConfig) -> FuzzReport:
    """Run cfg.trials random instances for every (postulate, strategy)
    pair and collect violations.  Size-limit hits are recorded as skipped
    evaluations, never as failures."""
    cells: list[CellSummary] = []
    evaluations: list[EvalRecord] = []
    violations: list[Violation] = []
    for pid in cfg.postulates:
        for strategy in cfg.strategies:
            counts = {Status.HOLDS: 0, Status.VIOLATED: 0,
                      Status.VACUOUS: 0, Status.SKIPPED: 0}
            for trial in range(cfg.trials):
                rng = _stream(cfg.seed, pid, strategy, trial)
                instance = gen_instance(pid, cfg, rng, strategy)
                try:
                    verdict = check(pid, instance)
                except SizeLimitExceeded as exc:
                    verdict = Verdict(Status.SKIPPED, reason=str(exc))
                counts[verdict.status] += 1
                evaluations.append(EvalRecord(pid.value, strategy.value, trial,
                                              verdict.status.value))
                if verdict.status is Status.VIOLATED:
                    violations.append(Violation(
                        postulate=pid.value,
                        strategy=strategy.value,
                        trial=trial,
                        instance=render_instance(instance),
                        witness=verdict.witness,
                        guaranteed=guaranteed(pid, strategy),
                    ))
            cells.append(CellSummary(
                postulate=pid.value,
                strategy=strategy.value,
                holds=counts[Status.HOLDS],
                violated=counts[Status.VIOLATED],
                vacuous=counts[Status.VACUOUS],
                skipped=counts[Status.SKIPPED],
            ))
    return FuzzReport(cfg, tuple(cells), tuple(evaluations), tuple(violations))


def total_rules(instance: Instance) -> int:
    count = sum(len(p) for p in instance.programs.values())
    count += sum(len(m) for profile in instance.profiles.values() for m in profile)
    return count


def _with_program(instance: Instance, name: str, program: Program) -> Instance:
    programs = dict(instance.programs)
    programs[name] = program
    return Instance(instance.strategy, programs=programs,
                    profiles=dict(instance.profiles))


def _with_profile(instance: Instance, name: str,
                  members: tuple[Program, ...]) -> Instance | None:
    if not members:
        return None
    profiles = dict(instance.profiles)
    profiles[name] = Profile(members)
    return Instance(instance.strategy, programs=dict(instance.programs),
                    profiles=profiles)


def _strip_atom(program: Program, atom: str) -> Program:
    return Program(frozenset(r for r in program.rules if atom not in r.atoms()))


def _shrink_candidates(instance: Instance) -> Iterator[Instance]:
    for name in sorted(instance.programs):
        for rule in instance.programs[name]:
            smaller = Program(instance.programs[name].rules - {rule})
            yield _with_program(instance, name, smaller)
    for name in sorted(instance.profiles):
        members = instance.profiles[name].members
        if len(members) > 1:
            for i in range(len(members)):
                candidate = _with_profile(instance, name, members[:i] + members[i + 1:])
                if candidate is not None:
                    yield candidate
        for i, member in enumerate(members):
            for rule in member:
                smaller = Program(member.rules - {rule})
                if smaller.rules:
                    replaced = members[:i] + (smaller,) + members[i + 1:]
                else:
                    replaced = members[:i] + members[i + 1:]
                candidate = _with_profile(instance, name, replaced)
                if candidate is not None:
                    yield candidate
    atoms: set[str] = set()
    for p in instance.programs.values():
        atoms |= p.atoms()
    for profile in instance.profiles.values():
        for m in profile:
            atoms |= m.atoms()
    for atom in sorted(atoms):
        programs = {name: _strip_atom(p, atom) for name, p in instance.programs.items()}
        profiles: dict[str, Profile] = {}
        ok = True
        for name, profile in instance.profiles.items():
            members = tuple(m for m in (_strip_atom(x, atom) for x in profile)
                            if m.rules)
            if not members:
                ok = False
                break
            profiles[name] = Profile(members)
        if ok:
            yield Instance(instance.strategy, programs=programs, profiles=profiles)


def shrink(instance: Instance, predicate: Callable[[Instance], bool]) -> Instance:
    """Greedily remove rules, profile members, and atoms while the
    predicate keeps holding.  The result is locally minimal: no single
    removal preserves the predicate."""
    if not predicate(instance):
        raise PredicateNotHolding("predicate does not hold on the input instance")
    current = instance
    while True:
        for candidate in _shrink_candidates(current):
            if total_rules(candidate) < total_rules(current) and predicate(candidate):
                current = candidate
                break
        else:
            return current
