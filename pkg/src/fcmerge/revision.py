"""Exceptionality, ranked bases, and three syntactic revision operators.

A rule is exceptional when its body cannot be consistently added to the
whole program.  Iterating "keep only the exceptional rules" produces a
decreasing sequence of programs, the base.  Revision by new information
adjoins it to the least exceptional level that tolerates it (rank
revision), to the intersection of all maximal tolerant subsets (hull
revision), or to each maximal tolerant subset separately, producing a
flock (extended hull revision).  Consequence-wise the three operators
form a chain: rank below hull below extended hull.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .core import ClosedSet, Program, Rule, closure, consistent_with
from .errors import ConfigError, SizeLimitExceeded

DEFAULT_ENUM_CAP = 24
ENUM_CAP_ENV = "FCMERGE_MAX_ENUM"


def _effective_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    raw = os.environ.get(ENUM_CAP_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_ENUM_CAP
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{ENUM_CAP_ENV} must be an integer, got {raw!r}")
    if value < 0:
        raise ConfigError(f"{ENUM_CAP_ENV} must be nonnegative, got {value}")
    return value


@dataclass(frozen=True)
class Base:
    """The decreasing sequence of exceptional-rule programs, ending in
    the empty program."""

    levels: tuple[Program, ...]

    @property
    def last_index(self) -> int:
        return len(self.levels) - 1


@dataclass(frozen=True)
class Flock:
    """A nonempty ordered sequence of programs whose joint consequences
    are the intersection of the member consequences."""

    members: tuple[Program, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("a flock must contain at least one program")

    @classmethod
    def of(cls, program: Program) -> Flock:
        return cls((program,))

    def __add__(self, other: Flock) -> Flock:
        return Flock(self.members + other.members)

    def __iter__(self) -> Iterator[Program]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __str__(self) -> str:
        return "\n---\n".join(str(m) for m in self.members)


def exceptional_rules(program: Program) -> Program:
    """The rules whose bodies cannot be consistently added to the program.

    Every rule of an inconsistent program is exceptional; facts of a
    consistent program never are (their body is empty).
    """
    if closure(program).is_bottom:
        return program
    return Program(frozenset(
        r for r in program.rules if not consistent_with(r.body, program)
    ))


@lru_cache(maxsize=1 << 12)
def base(program: Program) -> Base:
    """Iterate exceptional_rules from the program down to a fixpoint,
    then append the empty program unless the fixpoint already is empty."""
    levels = [program]
    while True:
        nxt = exceptional_rules(levels[-1])
        if nxt == levels[-1]:
            break
        levels.append(nxt)
    if levels[-1].rules:
        levels.append(Program())
    return Base(tuple(levels))


def rank(p: Program, q: Program) -> int:
    """Index of the first base level of p that q can consistently join.

    When either program is inconsistent the rank is the last index of the
    base, whose level is the empty program, so revision collapses to the
    new information alone.
    """
    b = base(p)
    if closure(p).is_bottom or closure(q).is_bottom:
        return b.last_index
    for i, level in enumerate(b.levels):
        if not closure(level | q).is_bottom:
            return i
    raise AssertionError("unreachable: bases end in the empty program")


def revise_rank(p: Program, q: Program) -> Program:
    """Adjoin q to the least exceptional level of p consistent with it."""
    return base(p).levels[rank(p, q)] | q


def maximal_extensions(p: Program, q: Program, cap: int | None = None) -> tuple[Program, ...]:
    """All maximal subsets of p that contain the rank level and stay
    consistent with q, in canonical text order.

    Empty exactly when q is inconsistent.  Enumeration is exponential in
    the worst case; more candidate rules than the cap (default
    DEFAULT_ENUM_CAP, overridable via the FCMERGE_MAX_ENUM environment
    variable) raise SizeLimitExceeded.
    """
    if closure(q).is_bottom:
        return ()
    return _enumerate_extensions(p, q, _effective_cap(cap))


@lru_cache(maxsize=1 << 12)
def _enumerate_extensions(p: Program, q: Program, cap: int) -> tuple[Program, ...]:
    required = base(p).levels[rank(p, q)].rules
    candidates = tuple(sorted(p.rules - required, key=str))
    if len(candidates) > cap:
        raise SizeLimitExceeded(
            f"{len(candidates)} candidate rules exceed the enumeration cap of {cap}"
        )

    def tolerable(rules: frozenset[Rule]) -> bool:
        return not closure(Program(rules) | q).is_bottom

    found: set[frozenset[Rule]] = set()

    def search(chosen: frozenset[Rule], rest: tuple[Rule, ...]) -> None:
        # invariant: chosen is q-consistent
        everything = chosen | frozenset(rest)
        if tolerable(everything):
            found.add(everything)
            return
        head, tail = rest[0], rest[1:]
        if tolerable(chosen | {head}):
            search(chosen | {head}, tail)
        search(chosen, tail)

    search(frozenset(required), candidates)

    maximal = [
        s for s in found
        if all(c in s or not tolerable(s | {c}) for c in candidates)
    ]
    return tuple(sorted((Program(s) for s in maximal), key=str))


def hull(p: Program, q: Program, cap: int | None = None) -> Program:
    """Intersection of all maximal extensions; the empty program when
    there are none.  Always contains the rank level of p."""
    extensions = maximal_extensions(p, q, cap)
    if not extensions:
        return Program()
    rules = extensions[0].rules
    for ext in extensions[1:]:
        rules &= ext.rules
    return Program(rules)


def revise_hull(p: Program, q: Program, cap: int | None = None) -> Program:
    return hull(p, q, cap) | q


def revise_extended_hull(a: Union[Flock, Program], q: Program,
                         cap: int | None = None) -> Flock:
    """Revise each flock member into one program per maximal extension
    and concatenate; a member with no extensions contributes q alone.
    A bare program is treated as a singleton flock."""
    if isinstance(a, Program):
        a = Flock.of(a)
    members: list[Program] = []
    for m in a:
        extensions = maximal_extensions(m, q, cap)
        if extensions:
            members.extend(ext | q for ext in extensions)
        else:
            members.append(q)
    return Flock(tuple(members))


def flock_closure(a: Flock) -> ClosedSet:
    """Intersection of the member closures, the inconsistent value acting
    as top element."""
    result = closure(a.members[0])
    for m in a.members[1:]:
        result = result.meet(closure(m))
    return result
