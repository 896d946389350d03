"""Literals, rules, programs, and their forward-chaining consequences.

A belief base is a finite set of rules over literals; a fact is a rule
with an empty body.  The consequence operator fires every rule whose body
literals have all been derived and keeps going until nothing new appears.
If an atom and its negation are both derived, the consequences collapse
to the inconsistent value, represented here by the ``BOTTOM`` sentinel
rather than by materializing the set of all literals (which would depend
on an unbounded vocabulary).

All values are immutable and all operations are pure, so everything in
this module is safe to share between threads.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import InconsistentProgram

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Literal:
    """An atom or its negation."""

    atom: str
    positive: bool = True

    def __post_init__(self) -> None:
        if not _ATOM_RE.match(self.atom):
            raise ValueError(f"invalid atom name: {self.atom!r}")

    def negated(self) -> Literal:
        return Literal(self.atom, not self.positive)

    def sort_key(self) -> tuple[str, bool]:
        # atom ascending, positive before negative
        return (self.atom, not self.positive)

    def __str__(self) -> str:
        return self.atom if self.positive else "-" + self.atom


@dataclass(frozen=True)
class Rule:
    """body -> head.  A fact is a rule with an empty body.

    Duplicate body literals collapse at construction.  A body containing
    an atom and its negation is legal; such a rule simply never fires in
    a consistent context.
    """

    body: frozenset[Literal]
    head: Literal

    def __post_init__(self) -> None:
        object.__setattr__(self, "body", frozenset(self.body))

    @classmethod
    def fact(cls, head: Literal) -> Rule:
        return cls(frozenset(), head)

    @property
    def is_fact(self) -> bool:
        return not self.body

    def atoms(self) -> frozenset[str]:
        return frozenset(lit.atom for lit in self.body) | {self.head.atom}

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        body = ", ".join(str(l) for l in sorted(self.body, key=Literal.sort_key))
        return f"{body} -> {self.head}."


@dataclass(frozen=True)
class Program:
    """A finite set of rules with set semantics: inserting a duplicate is
    a no-op and equality ignores insertion order."""

    rules: frozenset[Rule] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", frozenset(self.rules))

    @classmethod
    def from_facts(cls, literals: Iterable[Literal]) -> Program:
        return cls(frozenset(Rule.fact(l) for l in literals))

    @property
    def facts(self) -> frozenset[Literal]:
        return frozenset(r.head for r in self.rules if r.is_fact)

    def atoms(self) -> frozenset[str]:
        out: set[str] = set()
        for r in self.rules:
            out.update(r.atoms())
        return frozenset(out)

    def __or__(self, other: Program) -> Program:
        return Program(self.rules | other.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __contains__(self, rule: Rule) -> bool:
        return rule in self.rules

    def __iter__(self) -> Iterator[Rule]:
        # canonical text order, so iteration is deterministic everywhere
        return iter(sorted(self.rules, key=str))

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self)


@dataclass(frozen=True)
class ClosedSet:
    """The result of closing a program: either a consistent set of
    literals or the inconsistent sentinel.

    ``literals is None`` encodes the inconsistent value.  It behaves as
    the top element: it contains every literal, includes every set, and
    intersecting with it is the identity.
    """

    literals: frozenset[Literal] | None

    def __post_init__(self) -> None:
        if self.literals is not None:
            lits = frozenset(self.literals)
            for l in lits:
                if l.negated() in lits:
                    raise ValueError(f"opposed literals {l} and {l.negated()}")
            object.__setattr__(self, "literals", lits)

    @classmethod
    def of(cls, literals: Iterable[Literal]) -> ClosedSet:
        """Collapse a plain literal set: opposed literals yield BOTTOM."""
        lits = frozenset(literals)
        for l in lits:
            if l.negated() in lits:
                return BOTTOM
        return cls(lits)

    @property
    def is_bottom(self) -> bool:
        return self.literals is None

    def __contains__(self, literal: Literal) -> bool:
        if self.literals is None:
            return True
        return literal in self.literals

    def __iter__(self) -> Iterator[Literal]:
        if self.literals is None:
            raise ValueError("cannot enumerate the inconsistent closure")
        return iter(sorted(self.literals, key=Literal.sort_key))

    def issubset(self, other: ClosedSet) -> bool:
        if other.literals is None:
            return True
        if self.literals is None:
            return False
        return self.literals <= other.literals

    def meet(self, other: ClosedSet) -> ClosedSet:
        """Intersection, with the inconsistent value as top element."""
        if self.literals is None:
            return other
        if other.literals is None:
            return self
        return ClosedSet(self.literals & other.literals)

    def join(self, other: ClosedSet) -> ClosedSet:
        """Union as literal sets; opposed literals collapse to BOTTOM."""
        if self.literals is None or other.literals is None:
            return BOTTOM
        return ClosedSet.of(self.literals | other.literals)

    def __str__(self) -> str:
        if self.literals is None:
            return "#bottom"
        return ", ".join(str(l) for l in self)


BOTTOM = ClosedSet(None)


@dataclass(frozen=True)
class Stratification:
    """Derivation layers of a consistent program: layer 0 holds the facts
    and layer i the literals first derived after i firing rounds."""

    layers: tuple[frozenset[Literal], ...]

    def all_literals(self) -> frozenset[Literal]:
        out: set[Literal] = set()
        for layer in self.layers:
            out.update(layer)
        return frozenset(out)


@lru_cache(maxsize=1 << 16)
def closure(program: Program) -> ClosedSet:
    """Forward-chaining consequences of a program.

    Unit-propagation style: each non-fact rule counts how many distinct
    body literals are still underived, and fires when the count reaches
    zero.  Runs in time linear in the total body size.
    """
    heads: list[Literal] = []
    missing: list[int] = []
    watchers: dict[Literal, list[int]] = {}
    derived: set[Literal] = set()
    queue: deque[Literal] = deque()

    def derive(lit: Literal) -> bool:
        if lit in derived:
            return True
        if lit.negated() in derived:
            return False
        derived.add(lit)
        queue.append(lit)
        return True

    for rule in program.rules:
        if rule.is_fact:
            continue
        idx = len(heads)
        heads.append(rule.head)
        missing.append(len(rule.body))
        for lit in rule.body:
            watchers.setdefault(lit, []).append(idx)

    for fact in program.facts:
        if not derive(fact):
            return BOTTOM

    while queue:
        lit = queue.popleft()
        for idx in watchers.get(lit, ()):
            missing[idx] -= 1
            if missing[idx] == 0 and not derive(heads[idx]):
                return BOTTOM

    return ClosedSet(frozenset(derived))


def is_consistent(program: Program) -> bool:
    return not closure(program).is_bottom


def consistent_with(literals: Iterable[Literal], program: Program) -> bool:
    """Whether the literal set can be added to the program as facts
    without collapsing its consequences."""
    return not closure(program | Program.from_facts(literals)).is_bottom


def stratify(program: Program) -> Stratification:
    """Split the consequences of a consistent program into rounds.

    Layer 0 is the set of facts; layer i+1 holds the heads of rules whose
    bodies are covered by layers 0..i and that are not already derived.
    Layers after the first are nonempty, they are pairwise disjoint, and
    their union is the closure.
    """
    facts = program.facts
    derived: set[Literal] = set()
    for lit in facts:
        if lit.negated() in facts:
            raise InconsistentProgram(str(program))
    derived.update(facts)
    layers = [frozenset(facts)]
    chaining = [r for r in program.rules if not r.is_fact]
    while True:
        new = {r.head for r in chaining if r.head not in derived and r.body <= derived}
        if not new:
            break
        for lit in new:
            if lit.negated() in derived or lit.negated() in new:
                raise InconsistentProgram(str(program))
        derived.update(new)
        layers.append(frozenset(new))
    return Stratification(tuple(layers))


def entails(p: Program, q: Program) -> bool:
    """Consequence inclusion: every consequence of q is one of p."""
    return closure(q).issubset(closure(p))
