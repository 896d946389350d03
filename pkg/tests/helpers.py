"""Shared program fixtures and construction shorthands for the tests."""

from fcmerge import ClosedSet, Literal, Program
from fcmerge.textio import parse_program


def prog(text: str) -> Program:
    return parse_program(text)


def lit(text: str) -> Literal:
    if text.startswith("-"):
        return Literal(text[1:], False)
    return Literal(text)


def lits(*texts: str) -> frozenset[Literal]:
    return frozenset(lit(t) for t in texts)


def closed(*texts: str) -> ClosedSet:
    return ClosedSet(lits(*texts))


# a four-layer derivation chain
LAYERED = "a. u. a -> b. a -> c. b -> t. c -> s. t -> s. s -> w. u -> h."

# the taxonomy program whose base has levels P0 > P1 > P2 > empty
TAXONOMY = "m -> s. c -> m. c -> -s. n -> c. n -> s."
TAXONOMY_LEVEL1 = "c -> m. c -> -s. n -> c. n -> s."
TAXONOMY_LEVEL2 = "n -> c. n -> s."

# consistent, yet every rule is exceptional: base is (P, empty)
ALL_EXCEPTIONAL = "a -> b. b -> -c. -c -> -a. -c -> b. -a -> -b. -a -> -c."

# a pair on which the three arbitration strategies give strictly
# increasing results (empty, {d}, {d, e})
GAP_P = "a. a, b -> -c. b -> d. b -> -c. -c -> e. a, -c -> f."
GAP_Q = "b. a, b -> c. a -> e. a, e -> c. a, e -> d. c -> d. c -> f."
