"""Syntactic belief revision, arbitration, and integrity-constrained
merging over forward-chaining rule programs."""

from .arbitration import Strategy, arbitrate, conj, disj
from .core import (
    BOTTOM,
    ClosedSet,
    Literal,
    Program,
    Rule,
    Stratification,
    closure,
    consistent_with,
    entails,
    is_consistent,
    stratify,
)
from .errors import (
    ConfigError,
    EmptyProfile,
    IncompleteBinding,
    InconsistentProgram,
    PredicateNotHolding,
    SizeLimitExceeded,
    SourceError,
)
from .fuzz import FuzzConfig, FuzzReport, gen_instance, gen_program, search, shrink
from .merging import Profile, merge
from .postulates import (
    Instance,
    PostulateId,
    Status,
    Verdict,
    check,
    check_fp,
    check_sa,
    guaranteed,
    run_corpus,
)
from .revision import (
    Base,
    Flock,
    base,
    exceptional_rules,
    flock_closure,
    hull,
    maximal_extensions,
    rank,
    revise_extended_hull,
    revise_hull,
    revise_rank,
)
from .textio import parse_profile, parse_program, parse_programs, render

__version__ = "0.1.0"

__all__ = [
    "BOTTOM",
    "Base",
    "ClosedSet",
    "ConfigError",
    "EmptyProfile",
    "Flock",
    "FuzzConfig",
    "FuzzReport",
    "IncompleteBinding",
    "InconsistentProgram",
    "Instance",
    "Literal",
    "PostulateId",
    "PredicateNotHolding",
    "Profile",
    "Program",
    "Rule",
    "SizeLimitExceeded",
    "SourceError",
    "Status",
    "Strategy",
    "Stratification",
    "Verdict",
    "arbitrate",
    "base",
    "check",
    "check_fp",
    "check_sa",
    "closure",
    "conj",
    "consistent_with",
    "disj",
    "entails",
    "exceptional_rules",
    "flock_closure",
    "gen_instance",
    "gen_program",
    "guaranteed",
    "hull",
    "is_consistent",
    "maximal_extensions",
    "merge",
    "parse_profile",
    "parse_program",
    "parse_programs",
    "rank",
    "render",
    "revise_extended_hull",
    "revise_hull",
    "revise_rank",
    "run_corpus",
    "search",
    "shrink",
    "stratify",
]
