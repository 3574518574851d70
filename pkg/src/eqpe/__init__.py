"""Partial evaluation of order-sorted equational programs modulo
associativity, commutativity and identity axioms.

The pipeline: parse or build a theory, compile it into rewrite rules,
run the specializer on a set of calls, extract the resultants and
rename them into an independent specialized program.

    >>> from eqpe import *
    >>> th = parse_module(open("prog.fmod").read())
    >>> ct = compile_theory(th)
    >>> state = eqnpe(ct, [parse_term(th, "flip(flip(T))")])
    >>> rmap, spec = rename(extract_resultants(state), state)
    >>> print(print_module(spec))
"""

from .embedding import embeds_modulo
from .engine import (SpecializationState, closed_modulo, eqnpe,
                     extract_resultants, make_renaming, rename,
                     rename_term, renaming_from_json, unrename_term)
from .errors import (EqpeError, GuardError, IllTyped, InputError,
                     NonConvergence, NonTermination, NotClosed,
                     ParseError)
from .generalize import bmt, lgg_modulo
from .narrowing import build_folding_tree, to_dot
from .parse import parse_module, parse_term, print_module, print_term
from .rewrite import compile_theory, normalize, rewrite_step
from .signature import AxiomSet, Equation, FREE, OpDecl, Theory
from .solver import (eq_modulo_renaming, instance_of, match_modulo,
                     matches, unify_modulo)
from .terms import Subst, Term, Var, least_sort, mk_app, mk_var

__version__ = "0.1.0"

__all__ = [
    "AxiomSet", "Equation", "EqpeError", "FREE", "GuardError", "IllTyped",
    "InputError", "NonConvergence", "NonTermination", "NotClosed",
    "OpDecl", "ParseError", "SpecializationState", "Subst", "Term",
    "Theory", "Var", "bmt", "build_folding_tree", "closed_modulo",
    "compile_theory", "embeds_modulo", "eq_modulo_renaming", "eqnpe",
    "extract_resultants", "instance_of", "least_sort", "lgg_modulo",
    "make_renaming", "match_modulo", "matches", "mk_app", "mk_var",
    "normalize", "parse_module",
    "parse_term", "print_module", "print_term", "rename", "rename_term",
    "renaming_from_json", "rewrite_step", "to_dot", "unify_modulo",
    "unrename_term",
]
