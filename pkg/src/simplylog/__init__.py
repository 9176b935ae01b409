"""simplylog: a small logic-programming engine and reasoning toolkit."""

from .terms import Atom, Compound, Int, Var, anti_unify, apply, compose, unify, variables_of
from .clauses import Clause, Program
from .reader import parse_formula, parse_program, parse_term, write_term
from .sld import (BreadthFirst, DepthFirst, EngineLimits, IterativeDeepening, consult,
                  program_from_text, solve)

__all__ = [
    "Atom", "Compound", "Int", "Var", "anti_unify", "apply", "compose", "unify",
    "variables_of", "Clause", "Program", "parse_formula", "parse_program", "parse_term",
    "write_term", "BreadthFirst", "DepthFirst", "EngineLimits", "IterativeDeepening",
    "consult", "program_from_text", "solve",
]
