"""First-order formulas over terms.

The functional text syntax is ``not(F)``, ``and(F,G)``, ``or(F,G)``,
``implies(F,G)``, ``iff(F,G)``, ``forall(X,F)``, ``exists(X,F)`` and
``S = T``; anything else is an atomic formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Set, Union

from .terms import Atom, Compound, Term, Var, iter_vars


@dataclass(frozen=True)
class AtomF:
    atom: Term


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Formula"


Formula = Union[AtomF, Equals, Not, And, Or, Implies, Iff, Forall, Exists]

_BINARY = {And: "and", Or: "or", Implies: "implies", Iff: "iff"}
_QUANT = {Forall: "forall", Exists: "exists"}


def conj(fs: List[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``true``."""
    if not fs:
        return AtomF(Atom("true"))
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(fs: List[Formula]) -> Formula:
    if not fs:
        return AtomF(Atom("false"))
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def free_vars(f: Formula) -> List[Var]:
    out: List[Var] = []

    def go(f, bound: Set[Var]):
        if isinstance(f, AtomF):
            ts = [f.atom]
        elif isinstance(f, Equals):
            ts = [f.left, f.right]
        elif isinstance(f, Not):
            return go(f.arg, bound)
        elif isinstance(f, (Forall, Exists)):
            return go(f.body, bound | {f.var})
        else:
            go(f.left, bound)
            return go(f.right, bound)
        for t in ts:
            for v in iter_vars(t):
                if v not in bound and v not in out:
                    out.append(v)

    go(f, frozenset())
    return out


def to_term(f: Formula) -> Term:
    """Functional-syntax term for a formula (inverse of the reader)."""
    if isinstance(f, AtomF):
        return f.atom
    if isinstance(f, Equals):
        return Compound("=", (f.left, f.right))
    if isinstance(f, Not):
        return Compound("not", (to_term(f.arg),))
    if type(f) in _QUANT:
        return Compound(_QUANT[type(f)], (f.var, to_term(f.body)))
    return Compound(_BINARY[type(f)], (to_term(f.left), to_term(f.right)))


def format_formula(f: Formula) -> str:
    from .reader import write_term
    return write_term(to_term(f), quoted=True)

