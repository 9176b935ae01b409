"""General clauses and programs.

A clause ``A1 ; ... ; An :- B1, ..., Bm`` keeps its head atoms and body
atoms as tuples.  Definite clauses have exactly one head atom, denials
none, and the empty clause has neither head nor body.  For the SLD engine
a body element may also be a control construct or builtin call.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .terms import (Atom, Compound, Int, Substitution, Term, Var, apply,
                    indicator, is_ground, order_key, variables_of)


@dataclass(frozen=True)
class Clause:
    head: Tuple[Term, ...]
    body: Tuple[Term, ...] = ()

    @property
    def is_definite(self) -> bool:
        return len(self.head) == 1

    @property
    def is_denial(self) -> bool:
        return not self.head and bool(self.body)

    @property
    def is_empty(self) -> bool:
        return not self.head and not self.body

    @property
    def is_ground(self) -> bool:
        return all(is_ground(t) for t in self.head + self.body)

    def variables(self) -> List[Var]:
        return variables_of(list(self.head) + list(self.body))

    def substitute(self, s: Substitution) -> "Clause":
        return Clause(tuple(apply(s, t) for t in self.head),
                      tuple(apply(s, t) for t in self.body))

    def normalized(self) -> "Clause":
        """Duplicate-free literals in standard order (for set semantics)."""
        return Clause(_sorted_unique(self.head), _sorted_unique(self.body))

    def to_term(self) -> Term:
        if len(self.head) > 1:
            head = _join(";", self.head)
        elif self.head:
            head = self.head[0]
        else:
            head = None
        if not self.body:
            if head is None:
                return Atom("[]")
            return head
        body = _join(",", self.body)
        if head is None:
            return Compound(":-", (body,))
        return Compound(":-", (head, body))

    def __str__(self):
        return format_clause(self)


def _sorted_unique(ts: Iterable[Term]) -> Tuple[Term, ...]:
    return tuple(sorted(set(ts), key=order_key))


def _join(op: str, ts: Sequence[Term]) -> Term:
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Compound(op, (t, out))
    return out


def flatten(t: Term, op: str = ",") -> List[Term]:
    out = []
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Compound) and t.functor == op and len(t.args) == 2:
            stack.append(t.args[1])
            stack.append(t.args[0])
        else:
            out.append(t)
    return out


def term_to_clause(t: Term, allow_disjunctive: bool = True) -> Clause:
    """Read a clause term: ``H :- B``, ``H``, ``:- B`` (denial), or heads
    joined by ``;`` for general clauses."""
    if isinstance(t, Compound) and t.functor == ":-" and len(t.args) == 2:
        head_t, body_t = t.args
        body = tuple(b for b in flatten(body_t) if b != Atom("true"))
    elif isinstance(t, Compound) and t.functor == ":-" and len(t.args) == 1:
        return Clause((), tuple(flatten(t.args[0])))
    else:
        head_t, body = t, ()
    heads = tuple(flatten(head_t, ";")) if allow_disjunctive else (head_t,)
    for h in heads:
        if isinstance(h, (Var, Int)):
            raise ValueError(f"clause head must be callable: {h!r}")
    return Clause(heads, body)


class Program:
    """An ordered clause collection with a predicate index.

    Program values are treated as immutable; :meth:`extend` returns a new
    program.  Predicates loaded as library code are overridden (not merged)
    when user clauses for the same predicate arrive.
    """

    def __init__(self, clauses: Iterable[Clause] = (), library: Iterable[Tuple[str, int]] = (),
                 declared: Iterable[Tuple[str, int]] = ()):
        self.clauses: Tuple[Clause, ...] = tuple(clauses)
        self.library = frozenset(library)
        self.declared = frozenset(declared)
        index: Dict[Tuple[str, int], List[int]] = {}
        for i, c in enumerate(self.clauses):
            for h in c.head:
                index.setdefault(indicator(h), []).append(i)
        self.index = {k: tuple(v) for k, v in index.items()}

    def __len__(self):
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __eq__(self, other):
        return isinstance(other, Program) and self.clauses == other.clauses

    def __hash__(self):
        return hash(self.clauses)

    def __repr__(self):
        return f"Program({len(self.clauses)} clauses)"

    @property
    def is_definite(self) -> bool:
        return all(c.is_definite for c in self.clauses)

    def clauses_for(self, key: Tuple[str, int]) -> List[Tuple[int, Clause]]:
        return [(i, self.clauses[i]) for i in self.index.get(key, ())]

    def defines(self, key: Tuple[str, int]) -> bool:
        return key in self.index or key in self.declared

    def with_declared(self, keys: Iterable[Tuple[str, int]]) -> "Program":
        """Same clauses, with ``keys`` declared as (possibly empty) predicates."""
        return Program(self.clauses, self.library, self.declared | frozenset(keys))

    def predicates(self) -> List[Tuple[str, int]]:
        """Every predicate occurring in a head or a plain body atom."""
        seen: Dict[Tuple[str, int], None] = {}
        for c in self.clauses:
            for t in c.head + c.body:
                for a in atoms_in_goal(t):
                    seen.setdefault(indicator(a), None)
        return list(seen)

    def extend(self, clauses: Iterable[Clause], as_library: bool = False) -> "Program":
        clauses = list(clauses)
        new_keys = {indicator(c.head[0]) for c in clauses if c.head}
        if as_library:
            return Program(self.clauses + tuple(clauses), self.library | new_keys, self.declared)
        overridden = new_keys & self.library
        kept = [c for c in self.clauses
                if not (c.head and indicator(c.head[0]) in overridden)]
        return Program(kept + clauses, self.library - overridden, self.declared)


_CONTROL = {(",", 2), (";", 2), ("->", 2), ("\\+", 1), ("call", 1)}


def atoms_in_goal(t: Term) -> List[Term]:
    """Plain atoms of a body goal, looking through control constructs."""
    if isinstance(t, (Var, Int)):
        return []
    key = indicator(t)
    if key in _CONTROL:
        out = []
        for a in t.args:
            out.extend(atoms_in_goal(a))
        return out
    return [t]


def format_clause(c: Clause, number_vars: bool = False) -> str:
    """Programme syntax: ``h :- b1, b2.``, ``h.``, ``:- b.``, ``[]`` for empty."""
    from .reader import write_term

    def w(t):
        return write_term(t, quoted=True, number_vars=False, max_priority=999)

    if number_vars:
        from .terms import Var as _V
        names = {}
        for v in c.variables():
            names[v] = _V(_letter_name(len(names)))
        c = c.substitute(names)
    if c.is_empty:
        return "[]"
    head = " ; ".join(w(h) for h in c.head)
    if not c.body:
        return head + "."
    body = ", ".join(w(b) for b in c.body)
    if not c.head:
        return f":- {body}."
    return f"{head} :- {body}."


def _letter_name(i: int) -> str:
    letter = chr(ord("A") + i % 26)
    return letter if i < 26 else f"{letter}{i // 26}"
