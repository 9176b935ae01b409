"""Terms, substitutions, unification and anti-unification.

Terms are immutable values.  Variables are identified by name: names read
from source text are kept as written, anonymous variables get reader-local
names ``_<n>``, and fresh variables issued by a :class:`VarSupply` are
named ``_G<n>``.  The three namespaces cannot collide.

A substitution is a plain ``dict`` mapping :class:`Var` to :class:`Term`.
Functions in this module never mutate the dicts they are given.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Int:
    value: int

    def __repr__(self):
        return str(self.value)


@dataclass(frozen=True, slots=True)
class Compound:
    functor: str
    args: Tuple["Term", ...]

    def __post_init__(self):
        if not self.args:
            raise ValueError("compound terms need at least one argument")

    @property
    def arity(self) -> int:
        return len(self.args)

    def __repr__(self):
        return f"{self.functor}({', '.join(map(repr, self.args))})"


Term = Union[Var, Atom, Int, Compound]
Substitution = Dict[Var, Term]

NIL = Atom("[]")


def mk(functor: str, *args: Term) -> Term:
    """Build an atom (no args) or a compound term."""
    if not args:
        return Atom(functor)
    return Compound(functor, tuple(args))


def mklist(items: Iterable[Term], tail: Term = NIL) -> Term:
    items = list(items)
    out = tail
    for item in reversed(items):
        out = Compound(".", (item, out))
    return out


def list_items(t: Term) -> Optional[List[Term]]:
    """Items of a proper list, or None if ``t`` is not one."""
    out = []
    while isinstance(t, Compound) and t.functor == "." and len(t.args) == 2:
        out.append(t.args[0])
        t = t.args[1]
    return out if t == NIL else None


def indicator(t: Term) -> Tuple[str, int]:
    """Predicate indicator (name, arity) of a callable term."""
    if isinstance(t, Atom):
        return (t.name, 0)
    if isinstance(t, Compound):
        return (t.functor, len(t.args))
    raise TypeError(f"not callable: {t!r}")


def is_ground(t: Term) -> bool:
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            return False
        if isinstance(t, Compound):
            stack.extend(t.args)
    return True


def term_depth(t: Term) -> int:
    """Nesting depth: constants and variables 0, f(t1..tn) is 1 + max."""
    if isinstance(t, Compound):
        return 1 + max(term_depth(a) for a in t.args)
    return 0


def iter_vars(t: Term) -> Iterator[Var]:
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            yield t
        elif isinstance(t, Compound):
            stack.extend(reversed(t.args))


def variables_of(t: Union[Term, Iterable[Term]]) -> List[Var]:
    """Variables in left-to-right first-occurrence order."""
    terms = [t] if isinstance(t, (Var, Atom, Int, Compound)) else list(t)
    seen: Dict[Var, None] = {}
    for term in terms:
        for v in iter_vars(term):
            seen.setdefault(v, None)
    return list(seen)


# -- substitutions ----------------------------------------------------------

def apply(s: Substitution, t: Term) -> Term:
    """Replace every bound variable of ``t`` simultaneously."""
    if not s:
        return t
    if isinstance(t, Var):
        return s.get(t, t)
    if isinstance(t, Compound):
        args = tuple(apply(s, a) for a in t.args)
        if args == t.args:
            return t
        return Compound(t.functor, args)
    return t


def compose(s1: Substitution, s2: Substitution) -> Substitution:
    """The substitution that applies ``s1`` first and then ``s2``."""
    out: Substitution = {}
    for v, t in s1.items():
        t2 = apply(s2, t)
        if t2 != v:
            out[v] = t2
    for v, t in s2.items():
        if v not in s1 and t != v:
            out[v] = t
    return out


def restrict(s: Substitution, vs: Iterable[Var]) -> Substitution:
    return {v: s[v] for v in vs if v in s}


# -- unification --------------------------------------------------------------

def walk(t: Term, s: Substitution) -> Term:
    """Dereference a variable through a triangular substitution."""
    while isinstance(t, Var):
        nxt = s.get(t)
        if nxt is None:
            return t
        t = nxt
    return t


def occurs(v: Var, t: Term, s: Substitution) -> bool:
    stack = [t]
    while stack:
        t = walk(stack.pop(), s)
        if t == v:
            return True
        if isinstance(t, Compound):
            stack.extend(t.args)
    return False


def unify_triangular(t1: Term, t2: Term, s: Substitution,
                     occurs_check: bool = True) -> Optional[Substitution]:
    """Extend triangular substitution ``s`` so that ``t1`` and ``t2`` unify.

    Returns a new dict (``s`` is left untouched) or None.
    """
    out = None
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        cur = s if out is None else out
        a = walk(a, cur)
        b = walk(b, cur)
        if a is b or a == b:
            continue
        if isinstance(a, Var):
            if occurs_check and occurs(a, b, cur):
                return None
            if out is None:
                out = dict(s)
            out[a] = b
        elif isinstance(b, Var):
            if occurs_check and occurs(b, a, cur):
                return None
            if out is None:
                out = dict(s)
            out[b] = a
        elif isinstance(a, Compound) and isinstance(b, Compound):
            if a.functor != b.functor or len(a.args) != len(b.args):
                return None
            stack.extend(zip(reversed(a.args), reversed(b.args)))
        else:
            return None
    return dict(s) if out is None else out


def resolve(t: Term, s: Substitution, _active: frozenset = frozenset()) -> Term:
    """Fully apply a triangular substitution.

    Cyclic bindings (only possible without the occurs check) are cut off by
    leaving the offending variable in place.
    """
    if isinstance(t, Var):
        if t in _active:
            return t
        b = s.get(t)
        if b is None:
            return t
        return resolve(b, s, _active | {t})
    if isinstance(t, Compound):
        args = tuple(resolve(a, s, _active) for a in t.args)
        return Compound(t.functor, args)
    return t


def unify(t1: Term, t2: Term, occurs_check: bool = True) -> Optional[Substitution]:
    """Most general unifier of ``t1`` and ``t2`` in idempotent form, or None."""
    tri = unify_triangular(t1, t2, {}, occurs_check)
    if tri is None:
        return None
    out = {}
    for v in tri:
        t = resolve(v, tri)
        if t != v:
            out[v] = t
    return out


# -- renaming -----------------------------------------------------------------

class VarSupply:
    """Source of fresh variables ``_G1``, ``_G2``, ...

    The counter only grows, so issued variables never collide.
    """

    def __init__(self, start: int = 0):
        self.counter = start

    def fresh(self) -> Var:
        self.counter += 1
        return Var(f"_G{self.counter}")

    def renaming(self, vs: Iterable[Var]) -> Substitution:
        return {v: self.fresh() for v in vs}


def rename_term(t: Term, supply: VarSupply) -> Term:
    return apply(supply.renaming(variables_of(t)), t)


def rename_apart(clause, supply: VarSupply):
    """Variant of ``clause`` whose variables are all fresh.

    Works for anything with ``head`` and ``body`` term tuples (see
    :class:`simplylog.clauses.Clause`).
    """
    ren = supply.renaming(variables_of(list(clause.head) + list(clause.body)))
    return clause.substitute(ren)


def is_variant(t1: Term, t2: Term) -> bool:
    """True when the terms are equal up to a bijective variable renaming."""
    fwd: Dict[Var, Var] = {}
    back: Dict[Var, Var] = {}
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        if isinstance(a, Var) and isinstance(b, Var):
            if fwd.setdefault(a, b) != b or back.setdefault(b, a) != a:
                return False
        elif isinstance(a, Compound) and isinstance(b, Compound):
            if a.functor != b.functor or len(a.args) != len(b.args):
                return False
            stack.extend(zip(a.args, b.args))
        elif a != b or isinstance(a, Var) or isinstance(b, Var):
            return False
    return True


# -- anti-unification -----------------------------------------------------------

class Generalizer:
    """Anti-unification with a shared disagreement table.

    The same pair of disagreeing subterms is always mapped to the same
    variable, across every call on one instance.  That sharing is what makes
    clause-level lgg work.
    """

    def __init__(self, avoid: Iterable[Var] = ()):
        self.table: Dict[Tuple[Term, Term], Var] = {}
        self.left: Substitution = {}
        self.right: Substitution = {}
        self._avoid = {v.name for v in avoid}
        self._n = 0

    def _fresh(self) -> Var:
        while True:
            self._n += 1
            name = f"V{self._n}"
            if name not in self._avoid:
                return Var(name)

    def generalize(self, t1: Term, t2: Term) -> Term:
        if t1 == t2:
            return t1
        if (isinstance(t1, Compound) and isinstance(t2, Compound)
                and t1.functor == t2.functor and len(t1.args) == len(t2.args)):
            return Compound(t1.functor, tuple(
                self.generalize(a, b) for a, b in zip(t1.args, t2.args)))
        key = (t1, t2)
        v = self.table.get(key)
        if v is None:
            v = self._fresh()
            self.table[key] = v
            self.left[v] = t1
            self.right[v] = t2
        return v


def anti_unify(t1: Term, t2: Term) -> Tuple[Term, Substitution, Substitution]:
    """Least general generalization ``g`` with ``g s1 = t1`` and ``g s2 = t2``."""
    gen = Generalizer(avoid=variables_of([t1, t2]))
    g = gen.generalize(t1, t2)
    return g, dict(gen.left), dict(gen.right)


# -- standard order ---------------------------------------------------------------

def order_key(t: Term):
    """Sort key for the standard order: Var < Int < Atom < Compound.

    Compounds compare by arity, then name, then arguments left to right.
    """
    if isinstance(t, Var):
        return (0, t.name)
    if isinstance(t, Int):
        return (1, t.value)
    if isinstance(t, Atom):
        return (2, t.name)
    return (3, len(t.args), t.functor, tuple(order_key(a) for a in t.args))
