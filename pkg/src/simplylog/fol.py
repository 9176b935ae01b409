"""First-order transforms: clausal form, predicate completion, closed world.

``to_clausal_form`` runs the textbook pipeline: remove ``iff``/``implies``,
push negations inward, standardize bound variables apart, Skolemize, drop
universal quantifiers, distribute ``or`` over ``and``, and read off clauses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .clausal import herbrand_base, least_herbrand_model
from .clauses import Clause, Program, flatten
from .formula import (And, AtomF, Equals, Exists, Forall, Formula, Iff, Implies, Not, Or,
                      conj, disj, free_vars)
from .terms import Atom, Compound, Int, Term, Var, apply, indicator, order_key, variables_of

TRUE = AtomF(Atom("true"))
FALSE = AtomF(Atom("false"))


class SkolemSupply:
    """Issues Skolem symbols ``sk1``, ``sk2``, ..."""

    def __init__(self, counter: int = 0):
        self.counter = counter

    def fresh(self) -> str:
        self.counter += 1
        return f"sk{self.counter}"


# -- pipeline steps -----------------------------------------------------------------------------

def eliminate_implications(f: Formula) -> Formula:
    if isinstance(f, (AtomF, Equals)):
        return f
    if isinstance(f, Not):
        return Not(eliminate_implications(f.arg))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, eliminate_implications(f.body))
    left, right = eliminate_implications(f.left), eliminate_implications(f.right)
    if isinstance(f, Implies):
        return Or(Not(left), right)
    if isinstance(f, Iff):
        return And(Or(Not(left), right), Or(Not(right), left))
    return type(f)(left, right)


def negation_normal_form(f: Formula) -> Formula:
    """Push negations down to atoms (input must be free of implications)."""
    if isinstance(f, (AtomF, Equals)):
        return f
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, negation_normal_form(f.body))
    if isinstance(f, (And, Or)):
        return type(f)(negation_normal_form(f.left), negation_normal_form(f.right))
    g = f.arg
    if isinstance(g, Not):
        return negation_normal_form(g.arg)
    if isinstance(g, (AtomF, Equals)):
        if g == TRUE:
            return FALSE
        if g == FALSE:
            return TRUE
        return f
    if isinstance(g, And):
        return Or(negation_normal_form(Not(g.left)), negation_normal_form(Not(g.right)))
    if isinstance(g, Or):
        return And(negation_normal_form(Not(g.left)), negation_normal_form(Not(g.right)))
    if isinstance(g, Forall):
        return Exists(g.var, negation_normal_form(Not(g.body)))
    if isinstance(g, Exists):
        return Forall(g.var, negation_normal_form(Not(g.body)))
    raise TypeError(f"unexpected connective under negation: {g!r}")


def _subst_formula(f: Formula, s: Dict[Var, Term]) -> Formula:
    if isinstance(f, AtomF):
        return AtomF(apply(s, f.atom))
    if isinstance(f, Equals):
        return Equals(apply(s, f.left), apply(s, f.right))
    if isinstance(f, Not):
        return Not(_subst_formula(f.arg, s))
    if isinstance(f, (Forall, Exists)):
        inner = {v: t for v, t in s.items() if v != f.var}
        return type(f)(f.var, _subst_formula(f.body, inner))
    return type(f)(_subst_formula(f.left, s), _subst_formula(f.right, s))


def _all_var_names(f: Formula, out: Set[str]):
    if isinstance(f, AtomF):
        out.update(v.name for v in variables_of(f.atom))
    elif isinstance(f, Equals):
        out.update(v.name for v in variables_of([f.left, f.right]))
    elif isinstance(f, Not):
        _all_var_names(f.arg, out)
    elif isinstance(f, (Forall, Exists)):
        out.add(f.var.name)
        _all_var_names(f.body, out)
    else:
        _all_var_names(f.left, out)
        _all_var_names(f.right, out)


def standardize_apart(f: Formula) -> Formula:
    """Give every quantifier its own variable; the first binder of a name
    keeps it, later ones get numbered variants.  Free variables keep their
    names and are never reused by a binder."""
    names: Set[str] = set()
    _all_var_names(f, names)
    used: Set[str] = {v.name for v in free_vars(f)}

    def pick(v: Var) -> Var:
        if v.name not in used:
            used.add(v.name)
            return v
        for k in itertools.count(1):
            name = f"{v.name}{k}"
            if name not in used and name not in names:
                used.add(name)
                return Var(name)

    def go(f: Formula, env: Dict[Var, Term]) -> Formula:
        if isinstance(f, AtomF):
            return AtomF(apply(env, f.atom))
        if isinstance(f, Equals):
            return Equals(apply(env, f.left), apply(env, f.right))
        if isinstance(f, Not):
            return Not(go(f.arg, env))
        if isinstance(f, (Forall, Exists)):
            new = pick(f.var)
            return type(f)(new, go(f.body, {**env, f.var: new}))
        return type(f)(go(f.left, env), go(f.right, env))

    return go(f, {})


def skolemize(f: Formula, supply: SkolemSupply) -> Formula:
    """Replace existential variables by Skolem terms over the enclosing
    universal variables (free variables count as universal)."""
    def go(f: Formula, univ: Tuple[Var, ...]) -> Formula:
        if isinstance(f, (AtomF, Equals, Not)):
            return f
        if isinstance(f, Forall):
            return Forall(f.var, go(f.body, univ + (f.var,)))
        if isinstance(f, Exists):
            name = supply.fresh()
            term = Compound(name, univ) if univ else Atom(name)
            return go(_subst_formula(f.body, {f.var: term}), univ)
        return type(f)(go(f.left, univ), go(f.right, univ))

    return go(f, tuple(free_vars(f)))


def drop_universals(f: Formula) -> Formula:
    if isinstance(f, Forall):
        return drop_universals(f.body)
    if isinstance(f, (And, Or)):
        return type(f)(drop_universals(f.left), drop_universals(f.right))
    return f


def _literal_atom(f: Formula) -> Term:
    if isinstance(f, AtomF):
        return f.atom
    return Compound("=", (f.left, f.right))


def _cnf(f: Formula) -> List[List[Tuple[bool, Term]]]:
    """Conjunctive normal form as lists of signed atoms (True = positive)."""
    if f == TRUE:
        return []
    if f == FALSE:
        return [[]]
    if isinstance(f, And):
        return _cnf(f.left) + _cnf(f.right)
    if isinstance(f, Or):
        return [a + b for a in _cnf(f.left) for b in _cnf(f.right)]
    if isinstance(f, Not):
        return [[(False, _literal_atom(f.arg))]]
    return [[(True, _literal_atom(f))]]


def _unique(ts: Iterable[Term]) -> Tuple[Term, ...]:
    seen: Dict[Term, None] = {}
    for t in ts:
        seen.setdefault(t, None)
    return tuple(seen)


def to_clausal_form(f: Formula, supply: Optional[SkolemSupply] = None) -> List[Clause]:
    """Clauses equisatisfiable with ``f``, in derivation order, without
    repeated literals or repeated clauses."""
    supply = supply or SkolemSupply()
    g = eliminate_implications(f)
    g = negation_normal_form(g)
    g = standardize_apart(g)
    g = skolemize(g, supply)
    g = drop_universals(g)
    out: List[Clause] = []
    for lits in _cnf(g):
        head = _unique(a for sign, a in lits if sign)
        body = _unique(a for sign, a in lits if not sign)
        c = Clause(head, body)
        if c not in out:
            out.append(c)
    return out


# -- predicate completion -----------------------------------------------------------------------

@dataclass(frozen=True)
class Completion:
    definitions: Tuple[Formula, ...]
    equality_theory: Tuple[Formula, ...]


def _body_formula(b: Term) -> Formula:
    if isinstance(b, Compound) and b.functor == "\\+" and len(b.args) == 1:
        return Not(conj([_body_formula(x) for x in flatten(b.args[0])]))
    if isinstance(b, Compound) and b.functor == "=" and len(b.args) == 2:
        return Equals(*b.args)
    return AtomF(b)


def _forall(vs: Sequence[Var], f: Formula) -> Formula:
    for v in reversed(vs):
        f = Forall(v, f)
    return f


def _exists(vs: Sequence[Var], f: Formula) -> Formula:
    for v in reversed(vs):
        f = Exists(v, f)
    return f


def _head_vars(key: Tuple[str, int], avoid: Set[str]) -> List[Var]:
    for prefix in ("X", "Y", "Z", "U", "W"):
        names = [f"{prefix}{i + 1}" for i in range(key[1])]
        if not avoid.intersection(names):
            return [Var(n) for n in names]
    return [Var(f"X{i + 1}_") for i in range(key[1])]


def _is_builtin_literal(t: Term) -> bool:
    from .sld import is_builtin
    return isinstance(t, (Atom, Compound)) and is_builtin(indicator(t)) and \
        indicator(t) not in (("\\+", 1),)


def predicate_completion(p) -> Completion:
    """Clark completion of a definite (or normal, with ``\\+``) program.

    Each predicate ``q/n`` becomes ``forall X1..Xn: q(X1..Xn) iff D1 or ...``
    where ``Di`` existentially closes the equalities between the head
    variables and clause ``i``'s head arguments, conjoined with its body.
    An equality ``Xj = Y`` is removed by substitution when ``Y`` is a
    variable occurring exactly once among the head arguments.  Predicates
    used but never defined complete to ``forall X: not q(X)``.
    """
    from .sld import NonDefiniteError
    clauses = p.clauses if isinstance(p, Program) else tuple(p)
    for c in clauses:
        if not c.is_definite:
            raise NonDefiniteError("predicate completion needs definite clauses")
    order: Dict[Tuple[str, int], List[Clause]] = {}
    for c in clauses:
        order.setdefault(indicator(c.head[0]), []).append(c)
    for c in clauses:
        for b in c.body:
            for a in _body_atoms(b):
                order.setdefault(indicator(a), [])
    avoid = {v.name for c in clauses for v in c.variables()}
    defs: List[Formula] = []
    for key, cs in order.items():
        xs = _head_vars(key, avoid)
        head = Compound(key[0], tuple(xs)) if xs else Atom(key[0])
        if not cs:
            defs.append(_forall(xs, Not(AtomF(head))))
            continue
        disjuncts = []
        for c in cs:
            h = c.head[0]
            args = h.args if isinstance(h, Compound) else ()
            counts: Dict[Var, int] = {}
            for a in args:
                for v in variables_of(a):
                    counts[v] = counts.get(v, 0) + (1 if a == v else 2)
            s: Dict[Var, Term] = {}
            eqs: List[Formula] = []
            for x, a in zip(xs, args):
                if isinstance(a, Var) and counts[a] == 1:
                    s[a] = x
                else:
                    eqs.append(Equals(x, a))
            eqs = [Equals(e.left, apply(s, e.right)) for e in eqs]
            body = [_subst_formula(_body_formula(b), s) for b in c.body]
            inner = conj(eqs + body)
            local = [v for v in c.variables() if v not in s]
            disjuncts.append(_exists(local, inner))
        defs.append(_forall(xs, Iff(AtomF(head), disj(disjuncts))))
    return Completion(tuple(defs), tuple(equality_theory(clauses)))


def _body_atoms(b: Term) -> List[Term]:
    if isinstance(b, Compound) and b.functor == "\\+" and len(b.args) == 1:
        return [a for x in flatten(b.args[0]) for a in _body_atoms(x)]
    if _is_builtin_literal(b):
        return []
    return [b]


def equality_theory(clauses: Iterable[Clause]) -> List[Formula]:
    """Clark's equality axioms instantiated for the program's function
    symbols and constants: distinct symbols never denote equal terms,
    function symbols are injective, and no term equals a term properly
    containing it (one axiom per function symbol and argument position)."""
    from .clausal import signature
    consts, funcs, _ = signature(list(clauses))
    symbols: List[Tuple[str, int]] = []
    for c in consts:
        key = (str(c.value), 0) if isinstance(c, Int) else (c.name, 0)
        if key not in symbols:
            symbols.append(key)
    symbols += [f for f in funcs if f not in symbols]
    out: List[Formula] = []

    def term(name, arity, prefix):
        vs = [Var(f"{prefix}{i + 1}") for i in range(arity)]
        if arity == 0:
            return (Int(int(name)) if name.lstrip("-").isdigit() else Atom(name)), vs
        return Compound(name, tuple(vs)), vs

    for (f, n), (g, m) in itertools.combinations(symbols, 2):
        tf, vf = term(f, n, "X")
        tg, vg = term(g, m, "Y")
        out.append(_forall(vf + vg, Not(Equals(tf, tg))))
    for f, n in symbols:
        if n == 0:
            continue
        tf, vf = term(f, n, "X")
        tg, vg = term(f, n, "Y")
        out.append(_forall(vf + vg, Implies(Equals(tf, tg),
                                             conj([Equals(a, b) for a, b in zip(vf, vg)]))))
        for i in range(n):
            vs = [Var(f"X{k + 1}") for k in range(n)]
            z = Var("Z")
            args = tuple(z if k == i else vs[k] for k in range(n))
            out.append(_forall([z] + [v for k, v in enumerate(vs) if k != i],
                               Not(Equals(z, Compound(f, args)))))
    return out


def completion_clauses(p, supply: Optional[SkolemSupply] = None) -> List[Clause]:
    """Clausal form of the completed definitions (both directions)."""
    supply = supply or SkolemSupply()
    out: List[Clause] = []
    for f in predicate_completion(p).definitions:
        for c in to_clausal_form(f, supply):
            if c not in out:
                out.append(c)
    return out


# -- closed world ------------------------------------------------------------------------------

def cwa_consequences(p, depth: int) -> FrozenSet[Formula]:
    """``not A`` for every atom of the bounded Herbrand base outside the
    least Herbrand model."""
    model = least_herbrand_model(p, depth)
    return frozenset(Not(AtomF(a)) for a in herbrand_base(p, depth) if a not in model)


# -- evaluation over finite Herbrand interpretations ------------------------------------------

def holds(f: Formula, true_atoms, domain: Sequence[Term]) -> bool:
    """Truth of a closed formula in a Herbrand interpretation over a finite
    domain, reading ``=`` as identity and ``true``/``false`` literally."""
    def go(f: Formula, env: Dict[Var, Term]) -> bool:
        if isinstance(f, AtomF):
            if f == TRUE:
                return True
            if f == FALSE:
                return False
            return apply(env, f.atom) in true_atoms
        if isinstance(f, Equals):
            return apply(env, f.left) == apply(env, f.right)
        if isinstance(f, Not):
            return not go(f.arg, env)
        if isinstance(f, And):
            return go(f.left, env) and go(f.right, env)
        if isinstance(f, Or):
            return go(f.left, env) or go(f.right, env)
        if isinstance(f, Implies):
            return (not go(f.left, env)) or go(f.right, env)
        if isinstance(f, Iff):
            return go(f.left, env) == go(f.right, env)
        if isinstance(f, Forall):
            return all(go(f.body, {**env, f.var: d}) for d in domain)
        return any(go(f.body, {**env, f.var: d}) for d in domain)

    return go(f, {})
