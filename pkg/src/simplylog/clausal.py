"""Clausal logic: Herbrand semantics, forward chaining, resolution.

Every universe, base and model operation takes an explicit term-depth
bound, because Herbrand universes are infinite as soon as a program has a
function symbol.  Ground instances whose atoms fall outside the bounded
base are not considered.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from .clauses import Clause, Program, atoms_in_goal, format_clause, term_to_clause
from .reader import parse_program, parse_term, write_term
from .terms import (Atom, Compound, Int, Substitution, Term, Var, VarSupply, apply, indicator,
                    is_ground, is_variant, order_key, rename_apart, resolve, term_depth,
                    unify, unify_triangular, variables_of)

RESERVED_CONSTANT = Atom("c0")


# -- signatures and Herbrand universes -----------------------------------------------------

def _clauses(p) -> Tuple[Clause, ...]:
    if isinstance(p, Program):
        return p.clauses
    if isinstance(p, str):
        return tuple(term_to_clause(sc.term) for sc in parse_program(p) if sc.kind == "clause")
    return tuple(p)


def signature(p) -> Tuple[List[Term], List[Tuple[str, int]], List[Tuple[str, int]]]:
    """Constants, function symbols, and predicates of a clause collection,
    in first-occurrence order.  Predicates a program declares without
    defining (``dynamic``) count as predicates too."""
    consts: Dict[Term, None] = {}
    funcs: Dict[Tuple[str, int], None] = {}
    preds: Dict[Tuple[str, int], None] = {}

    def visit(t):
        if isinstance(t, (Atom, Int)):
            consts.setdefault(t, None)
        elif isinstance(t, Compound):
            funcs.setdefault((t.functor, len(t.args)), None)
            for a in t.args:
                visit(a)

    for c in _clauses(p):
        # body literals may be control constructs such as \+ G: their
        # arguments are goals, not terms
        lits = list(c.head) + [a for b in c.body for a in atoms_in_goal(b)]
        for lit in lits:
            preds.setdefault(indicator(lit), None)
            if isinstance(lit, Compound):
                for a in lit.args:
                    visit(a)
    if isinstance(p, Program):
        for key in sorted(p.declared):
            preds.setdefault(key, None)
    return list(consts), list(funcs), list(preds)


def herbrand_universe(p, depth: int) -> FrozenSet[Term]:
    """Ground terms of nesting depth at most ``depth``.

    A program without constants gets the reserved constant ``c0``.
    """
    consts, funcs, _ = signature(p)
    if not consts:
        consts = [RESERVED_CONSTANT]
    universe: Set[Term] = set(consts)
    for _ in range(depth):
        layer = set(universe)
        for name, arity in funcs:
            for args in itertools.product(sorted(universe, key=order_key), repeat=arity):
                layer.add(Compound(name, args))
        if layer == universe:
            break
        universe = layer
    return frozenset(universe)


def herbrand_base(p, depth: int) -> FrozenSet[Term]:
    """All predicates of ``p`` applied to tuples from the bounded universe."""
    _, _, preds = signature(p)
    universe = sorted(herbrand_universe(p, depth), key=order_key)
    base: Set[Term] = set()
    for name, arity in preds:
        if arity == 0:
            base.add(Atom(name))
        else:
            for args in itertools.product(universe, repeat=arity):
                base.add(Compound(name, args))
    return frozenset(base)


def _within(atom: Term, depth: int) -> bool:
    return not isinstance(atom, Compound) or all(term_depth(a) <= depth for a in atom.args)


@dataclass(frozen=True)
class HerbrandInterpretation:
    """A set of true ground atoms.  ``partial`` marks a model computation
    that ran out of fuel; ``truncated`` marks one that discarded atoms
    deeper than the depth bound."""
    atoms: FrozenSet[Term]
    partial: bool = False
    truncated: bool = False

    def __contains__(self, atom) -> bool:
        return atom in self.atoms

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.atoms)

    def sorted(self) -> List[Term]:
        return sorted(self.atoms, key=order_key)


def _index(atoms: Iterable[Term]) -> Dict[Tuple[str, int], List[Term]]:
    idx: Dict[Tuple[str, int], List[Term]] = {}
    for a in atoms:
        idx.setdefault(indicator(a), []).append(a)
    return idx


def _match_body(body: Sequence[Term], idx, s: Substitution) -> Iterator[Substitution]:
    """Substitutions making every body atom a member of the indexed set."""
    if not body:
        yield s
        return
    first, rest = body[0], body[1:]
    for fact in idx.get(indicator(first), ()):
        s2 = unify_triangular(first, fact, s)
        if s2 is not None:
            yield from _match_body(rest, idx, s2)


def _ground_instances(c: Clause, idx, universe: Sequence[Term]) -> Iterator[Clause]:
    """Ground instances of ``c`` whose body lies within the indexed atoms;
    variables occurring only in the head range over ``universe``."""
    for s in _match_body(c.body, idx, {}):
        body = tuple(resolve(b, s) for b in c.body)
        heads = [resolve(h, s) for h in c.head]
        free = variables_of(heads)
        for values in itertools.product(universe, repeat=len(free)):
            g = dict(zip(free, values))
            yield Clause(tuple(apply(g, h) for h in heads), body)


def is_model(interp: Union[HerbrandInterpretation, Iterable[Term]], p, depth: int) -> bool:
    """True when every ground instance over the bounded universe is satisfied.

    Instances with an atom outside the bounded base are skipped.
    """
    atoms = interp.atoms if isinstance(interp, HerbrandInterpretation) else frozenset(interp)
    idx = _index(atoms)
    universe = sorted(herbrand_universe(p, depth), key=order_key)
    for c in _clauses(p):
        for inst in _ground_instances(c, idx, universe):
            if not all(_within(h, depth) for h in inst.head):
                continue
            if not any(h in atoms for h in inst.head):
                return False
    return True


class NotDefiniteError(ValueError):
    pass


def least_herbrand_model(p, depth: int, fuel: int = 1000) -> HerbrandInterpretation:
    """Least fixpoint of the immediate-consequence operator, bounded by depth.

    Iterates at most ``fuel`` times; an unfinished iteration is flagged
    ``partial``.
    """
    clauses = _clauses(p)
    for c in clauses:
        if not c.is_definite:
            raise NotDefiniteError(f"not a definite clause: {format_clause(c)}")
    universe = sorted(herbrand_universe(clauses, depth), key=order_key)
    model: Set[Term] = set()
    truncated = False
    for _ in range(fuel):
        idx = _index(model)
        new: Set[Term] = set()
        for c in clauses:
            for inst in _ground_instances(c, idx, universe):
                h = inst.head[0]
                if not _within(h, depth):
                    truncated = True
                elif h not in model:
                    new.add(h)
        if not new:
            return HerbrandInterpretation(frozenset(model), False, truncated)
        model |= new
    return HerbrandInterpretation(frozenset(model), True, truncated)


@dataclass
class AuditReport:
    checked: int
    violations: List[Tuple[Term, Substitution, Tuple[Term, ...]]]

    @property
    def ok(self) -> bool:
        return not self.violations


def soundness_audit(p, answers: Iterable[Tuple[object, Substitution]], depth: int) -> AuditReport:
    """Check that each answered goal instance is true in the least model."""
    model = least_herbrand_model(p, depth)
    violations = []
    n = 0
    for goal, s in answers:
        if isinstance(goal, str):
            goal = parse_term(goal)
        from .clauses import flatten
        atoms = flatten(goal) if not isinstance(goal, (list, tuple)) else list(goal)
        missing = tuple(a for a in (apply(s, g) for g in atoms) if a not in model)
        n += 1
        if missing:
            violations.append((goal, s, missing))
    return AuditReport(n, violations)


# -- resolution ---------------------------------------------------------------------------------

def _canonical(c: Clause) -> Clause:
    """Duplicate-free clause with literals in standard order."""
    return c.normalized()


def _variant_key(c: Clause):
    """Hashable key equal for clauses that are variants (exact for ground
    clauses; clauses differing only in literal order may still get
    different keys, which merely weakens duplicate elimination)."""
    def shape(t):
        if isinstance(t, Var):
            return (0,)
        if isinstance(t, Compound):
            return (3, len(t.args), t.functor, tuple(shape(a) for a in t.args))
        return order_key(t)
    head = sorted(set(c.head), key=shape)
    body = sorted(set(c.body), key=shape)
    vs = variables_of(head + body)
    ren = {v: Var(f"_K{i}") for i, v in enumerate(vs)}
    return (tuple(apply(ren, h) for h in head), tuple(apply(ren, b) for b in body))


def _tautology(c: Clause) -> bool:
    return any(h in c.body for h in c.head)


def propositional_resolve(c1: Clause, c2: Clause) -> Set[Clause]:
    """All resolvents of two ground clauses on one complementary atom."""
    out = set()
    for a, b in ((c1, c2), (c2, c1)):
        for atom in set(a.head) & set(b.body):
            head = tuple(h for h in a.head if h != atom) + b.head
            body = a.body + tuple(x for x in b.body if x != atom)
            out.add(Clause(head, body).normalized())
    return out


def factors(c: Clause, keep_apart: Tuple[str, ...] = ("$ans",)) -> List[Clause]:
    """``c`` and every clause obtained by unifying same-sign literals.

    Literals whose predicate is listed in ``keep_apart`` are never merged.
    """
    out = [c.normalized()]
    seen = {_variant_key(out[0])}
    i = 0
    while i < len(out):
        cur = out[i]
        i += 1
        for lits, is_head in ((cur.head, True), (cur.body, False)):
            for j, k in itertools.combinations(range(len(lits)), 2):
                if isinstance(lits[j], (Atom, Compound)) and indicator(lits[j])[0] in keep_apart:
                    continue
                s = unify(lits[j], lits[k])
                if s is None:
                    continue
                f = cur.substitute(s).normalized()
                key = _variant_key(f)
                if key not in seen:
                    seen.add(key)
                    out.append(f)
    return out


def binary_resolvents(c1: Clause, c2: Clause, supply: VarSupply,
                      keep_apart: Tuple[str, ...] = ("$ans",)) -> List[Tuple[Term, Substitution, Clause]]:
    """Resolvents of two clauses (renamed apart, with factoring).

    Each result is (resolved-upon atom instance, unifier, resolvent).
    """
    out = []
    if c1.is_ground and c2.is_ground:
        for a, b in ((c1, c2), (c2, c1)):
            for atom in sorted(set(a.head) & set(b.body), key=order_key):
                head = tuple(h for h in a.head if h != atom) + b.head
                body = a.body + tuple(x for x in b.body if x != atom)
                out.append((atom, {}, Clause(head, body).normalized()))
        return out
    for f1 in factors(rename_apart(c1, supply), keep_apart):
        for f2 in factors(rename_apart(c2, supply), keep_apart):
            for a, b in ((f1, f2), (f2, f1)):
                for i, h in enumerate(a.head):
                    for j, x in enumerate(b.body):
                        s = unify(h, x)
                        if s is None:
                            continue
                        head = tuple(apply(s, t) for k, t in enumerate(a.head) if k != i) + \
                            tuple(apply(s, t) for t in b.head)
                        body = tuple(apply(s, t) for t in a.body) + \
                            tuple(apply(s, t) for k, t in enumerate(b.body) if k != j)
                        out.append((apply(s, h), s, Clause(head, body).normalized()))
    return out


@dataclass(frozen=True)
class Step:
    """One resolution step.  Clause numbers are 1-based over the input
    clauses followed by the resolvents of earlier steps."""
    number: int
    parents: Tuple[int, int]
    atom: Term
    unifier: Substitution
    resolvent: Clause

    def format(self) -> str:
        return (f"step {self.number}: #{self.parents[0]} + #{self.parents[1]} on "
                f"{write_term(self.atom, quoted=True)} gives {format_clause(self.resolvent)}")


@dataclass(frozen=True)
class Refutation:
    inputs: Tuple[Clause, ...]
    steps: Tuple[Step, ...]

    def clause(self, number: int) -> Clause:
        n = len(self.inputs)
        return self.inputs[number - 1] if number <= n else self.steps[number - n - 1].resolvent

    def to_text(self) -> str:
        lines = [f"#{i + 1}: {format_clause(c)}" for i, c in enumerate(self.inputs)]
        lines += [s.format() for s in self.steps]
        return "\n".join(lines) + "\n"

    def to_dicts(self) -> List[dict]:
        return [{
            "step": s.number,
            "parents": list(s.parents),
            "atom": write_term(s.atom, quoted=True),
            "unifier": {v.name: write_term(t, quoted=True) for v, t in s.unifier.items()},
            "resolvent": format_clause(s.resolvent),
        } for s in self.steps]


@dataclass
class RefutationResult:
    """``status`` is ``refuted`` (a refutation was found), ``saturated``
    (no new clauses: the set is satisfiable as far as resolution can tell)
    or ``budget`` (``max_steps`` resolvents generated without a verdict)."""
    status: str
    refutation: Optional[Refutation]
    generated: int

    def __bool__(self):
        return self.status == "refuted"


def replay(ref: Refutation) -> bool:
    """Re-derive every step from its parents."""
    supply = VarSupply(10 ** 6)
    n = len(ref.inputs)
    for s in ref.steps:
        for p in s.parents:
            if not 1 <= p < n + s.number:
                return False
        c1, c2 = ref.clause(s.parents[0]), ref.clause(s.parents[1])
        found = False
        for _, _, r in binary_resolvents(c1, c2, supply):
            if _variant_key(r) == _variant_key(s.resolvent) or _same_clause(r, s.resolvent):
                found = True
                break
        if not found:
            return False
    last = ref.steps[-1].resolvent if ref.steps else None
    return last is not None


def _same_clause(a: Clause, b: Clause) -> bool:
    return is_variant(_clause_term(a), _clause_term(b))


def _clause_term(c: Clause) -> Term:
    return Compound("cl", (Compound("h", c.head) if c.head else Atom("h"),
                           Compound("b", c.body) if c.body else Atom("b")))


class _GroundMasks:
    """Bitmask signatures of ground clauses: atom sets as integers, so
    complementary-pair and subsumption tests are cheap."""

    def __init__(self):
        self.bits: Dict[Term, int] = {}

    def mask(self, atoms: Sequence[Term]) -> int:
        m = 0
        for a in atoms:
            b = self.bits.get(a)
            if b is None:
                b = self.bits[a] = 1 << len(self.bits)
            m |= b
        return m

    def signature(self, c: Clause) -> Optional[Tuple[int, int]]:
        if not c.is_ground:
            return None
        return self.mask(c.head), self.mask(c.body)


def _saturate(inputs: Sequence[Clause], max_steps: int, is_goal, depth: Optional[int] = None):
    """Level saturation.  Returns (status, clauses, origin-of-each, goal index).

    A ground resolvent is discarded when an earlier ground clause subsumes
    it (forward subsumption); nothing is ever deleted once kept.
    """
    supply = VarSupply()
    masks = _GroundMasks()
    clauses: List[Clause] = []
    sigs: List[Optional[Tuple[int, int]]] = []
    ground_sigs: List[Tuple[int, int]] = []
    origin: List[Optional[Tuple[int, int, Term, Substitution]]] = []
    seen = set()

    def keep(c: Clause, sig, how) -> None:
        clauses.append(c)
        sigs.append(sig)
        if sig is not None:
            ground_sigs.append(sig)
        origin.append(how)

    for c in inputs:
        c = c.normalized()
        seen.add(_variant_key(c))
        keep(c, masks.signature(c), None)
        if is_goal(c):
            return "refuted", clauses, origin, len(clauses) - 1
    generated = 0
    prev_start = 0
    while True:
        level_end = len(clauses)
        new_found = False
        for j in range(prev_start, level_end):
            sj = sigs[j]
            for i in range(0, j + 1):
                si = sigs[i]
                if si is not None and sj is not None and \
                        not (si[0] & sj[1] or sj[0] & si[1]):
                    continue
                for atom, s, r in binary_resolvents(clauses[i], clauses[j], supply):
                    if _tautology(r):
                        continue
                    if depth is not None and any(term_depth(a) > depth + 1
                                                 for a in r.head + r.body):
                        continue
                    key = _variant_key(r)
                    if key in seen:
                        continue
                    seen.add(key)
                    sig = masks.signature(r)
                    if sig is not None and any(h & ~sig[0] == 0 and b & ~sig[1] == 0
                                               for h, b in ground_sigs):
                        continue
                    keep(r, sig, (i, j, atom, s))
                    generated += 1
                    new_found = True
                    if is_goal(r):
                        return "refuted", clauses, origin, len(clauses) - 1
                    if generated >= max_steps:
                        return "budget", clauses, origin, None
        if not new_found:
            return "saturated", clauses, origin, None
        prev_start = level_end


def _extract(inputs: Sequence[Clause], clauses, origin, goal: int) -> Refutation:
    n = len(inputs)
    needed: Set[int] = set()
    stack = [goal]
    while stack:
        k = stack.pop()
        if k in needed or origin[k] is None:
            continue
        needed.add(k)
        stack.extend(origin[k][:2])
    order = sorted(needed)
    number = {k: k + 1 for k in range(n)}
    steps = []
    for idx, k in enumerate(order):
        number[k] = n + idx + 1
        i, j, atom, s = origin[k]
        steps.append(Step(idx + 1, (number[i], number[j]), atom, s, clauses[k]))
    return Refutation(tuple(clauses[:n]), tuple(steps))


def _as_clauses(cs) -> List[Clause]:
    if isinstance(cs, str):
        return [term_to_clause(sc.term) for sc in parse_program(cs) if sc.kind != "query"]
    if isinstance(cs, Program):
        return list(cs.clauses)
    return list(cs)


def resolution_refute(cs, max_steps: int = 10000) -> RefutationResult:
    """Search for a derivation of the empty clause by level saturation."""
    inputs = [c.normalized() for c in _as_clauses(cs)]
    status, clauses, origin, goal = _saturate(inputs, max_steps, lambda c: c.is_empty)
    generated = len(clauses) - len(inputs)
    if status == "refuted":
        return RefutationResult(status, _extract(inputs, clauses, origin, goal), generated)
    return RefutationResult(status, None, generated)


@dataclass
class ClausalAnswer:
    status: str
    bindings: Optional[Dict[Var, Term]]
    refutation: Optional[Refutation]

    def __bool__(self):
        return self.status == "refuted"


ANSWER = "$ans"


def full_clausal_query(cs, goal, depth: int = 4, max_steps: int = 10000) -> ClausalAnswer:
    """Answer a conjunctive query against general clauses by refutation.

    The negated goal carries an answer literal; a derived clause made only
    of answer literals ends the search.  When that clause has several
    answer literals (a disjunctive answer), only the bindings shared by
    all of them are reported.  ``depth`` discards resolvents with atoms
    nested deeper than ``depth + 1``, keeping the naive search finite.
    """
    if isinstance(goal, str):
        goal = parse_term(goal)
    from .clauses import flatten
    atoms = flatten(goal) if not isinstance(goal, (list, tuple)) else list(goal)
    qvars = [v for v in variables_of(atoms) if not v.name.startswith("_")]
    ans = Compound(ANSWER, tuple(qvars)) if qvars else Atom(ANSWER)
    inputs = [c.normalized() for c in _as_clauses(cs)] + [Clause((ans,), tuple(atoms))]

    def is_goal(c: Clause) -> bool:
        return not c.body and all(indicator(h)[0] == ANSWER for h in c.head)

    status, clauses, origin, g = _saturate(inputs, max_steps, is_goal, depth)
    if status != "refuted":
        return ClausalAnswer(status, None, None)
    final = clauses[g]
    bindings: Dict[Var, Term] = {}
    for k, v in enumerate(qvars):
        values = [h.args[k] for h in final.head]
        if all(x == values[0] for x in values) and not isinstance(values[0], Var):
            bindings[v] = values[0]
    return ClausalAnswer(status, bindings, _extract(inputs, clauses, origin, g))
