"""Reasoning with incomplete information: abduction and default rules.

Abduction runs SLD resolution that, instead of failing on a call to an
abducible predicate, records the (ground) call in a residue.  Each
residue that completes a derivation and satisfies the integrity
constraints is an explanation.

Default rules are named ``Prereq => Conclusion`` rules with exceptions.
They compile to normal clauses ``Conclusion :- Prereq, \\+ exception``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .clauses import Clause, Program, flatten, format_clause
from .reader import SourceClause, parse_program, parse_term, write_term
from .sld import (EngineLimits, InstantiationError, PrologError, ResourcesExhausted, consult,
                  is_builtin, solve)
from .terms import (Atom, Compound, Int, Substitution, Term, Var, VarSupply, indicator, is_ground,
                    order_key, rename_apart, resolve, unify_triangular, variables_of, walk)


class SpecError(ValueError):
    """Malformed abduction specification or default theory."""


# -- abduction ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class AbductionSpec:
    program: Program
    abducibles: FrozenSet[Tuple[str, int]]
    constraints: Tuple[Term, ...] = ()

    def __post_init__(self):
        for key in self.abducibles:
            if key in self.program.index:
                raise SpecError(f"abducible {key[0]}/{key[1]} has defining clauses")


@dataclass(frozen=True)
class Explanation:
    atoms: FrozenSet[Term]

    def sorted(self) -> List[Term]:
        return sorted(self.atoms, key=order_key)

    def format(self) -> str:
        return "{" + ", ".join(write_term(a, quoted=True) for a in self.sorted()) + "}"


def _with_facts(program: Program, atoms: Iterable[Term]) -> Program:
    facts = [Clause((a,)) for a in sorted(set(atoms), key=order_key)]
    return program.extend(facts, as_library=True) if facts else program


def _derivable(program: Program, goal, limits: EngineLimits) -> bool:
    sols = solve(program, goal, limits=limits, undefined_is_error=False)
    for _ in sols:
        return True
    if sols.resources_exhausted:
        raise ResourcesExhausted()
    return False


def consistent(spec: AbductionSpec, delta: Iterable[Term], limits: EngineLimits = EngineLimits(max_depth=200)) -> bool:
    """True when no constraint body is derivable from program plus ``delta``."""
    p = _with_facts(spec.program, delta)
    return not any(_derivable(p, c, limits) for c in spec.constraints)


def _mentions(t: Term, keys) -> bool:
    if isinstance(t, (Var, Int)):
        return False
    if indicator(t) in keys:
        return True
    if isinstance(t, Compound) and indicator(t) in ((",", 2), (";", 2), ("->", 2), ("\\+", 1), ("call", 1)):
        return any(_mentions(a, keys) for a in t.args)
    return False


def _abduce_raw(spec: AbductionSpec, goals: List[Term], limits: EngineLimits) -> Iterator[Tuple[Term, ...]]:
    """Residues of successful derivations, in depth-first derivation order."""
    program = spec.program
    supply = VarSupply()
    max_depth = limits.max_depth
    budget = [limits.max_nodes]

    def charge():
        if budget[0] is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise ResourcesExhausted()

    def run(goals: Tuple[Term, ...], s: Substitution, delta: Tuple[Term, ...], depth: int):
        if not goals:
            yield delta
            return
        if max_depth is not None and depth >= max_depth:
            raise ResourcesExhausted()
        charge()
        g = walk(goals[0], s)
        rest = goals[1:]
        if isinstance(g, Var):
            raise InstantiationError("goal is unbound")
        if isinstance(g, Compound) and g.functor == "," and len(g.args) == 2:
            yield from run(tuple(flatten(g)) + rest, s, delta, depth)
            return
        key = indicator(g)
        if key in spec.abducibles:
            atom = resolve(g, s)
            if not is_ground(atom):
                raise InstantiationError(
                    f"abducible call is not ground: {write_term(atom, quoted=True)}")
            if atom in delta:
                yield from run(rest, s, delta, depth + 1)
            else:
                new = delta + (atom,)
                if consistent(spec, new, limits):
                    yield from run(rest, s, new, depth + 1)
            return
        if key == ("\\+", 1) and _mentions(g.args[0], spec.abducibles):
            raise PrologError("negation as failure over abducible predicates is not supported")
        if key == ("true", 0):
            yield from run(rest, s, delta, depth + 1)
            return
        if is_builtin(key) or key not in program.index:
            # builtins, negation, and undefined predicates: the plain engine
            # decides them, over the program plus the residue so far
            p = _with_facts(program, delta)
            call = resolve(g, s)
            sols = solve(p, call, limits=limits, undefined_is_error=False)
            for answer in sols:
                s2 = s
                for v, t in answer.bindings.items():
                    s2 = unify_triangular(v, t, s2)
                    if s2 is None:
                        break
                if s2 is not None:
                    yield from run(rest, s2, delta, depth + 1)
            if sols.resources_exhausted:
                raise ResourcesExhausted()
            return
        for i in program.index[key]:
            c = rename_apart(program.clauses[i], supply)
            s2 = unify_triangular(g, c.head[0], s)
            if s2 is not None:
                yield from run(tuple(c.body) + rest, s2, delta, depth + 1)

    yield from run(tuple(goals), {}, (), 0)


def abduce(spec: AbductionSpec, goal, limits: EngineLimits = EngineLimits(max_depth=200)) -> Iterator[Explanation]:
    """Explanations for ``goal`` in derivation order.

    Every explanation replays (program plus explanation derives the goal)
    and satisfies every constraint.  Repeated explanations and strict
    supersets of other explanations are dropped; in particular a goal
    provable without abducibles gets only the empty explanation.
    """
    if isinstance(goal, str):
        goal = parse_term(goal)
    goals = flatten(goal) if not isinstance(goal, (list, tuple)) else list(goal)
    if _derivable(spec.program, goals, limits) and consistent(spec, (), limits):
        # every other residue would be a superset of the empty one
        yield Explanation(frozenset())
        return
    # A residue found late may be a strict subset of one found early, so the
    # (depth-bounded, hence finite) residues are gathered before filtering.
    found: List[FrozenSet[Term]] = []
    for delta in _abduce_raw(spec, goals, limits):
        d = frozenset(delta)
        if d in found or any(prev < d for prev in found):
            continue
        if not consistent(spec, d, limits):
            continue
        if not _derivable(_with_facts(spec.program, d), goals, limits):
            continue
        found.append(d)
    for d in found:
        if not any(other < d for other in found):
            yield Explanation(d)


def replays(spec: AbductionSpec, goal, explanation: Explanation,
            limits: EngineLimits = EngineLimits(max_depth=200)) -> bool:
    if isinstance(goal, str):
        goal = parse_term(goal)
    return _derivable(_with_facts(spec.program, explanation.atoms), goal, limits)


def _indicator_spec(t: Term) -> Tuple[str, int]:
    if (isinstance(t, Compound) and t.functor == "/" and isinstance(t.args[0], Atom)
            and isinstance(t.args[1], Int)):
        return (t.args[0].name, t.args[1].value)
    raise SpecError(f"predicate indicator expected, found {write_term(t, quoted=True)}")


def _directives(source: Sequence[SourceClause]) -> Tuple[List[Term], List[SourceClause]]:
    directives, rest = [], []
    for sc in source:
        if sc.kind == "directive":
            directives.append(sc.term.args[0])
        else:
            rest.append(sc)
    return directives, rest


def load_abduction_spec(text: str, origin: str = "<spec>") -> AbductionSpec:
    """Programme text with ``:- abducible(p/n).`` and ``:- constraint(Body).``"""
    directives, rest = _directives(parse_program(text, origin))
    abducibles: Set[Tuple[str, int]] = set()
    constraints: List[Term] = []
    for d in directives:
        if isinstance(d, Compound) and d.functor == "abducible" and len(d.args) == 1:
            for t in flatten(d.args[0]):
                abducibles.add(_indicator_spec(t))
        elif isinstance(d, Compound) and d.functor == "constraint" and len(d.args) == 1:
            constraints.append(d.args[0])
    program = consult(Program(), rest)
    return AbductionSpec(program, frozenset(abducibles), tuple(constraints))


# -- default rules ------------------------------------------------------------------------------

@dataclass(frozen=True)
class DefaultRule:
    name: str
    prerequisite: Term
    conclusion: Term


@dataclass(frozen=True)
class DefaultTheory:
    rules: Tuple[DefaultRule, ...]
    exceptions: Tuple[Tuple[str, Term], ...]
    facts: Program = field(default_factory=Program)

    def __post_init__(self):
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            raise SpecError("default names must be unique")
        for r in self.rules:
            if not isinstance(r.conclusion, (Atom, Compound)) or is_builtin(indicator(r.conclusion)):
                raise SpecError(f"default {r.name}: conclusion must be a positive atom")
        for name, _ in self.exceptions:
            if name not in names:
                raise SpecError(f"exception for unknown default {name}")
        check_stratified(self.compile())

    def rule(self, name: str) -> DefaultRule:
        return next(r for r in self.rules if r.name == name)

    def _exception_atom(self, r: DefaultRule) -> Term:
        vs = variables_of([r.prerequisite, r.conclusion])
        name = f"$exception_{r.name}"
        return Compound(name, tuple(vs)) if vs else Atom(name)

    def compile(self) -> Program:
        """The normal program ``Conclusion :- Prereq, \\+ $exception_d(Vars)``
        plus ``$exception_d(Vars) :- Cond`` for each exception."""
        clauses: List[Clause] = []
        for r in self.rules:
            exc = self._exception_atom(r)
            body = tuple(flatten(r.prerequisite)) + (Compound("\\+", (exc,)),)
            clauses.append(Clause((r.conclusion,), body))
        for name, cond in self.exceptions:
            exc = self._exception_atom(self.rule(name))
            clauses.append(Clause((exc,), tuple(flatten(cond))))
        return self.facts.extend(clauses)


def _dependencies(program: Program) -> Dict[Tuple[str, int], Set[Tuple[Tuple[str, int], bool]]]:
    deps: Dict[Tuple[str, int], Set[Tuple[Tuple[str, int], bool]]] = {}

    def visit(head, t: Term, negative: bool):
        if isinstance(t, (Var, Int)):
            return
        key = indicator(t)
        if key == ("\\+", 1):
            visit(head, t.args[0], True)
        elif key in ((",", 2), (";", 2), ("->", 2), ("call", 1)):
            for a in t.args:
                visit(head, a, negative)
        elif key in (("findall", 3), ("bagof", 3), ("setof", 3)):
            visit(head, t.args[1], True)
        elif not is_builtin(key):
            deps.setdefault(head, set()).add((key, negative))

    for c in program:
        head = indicator(c.head[0])
        deps.setdefault(head, set())
        for b in c.body:
            visit(head, b, False)
    return deps


class NotStratifiedError(SpecError):
    pass


def check_stratified(program: Program) -> None:
    """Raise when some predicate depends negatively on itself."""
    deps = _dependencies(program)

    def reach(start):
        seen, stack = set(), [start]
        while stack:
            k = stack.pop()
            for d, _ in deps.get(k, ()):
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        return seen

    closure = {k: reach(k) for k in deps}
    for head, edges in deps.items():
        for target, negative in edges:
            if negative and (target == head or head in closure.get(target, ())):
                raise NotStratifiedError(
                    f"not stratified: {head[0]}/{head[1]} depends negatively on itself "
                    f"through {target[0]}/{target[1]}")


@dataclass(frozen=True)
class DefaultVerdict:
    status: str  # holds | blocked | underivable
    rule: Optional[str] = None
    exception: Optional[Term] = None

    def format(self) -> str:
        if self.status == "holds":
            return "holds" + (f" by {self.rule}" if self.rule else " as a fact")
        if self.status == "blocked":
            return f"blocked: {self.rule} defeated by {write_term(self.exception, quoted=True)}"
        return "underivable"


def default_conclusions(theory: DefaultTheory, query, limits: EngineLimits = EngineLimits(max_depth=200)) -> DefaultVerdict:
    """Whether ``query`` follows by default, is blocked by an exception, or
    has no applicable default.

    A default applies when its conclusion matches the query and its
    prerequisite is derivable; it is blocked when one of its exception
    conditions is derivable too.  Derivability uses the compiled program,
    so prerequisites and exceptions may rest on other defaults.
    """
    if isinstance(query, str):
        query = parse_term(query)
    if not is_ground(query):
        raise InstantiationError("default reasoning needs a ground query")
    compiled = theory.compile()
    if _derivable(theory.facts, query, limits):
        return DefaultVerdict("holds")
    blocked: Optional[DefaultVerdict] = None
    supply = VarSupply()
    for r in theory.rules:
        c = rename_apart(Clause((r.conclusion,), (r.prerequisite,)), supply)
        s = unify_triangular(c.head[0], query, {})
        if s is None:
            continue
        ren = {v: w for v, w in zip(variables_of([r.prerequisite, r.conclusion]),
                                    variables_of([c.body[0], c.head[0]]))}
        prereq = resolve(c.body[0], s)
        for answer in solve(compiled, prereq, limits=limits, undefined_is_error=False):
            s2 = dict(s)
            for v, t in answer.bindings.items():
                s2[v] = t
            fired = None
            for name, cond in theory.exceptions:
                if name != r.name:
                    continue
                from .terms import apply
                inst = resolve(apply(ren, cond), s2)
                if _derivable(compiled, inst, limits):
                    fired = inst
                    break
            if fired is None:
                return DefaultVerdict("holds", r.name)
            if blocked is None:
                blocked = DefaultVerdict("blocked", r.name, fired)
    return blocked or DefaultVerdict("underivable")


def load_default_theory(text: str, origin: str = "<theory>") -> DefaultTheory:
    """Programme text with ``:- default(Name, Prereq => Conclusion).`` and
    ``:- exception(Name, Condition).`` directives; other clauses are facts."""
    directives, rest = _directives(parse_program(text, origin))
    rules: List[DefaultRule] = []
    exceptions: List[Tuple[str, Term]] = []
    for d in directives:
        if isinstance(d, Compound) and d.functor == "default" and len(d.args) == 2:
            name, body = d.args
            if not (isinstance(name, Atom) and isinstance(body, Compound)
                    and body.functor == "=>" and len(body.args) == 2):
                raise SpecError(f"malformed default: {write_term(d, quoted=True)}")
            rules.append(DefaultRule(name.name, *body.args))
        elif isinstance(d, Compound) and d.functor == "exception" and len(d.args) == 2:
            name, cond = d.args
            if not isinstance(name, Atom):
                raise SpecError(f"malformed exception: {write_term(d, quoted=True)}")
            exceptions.append((name.name, cond))
    return DefaultTheory(tuple(rules), tuple(exceptions), consult(Program(), rest))
