"""Generality between clauses and bottom-up induction of definite clauses.

θ-subsumption is the generality order: ``c`` subsumes ``d`` when some
substitution maps every literal of ``c`` onto a literal of ``d`` (heads to
heads, bodies into bodies).  The least general generalization of two
clauses pairs every compatible literal, sharing one table of
disagreement pairs across the whole clause.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .clausal import least_herbrand_model
from .clauses import Clause, Program, flatten, format_clause
from .reader import parse_program, parse_term
from .sld import EngineLimits, consult, solve
from .terms import (Atom, Compound, Generalizer, Int, Substitution, Term, Var, indicator,
                    is_ground, order_key, variables_of)


# -- θ-subsumption -------------------------------------------------------------------------------

def _match(p: Term, t: Term, theta: Substitution) -> Optional[Substitution]:
    """Extend ``theta`` so that ``p theta == t``; variables of ``t`` are
    treated as constants."""
    stack = [(p, t)]
    out = theta
    copied = False
    while stack:
        a, b = stack.pop()
        if isinstance(a, Var):
            bound = out.get(a)
            if bound is None:
                if not copied:
                    out = dict(out)
                    copied = True
                out[a] = b
            elif bound != b:
                return None
        elif isinstance(a, Compound):
            if not (isinstance(b, Compound) and a.functor == b.functor and len(a.args) == len(b.args)):
                return None
            stack.extend(zip(a.args, b.args))
        elif a != b:
            return None
    return out


def _match_all(lits: Sequence[Term], targets: Sequence[Term], theta: Substitution) -> Iterator[Substitution]:
    if not lits:
        yield theta
        return
    first, rest = lits[0], lits[1:]
    key = indicator(first)
    for t in targets:
        if indicator(t) != key:
            continue
        th = _match(first, t, theta)
        if th is not None:
            yield from _match_all(rest, targets, th)


def theta_subsumes(c: Clause, d: Clause) -> Optional[Substitution]:
    """A substitution θ with ``head(c)θ ⊆ head(d)`` and ``body(c)θ ⊆ body(d)``
    (literal sets), or None.  For definite clauses the head condition is
    equality of heads."""
    for th in _match_all(c.head, d.head, {}):
        # most constrained literals first: fewer candidate targets
        body = sorted(set(c.body), key=lambda l: sum(1 for t in d.body if indicator(t) == indicator(l)))
        for th2 in _match_all(body, d.body, th):
            return {v: t for v, t in th2.items() if v != t}
    return None


def generality_check(c: Clause, d: Clause) -> str:
    """``more-general``, ``more-specific``, ``equivalent`` or ``incomparable``
    (``c`` compared to ``d``)."""
    cd = theta_subsumes(c, d) is not None
    dc = theta_subsumes(d, c) is not None
    if cd and dc:
        return "equivalent"
    if cd:
        return "more-general"
    if dc:
        return "more-specific"
    return "incomparable"


# -- least general generalization ------------------------------------------------------------------

class IncompatibleClauses(ValueError):
    pass


def reduce_clause(c: Clause) -> Clause:
    """Drop body literals whose removal leaves a θ-equivalent clause."""
    body = list(dict.fromkeys(c.body))
    changed = True
    while changed:
        changed = False
        for i in range(len(body)):
            shorter = body[:i] + body[i + 1:]
            if theta_subsumes(Clause(c.head, tuple(body)), Clause(c.head, tuple(shorter))) is not None:
                body = shorter
                changed = True
                break
    return Clause(c.head, tuple(body))


def lgg_clauses(c1: Clause, c2: Clause, reduce: bool = True) -> Clause:
    """Least general generalization of two definite clauses with compatible
    heads; with ``reduce`` the result is also stripped of redundant body
    literals."""
    if not (c1.is_definite and c2.is_definite):
        raise IncompatibleClauses("lgg needs definite clauses")
    h1, h2 = c1.head[0], c2.head[0]
    if indicator(h1) != indicator(h2):
        raise IncompatibleClauses("heads {}/{} and {}/{} differ".format(*indicator(h1), *indicator(h2)))
    gen = Generalizer(avoid=c1.variables() + c2.variables())
    head = gen.generalize(h1, h2)
    body: Dict[Term, None] = {}
    for l1 in c1.body:
        for l2 in c2.body:
            if isinstance(l1, (Atom, Compound)) and isinstance(l2, (Atom, Compound)) \
                    and indicator(l1) == indicator(l2):
                body.setdefault(gen.generalize(l1, l2), None)
    out = Clause((head,), tuple(body))
    return reduce_clause(out) if reduce else out


# -- induction --------------------------------------------------------------------------------------

class TaskError(ValueError):
    pass


@dataclass(frozen=True)
class ILPTask:
    positives: Tuple[Term, ...]
    negatives: Tuple[Term, ...]
    background: Program = field(default_factory=Program)
    target: Optional[Tuple[str, int]] = None
    max_body: int = 4
    max_clauses: int = 4

    def __post_init__(self):
        overlap = set(self.positives) & set(self.negatives)
        if overlap:
            raise TaskError(f"examples both positive and negative: {sorted(map(str, overlap))}")
        if not self.positives:
            raise TaskError("at least one positive example is needed")
        for e in self.positives + self.negatives:
            if not is_ground(e):
                raise TaskError(f"examples must be ground: {e}")
        target = self.target or indicator(self.positives[0])
        object.__setattr__(self, "target", target)
        for e in self.positives + self.negatives:
            if indicator(e) != target:
                raise TaskError(f"example {e} is not about {target[0]}/{target[1]}")
        if self.background.defines(target):
            raise TaskError(f"target {target[0]}/{target[1]} is defined in the background")


def _constants(t: Term) -> set:
    out = set()
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, (Atom, Int)):
            out.add(t)
        elif isinstance(t, Compound):
            stack.extend(t.args)
    return out


def _arg_constants(atom: Term) -> set:
    out = set()
    if isinstance(atom, Compound):
        for a in atom.args:
            out |= _constants(a)
    return out


def saturate(example: Term, facts: Sequence[Term], max_body: int) -> Clause:
    """Ground starting clause: the example as head, background facts that
    share a constant with it as body (at most ``max_body``, in order)."""
    consts = _arg_constants(example)
    body = [f for f in facts if consts & _arg_constants(f)]
    return Clause((example,), tuple(body[:max_body]))


def covers(program: Program, atom: Term, limits: EngineLimits) -> bool:
    for _ in solve(program, atom, limits=limits, undefined_is_error=False):
        return True
    return False


def induce(task: ILPTask, limits: EngineLimits = EngineLimits(max_depth=100),
           model_depth: int = 2) -> Optional[Program]:
    """Bottom-up learner.

    Each positive example is saturated into a ground clause.  Going through
    the positives in order, the newest clause of the hypothesis is replaced
    by its lgg with the next example's clause when that covers no negative
    example; otherwise the example's clause starts a new hypothesis clause.
    Returns the hypothesis when it covers every positive and no negative
    within ``max_clauses`` clauses, else None.  With no negative examples
    nothing forces generalization, so a single positive example stays as
    its most specific clause.  Ground body literals proved by the
    background are dropped from the result.
    """
    model = least_herbrand_model(task.background, model_depth)
    facts = [a for a in model.sorted() if isinstance(a, Compound)]

    def consistent(hyp: List[Clause]) -> bool:
        prog = task.background.extend(hyp)
        return not any(covers(prog, n, limits) for n in task.negatives)

    hyp: List[Clause] = []
    for e in task.positives:
        bottom = saturate(e, facts, task.max_body)
        if hyp and theta_subsumes(hyp[-1], bottom) is not None:
            continue
        if hyp:
            folded = lgg_clauses(hyp[-1], bottom)
            if len(folded.body) <= task.max_body and consistent(hyp[:-1] + [folded]):
                hyp[-1] = folded
                continue
        hyp.append(bottom)
    if len(hyp) > task.max_clauses:
        return None
    # a ground body literal that the background proves is redundant
    # relative to the background: drop it
    hyp = [Clause(c.head, tuple(b for b in c.body
                                if not (is_ground(b) and covers(task.background, b, limits))))
           for c in hyp]
    result = task.background.extend(hyp)
    if not all(covers(result, p, limits) for p in task.positives):
        return None
    if any(covers(result, n, limits) for n in task.negatives):
        return None
    return Program(hyp)


def load_task(text: str, origin: str = "<task>") -> ILPTask:
    """Programme text with ``:- pos(Atom).`` / ``:- neg(Atom).`` directives
    (and optionally ``:- target(p/n).``, ``:- max_body(N).``,
    ``:- max_clauses(N).``); other clauses form the background."""
    pos, neg, rest = [], [], []
    opts: Dict[str, object] = {}
    for sc in parse_program(text, origin):
        if sc.kind != "directive":
            rest.append(sc)
            continue
        d = sc.term.args[0]
        if isinstance(d, Compound) and len(d.args) == 1:
            arg = d.args[0]
            if d.functor == "pos":
                pos.append(arg)
            elif d.functor == "neg":
                neg.append(arg)
            elif d.functor == "target" and isinstance(arg, Compound) and arg.functor == "/":
                opts["target"] = (arg.args[0].name, arg.args[1].value)
            elif d.functor in ("max_body", "max_clauses") and isinstance(arg, Int):
                opts[d.functor] = arg.value
    return ILPTask(tuple(pos), tuple(neg), consult(Program(), rest), **opts)
