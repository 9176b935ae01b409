"""SLD resolution for definite programs with Prolog builtins.

The selection rule is always the leftmost call.  What varies is how the
SLD-tree is explored: depth-first (textual clause order, with cut),
breadth-first, or iterative deepening.  Every answer carries a proof tree.

Answers come out of a :class:`Solutions` iterator.  When the iterator
stops, ``status`` tells normal exhaustion (``"exhausted"``) from hitting an
engine limit (``"resources"``).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .clauses import Clause, Program, flatten, term_to_clause
from .reader import SourceClause, parse_term, write_term
from .terms import (NIL, Atom, Compound, Int, Substitution, Term, Var, VarSupply, apply,
                    indicator, is_ground, is_variant, list_items, mklist, order_key,
                    iter_vars, rename_term, resolve, unify_triangular, variables_of, walk)


# -- errors -------------------------------------------------------------------

class PrologError(Exception):
    """Runtime error raised while solving."""


class InstantiationError(PrologError):
    pass


class PrologTypeError(PrologError):
    pass


class EvaluationError(PrologError):
    pass


class ExistenceError(PrologError):
    def __init__(self, name: str, arity: int):
        self.name, self.arity = name, arity
        super().__init__(f"unknown procedure {write_term(Atom(name), quoted=True)}/{arity}")


class StrategyError(PrologError):
    """Cut used under a strategy that gives it no meaning."""


class NonDefiniteError(PrologError):
    pass


class ResourcesExhausted(Exception):
    """Internal signal: a depth or node limit was hit."""


# -- configuration ----------------------------------------------------------------

@dataclass(frozen=True)
class DepthFirst:
    name = "dfs"


@dataclass(frozen=True)
class BreadthFirst:
    name = "bfs"


@dataclass(frozen=True)
class IterativeDeepening:
    step: int = 1
    name = "id"

    def __post_init__(self):
        if self.step < 1:
            raise ValueError("iterative deepening step must be >= 1")


Strategy = Union[DepthFirst, BreadthFirst, IterativeDeepening]


def strategy_named(name: str) -> Strategy:
    return {"dfs": DepthFirst(), "bfs": BreadthFirst(), "id": IterativeDeepening()}[name]


@dataclass(frozen=True)
class EngineLimits:
    """``max_depth`` bounds derivation length, ``max_nodes`` the number of
    node expansions.  With neither set the engine may run forever."""
    max_depth: Optional[int] = None
    max_nodes: Optional[int] = None


# -- results ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProofTree:
    atom: Term
    clause: Optional[int]  # program clause index, None for builtins/control
    kind: str = "clause"  # clause | builtin | control | query
    children: Tuple["ProofTree", ...] = ()

    def lines(self, program: Optional[Program] = None, indent: int = 0) -> List[str]:
        if self.kind == "clause":
            note = f"clause {self.clause + 1}"
        else:
            note = self.kind
        out = [f"{'  ' * indent}{write_term(self.atom, quoted=True)}  % {note}"]
        for c in self.children:
            out.extend(c.lines(program, indent + 1))
        return out

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def to_dict(self) -> dict:
        return {
            "atom": write_term(self.atom, quoted=True),
            "kind": self.kind,
            "clause": None if self.clause is None else self.clause + 1,
            "children": [c.to_dict() for c in self.children],
        }


@dataclass
class Answer:
    bindings: Dict[Var, Term]
    proof: Optional[ProofTree]
    depth: int

    def format(self) -> str:
        return format_bindings(self.bindings)


def format_bindings(bindings: Dict[Var, Term]) -> str:
    """``X = t, ...`` (``true`` when empty); variables introduced by the
    engine print as ``_1``, ``_2``, ..."""
    if not bindings:
        return "true"
    show = _display_namer({})
    return ", ".join(f"{v.name} = {write_term(show(t), quoted=True, max_priority=699)}"
                     for v, t in bindings.items())


class Solutions:
    """Resumable answer stream.

    Iterate to get :class:`Answer` values.  Once iteration stops, ``status``
    is ``"exhausted"`` (search space fully explored) or ``"resources"``
    (a limit was hit, so absence of further answers proves nothing).
    Engine errors propagate as :class:`PrologError`.
    """

    def __init__(self, gen: Iterator[Answer]):
        self._gen = gen
        self.status: Optional[str] = None

    def __iter__(self):
        return self

    def __next__(self) -> Answer:
        if self.status is not None:
            raise StopIteration
        try:
            return next(self._gen)
        except StopIteration:
            self.status = "exhausted"
            raise
        except ResourcesExhausted:
            self.status = "resources"
            raise StopIteration from None
        except PrologError:
            self.status = "error"
            raise

    @property
    def resources_exhausted(self) -> bool:
        return self.status == "resources"


# -- engine internals -----------------------------------------------------------------------

class _Port:
    """Goal-list marker that emits an Exit port when reached."""
    __slots__ = ("term", "level")

    def __init__(self, term, level):
        self.term = term
        self.level = level


class _FailPort:
    __slots__ = ("term", "level", "subst")

    def __init__(self, term, level, subst):
        self.term, self.level, self.subst = term, level, subst


class _Node:
    __slots__ = ("goals", "subst", "depth", "log", "via", "redo")

    def __init__(self, goals, subst, depth, log, via=None, redo=None):
        self.goals = goals    # linked list: ((term, barrier, level, gid), rest) or None
        self.subst = subst    # triangular substitution
        self.depth = depth
        self.log = log        # linked list of proof-log entries
        self.via = via        # clause index or builtin label that produced this node
        self.redo = redo      # (term, level, subst) when this is a retried alternative


class _Compiled:
    __slots__ = ("head", "body", "vars", "first")

    def __init__(self, clause: Clause):
        self.head = clause.head[0]
        self.body = tuple(clause.body)
        self.vars = clause.variables()
        first = self.head.args[0] if isinstance(self.head, Compound) else None
        self.first = _principal(first) if first is not None else None

    def rename(self, supply: VarSupply):
        if not self.vars:
            return self.head, self.body
        ren = {v: supply.fresh() for v in self.vars}
        return apply(ren, self.head), tuple(apply(ren, b) for b in self.body)


def _principal(t):
    if isinstance(t, Var):
        return None
    if isinstance(t, Compound):
        return (t.functor, len(t.args))
    return t


class _Budget:
    def __init__(self, max_nodes):
        self.max_nodes = max_nodes
        self.used = 0


def _mentions_cut(t: Term) -> bool:
    if t == Atom("!"):
        return True
    if isinstance(t, Compound) and indicator(t) in ((",", 2), (";", 2), ("->", 2)):
        return any(_mentions_cut(a) for a in t.args)
    return False


class Engine:
    """An engine session over one program.

    ``occurs_check`` defaults on.  ``undefined_is_error`` makes calls to
    predicates without clauses raise :class:`ExistenceError`; switch it off
    to make them fail quietly.  ``tracer`` receives four-port trace lines.
    """

    def __init__(self, program: Program, occurs_check: bool = True,
                 undefined_is_error: bool = True,
                 tracer: Optional[Callable[[str], None]] = None):
        self.program = program
        self.occurs_check = occurs_check
        self.undefined_is_error = undefined_is_error
        self.tracer = tracer
        self._compiled: Dict[int, _Compiled] = {}

    def compiled(self, i: int) -> _Compiled:
        c = self._compiled.get(i)
        if c is None:
            c = self._compiled[i] = _Compiled(self.program.clauses[i])
        return c

    def has_cut(self) -> bool:
        return any(_mentions_cut(b) for c in self.program for b in c.body)

    def solve(self, goal, strategy: Strategy = DepthFirst(),
              limits: EngineLimits = EngineLimits()) -> Solutions:
        goals = _as_goals(goal)
        run = _Run(self, strategy, limits, VarSupply(), _Budget(limits.max_nodes), 0)
        if not isinstance(strategy, DepthFirst):
            if self.has_cut() or any(_mentions_cut(g) for g in goals):
                raise StrategyError(f"cut is only supported under depth-first search, "
                                    f"not {strategy.name}")
        return Solutions(run.answers(goals))


def _as_goals(goal) -> List[Term]:
    if isinstance(goal, str):
        goal = parse_term(goal)
    if isinstance(goal, (Var, Atom, Int, Compound)):
        return flatten(goal)
    out = []
    for g in goal:
        out.extend(flatten(g))
    return out


class _Run:
    """One search over one goal list; builtins that need nested searches
    spawn child runs that share the variable supply and node budget."""

    def __init__(self, engine: Engine, strategy: Strategy, limits: EngineLimits,
                 supply: VarSupply, budget: _Budget, root_depth: int):
        self.engine = engine
        self.program = engine.program
        self.strategy = strategy
        self.limits = limits
        self.supply = supply
        self.budget = budget
        self.root_depth = root_depth
        self.gids = itertools.count()
        self.tracing = engine.tracer is not None

    # -- goal lists

    def push(self, term: Term, rest, barrier, level: int) -> Tuple[object, List[int]]:
        parts = flatten(term) if isinstance(term, Compound) and term.functor == "," else [term]
        gids = []
        items = []
        for p in parts:
            gid = next(self.gids)
            gids.append(gid)
            items.append((p, barrier, level, gid))
        goals = rest
        for item in reversed(items):
            goals = (item, goals)
        return goals, gids

    def push_many(self, terms: Sequence[Term], rest, barrier, level: int):
        goals = rest
        gids: List[int] = []
        for t in reversed(terms):
            goals, g = self.push(t, goals, barrier, level)
            gids[:0] = g
        return goals, gids

    def root(self, goals: Sequence[Term], subst: Optional[Substitution] = None):
        g, gids = self.push_many(goals, None, 0, 1)
        return _Node(g, subst or {}, self.root_depth, None), gids

    # -- tracing

    def port(self, name: str, term: Term, level: int, subst: Substitution):
        if self.tracing:
            t = resolve(term, subst)
            self.engine.tracer(f"{name}: ({level}) {write_term(t, quoted=True)}")

    def skip_exits(self, node: _Node) -> _Node:
        goals = node.goals
        if goals is None or not isinstance(goals[0], _Port):
            return node
        while goals is not None and isinstance(goals[0], _Port):
            marker = goals[0]
            self.port("Exit", marker.term, marker.level, node.subst)
            goals = goals[1]
        return _Node(goals, node.subst, node.depth, node.log, node.via, node.redo)

    # -- budget

    def charge(self):
        b = self.budget
        b.used += 1
        if b.max_nodes is not None and b.used > b.max_nodes:
            raise ResourcesExhausted()

    # -- expansion

    def child(self, node: _Node, goals, subst, entry, via) -> _Node:
        return _Node(goals, subst, node.depth + 1, (entry, node.log), via)

    def expand(self, node: _Node, token) -> Tuple[List[_Node], Optional[object]]:
        """Children of ``node`` in clause order, and the cut barrier to prune
        to when the selected call was ``!``."""
        (term, barrier, level, gid), rest = node.goals
        s = node.subst
        t = walk(term, s)
        if isinstance(t, Var):
            raise InstantiationError(f"goal is unbound: {write_term(resolve(term, s))}")
        if isinstance(t, Int):
            raise PrologTypeError(f"callable expected, found {t.value}")
        key = (t.name, 0) if isinstance(t, Atom) else (t.functor, len(t.args))
        handler = _CONTROL.get(key)
        if handler is not None:
            return handler(self, node, t, barrier, level, gid, rest, token)
        handler = _BUILTINS.get(key)
        if handler is not None:
            self.port("Call", t, level, s)
            s2 = handler(self, t, s)
            if s2 is None:
                self.port("Fail", t, level, s)
                return [], None
            self.port("Exit", t, level, s2)
            entry = (gid, "builtin", None, (), t)
            return [self.child(node, rest, s2, entry, "builtin")], None
        return self.resolve_call(node, t, key, level, gid, rest, token), None

    def resolve_call(self, node, t, key, level, gid, rest, token):
        s = node.subst
        positions = self.program.index.get(key)
        self.port("Call", t, level, s)
        if positions is None:
            if self.engine.undefined_is_error and key not in self.program.declared:
                raise ExistenceError(*key)
            self.port("Fail", t, level, s)
            return []
        first = None
        if isinstance(t, Compound):
            first = _principal(walk(t.args[0], s))
        children = []
        occurs = self.engine.occurs_check
        for ci in positions:
            cc = self.engine.compiled(ci)
            if first is not None and cc.first is not None and cc.first != first:
                continue
            head, body = cc.rename(self.supply)
            s2 = unify_triangular(head, t, s, occurs)
            if s2 is None:
                continue
            goals = rest
            if self.tracing:
                goals = (_Port(t, level), goals)
            goals, gids = self.push_many(body, goals, token, level + 1)
            entry = (gid, "clause", ci, tuple(gids), t)
            kid = self.child(node, goals, s2, entry, ci)
            if children:
                kid.redo = (t, level, s)
            children.append(kid)
        if not children:
            self.port("Fail", t, level, s)
        return children

    # -- nested searches

    def subrun(self, goal: Term, subst: Substitution, depth: int) -> "_Run":
        return _Run(self.engine, self.strategy, self.limits, self.supply, self.budget, depth)

    def sub_answers(self, goal: Term, subst: Substitution, depth: int) -> Iterator[Substitution]:
        """Substitutions (extending ``subst``) for each answer to ``goal``."""
        run = self.subrun(goal, subst, depth)
        root, _ = run.root([goal], subst)
        for node in run.search(root):
            yield node.subst

    # -- strategies

    def search(self, root: _Node) -> Iterator[_Node]:
        if isinstance(self.strategy, BreadthFirst):
            return self._bfs(root)
        if isinstance(self.strategy, IterativeDeepening):
            return self._id(root)
        return self._dfs(root)

    def _dfs(self, root: _Node) -> Iterator[_Node]:
        max_depth = self.limits.max_depth
        stack: List[object] = [root]
        while stack:
            node = stack.pop()
            if isinstance(node, _FailPort):
                self.port("Fail", node.term, node.level, node.subst)
                continue
            node = self.skip_exits(node)
            if node.redo is not None:
                self.port("Redo", *node.redo)
            if node.goals is None:
                yield node
                continue
            if max_depth is not None and node.depth >= max_depth:
                raise ResourcesExhausted()
            self.charge()
            mark = self.tracing and self._is_user_call(node)
            token = len(stack) + (1 if mark else 0)
            children, cut = self.expand(node, token)
            if cut is not None:
                del stack[cut:]
            if mark and children:
                # the marker sits just below the alternatives, where the
                # token computed above expects it
                item = node.goals[0]
                stack.append(_FailPort(walk(item[0], node.subst), item[2], node.subst))
            stack.extend(reversed(children))

    def _is_user_call(self, node: _Node) -> bool:
        t = walk(node.goals[0][0], node.subst)
        if isinstance(t, Atom):
            key = (t.name, 0)
        elif isinstance(t, Compound):
            key = (t.functor, len(t.args))
        else:
            return False
        return key not in _CONTROL and key not in _BUILTINS

    def _bfs(self, root: _Node) -> Iterator[_Node]:
        max_depth = self.limits.max_depth
        queue = deque([root])
        cut_off = False
        while queue:
            node = self.skip_exits(queue.popleft())
            if node.goals is None:
                yield node
                continue
            if max_depth is not None and node.depth >= max_depth:
                cut_off = True
                continue
            self.charge()
            children, cut = self.expand(node, None)
            if cut is not None:
                raise StrategyError("cut is only supported under depth-first search")
            queue.extend(children)
        if cut_off:
            raise ResourcesExhausted()

    def _id(self, root: _Node) -> Iterator[_Node]:
        step = self.strategy.step
        max_depth = self.limits.max_depth
        cap = None if max_depth is None else max_depth - root.depth
        prev, limit = 0, step if cap is None else min(step, cap)
        while True:
            cut_off = False
            stack = [root]
            while stack:
                node = self.skip_exits(stack.pop())
                rel = node.depth - root.depth
                if node.goals is None:
                    if rel > prev or (prev == 0 and rel == 0):
                        yield node
                    continue
                if rel >= limit:
                    cut_off = True
                    continue
                self.charge()
                children, cut = self.expand(node, None)
                if cut is not None:
                    raise StrategyError("cut is only supported under depth-first search")
                stack.extend(reversed(children))
            if not cut_off:
                return
            if cap is not None and limit >= cap:
                raise ResourcesExhausted()
            prev = limit
            limit += step
            if cap is not None:
                limit = min(limit, cap)

    # -- answers

    def answers(self, goals: Sequence[Term]) -> Iterator[Answer]:
        root, gids = self.root(goals)
        qvars = [v for v in variables_of(goals) if not v.name.startswith("_")]
        for node in self.search(root):
            s = node.subst
            bindings = {}
            for v in qvars:
                val = resolve(v, s)
                if val != v:
                    bindings[v] = val
            proof = build_proof(node.log, gids, goals, s)
            yield Answer(bindings, proof, node.depth)


def build_proof(log, root_gids: Sequence[int], goals: Sequence[Term], s: Substitution) -> ProofTree:
    entries = {}
    while log is not None:
        entry, log = log
        entries[entry[0]] = entry

    def build(gid):
        _, kind, ci, kids, term = entries[gid]
        return ProofTree(resolve(term, s), ci, kind, tuple(build(k) for k in kids))

    trees = [build(g) for g in root_gids]
    if len(trees) == 1:
        return trees[0]
    conj = goals[-1]
    for g in reversed(goals[:-1]):
        conj = Compound(",", (g, conj))
    return ProofTree(resolve(conj, s), None, "query", tuple(trees))


# -- control constructs --------------------------------------------------------------------------

def _ctl_true(run, node, t, barrier, level, gid, rest, token):
    return [run.child(node, rest, node.subst, (gid, "builtin", None, (), t), "builtin")], None


def _ctl_fail(run, node, t, barrier, level, gid, rest, token):
    run.port("Call", t, level, node.subst)
    run.port("Fail", t, level, node.subst)
    return [], None


def _ctl_cut(run, node, t, barrier, level, gid, rest, token):
    if token is None and not isinstance(run.strategy, DepthFirst):
        raise StrategyError("cut is only supported under depth-first search")
    entry = (gid, "builtin", None, (), t)
    return [run.child(node, rest, node.subst, entry, "builtin")], barrier


def _ctl_conj(run, node, t, barrier, level, gid, rest, token):
    goals, gids = run.push(t, rest, barrier, level)
    return [run.child(node, goals, node.subst, (gid, "control", None, tuple(gids), t), "control")], None


def _ctl_call(run, node, t, barrier, level, gid, rest, token):
    g = walk(t.args[0], node.subst)
    if isinstance(g, Var):
        raise InstantiationError("call/1: goal is unbound")
    goals, gids = run.push(g, rest, token, level + 1)
    return [run.child(node, goals, node.subst, (gid, "control", None, tuple(gids), t), "control")], None


def _if_then_else(run, node, cond, then, other, barrier, level, gid, rest, t):
    s = node.subst
    first = next(run.sub_answers(cond, s, node.depth), None)
    if first is not None:
        goals, gids = run.push(then, rest, barrier, level)
        return [run.child(node, goals, first, (gid, "control", None, tuple(gids), t), "control")], None
    if other is None:
        return [], None
    goals, gids = run.push(other, rest, barrier, level)
    return [run.child(node, goals, s, (gid, "control", None, tuple(gids), t), "control")], None


def _ctl_or(run, node, t, barrier, level, gid, rest, token):
    left = walk(t.args[0], node.subst)
    if isinstance(left, Compound) and left.functor == "->" and len(left.args) == 2:
        return _if_then_else(run, node, left.args[0], left.args[1], t.args[1],
                             barrier, level, gid, rest, t)
    kids = []
    for branch in t.args:
        goals, gids = run.push(branch, rest, barrier, level)
        kids.append(run.child(node, goals, node.subst,
                              (gid, "control", None, tuple(gids), t), "control"))
    return kids, None


def _ctl_ifthen(run, node, t, barrier, level, gid, rest, token):
    return _if_then_else(run, node, t.args[0], t.args[1], None, barrier, level, gid, rest, t)


def _ctl_naf(run, node, t, barrier, level, gid, rest, token):
    s = node.subst
    g = resolve(t.args[0], s)
    run.port("Call", t, level, s)
    if not is_ground(g):
        raise InstantiationError(
            f"negation as failure needs a ground goal: \\+ {write_term(g, quoted=True)}")
    found = next(run.sub_answers(g, s, node.depth), None)
    if found is not None:
        run.port("Fail", t, level, s)
        return [], None
    run.port("Exit", t, level, s)
    return [run.child(node, rest, s, (gid, "builtin", None, (), t), "builtin")], None


def _collect_instances(run, template, goal, s, depth):
    out = []
    for s2 in run.sub_answers(goal, s, depth):
        out.append(rename_term(resolve(template, s2), run.supply))
    return out


def _ctl_findall(run, node, t, barrier, level, gid, rest, token):
    s = node.subst
    template, goal, result = t.args
    items = _collect_instances(run, template, goal, s, node.depth)
    s2 = unify_triangular(result, mklist(items), s, run.engine.occurs_check)
    if s2 is None:
        return [], None
    return [run.child(node, rest, s2, (gid, "builtin", None, (), t), "builtin")], None


def _ctl_bagof(run, node, t, barrier, level, gid, rest, token):
    s = node.subst
    template, goal, result = t.args
    goal_r = resolve(goal, s)
    if isinstance(goal_r, Var):
        raise InstantiationError(f"{t.functor}/3: goal is unbound")
    tvars = set(variables_of(resolve(template, s)))
    witness_vars = [v for v in variables_of(goal_r) if v not in tvars]
    witness = mklist(witness_vars)
    pairs = _collect_instances(run, Compound("-", (witness, template)), goal, s, node.depth)
    if not pairs:
        return [], None
    groups: List[Tuple[Term, List[Term]]] = []
    for p in pairs:
        w, inst = p.args
        for g in groups:
            if is_variant(g[0], w):
                g[1].append(inst)
                break
        else:
            groups.append((w, [inst]))
    if witness_vars:
        groups.sort(key=lambda g: order_key(g[0]))
    kids = []
    for w, insts in groups:
        if t.functor == "setof":
            insts = _sort_unique(insts)
        s2 = unify_triangular(witness, w, s, run.engine.occurs_check)
        if s2 is not None:
            s2 = unify_triangular(result, mklist(insts), s2, run.engine.occurs_check)
        if s2 is not None:
            kids.append(run.child(node, rest, s2, (gid, "builtin", None, (), t), "builtin"))
    return kids, None


def _sort_unique(ts: List[Term]) -> List[Term]:
    out = []
    for x in sorted(ts, key=order_key):
        if not out or out[-1] != x:
            out.append(x)
    return out


_CONTROL = {
    ("true", 0): _ctl_true,
    ("fail", 0): _ctl_fail,
    ("false", 0): _ctl_fail,
    ("!", 0): _ctl_cut,
    (",", 2): _ctl_conj,
    (";", 2): _ctl_or,
    ("->", 2): _ctl_ifthen,
    ("\\+", 1): _ctl_naf,
    ("call", 1): _ctl_call,
    ("findall", 3): _ctl_findall,
    ("bagof", 3): _ctl_bagof,
    ("setof", 3): _ctl_bagof,
}


# -- deterministic builtins ---------------------------------------------------------------------

def eval_arith(e: Term, subst: Optional[Substitution] = None) -> int:
    """Integer value of an arithmetic expression.

    ``//`` rounds toward negative infinity and ``mod`` takes the sign of the
    divisor, so ``X =:= (X // Y) * Y + X mod Y`` always holds.
    """
    if subst:
        e = walk(e, subst)
    if isinstance(e, Int):
        return e.value
    if isinstance(e, Var):
        raise InstantiationError("arithmetic: unbound variable")
    if isinstance(e, Atom):
        raise PrologTypeError(f"arithmetic: {write_term(e, quoted=True)} is not a function")
    args = [eval_arith(a, subst) for a in e.args]
    key = (e.functor, len(args))
    if key == ("+", 2):
        return args[0] + args[1]
    if key == ("-", 2):
        return args[0] - args[1]
    if key == ("*", 2):
        return args[0] * args[1]
    if key == ("/", 2):
        # integers only: exact quotients are allowed, fractions are errors
        if args[1] == 0:
            raise EvaluationError("arithmetic: division by zero")
        if args[0] % args[1]:
            raise EvaluationError(f"arithmetic: {args[0]} / {args[1]} is not an integer")
        return args[0] // args[1]
    if key in (("//", 2), ("mod", 2)):
        if args[1] == 0:
            raise EvaluationError("arithmetic: division by zero")
        return args[0] // args[1] if e.functor == "//" else args[0] % args[1]
    if key == ("-", 1):
        return -args[0]
    if key == ("+", 1):
        return args[0]
    if key == ("abs", 1):
        return abs(args[0])
    if key in (("min", 2), ("max", 2)):
        return min(args) if e.functor == "min" else max(args)
    raise PrologTypeError(f"arithmetic: unknown function {e.functor} with {len(args)} "
                          f"argument{'' if len(args) == 1 else 's'}")


def _unify_bi(run, t, s):
    return unify_triangular(t.args[0], t.args[1], s, run.engine.occurs_check)


def _not_unify_bi(run, t, s):
    return s if unify_triangular(t.args[0], t.args[1], s, run.engine.occurs_check) is None else None


def _compare_bi(test):
    def handler(run, t, s):
        a, b = resolve(t.args[0], s), resolve(t.args[1], s)
        return s if test(a, b) else None
    return handler


def _arith_bi(test):
    def handler(run, t, s):
        return s if test(eval_arith(t.args[0], s), eval_arith(t.args[1], s)) else None
    return handler


def _is_bi(run, t, s):
    value = Int(eval_arith(t.args[1], s))
    return unify_triangular(t.args[0], value, s, run.engine.occurs_check)


def _type_bi(test):
    def handler(run, t, s):
        return s if test(walk(t.args[0], s)) else None
    return handler


def _ground_bi(run, t, s):
    return s if is_ground(resolve(t.args[0], s)) else None


_BUILTINS = {
    ("=", 2): _unify_bi,
    ("\\=", 2): _not_unify_bi,
    ("==", 2): _compare_bi(lambda a, b: a == b),
    ("\\==", 2): _compare_bi(lambda a, b: a != b),
    ("@<", 2): _compare_bi(lambda a, b: order_key(a) < order_key(b)),
    ("@>", 2): _compare_bi(lambda a, b: order_key(a) > order_key(b)),
    ("@=<", 2): _compare_bi(lambda a, b: order_key(a) <= order_key(b)),
    ("@>=", 2): _compare_bi(lambda a, b: order_key(a) >= order_key(b)),
    ("is", 2): _is_bi,
    ("<", 2): _arith_bi(lambda a, b: a < b),
    (">", 2): _arith_bi(lambda a, b: a > b),
    ("=<", 2): _arith_bi(lambda a, b: a <= b),
    (">=", 2): _arith_bi(lambda a, b: a >= b),
    ("=:=", 2): _arith_bi(lambda a, b: a == b),
    ("=\\=", 2): _arith_bi(lambda a, b: a != b),
    ("var", 1): _type_bi(lambda x: isinstance(x, Var)),
    ("nonvar", 1): _type_bi(lambda x: not isinstance(x, Var)),
    ("atom", 1): _type_bi(lambda x: isinstance(x, Atom)),
    ("integer", 1): _type_bi(lambda x: isinstance(x, Int)),
    ("number", 1): _type_bi(lambda x: isinstance(x, Int)),
    ("atomic", 1): _type_bi(lambda x: isinstance(x, (Atom, Int))),
    ("compound", 1): _type_bi(lambda x: isinstance(x, Compound)),
    ("callable", 1): _type_bi(lambda x: isinstance(x, (Atom, Compound))),
    ("ground", 1): _ground_bi,
}

BUILTIN_INDICATORS = frozenset(_CONTROL) | frozenset(_BUILTINS)


def is_builtin(key: Tuple[str, int]) -> bool:
    return key in BUILTIN_INDICATORS


# -- public operations ------------------------------------------------------------------------------

def solve(program: Program, goal, strategy: Strategy = DepthFirst(),
          limits: EngineLimits = EngineLimits(), occurs_check: bool = True,
          undefined_is_error: bool = True,
          tracer: Optional[Callable[[str], None]] = None) -> Solutions:
    """Enumerate answers to ``goal`` (a term, a list of terms, or text)."""
    engine = Engine(program, occurs_check, undefined_is_error, tracer)
    return engine.solve(goal, strategy, limits)


def proof_tree(program: Program, goal, strategy: Strategy = DepthFirst(),
               limits: EngineLimits = EngineLimits(), **flags) -> Optional[ProofTree]:
    """Proof tree of the first answer, or None."""
    for answer in solve(program, goal, strategy, limits, **flags):
        return answer.proof
    return None


def naf(program: Program, goal, strategy: Strategy = DepthFirst(),
        limits: EngineLimits = EngineLimits(), **flags) -> bool:
    """True when ``goal`` finitely fails, False when it has an answer.

    Raises :class:`InstantiationError` for a non-ground goal and
    :class:`ResourcesExhausted` when the search hits a limit.
    """
    goals = _as_goals(goal)
    if not all(is_ground(g) for g in goals):
        raise InstantiationError("negation as failure needs a ground goal")
    sols = solve(program, goals, strategy, limits, **flags)
    for _ in sols:
        return False
    if sols.resources_exhausted:
        raise ResourcesExhausted()
    return True


def collect(program: Program, kind: str, template, goal,
            limits: EngineLimits = EngineLimits(), **flags) -> Optional[Term]:
    """Result list of ``findall``/``bagof``/``setof``, or None when it fails.

    For bagof/setof with free variables, the first group's list is returned.
    """
    if isinstance(template, str):
        template = parse_term(template)
    if isinstance(goal, str):
        goal = parse_term(goal)
    result = Var("Result__")
    call = Compound(kind, (template, goal, result))
    for answer in solve(program, call, DepthFirst(), limits, **flags):
        return answer.bindings.get(result)
    return None


def verify_proof(program: Program, tree: ProofTree, occurs_check: bool = True) -> bool:
    """Independent replay check of a proof tree.

    Every clause node's atom must be an instance of its clause head whose
    body instance matches the children's atoms; builtin leaves must succeed
    when re-run on their own.
    """
    supply = VarSupply(10 ** 6)
    if tree.kind == "query":
        return all(verify_proof(program, c, occurs_check) for c in tree.children)
    if tree.kind == "builtin":
        sols = solve(program, tree.atom, limits=EngineLimits(max_nodes=10 ** 5),
                     undefined_is_error=False)
        return next(iter(sols), None) is not None
    if tree.kind == "control":
        return all(verify_proof(program, c, occurs_check) for c in tree.children)
    clause = program.clauses[tree.clause]
    from .terms import rename_apart
    c = rename_apart(clause, supply)
    s = unify_triangular(c.head[0], tree.atom, {}, occurs_check)
    if s is None:
        return False
    body = [t for b in c.body for t in flatten(b)]
    if len(body) != len(tree.children):
        return False
    for b, child in zip(body, tree.children):
        s = unify_triangular(b, child.atom, s, occurs_check)
        if s is None:
            return False
    return all(verify_proof(program, child, occurs_check) for child in tree.children)


# -- loading ----------------------------------------------------------------------------------------------

def consult(program: Program, clauses: Iterable[SourceClause], as_library: bool = False) -> Program:
    """Append source clauses to a program, translating DCG rules.

    Directives ``dynamic(p/n)`` declare predicates; other directives and
    queries are ignored here (loaders for special file kinds read them).
    Disjunctive heads are rejected: use
    :func:`simplylog.clausal.full_clausal_query` for general clauses.
    """
    from .lang import dcg_translate_term
    new: List[Clause] = []
    declared = set()
    for sc in clauses:
        if sc.kind == "directive":
            d = sc.term.args[0]
            if isinstance(d, Compound) and d.functor == "dynamic":
                for spec in flatten(d.args[0]):
                    if (isinstance(spec, Compound) and spec.functor == "/"
                            and isinstance(spec.args[0], Atom) and isinstance(spec.args[1], Int)):
                        declared.add((spec.args[0].name, spec.args[1].value))
            continue
        if sc.kind == "query":
            continue
        if sc.kind == "dcg-rule":
            clause = dcg_translate_term(sc.term)
        else:
            clause = term_to_clause(sc.term)
        if not clause.is_definite:
            where = f"{sc.origin[0]}:{sc.origin[1]}"
            raise NonDefiniteError(
                f"{where}: not a definite clause: {write_term(sc.term, quoted=True)} "
                f"(use full_clausal_query for general clauses)")
        new.append(clause)
    out = program.extend(new, as_library=as_library)
    if declared:
        out = out.with_declared(declared)
    return out


def consult_text(program: Program, text: str, origin: str = "<string>",
                 as_library: bool = False) -> Program:
    from .reader import parse_program
    return consult(program, parse_program(text, origin), as_library)


def program_from_text(text: str, origin: str = "<string>") -> Program:
    return consult_text(Program(), text, origin)


def library() -> Program:
    """Utility predicates (lists, accumulators, difference lists)."""
    from importlib import resources
    text = resources.files("simplylog").joinpath("corpus/appendix/library.pl").read_text()
    return consult_text(Program(), text, "library.pl", as_library=True)


# -- SLD-trees ----------------------------------------------------------------------------------------------

@dataclass
class SLDTreeNode:
    """One node of an SLD-tree.

    ``via`` is the 0-based index of the program clause resolved to reach
    this node, ``"builtin"``/``"control"`` for builtin steps, or None at the
    root.  Leaves have a ``status``: success, failure, pruned (cut away),
    depth-bounded, or error.
    """
    goal: Tuple[Term, ...]
    bindings: Dict[Var, Term]
    depth: int
    via: object = None
    status: Optional[str] = None
    children: List["SLDTreeNode"] = field(default_factory=list)
    message: Optional[str] = None

    def walk(self) -> Iterator["SLDTreeNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def leaves(self) -> List["SLDTreeNode"]:
        return [n for n in self.walk() if not n.children]

    def _via_text(self) -> str:
        if self.via is None:
            return "query"
        if isinstance(self.via, int):
            return f"clause {self.via + 1}"
        return str(self.via)

    def lines(self, indent: int = 0, names: Optional[Dict[Var, Term]] = None) -> List[str]:
        """One line per node.  Renamed clause variables print as ``_1``,
        ``_2``, ... in order of first appearance."""
        names = {} if names is None else names
        show = _display_namer(names)
        if self.goal:
            goal = "?- " + ", ".join(write_term(show(g), quoted=True, max_priority=999)
                                      for g in self.goal) + "."
        else:
            goal = "[]"
        notes = [self._via_text()]
        if self.status is not None:
            status = self.status
            if self.status == "success":
                status += f": {format_bindings({v: show(t) for v, t in self.bindings.items()})}"
            elif self.message:
                status += f": {self.message}"
            notes.append(status)
        out = [f"{'  ' * indent}{goal}  % {', '.join(notes)}"]
        for c in self.children:
            out.extend(c.lines(indent + 1, names))
        return out

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def to_dict(self, names: Optional[Dict[Var, Term]] = None) -> dict:
        names = {} if names is None else names
        show = _display_namer(names)
        via = self.via + 1 if isinstance(self.via, int) else self.via
        return {
            "goal": [write_term(show(g), quoted=True) for g in self.goal],
            "via": via,
            "depth": self.depth,
            "status": self.status,
            "bindings": {v.name: write_term(show(t), quoted=True)
                         for v, t in self.bindings.items()},
            "children": [c.to_dict(names) for c in self.children],
        }


def _display_namer(names: Dict[Var, Term]) -> Callable[[Term], Term]:
    """Map engine-renamed variables to ``_1``, ``_2``, ... (shared table)."""
    def show(t: Term) -> Term:
        for v in iter_vars(t):
            if v not in names and v.name.startswith("_G"):
                names[v] = Var(f"_{len(names) + 1}")
        return apply(names, t)
    return show


def sld_tree(program: Program, goal, max_depth: int, occurs_check: bool = True,
             undefined_is_error: bool = False) -> SLDTreeNode:
    """The SLD-tree of ``goal`` under leftmost selection, down to ``max_depth``.

    Children appear in clause order.  Branches cut away by ``!`` stay in the
    tree as stubs marked ``pruned``.  Calls to predicates without clauses
    are failure leaves unless ``undefined_is_error`` is set, in which case
    they become ``error`` leaves.
    """
    goals = _as_goals(goal)
    engine = Engine(program, occurs_check, undefined_is_error)
    run = _Run(engine, DepthFirst(), EngineLimits(max_depth=max_depth),
               VarSupply(), _Budget(None), 0)
    qvars = [v for v in variables_of(goals) if not v.name.startswith("_")]
    ids = itertools.count()

    def label(node: _Node, status=None) -> SLDTreeNode:
        s = node.subst
        goal_terms = []
        g = node.goals
        while g is not None:
            if not isinstance(g[0], _Port):
                goal_terms.append(resolve(g[0][0], s))
            g = g[1]
        bindings = {}
        for v in qvars:
            val = resolve(v, s)
            if val != v:
                bindings[v] = val
        return SLDTreeNode(tuple(goal_terms), bindings, node.depth, node.via, status)

    def build(node: _Node):
        token = next(ids)
        out = label(node)
        if node.goals is None:
            out.status = "success"
            return out, None
        if node.depth >= max_depth:
            out.status = "depth-bounded"
            return out, None
        try:
            children, cut = run.expand(node, token)
        except ResourcesExhausted:
            out.status = "depth-bounded"
            return out, None
        except PrologError as e:
            out.status = "error"
            out.message = str(e)
            return out, None
        if not children:
            out.status = "failure"
            return out, None
        cut_to = cut
        prune = False
        for child in children:
            if prune:
                out.children.append(label(child, "pruned"))
                continue
            sub, c = build(child)
            out.children.append(sub)
            if c is not None:
                prune = True
                if c != token:
                    cut_to = c if cut_to is None else min(cut_to, c)
        return out, cut_to

    root, _ = run.root(goals)
    # query-level cut refers to the root's own token (0)
    tree, _ = build(root)
    return tree
