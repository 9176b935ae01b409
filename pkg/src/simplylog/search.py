"""State-space search: uninformed, best-first, and local strategies.

All strategies test for the goal when a node is taken from the frontier,
count that as an expansion, and report ``expanded`` (nodes taken from the
frontier), ``generated`` (nodes created, counting the start node once per
iteration) and ``max_frontier`` (largest frontier size seen).
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

State = Any


@dataclass
class SearchProblem:
    start: State
    is_goal: Callable[[State], bool]
    successors: Callable[[State], Iterable[Tuple[State, float]]]
    heuristic: Callable[[State], float] = lambda s: 0
    key: Callable[[State], Hashable] = lambda s: s


@dataclass(frozen=True)
class SearchOptions:
    """``cycle_policy`` is ``none``, ``path-check`` or ``closed-set``; left
    as None it defaults to path-check for depth-first and iterative
    deepening and closed-set for everything else."""
    cycle_policy: Optional[str] = None
    max_expanded: Optional[int] = None
    beam_width: int = 1
    id_step: int = 1

    def __post_init__(self):
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if self.id_step < 1:
            raise ValueError("id_step must be >= 1")
        if self.cycle_policy not in (None, "none", "path-check", "closed-set"):
            raise ValueError(f"unknown cycle policy {self.cycle_policy!r}")


@dataclass
class SearchStats:
    expanded: int = 0
    generated: int = 0
    max_frontier: int = 0

    def format(self) -> str:
        return f"expanded={self.expanded} generated={self.generated} frontier={self.max_frontier}"


@dataclass
class SearchResult:
    outcome: str  # found | exhausted | budget-exceeded
    path: Optional[List[State]]
    cost: Optional[float]
    stats: SearchStats
    order: List[State] = field(default_factory=list)  # states in expansion order

    @property
    def found(self) -> bool:
        return self.outcome == "found"


class _Node:
    __slots__ = ("state", "parent", "g", "depth", "key")

    def __init__(self, state, parent, g, depth, key):
        self.state, self.parent, self.g, self.depth, self.key = state, parent, g, depth, key

    def path(self) -> List[State]:
        out = []
        n = self
        while n is not None:
            out.append(n.state)
            n = n.parent
        return out[::-1]

    def on_path(self, key) -> bool:
        n = self
        while n is not None:
            if n.key == key:
                return True
            n = n.parent
        return False


class _Budget(Exception):
    pass


class _Run:
    def __init__(self, problem: SearchProblem, opts: SearchOptions, default_policy: str):
        self.p = problem
        self.opts = opts
        self.policy = opts.cycle_policy or default_policy
        self.stats = SearchStats(0, 0, 1)
        self.order: List[State] = []

    def root(self) -> _Node:
        self.stats.generated += 1
        return _Node(self.p.start, None, 0, 0, self.p.key(self.p.start))

    def take(self, node: _Node) -> bool:
        """Account for removing ``node`` from the frontier; True if goal."""
        if self.opts.max_expanded is not None and self.stats.expanded >= self.opts.max_expanded:
            raise _Budget()
        self.stats.expanded += 1
        self.order.append(node.state)
        return self.p.is_goal(node.state)

    def children(self, node: _Node) -> List[_Node]:
        out = []
        for state, cost in self.p.successors(node.state):
            if cost < 0:
                raise ValueError("step costs must be non-negative")
            key = self.p.key(state)
            if self.policy == "path-check" and node.on_path(key):
                continue
            out.append(_Node(state, node, node.g + cost, node.depth + 1, key))
        return out

    def frontier(self, size: int):
        if size > self.stats.max_frontier:
            self.stats.max_frontier = size

    def found(self, node: _Node) -> SearchResult:
        return SearchResult("found", node.path(), node.g, self.stats, self.order)

    def end(self, outcome: str) -> SearchResult:
        return SearchResult(outcome, None, None, self.stats, self.order)


def uninformed_search(p: SearchProblem, kind: str = "breadth-first",
                      opts: SearchOptions = SearchOptions()) -> SearchResult:
    """``kind`` is ``depth-first``, ``breadth-first`` or ``iterative-deepening``."""
    if kind == "depth-first":
        run = _Run(p, opts, "path-check")
        try:
            return _dfs(run)
        except _Budget:
            return run.end("budget-exceeded")
    if kind == "breadth-first":
        run = _Run(p, opts, "closed-set")
        try:
            return _bfs(run)
        except _Budget:
            return run.end("budget-exceeded")
    if kind == "iterative-deepening":
        run = _Run(p, opts, "path-check")
        try:
            return _iterative_deepening(run)
        except _Budget:
            return run.end("budget-exceeded")
    raise ValueError(f"unknown uninformed search kind {kind!r}")


def _dfs(run: _Run, limit: Optional[int] = None):
    closed = set()
    stack = [run.root()]
    cut_off = False
    while stack:
        node = stack.pop()
        if run.policy == "closed-set":
            if node.key in closed:
                continue
            closed.add(node.key)
        if run.take(node):
            return run.found(node)
        if limit is not None and node.depth >= limit:
            cut_off = True
            continue
        kids = run.children(node)
        if run.policy == "closed-set":
            kids = [k for k in kids if k.key not in closed]
        run.stats.generated += len(kids)
        stack.extend(reversed(kids))
        run.frontier(len(stack))
    if limit is not None:
        return cut_off
    return run.end("exhausted")


def _bfs(run: _Run):
    root = run.root()
    seen = {root.key}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        if run.take(node):
            return run.found(node)
        for kid in run.children(node):
            if run.policy == "closed-set":
                if kid.key in seen:
                    continue
                seen.add(kid.key)
            run.stats.generated += 1
            queue.append(kid)
        run.frontier(len(queue))
    return run.end("exhausted")


def _iterative_deepening(run: _Run):
    limit = run.opts.id_step
    while True:
        result = _dfs(run, limit)
        if isinstance(result, SearchResult):
            return result
        if not result:
            return run.end("exhausted")
        limit += run.opts.id_step


def best_first(p: SearchProblem, kind: str = "a-star",
               opts: SearchOptions = SearchOptions()) -> SearchResult:
    """``kind`` is ``greedy`` (priority h) or ``a-star`` (priority g + h).

    Under the closed-set policy A* reopens a state whenever it is reached
    again with a strictly smaller path cost, so an admissible heuristic
    suffices for optimality.  Equal priorities are served first-in
    first-out.
    """
    if kind not in ("greedy", "a-star"):
        raise ValueError(f"unknown best-first kind {kind!r}")
    run = _Run(p, opts, "closed-set")
    h = p.heuristic
    counter = itertools.count()

    def priority(n: _Node):
        return h(n.state) if kind == "greedy" else n.g + h(n.state)

    root = run.root()
    best_g: Dict[Hashable, float] = {root.key: 0}
    heap = [(priority(root), next(counter), root)]
    try:
        while heap:
            _, _, node = heapq.heappop(heap)
            if run.policy == "closed-set" and best_g.get(node.key, node.g) < node.g:
                continue  # a cheaper route to this state was queued later
            if run.take(node):
                return run.found(node)
            for kid in run.children(node):
                if run.policy == "closed-set":
                    old = best_g.get(kid.key)
                    if kind == "greedy" and old is not None:
                        continue
                    if old is not None and kid.g >= old:
                        continue
                    best_g[kid.key] = kid.g
                run.stats.generated += 1
                heapq.heappush(heap, (priority(kid), next(counter), kid))
            run.frontier(len(heap))
    except _Budget:
        return run.end("budget-exceeded")
    return run.end("exhausted")


def local_search(p: SearchProblem, kind: str = "beam",
                 opts: SearchOptions = SearchOptions()) -> SearchResult:
    """Beam search and hill-climbing; both are incomplete.

    Beam search keeps the ``beam_width`` best successors of each level
    (lowest h, ties by generation order).  Hill-climbing moves to the best
    successor only while it strictly improves h, and stops otherwise; its
    expansion sequence is therefore a prefix of width-1 beam search's.
    """
    if kind == "beam":
        run = _Run(p, opts, "closed-set")
        try:
            return _beam(run, opts.beam_width)
        except _Budget:
            return run.end("budget-exceeded")
    if kind == "hill-climb":
        run = _Run(p, opts, "closed-set")
        try:
            return _hill_climb(run)
        except _Budget:
            return run.end("budget-exceeded")
    raise ValueError(f"unknown local search kind {kind!r}")


def _best(kids: List[_Node], h, width: int) -> List[_Node]:
    ranked = sorted(enumerate(kids), key=lambda ik: (h(ik[1].state), ik[0]))
    return [k for _, k in ranked[:width]]


def _beam(run: _Run, width: int):
    h = run.p.heuristic
    root = run.root()
    seen = {root.key}
    level = [root]
    while level:
        kids: List[_Node] = []
        for node in level:
            if run.take(node):
                return run.found(node)
            for kid in run.children(node):
                if run.policy == "closed-set":
                    if kid.key in seen:
                        continue
                    seen.add(kid.key)
                run.stats.generated += 1
                kids.append(kid)
        run.frontier(len(kids))
        level = _best(kids, h, width)
    return run.end("exhausted")


def _hill_climb(run: _Run):
    h = run.p.heuristic
    node = run.root()
    seen = {node.key}
    while True:
        if run.take(node):
            return run.found(node)
        kids = []
        for kid in run.children(node):
            if run.policy == "closed-set":
                if kid.key in seen:
                    continue
                seen.add(kid.key)
            run.stats.generated += 1
            kids.append(kid)
        run.frontier(len(kids))
        best = _best(kids, h, 1)
        if not best or h(best[0].state) >= h(node.state):
            return run.end("exhausted")
        node = best[0]


def search(p: SearchProblem, kind: str, opts: SearchOptions = SearchOptions()) -> SearchResult:
    """Dispatch on any strategy name."""
    if kind in ("depth-first", "breadth-first", "iterative-deepening"):
        return uninformed_search(p, kind, opts)
    if kind in ("greedy", "a-star"):
        return best_first(p, kind, opts)
    if kind in ("beam", "hill-climb"):
        return local_search(p, kind, opts)
    raise ValueError(f"unknown search kind {kind!r}")


KINDS = ("depth-first", "breadth-first", "iterative-deepening", "greedy", "a-star",
         "beam", "hill-climb")


# -- graph problems ------------------------------------------------------------------------------

@dataclass
class Graph:
    """Directed weighted graph with optional per-node heuristic values."""
    edges: Dict[str, List[Tuple[str, float]]] = field(default_factory=dict)
    h: Dict[str, float] = field(default_factory=dict)
    start: Optional[str] = None
    goals: List[str] = field(default_factory=list)

    def add_edge(self, a: str, b: str, cost: float = 1):
        self.edges.setdefault(a, []).append((b, cost))
        self.edges.setdefault(b, [])

    def problem(self, start: Optional[str] = None, goals: Optional[Iterable[str]] = None) -> SearchProblem:
        start = self.start if start is None else start
        goal_set = frozenset(self.goals if goals is None else goals)
        return SearchProblem(start, lambda s: s in goal_set,
                             lambda s: list(self.edges.get(s, ())),
                             lambda s: self.h.get(s, 0))


class ProblemFormatError(ValueError):
    pass


def load_problem(text: str) -> Graph:
    """Read the line format::

        start a
        goal d            # one or more
        edge a b 1        # directed edge with cost (default 1)
        h a 3             # heuristic value (default 0)
        node x            # declare an isolated node
    """
    g = Graph()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "start" and len(parts) == 2:
                g.start = parts[1]
                g.edges.setdefault(parts[1], [])
            elif parts[0] == "goal" and len(parts) >= 2:
                g.goals.extend(parts[1:])
            elif parts[0] == "edge" and len(parts) in (3, 4):
                g.add_edge(parts[1], parts[2], _number(parts[3]) if len(parts) == 4 else 1)
            elif parts[0] == "h" and len(parts) == 3:
                g.h[parts[1]] = _number(parts[2])
            elif parts[0] == "node" and len(parts) == 2:
                g.edges.setdefault(parts[1], [])
            else:
                raise ValueError("unrecognized line")
        except ValueError as e:
            raise ProblemFormatError(f"line {lineno}: {e}: {raw.strip()}") from None
    if g.start is None:
        raise ProblemFormatError("no start node")
    if not g.goals:
        raise ProblemFormatError("no goal node")
    return g


def _number(s: str) -> float:
    v = float(s)
    if v < 0:
        raise ValueError("negative number")
    return int(v) if v == int(v) else v


def format_result(r: SearchResult) -> str:
    if r.found:
        head = f"path: {' '.join(map(str, r.path))}\ncost: {r.cost}"
    else:
        head = r.outcome
    return f"{head}\n{r.stats.format()}\n"


# -- SLD-trees as search spaces ------------------------------------------------------------------

class SLDState:
    """A node of an SLD-tree: remaining goals under a substitution."""
    __slots__ = ("node", "qvars")

    def __init__(self, node, qvars):
        self.node, self.qvars = node, qvars

    @property
    def goals(self) -> list:
        from .terms import resolve
        out, g = [], self.node.goals
        while g is not None:
            out.append(resolve(g[0][0], self.node.subst))
            g = g[1]
        return out

    @property
    def bindings(self) -> dict:
        from .terms import resolve
        out = {}
        for v in self.qvars:
            val = resolve(v, self.node.subst)
            if val != v:
                out[v] = val
        return out

    @property
    def depth(self) -> int:
        return self.node.depth


def sld_problem(program, goal, max_depth: Optional[int] = None, occurs_check: bool = True) -> SearchProblem:
    """The SLD-tree of ``goal`` as a search problem with unit step costs.

    States are identified by node identity (an SLD-tree is a tree).  Nodes
    at ``max_depth`` have no successors.  Programs using cut are rejected.
    """
    from .sld import (DepthFirst, EngineLimits, Engine, StrategyError, _as_goals, _Budget as EB,
                      _mentions_cut, _Run as SRun)
    from .terms import VarSupply, variables_of
    goals = _as_goals(goal)
    engine = Engine(program, occurs_check)
    if engine.has_cut() or any(_mentions_cut(g) for g in goals):
        raise StrategyError("SLD search problems cannot contain cut")
    run = SRun(engine, DepthFirst(), EngineLimits(), VarSupply(), EB(None), 0)
    qvars = [v for v in variables_of(goals) if not v.name.startswith("_")]
    root, _ = run.root(goals)

    def successors(state: SLDState):
        if max_depth is not None and state.node.depth >= max_depth:
            return []
        if state.node.goals is None:
            return []
        children, cut = run.expand(state.node, None)
        return [(SLDState(c, qvars), 1) for c in children]

    return SearchProblem(SLDState(root, qvars), lambda s: s.node.goals is None,
                         successors, lambda s: 0, lambda s: s)
