import random

import pytest

import gen
from simplylog.search import (Graph, ProblemFormatError, SearchOptions, SearchProblem,
                              format_result, load_problem, search, sld_problem)
from simplylog.sld import BreadthFirst, StrategyError, program_from_text as prog, solve

LINE = "start a\ngoal c\nedge a b\nedge b c\n"
DIAMOND = "start a\ngoal d\nedge a b 1\nedge a c 4\nedge b d 10\nedge c d 1\n"
LANDSCAPE = ("start s\ngoal g\nedge s m\nedge m x\nedge s n\nedge n g\n"
             "h s 3\nh m 1\nh x 2\nh n 2\nh g 0\n")


def run(text, kind, **opts):
    return search(load_problem(text).problem(), kind, SearchOptions(**opts))


def stats_sane(r):
    return r.stats.expanded <= r.stats.generated and r.stats.max_frontier <= r.stats.generated + 1


# -- uninformed -----------------------------------------------------------------------------------

def test_line_graph_breadth_first():
    r = run(LINE, "breadth-first")
    assert r.outcome == "found" and r.path == ["a", "b", "c"]
    assert r.stats.expanded == 3 and stats_sane(r)


def test_start_is_goal():
    for kind in ("depth-first", "breadth-first", "iterative-deepening", "a-star", "greedy",
                 "beam", "hill-climb"):
        r = run("start a\ngoal a\nedge a b\n", kind)
        assert r.path == ["a"] and r.cost == 0, kind


def test_closed_set_terminates_on_cycle():
    r = run("start a\ngoal z\nnode z\nedge a b\nedge b a\n", "breadth-first",
            cycle_policy="closed-set")
    assert r.outcome == "exhausted" and r.stats.expanded == 2


def test_no_cycle_check_hits_budget():
    r = run("start a\ngoal z\nnode z\nedge a b\nedge b a\n", "depth-first", cycle_policy="none",
            max_expanded=50)
    assert r.outcome == "budget-exceeded" and stats_sane(r)


def test_depth_first_is_lifo_in_successor_order():
    r = run("start a\ngoal z\nedge a b\nedge a c\nedge b d\nedge c z\n", "depth-first")
    assert r.order == ["a", "b", "d", "c", "z"] and r.path == ["a", "c", "z"]


def test_iterative_deepening_matches_bfs_length():
    rng = random.Random(51)
    for _ in range(60):
        nodes, edges = gen.rand_graph(rng, rng.randint(2, 9), 0.3)
        g = Graph()
        for u in nodes:
            g.edges.setdefault(u, [])
            for v, _ in edges[u]:
                g.add_edge(u, v, 1)
        p = g.problem(nodes[0], [nodes[-1]])
        bfs = search(p, "breadth-first")
        ids = search(p, "iterative-deepening", SearchOptions(max_expanded=100000))
        assert bfs.found == ids.found
        if bfs.found:
            assert len(bfs.path) == len(ids.path)
            assert len(bfs.path) - 1 == gen.min_edges_exhaustive(edges, nodes[0], [nodes[-1]])
        assert stats_sane(bfs) and stats_sane(ids)


# -- best-first ----------------------------------------------------------------------------------

def test_diamond_a_star():
    r = run(DIAMOND, "a-star")
    assert r.path == ["a", "c", "d"] and r.cost == 5


def test_a_star_with_zero_h_matches_dijkstra():
    rng = random.Random(52)
    for _ in range(60):
        nodes, edges = gen.rand_graph(rng, rng.randint(2, 15), 0.25)
        g = Graph()
        for u in nodes:
            g.edges.setdefault(u, [])
            for v, c in edges[u]:
                g.add_edge(u, v, c)
        dist = gen.dijkstra(edges, nodes[0])
        r = search(g.problem(nodes[0], [nodes[-1]]), "a-star")
        if nodes[-1] in dist:
            assert r.cost == dist[nodes[-1]] and gen.path_cost(edges, r.path) == r.cost
        else:
            assert r.outcome == "exhausted"


def test_greedy_on_line_expands_only_line():
    text = "start a\ngoal d\nedge a b\nedge b c\nedge c d\nedge a x\nedge x y\n" \
           "h a 3\nh b 2\nh c 1\nh d 0\nh x 5\nh y 6\n"
    r = run(text, "greedy")
    assert r.order == ["a", "b", "c", "d"]


def test_a_star_reopens_closed_state():
    # admissible but inconsistent heuristic: c is first closed via the costly route
    text = ("start s\ngoal g\nedge s a 1\nedge s c 4\nedge a c 1\nedge c g 5\n"
            "h s 0\nh a 5\nh c 0\nh g 0\n")
    r = run(text, "a-star")
    assert r.cost == 7 and r.path == ["s", "a", "c", "g"]


# -- local ---------------------------------------------------------------------------------------

def test_hill_climb_gets_stuck():
    r = run(LANDSCAPE, "hill-climb")
    assert r.outcome == "exhausted" and r.order[-1] == "m"


def test_beam_two_finds_goal():
    r = run(LANDSCAPE, "beam", beam_width=2)
    assert r.outcome == "found" and r.path[-1] == "g"


def test_width_one_beam_follows_hill_climb():
    rng = random.Random(53)
    for _ in range(80):
        nodes, edges = gen.rand_graph(rng, rng.randint(2, 10), 0.3)
        g = Graph()
        for u in nodes:
            g.edges.setdefault(u, [])
            g.h[u] = rng.randint(0, 9)
            for v, c in edges[u]:
                g.add_edge(u, v, c)
        p = g.problem(nodes[0], [nodes[-1]])
        hc = search(p, "hill-climb")
        beam = search(p, "beam", SearchOptions(beam_width=1))
        assert beam.order[:len(hc.order)] == hc.order


def test_options_validated():
    with pytest.raises(ValueError):
        SearchOptions(beam_width=0)
    with pytest.raises(ValueError):
        SearchOptions(cycle_policy="sometimes")


# -- problem files ---------------------------------------------------------------------------------

def test_load_problem_errors():
    with pytest.raises(ProblemFormatError):
        load_problem("goal a\n")
    with pytest.raises(ProblemFormatError):
        load_problem("start a\n")
    with pytest.raises(ProblemFormatError):
        load_problem("start a\ngoal b\nedge a b -1\n")


def test_format_result():
    text = format_result(run(DIAMOND, "a-star"))
    assert text.startswith("path: a c d\ncost: 5\nexpanded=")


# -- SLD search spaces ----------------------------------------------------------------------------

def test_sld_problem_goal_at_depth_two():
    r = search(sld_problem(prog("q. p :- q."), "p"), "breadth-first")
    assert r.found and r.path[-1].depth == 2 and r.path[-1].goals == []


def test_sld_problem_unprovable():
    r = search(sld_problem(prog("q. p :- q.").with_declared([("r", 0)]), "r"), "breadth-first")
    assert r.outcome == "exhausted"


def test_sld_problem_infinite_chain():
    for budget in (10, 100):
        r = search(sld_problem(prog("p :- p."), "p"), "breadth-first",
                   SearchOptions(max_expanded=budget))
        assert r.outcome == "budget-exceeded"


def test_sld_problem_rejects_cut():
    with pytest.raises(StrategyError):
        sld_problem(prog("p :- !."), "p")


def test_sld_problem_first_answer_agrees_with_engine():
    program = prog("e(a,b). e(b,c). e(c,d). path(X,Y) :- e(X,Y). "
                   "path(X,Y) :- e(X,Z), path(Z,Y).")
    r = search(sld_problem(program, "path(a,W)", max_depth=20), "breadth-first")
    first = next(solve(program, "path(a,W)", BreadthFirst()))
    assert {v.name: t for v, t in r.path[-1].bindings.items()} == \
        {v.name: t for v, t in first.bindings.items()}
