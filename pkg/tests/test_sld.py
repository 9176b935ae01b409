import itertools
import random

import pytest

from simplylog.clausal import least_herbrand_model
from simplylog.reader import parse_term, write_term
from simplylog.sld import (BreadthFirst, DepthFirst, EngineLimits, EvaluationError, ExistenceError,
                           InstantiationError, IterativeDeepening, NonDefiniteError, PrologTypeError,
                           ResourcesExhausted, StrategyError, collect, consult, eval_arith, library,
                           naf, program_from_text as prog, proof_tree, sld_tree, solve,
                           verify_proof)
from simplylog.clauses import Program
from simplylog.reader import parse_program
from simplylog.terms import Atom, Int, Var

APPEND = "append([], L, L). append([H|T], L, [H|R]) :- append(T, L, R)."


def answers(program, goal, **kw):
    return [a.format() for a in solve(program, goal, **kw)]


# -- solve -------------------------------------------------------------------------------------------

def test_single_fact_answer():
    assert answers(prog("likes(peter,prolog)."), "likes(peter,X)") == ["X = prolog"]


def test_append():
    assert answers(prog(APPEND), "append([1],[2],Z)") == ["Z = [1,2]"]


def test_append_backwards_enumerates_splits_in_order():
    assert answers(prog(APPEND), "append(X,Y,[1,2])") == [
        "X = [], Y = [1,2]", "X = [1], Y = [2]", "X = [1,2], Y = []"]


def test_variable_free_success_is_true():
    assert answers(prog("p."), "p") == ["true"]


@pytest.mark.parametrize("strategy,limits", [
    (DepthFirst(), EngineLimits(max_depth=50)),
    (IterativeDeepening(5), EngineLimits(max_depth=50)),
    (BreadthFirst(), EngineLimits(max_nodes=500)),
])
def test_loop_exhausts_resources(strategy, limits):
    sols = solve(prog("p :- p."), "p", strategy, limits)
    assert list(sols) == [] and sols.status == "resources"


def test_left_recursion_dfs_vs_bfs():
    program = prog("p :- p. p.")
    sols = solve(program, "p", DepthFirst(), EngineLimits(max_depth=50))
    assert next(sols, None) is None and sols.status == "resources"
    sols = solve(program, "p", BreadthFirst(), EngineLimits(max_nodes=500))
    assert next(sols).format() == "true"


def test_finite_failure_is_exhausted():
    sols = solve(prog("p :- q. q :- fail."), "p")
    assert list(sols) == [] and sols.status == "exhausted"


def test_undefined_predicate_is_error():
    with pytest.raises(ExistenceError) as err:
        list(solve(prog("p :- q."), "p"))
    assert "q/0" in str(err.value)
    assert list(solve(prog("p :- q."), "p", undefined_is_error=False)) == []


def test_occurs_check_default():
    assert answers(prog("eq(X, X)."), "eq(Y, f(Y))") == []


def test_resumability():
    program = prog(APPEND)
    full = answers(program, "append(X,Y,[1,2,3,4])")
    for k in range(len(full) + 1):
        sols = solve(program, "append(X,Y,[1,2,3,4])")
        got = [next(sols).format() for _ in range(k)]
        assert got == full[:k]


def test_cut_rejected_outside_depth_first():
    program = prog("p :- !.")
    with pytest.raises(StrategyError):
        list(solve(program, "p", BreadthFirst()))
    with pytest.raises(StrategyError):
        list(solve(program, "p", IterativeDeepening(2)))


def test_cut_commits_to_clause():
    program = prog("max3(X,Y,X) :- X >= Y, !. max3(X,Y,Y).")
    assert answers(program, "max3(3,2,M)") == ["M = 3"]
    assert answers(program, "max3(1,2,M)") == ["M = 2"]


def test_cut_is_local_to_call():
    program = prog("a(1). a(2). b(X) :- a(X), !. c(X, Y) :- b(X), a(Y).")
    assert answers(program, "c(X, Y)") == ["X = 1, Y = 1", "X = 1, Y = 2"]


def test_cut_safety_first_answer():
    rng = random.Random(41)
    for _ in range(100):
        facts = " ".join(f"f({rng.randint(0, 3)})." for _ in range(rng.randint(1, 4)))
        facts += " " + " ".join(f"g({rng.randint(0, 3)})." for _ in range(rng.randint(1, 4)))
        body = ["f(X)", "g(X)"]
        cut_at = rng.randint(0, 2)
        with_cut = body[:cut_at] + ["!"] + body[cut_at:]
        first = next(iter(solve(prog(facts + " h(X) :- " + ", ".join(with_cut) + ". h(9)."),
                                "h(X)")), None)
        plain = answers(prog(facts + " h(X) :- " + ", ".join(body) + ". h(9)."), "h(X)")
        if first is not None:
            assert first.format() in plain[:1]


def _nonrecursive(rng):
    consts = ["a", "b", "c"]
    lines = [f"e({rng.choice(consts)},{rng.choice(consts)})." for _ in range(rng.randint(1, 5))]
    lines += ["r(X,Y) :- e(X,Z), e(Z,Y).", "s(X) :- e(X,X).", "s(X) :- r(X,a).",
              "t(X,Y) :- s(X), e(X,Y)."]
    return prog("\n".join(lines))


def test_strategies_agree_with_grounding():
    rng = random.Random(42)
    for _ in range(30):
        program = _nonrecursive(rng)
        model = least_herbrand_model(program, 0)
        for goal in ("r(X,Y)", "s(X)", "t(X,Y)"):
            truth = sorted(write_term(a) for a in model if a.functor == parse_term(goal).functor)
            for strategy in (DepthFirst(), BreadthFirst(), IterativeDeepening(1)):
                got = sorted({write_term(a.proof.children[0].atom) if a.proof.kind == "query"
                              else write_term(a.proof.atom)
                              for a in solve(program, goal, strategy)})
                assert got == truth, (strategy, goal)


def test_iterative_deepening_finds_deep_answer():
    chain = " ".join(f"n{i} :- n{i + 1}." for i in range(12)) + " n12."
    for step in (1, 3, 20):
        sols = solve(prog(chain), "n0", IterativeDeepening(step), EngineLimits(max_depth=13))
        assert [a.format() for a in sols] == ["true"]


def test_id_answers_not_repeated():
    program = prog("p(1). p(2). q(X) :- p(X).")
    assert answers(program, "q(X)", strategy=IterativeDeepening(1)) == ["X = 1", "X = 2"]


# -- SLD-trees ----------------------------------------------------------------------------------------

def test_sld_tree_two_branches():
    tree = sld_tree(prog("p :- q. p :- r. q.").with_declared([("r", 0)]), "p", 10)
    assert len(tree.children) == 2
    left, right = tree.children
    assert [l.status for l in left.leaves()] == ["success"]
    assert right.status == "failure" and not right.children
    assert (left.via, right.via) == (0, 1)


def test_sld_tree_no_matching_clause():
    tree = sld_tree(prog("p."), "q", 10)
    assert tree.leaves() == [tree] and tree.status == "failure"


def test_sld_tree_cut_pruned():
    tree = sld_tree(prog("max3(X,Y,X) :- X >= Y, !. max3(X,Y,Y)."), "max3(3,2,M)", 10)
    assert [l.status for l in tree.leaves()] == ["success", "pruned"]
    assert tree.children[1].via == 1 and tree.children[1].status == "pruned"
    assert "M = 3" in tree.to_text()


def test_sld_tree_depth_bound():
    tree = sld_tree(prog("p :- p."), "p", 3)
    assert [l.status for l in tree.leaves()] == ["depth-bounded"]
    assert max(n.depth for n in tree.walk()) == 3


def test_sld_tree_export():
    d = sld_tree(prog("p :- q. q."), "p", 5).to_dict()
    assert d["children"][0]["children"][0]["status"] == "success"


# -- arithmetic -------------------------------------------------------------------------------------

def test_eval_arith_examples():
    assert eval_arith(parse_term("3+4")) == 7
    assert eval_arith(parse_term("7 // 2")) == 3
    assert eval_arith(parse_term("7 mod 2")) == 1
    with pytest.raises(InstantiationError):
        eval_arith(parse_term("X+1"))
    with pytest.raises(EvaluationError):
        eval_arith(parse_term("1 // 0"))
    with pytest.raises(PrologTypeError):
        eval_arith(parse_term("foo(1)"))


def test_division_identity():
    for x, d in itertools.product(range(-9, 10), [-4, -3, -1, 1, 2, 5]):
        q = eval_arith(parse_term(f"({x}) // ({d})"))
        r = eval_arith(parse_term(f"({x}) mod ({d})"))
        assert x == q * d + r and q == x // d


def test_comparisons_in_programs():
    assert answers(prog(""), "X is 2*3+1, X > 6, X =:= 7, X =\\= 8") == ["X = 7"]
    assert answers(prog(""), "1 >= 2") == []


# -- second-order --------------------------------------------------------------------------------

def test_collect_examples():
    lib = library()
    assert write_term(collect(lib, "findall", "X", "member(X,[a,b])")) == "[a,b]"
    assert write_term(collect(lib, "findall", "X", "fail")) == "[]"
    assert collect(lib, "bagof", "X", "fail") is None
    assert write_term(collect(lib, "setof", "X", "member(X,[b,a,b])")) == "[a,b]"


def test_bagof_groups_free_variables():
    program = prog("age(ann, 30). age(bob, 30). age(cid, 40).")
    assert answers(program, "bagof(N, age(N, A), L)") == ["A = 30, L = [ann,bob]",
                                                           "A = 40, L = [cid]"]


def test_setof_standard_order():
    program = prog("v(b). v(1). v(f(a)). v(Z). v(a).")
    sols = answers(program, "setof(X, v(X), L)")
    assert len(sols) == 1 and sols[0].startswith("L = [_")
    assert sols[0].endswith(",1,a,b,f(a)]")


# -- negation as failure ---------------------------------------------------------------------------

def test_naf_examples():
    program = prog("bird(tweety).").with_declared([("ab", 1)])
    assert naf(program, "ab(tweety)")
    assert not naf(program, "bird(tweety)")
    with pytest.raises(InstantiationError):
        naf(program, "p(X)")


def test_naf_resources_propagate():
    with pytest.raises(ResourcesExhausted):
        naf(prog("p :- p."), "p", limits=EngineLimits(max_depth=20))


def test_naf_in_clause_bodies():
    program = prog("bird(tweety). bird(opus). penguin(opus). "
                   "flies(X) :- bird(X), \\+ penguin(X).")
    assert answers(program, "flies(X)") == ["X = tweety"]
    with pytest.raises(InstantiationError):
        list(solve(program, "\\+ penguin(X)"))


# -- proof trees ---------------------------------------------------------------------------------------

def test_proof_tree_examples():
    program = prog("q. p :- q.")
    tree = proof_tree(program, "p")
    assert tree.atom == Atom("p") and tree.clause == 1
    assert [(c.atom, c.clause) for c in tree.children] == [(Atom("q"), 0)]
    fact = proof_tree(program, "q")
    assert fact.children == () and fact.clause == 0
    assert proof_tree(program.with_declared([("r", 0)]), "r") is None


def test_proof_trees_replay():
    program = prog(APPEND + " rev([],[]). rev([H|T],R) :- rev(T,RT), append(RT,[H],R). "
                            "len([],0). len([_|T],N) :- len(T,M), N is M+1.")
    for goal in ("rev([1,2,3],R)", "append(X,Y,[a,b])", "len([a,b,c],N)", "rev(X,[1,2])"):
        found = list(itertools.islice(solve(program, goal, limits=EngineLimits(max_depth=40)), 3))
        assert found
        for a in found:
            assert verify_proof(program, a.proof)


def test_tampered_proof_fails_replay():
    program = prog("q. p :- q.")
    tree = proof_tree(program, "p")
    import dataclasses
    bad = dataclasses.replace(tree, atom=Atom("q"))
    assert not verify_proof(program, bad)


# -- consult -------------------------------------------------------------------------------------------

def test_consult_examples():
    p1 = consult(Program(), parse_program("p."))
    assert len(p1) == 1
    p2 = consult(p1, parse_program("q. r."))
    assert [write_term(c.head[0]) for c in p2] == ["p", "q", "r"]
    with pytest.raises(NonDefiniteError) as err:
        consult(Program(), parse_program("p ; q :- r."))
    assert "full_clausal_query" in str(err.value)


def test_consult_translates_dcg():
    program = consult(Program(), parse_program("s --> [a], s. s --> []."))
    assert answers(program, "s([a,a],[])") == ["true"]


def test_library_predicates():
    lib = library()
    assert answers(lib, "reverse([1,2,3],R)") == ["R = [3,2,1]"]
    assert answers(lib, "length([a,b],N)") == ["N = 2"]
    assert answers(lib, "append(X,[c],[a,b,c])") == ["X = [a,b]"]


def test_tracer_ports():
    lines = []
    list(solve(prog("p :- q. q."), "p", tracer=lines.append))
    assert lines[0].startswith("Call: (") and "p" in lines[0]
    assert any(l.startswith("Exit: (") for l in lines)
