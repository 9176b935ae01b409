import itertools
import random

import pytest

from conftest import CORPUS
from simplylog.clauses import Clause, Program
from simplylog.induce import (IncompatibleClauses, ILPTask, TaskError, generality_check, induce,
                              lgg_clauses, load_task, theta_subsumes)
from simplylog.reader import parse_term
from simplylog.sld import EngineLimits, program_from_text as prog, solve
from simplylog.terms import Atom, Compound, Var, apply, is_variant

A, B = Atom("a"), Atom("b")


def cl(text):
    (c,) = prog(text).clauses
    return c


# -- subsumption ------------------------------------------------------------------------------------

def test_subsumption_examples():
    assert theta_subsumes(cl("p(X)."), cl("p(a).")) == {Var("X"): A}
    assert theta_subsumes(cl("p(X,Y) :- q(X)."), cl("p(a,b) :- q(a), r(b).")) == \
        {Var("X"): A, Var("Y"): B}
    assert theta_subsumes(cl("p(X,X)."), cl("p(a,b).")) is None


def test_subsumption_example_unique_by_enumeration():
    c, d = cl("p(X,Y) :- q(X)."), cl("p(a,b) :- q(a), r(b).")
    hits = []
    for x, y in itertools.product([A, B], repeat=2):
        s = {Var("X"): x, Var("Y"): y}
        inst = c.substitute(s)
        if inst.head == d.head and set(inst.body) <= set(d.body):
            hits.append(s)
    assert hits == [theta_subsumes(c, d)]


def test_generality_examples():
    assert generality_check(cl("p(X)."), cl("p(a).")) == "more-general"
    assert generality_check(cl("p(a)."), cl("p(X).")) == "more-specific"
    assert generality_check(cl("p(X,Y)."), cl("p(U,V).")) == "equivalent"
    assert generality_check(cl("p(a)."), cl("q(a).")) == "incomparable"


def test_subsumption_is_not_implication():
    # p(f(X)) :- p(X) implies p(f(f(X))) :- p(X) but does not subsume it
    c, d = cl("p(f(X)) :- p(X)."), cl("p(f(f(Y))) :- p(Y).")
    assert theta_subsumes(c, d) is None


VARS = [Var("X"), Var("Y"), Var("Z")]


def rand_clause(rng, n_body=None):
    def arg():
        return rng.choice(VARS + [A, B]) if rng.random() < 0.8 else Compound("f", (rng.choice(VARS + [A]),))

    def lit(pred, n):
        return Compound(pred, tuple(arg() for _ in range(n)))

    head = lit("h", rng.randint(1, 2))
    body = tuple(lit(*rng.choice([("q", 1), ("r", 2)]))
                 for _ in range(rng.randint(0, 4) if n_body is None else n_body))
    return Clause((head,), body)


def test_reflexive_and_transitive():
    rng = random.Random(81)
    chains = 0
    for _ in range(400):
        c, d, e = rand_clause(rng), rand_clause(rng), rand_clause(rng)
        assert theta_subsumes(c, c) is not None
        # make chains likely: e is an instance of d, d an instance of c
        s1 = {v: rng.choice([A, B, Var("W")]) for v in VARS}
        d2 = Clause(c.substitute(s1).head, c.substitute(s1).body + d.body)
        s2 = {Var("W"): rng.choice([A, B])}
        e2 = Clause(d2.substitute(s2).head, d2.substitute(s2).body + e.body)
        if theta_subsumes(c, d2) is not None and theta_subsumes(d2, e2) is not None:
            assert theta_subsumes(c, e2) is not None
            chains += 1
    assert chains > 100


def _ground_instances(c, domain):
    vs = c.variables()
    for vals in itertools.product(domain, repeat=len(vs)):
        yield c.substitute(dict(zip(vs, vals)))


def _satisfies(interp, c, domain):
    return all(not set(g.body) <= interp or set(g.head) & interp for g in _ground_instances(c, domain))


def test_subsumption_implies_entailment():
    rng = random.Random(82)
    domain = [A, B]
    base = [Compound("h", (x,)) for x in domain] + [Compound("q", (x,)) for x in domain]
    pairs = 0
    for _ in range(300):
        c = rand_clause(rng)
        c = Clause((Compound("h", c.head[0].args[:1]),),
                   tuple(b for b in c.body if b.functor == "q"))
        if any(isinstance(t, Compound) for l in c.head + c.body for t in l.args):
            continue
        s = {v: rng.choice([A, B, Var("X")]) for v in VARS}
        d = Clause(c.substitute(s).head, c.substitute(s).body + (Compound("q", (rng.choice(domain),)),))
        assert theta_subsumes(c, d) is not None
        pairs += 1
        for bits in range(1 << len(base)):
            interp = {a for i, a in enumerate(base) if bits >> i & 1}
            if _satisfies(interp, c, domain):
                assert _satisfies(interp, d, domain)
    assert pairs > 50


# -- lgg ---------------------------------------------------------------------------------------------

def test_lgg_examples():
    g = lgg_clauses(cl("p(a) :- q(a)."), cl("p(b) :- q(b)."))
    assert is_variant(g.to_term(), parse_term("p(V) :- q(V)"))
    c = cl("p(X, a) :- q(X).")
    assert is_variant(lgg_clauses(c, c).to_term(), c.to_term())
    g = lgg_clauses(cl("p(a) :- q(a), r(a)."), cl("p(b) :- q(b)."))
    assert is_variant(g.to_term(), parse_term("p(V) :- q(V)"))


def test_lgg_shares_variable_map():
    g = lgg_clauses(cl("p(a, a) :- q(a)."), cl("p(b, b) :- q(b)."))
    assert is_variant(g.to_term(), parse_term("p(V, V) :- q(V)"))


def test_lgg_incompatible_heads():
    with pytest.raises(IncompatibleClauses):
        lgg_clauses(cl("p(a)."), cl("q(a)."))


def test_lgg_is_common_generalization():
    rng = random.Random(83)
    for _ in range(300):
        c1, c2 = rand_clause(rng), rand_clause(rng)
        if len(c1.head[0].args) != len(c2.head[0].args):
            continue
        g = lgg_clauses(c1, c2)
        assert theta_subsumes(g, c1) is not None and theta_subsumes(g, c2) is not None


# -- induction ---------------------------------------------------------------------------------------

def test_induce_birds():
    h = induce(load_task((CORPUS / "ch9" / "birds.task").read_text()))
    assert len(h) == 1
    assert is_variant(h.clauses[0].to_term(), parse_term("flies(X) :- bird(X)"))


def test_birds_single_clause_oracle():
    """Exhaustive: every clause flies(X) :- L with at most one background
    literal over X; exactly one is consistent."""
    task = load_task((CORPUS / "ch9" / "birds.task").read_text())
    x = Var("X")
    candidates = [Clause((Compound("flies", (x,)),))] + \
        [Clause((Compound("flies", (x,)),), (Compound(p, (x,)),)) for p in ("bird", "mammal")]
    ok = []
    for c in candidates:
        program = task.background.extend([c])
        covers = lambda a: any(True for _ in solve(program, a, undefined_is_error=False))
        if all(covers(p) for p in task.positives) and not any(covers(n) for n in task.negatives):
            ok.append(c)
    assert len(ok) == 1 and is_variant(ok[0].to_term(), parse_term("flies(X) :- bird(X)"))


def test_induce_single_positive_stays_specific():
    h = induce(load_task((CORPUS / "ch9" / "single.task").read_text()))
    assert [str(c) for c in h] == ["p(a)."]


def test_induce_daughter_is_correct():
    task = load_task((CORPUS / "ch9" / "daughter.task").read_text())
    h = induce(task)
    assert h is not None
    program = task.background.extend(h.clauses)
    for p in task.positives:
        assert any(True for _ in solve(program, p, undefined_is_error=False))
    for n in task.negatives:
        assert not any(True for _ in solve(program, n, undefined_is_error=False))


def test_overlap_rejected():
    with pytest.raises(TaskError):
        load_task((CORPUS / "ch9" / "overlap.task").read_text())
    with pytest.raises(TaskError):
        ILPTask((parse_term("p(a)"),), (parse_term("p(a)"),))


def test_random_hypotheses_are_correct():
    rng = random.Random(84)
    consts = [Atom(c) for c in "abcdef"]
    found = 0
    for _ in range(40):
        facts = [Compound(p, (c,)) for p in ("red", "big", "round") for c in consts
                 if rng.random() < 0.5]
        target = rng.choice(["red", "big", "round"])
        pos = [Compound("t", (c,)) for c in consts if Compound(target, (c,)) in facts]
        neg = [Compound("t", (c,)) for c in consts if Compound(target, (c,)) not in facts]
        if not pos:
            continue
        task = ILPTask(tuple(pos), tuple(neg), Program([Clause((f,)) for f in facts])
                       .with_declared([("red", 1), ("big", 1), ("round", 1)]))
        h = induce(task, EngineLimits(max_depth=50))
        if h is None:
            continue
        found += 1
        program = task.background.extend(h.clauses)
        for p in pos:
            assert any(True for _ in solve(program, p, undefined_is_error=False))
        for n in neg:
            assert not any(True for _ in solve(program, n, undefined_is_error=False))
    assert found > 10
