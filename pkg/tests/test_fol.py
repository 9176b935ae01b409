import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from simplylog.clausal import herbrand_base, herbrand_universe, least_herbrand_model
from simplylog.clauses import Clause, Program
from simplylog.fol import (SkolemSupply, completion_clauses, cwa_consequences, drop_universals,
                           eliminate_implications, holds, negation_normal_form, predicate_completion,
                           skolemize, standardize_apart, to_clausal_form)
from simplylog.formula import (And, AtomF, Equals, Exists, Forall, Iff, Implies, Not, Or,
                               format_formula)
from simplylog.reader import parse_formula, parse_term
from simplylog.sld import NonDefiniteError
from simplylog.sld import program_from_text as prog
from simplylog.terms import Atom


def clauses_text(cs):
    return [str(c) for c in cs]


# -- clausal form -----------------------------------------------------------------------------------

def test_clausal_form_examples():
    assert clauses_text(to_clausal_form(parse_formula("forall(X, implies(p(X), q(X)))"))) == \
        ["q(X) :- p(X)."]
    assert clauses_text(to_clausal_form(parse_formula("p(a)"))) == ["p(a)."]
    assert clauses_text(to_clausal_form(parse_formula("exists(X, p(X))"))) == ["p(sk1)."]


def test_skolem_function_takes_enclosing_universals():
    cs = to_clausal_form(parse_formula("forall(X, exists(Y, r(X, Y)))"))
    assert len(cs) == 1
    (atom,) = cs[0].head
    x, sk = atom.args
    assert sk.functor == "sk1" and sk.args == (x,)


def test_skolem_supply_is_shared():
    supply = SkolemSupply()
    to_clausal_form(parse_formula("exists(X, p(X))"), supply)
    assert clauses_text(to_clausal_form(parse_formula("exists(X, q(X))"), supply)) == ["q(sk2)."]


def test_distribution_splits_clauses():
    cs = to_clausal_form(parse_formula("or(p, and(q, r))"))
    assert sorted(clauses_text(cs)) == ["p ; q.", "p ; r."]


def test_duplicate_literals_merged():
    cs = to_clausal_form(parse_formula("or(p, p)"))
    assert clauses_text(cs) == ["p."]


def _nnf_ok(f):
    if isinstance(f, Not):
        return isinstance(f.arg, (AtomF, Equals))
    if isinstance(f, (Forall, Exists)):
        return _nnf_ok(f.body)
    if isinstance(f, (And, Or)):
        return _nnf_ok(f.left) and _nnf_ok(f.right)
    return isinstance(f, (AtomF, Equals))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=300, deadline=None)
def test_nnf_pushes_negation_to_atoms(seed):
    f = gen.rand_formula(random.Random(seed), 3)
    g = negation_normal_form(eliminate_implications(f))
    assert _nnf_ok(g)
    for d in (1, 2):
        consts = [Atom(f"d{i}") for i in range(d)]
        for bits in range(1 << min(6, d + d + d * d)):
            # a few interpretations of p/1, q/1, r/2 over the domain
            atoms = [parse_term(f"p({c})") for c in ("d0", "d1")[:d]] + \
                    [parse_term(f"q({c})") for c in ("d0", "d1")[:d]] + \
                    [parse_term(f"r({a},{b})") for a in ("d0", "d1")[:d] for b in ("d0", "d1")[:d]]
            true = {a for i, a in enumerate(atoms) if bits >> i & 1}
            assert holds(f, true, consts) == holds(g, true, consts)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=200, deadline=None)
def test_pipeline_stages(seed):
    f = gen.rand_formula(random.Random(seed), 3)
    g = standardize_apart(negation_normal_form(eliminate_implications(f)))
    bound = []

    def collect(h):
        if isinstance(h, (Forall, Exists)):
            bound.append(h.var)
            collect(h.body)
        elif isinstance(h, Not):
            collect(h.arg)
        elif isinstance(h, (And, Or)):
            collect(h.left)
            collect(h.right)

    collect(g)
    assert len(bound) == len(set(bound))
    h = drop_universals(skolemize(g, SkolemSupply()))
    collect_q = []

    def quants(x):
        if isinstance(x, (Forall, Exists)):
            collect_q.append(x)
        for attr in ("arg", "left", "right", "body"):
            if hasattr(x, attr):
                quants(getattr(x, attr))

    quants(h)
    assert collect_q == []


def test_equisatisfiable_small():
    rng = random.Random(31)
    for _ in range(30):
        f = gen.rand_formula(rng, 2)
        cs = to_clausal_form(f)
        fp, ff, cp, cf = {}, {}, {}, {}
        gen.formula_symbols(f, fp, ff)
        gen.clause_symbols(cs, cp, cf)
        for d in (1, 2):
            assert (gen.finitely_satisfiable(lambda m: gen.eval_formula3(f, m, {}), fp, ff, d)
                    == gen.finitely_satisfiable(lambda m: gen.eval_clauses3(cs, m), cp, cf, d))


# -- completion ------------------------------------------------------------------------------------

def test_completion_examples():
    comp = predicate_completion(prog("bird(tweety). flies(X) :- bird(X)."))
    assert [format_formula(f) for f in comp.definitions] == [
        "forall(X1,iff(bird(X1),X1=tweety))", "forall(X1,iff(flies(X1),bird(X1)))"]
    comp = predicate_completion(prog("p :- p."))
    assert comp.definitions == (Iff(AtomF(Atom("p")), AtomF(Atom("p"))),)


def test_completion_of_undefined_predicate():
    comp = predicate_completion(prog("q :- ab(X).").with_declared([("ab", 1)]))
    assert "forall(X1,not(ab(X1)))" in [format_formula(f) for f in comp.definitions]


def test_loop_completion_leaves_atom_undetermined():
    comp = predicate_completion(prog("p :- p."))
    models = [s for s in (set(), {Atom("p")})
              if all(holds(f, s, [Atom("c0")]) for f in comp.definitions)]
    assert len(models) == 2


def test_equality_theory_separates_constants():
    comp = predicate_completion(prog("p(a). p(b)."))
    assert comp.equality_theory
    assert all(holds(f, set(), [Atom("a"), Atom("b")]) for f in comp.equality_theory)


def test_completion_rejects_disjunctive():
    with pytest.raises(NonDefiniteError):
        predicate_completion(Program([Clause((Atom("p"), Atom("q")))]))


def test_completion_clauses_include_only_if_half():
    cs = completion_clauses(prog("p :- q."))
    assert "q :- p." in clauses_text(cs)


# -- closed world ------------------------------------------------------------------------------------

def test_cwa_examples():
    pr = prog("q.").with_declared([("p", 0)])
    assert {format_formula(f) for f in cwa_consequences(pr, 0)} == {"not(p)"}
    assert {format_formula(f) for f in cwa_consequences(Program().with_declared([("p", 0)]), 0)} \
        == {"not(p)"}
    assert {format_formula(f) for f in cwa_consequences(prog("p(a). r(b)."), 0)} \
        >= {"not(p(b))"}


def _definite_program(rng):
    consts = ["a", "b"]
    lines = [f"e({rng.choice(consts)},{rng.choice(consts)})." for _ in range(rng.randint(1, 3))]
    lines += rng.sample(["s(X) :- e(X,Y).", "t(Y) :- e(X,Y).", "u(X) :- s(X), t(X).",
                         "w :- u(a).", "s(X) :- t(X)."], rng.randint(1, 4))
    return prog("\n".join(lines))


def test_cwa_agrees_with_completion():
    rng = random.Random(32)
    for _ in range(40):
        pr = _definite_program(rng)
        base = sorted(herbrand_base(pr, 0), key=str)
        universe = list(herbrand_universe(pr, 0))
        comp = predicate_completion(pr)
        models = []
        for bits in range(1 << len(base)):
            interp = frozenset(a for i, a in enumerate(base) if bits >> i & 1)
            if all(holds(f, interp, universe) for f in comp.definitions):
                models.append(interp)
        false_everywhere = {a for a in base if all(a not in m for m in models)}
        true_everywhere = {a for a in base if all(a in m for m in models)}
        assert {f.arg.atom for f in cwa_consequences(pr, 0)} == false_everywhere
        assert least_herbrand_model(pr, 0).atoms == true_everywhere
