import random

from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from simplylog.clauses import Clause
from simplylog.reader import parse_term as t
from simplylog.terms import (Atom, Compound, Var, VarSupply, anti_unify, apply, compose, is_variant,
                             order_key, rename_apart, unify, variables_of)

X, Y, Z = Var("X"), Var("Y"), Var("Z")
a, b = Atom("a"), Atom("b")


def test_apply():
    assert apply({X: a}, t("f(X,Y)")) == t("f(a,Y)")
    assert apply({}, t("f(X,Y)")) == t("f(X,Y)")
    # simultaneous, not iterated
    assert apply({X: t("g(Y)"), Y: b}, X) == t("g(Y)")


def test_compose():
    s = compose({X: Y}, {Y: a})
    assert apply(s, X) == a and apply(s, Y) == a
    s1 = {X: t("f(Y)")}
    assert compose(s1, {}) == s1
    assert compose({}, s1) == s1


def test_compose_defining_equation():
    rng = random.Random(7)
    for _ in range(300):
        s1 = {v: gen.rand_term(rng, 2, [X, Y, Z]) for v in (X, Y, Z) if rng.random() < 0.5}
        s2 = {v: gen.rand_term(rng, 2, [X, Y, Z]) for v in (X, Y, Z) if rng.random() < 0.5}
        s1 = {v: u for v, u in s1.items() if u != v}
        s2 = {v: u for v, u in s2.items() if u != v}
        term = gen.rand_term(rng, 3, [X, Y, Z])
        assert apply(compose(s1, s2), term) == apply(s2, apply(s1, term))


def test_unify_examples():
    assert unify(X, a) == {X: a}
    assert unify(t("f(X,b)"), t("f(a,Y)")) == {X: a, Y: b}
    assert unify(X, t("f(X)")) is None
    assert unify(X, t("f(X)"), occurs_check=False) is not None
    assert unify(t("f(a)"), t("g(a)")) is None
    assert unify(t("f(a)"), t("f(a,b)")) is None


def test_unify_example_matches_ground_search():
    """The only ground substitution into {a,b} unifying f(X,b), f(a,Y)."""
    sols = [(x, y) for x in (a, b) for y in (a, b)
            if apply({X: x, Y: y}, t("f(X,b)")) == apply({X: x, Y: y}, t("f(a,Y)"))]
    assert sols == [(a, b)]


def test_unify_is_idempotent_on_chains():
    th = unify(t("f(X,Y,Z)"), t("f(Y,Z,a)"))
    assert th == {X: a, Y: a, Z: a}


def test_occurs_check_soundness():
    rng = random.Random(11)
    for _ in range(500):
        t1, t2 = gen.rand_term(rng, 3, [X, Y]), gen.rand_term(rng, 3, [X, Y])
        th = unify(t1, t2)
        if th is not None:
            assert apply(th, t1) == apply(th, t2)
            assert all(v not in gen.vars_in(u) for v, u in th.items())


def test_rename_apart():
    c = Clause((t("p(X)"),), (t("q(X)"),))
    r = rename_apart(c, VarSupply())
    assert r.head[0].args[0] == r.body[0].args[0]
    assert r.head[0].args[0].name.startswith("_G")
    ground = Clause((t("p(a)"),))
    assert rename_apart(ground, VarSupply()) == ground


def test_fresh_variables_are_distinct():
    s = VarSupply()
    assert s.fresh() != s.fresh()


def test_variables_of():
    assert variables_of(t("f(X, g(Y, X))")) == [X, Y]
    assert variables_of(a) == []
    assert variables_of(X) == [X]


# -- anti-unification ------------------------------------------------------------------------------------

def test_anti_unify_examples():
    g, s1, s2 = anti_unify(t("f(a,b)"), t("f(a,c)"))
    assert g.functor == "f" and g.args[0] == a and isinstance(g.args[1], Var)
    v = g.args[1]
    assert s1 == {v: b} and s2 == {v: Atom("c")}

    term = t("g(f(a),X)")
    assert anti_unify(term, term) == (term, {}, {})

    g, s1, s2 = anti_unify(t("f(a,a)"), t("f(b,b)"))
    v = g.args[0]
    assert isinstance(v, Var) and g.args[1] == v
    assert s1 == {v: a} and s2 == {v: b}


def _generalizations(depth):
    """Terms over {a, b, c, f/1, f/2} and two variables, of bounded depth."""
    v1, v2 = Var("G1"), Var("G2")
    level = [a, b, Atom("c"), v1, v2]
    out = list(level)
    for _ in range(depth):
        out = list(dict.fromkeys(out + [Compound("f", (x,)) for x in out]
                                 + [Compound("f", (x, y)) for x in out for y in out]))
    return out


def _instance_of(g, term):
    s = {}

    def go(p, q):
        if isinstance(p, Var):
            if p in s:
                return s[p] == q
            s[p] = q
            return True
        if isinstance(p, Compound):
            return (isinstance(q, Compound) and p.functor == q.functor
                    and len(p.args) == len(q.args) and all(go(x, y) for x, y in zip(p.args, q.args)))
        return p == q

    return go(g, term)


def test_anti_unify_is_least_against_enumeration():
    cands = _generalizations(1)
    for left, right in [("f(a,b)", "f(a,c)"), ("f(a,a)", "f(b,b)"), ("f(a,b)", "f(b,a)"),
                        ("f(f(a),b)", "f(f(b),b)")]:
        t1, t2 = t(left), t(right)
        g, _, _ = anti_unify(t1, t2)
        for c in cands:
            if _instance_of(c, t1) and _instance_of(c, t2):
                assert _instance_of(c, g), (left, right, c, g)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=300, deadline=None)
def test_anti_unify_duality(seed):
    rng = random.Random(seed)
    t1, t2 = gen.rand_term(rng, 3, [X, Y]), gen.rand_term(rng, 3, [X, Y])
    g, s1, s2 = anti_unify(t1, t2)
    assert apply(s1, g) == t1 and apply(s2, g) == t2


def test_is_variant():
    assert is_variant(t("f(X,Y,X)"), t("f(A,B,A)"))
    assert not is_variant(t("f(X,Y)"), t("f(A,A)"))
    assert not is_variant(t("f(X,X)"), t("f(A,B)"))


def test_standard_order():
    terms = [t("f(a)"), Atom("b"), t("1"), X, t("g(a,b)"), Atom("a"), t("f(X)")]
    ordered = sorted(terms, key=order_key)
    assert ordered == [X, t("1"), Atom("a"), Atom("b"), t("f(X)"), t("f(a)"), t("g(a,b)")]
