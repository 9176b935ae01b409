import itertools
import random

import pytest

from conftest import CORPUS
from simplylog.reason import (Explanation, NotStratifiedError, SpecError, abduce, consistent,
                              default_conclusions, load_abduction_spec, load_default_theory,
                              replays)
from simplylog.reader import parse_term
from simplylog.sld import EngineLimits, InstantiationError, program_from_text as prog, solve
from simplylog.terms import Atom


def formats(explanations):
    return [e.format() for e in explanations]


# -- abduction ------------------------------------------------------------------------------------

def test_abduce_bird():
    spec = load_abduction_spec((CORPUS / "ch8" / "abduce_bird.pl").read_text())
    out = list(abduce(spec, "flies(tweety)"))
    assert formats(out) == ["{bird(tweety)}"]
    assert replays(spec, "flies(tweety)", out[0])


def test_abduce_empty_explanation_first():
    spec = load_abduction_spec(":- abducible(bird/1). flies(X) :- bird(X). flies(superman).")
    assert formats(abduce(spec, "flies(superman)")) == ["{}"]


def test_abduce_constraint_blocks():
    spec = load_abduction_spec((CORPUS / "ch8" / "abduce_constrained.pl").read_text())
    assert list(abduce(spec, "flies(tweety)")) == []
    assert formats(abduce(spec, "flies(polly)")) == ["{bird(polly)}"]


def test_abduce_competing_explanations():
    spec = load_abduction_spec((CORPUS / "ch8" / "grass.pl").read_text())
    assert formats(abduce(spec, "wet_shoes")) == ["{rained}", "{sprinkler}"]


def test_abduce_drops_supersets():
    spec = load_abduction_spec(":- abducible(a/0). :- abducible(b/0). g :- a, b. g :- a.")
    assert formats(abduce(spec, "g")) == ["{a}"]


def test_abducible_with_clauses_rejected():
    with pytest.raises(SpecError):
        load_abduction_spec(":- abducible(bird/1). bird(tweety).")


def test_abduce_floundering_is_error():
    spec = load_abduction_spec(":- abducible(bird/1). something :- bird(X).")
    with pytest.raises(InstantiationError):
        list(abduce(spec, "something"))


def _rand_spec(rng):
    """Acyclic propositional definite program over derived atoms d0..d3 with
    abducibles a0..a3 and up to two denials."""
    abd = [f"a{i}" for i in range(4)]
    lines = [f":- abducible({a}/0)." for a in abd]
    for i in range(4):
        for _ in range(rng.randint(0, 2)):
            pool = abd + [f"d{j}" for j in range(i + 1, 4)]
            body = rng.sample(pool, rng.randint(1, 3))
            lines.append(f"d{i} :- {', '.join(body)}.")
    for _ in range(rng.randint(0, 2)):
        lines.append(f":- constraint(({', '.join(rng.sample(abd + ['d1', 'd2'], 2))})).")
    return "\n".join(lines), abd


def test_random_specs_sound_consistent_and_complete():
    rng = random.Random(71)
    limits = EngineLimits(max_depth=100)
    checked = 0
    for _ in range(60):
        text, abd = _rand_spec(rng)
        spec = load_abduction_spec(text)
        got = [e.atoms for e in abduce(spec, "d0", limits)]
        for d in got:
            assert replays(spec, "d0", Explanation(d), limits)
            assert consistent(spec, d, limits)
        for x, y in itertools.permutations(got, 2):
            assert not x < y
        # brute force: every subset-minimal consistent explanation is returned
        explains = []
        for r in range(len(abd) + 1):
            for subset in itertools.combinations(abd, r):
                delta = frozenset(Atom(a) for a in subset)
                if any(e <= delta for e in explains):
                    continue
                facts = " ".join(f"{a}." for a in subset)
                rules = "\n".join(l for l in text.splitlines() if not l.startswith(":-"))
                program = prog(rules + "\n" + facts).with_declared([(a, 0) for a in abd] +
                                                              [(f"d{i}", 0) for i in range(4)])
                if any(True for _ in solve(program, "d0", limits=limits)) \
                        and consistent(spec, delta, limits):
                    explains.append(delta)
        assert set(explains) <= set(got)
        checked += len(explains)
    assert checked > 20


# -- default reasoning ------------------------------------------------------------------------------

def tweety():
    return load_default_theory((CORPUS / "ch8" / "tweety.pl").read_text())


def test_tweety_holds():
    v = default_conclusions(tweety(), "flies(tweety)")
    assert v.status == "holds" and v.rule == "d1"


def test_opus_blocked():
    v = default_conclusions(tweety(), "flies(opus)")
    assert v.status == "blocked" and v.rule == "d1" and v.exception == parse_term("penguin(opus)")


def test_rock_underivable():
    assert default_conclusions(tweety(), "flies(rock)").status == "underivable"


def test_default_query_must_be_ground():
    with pytest.raises(InstantiationError):
        default_conclusions(tweety(), "flies(X)")


def test_theory_validation():
    with pytest.raises(SpecError):
        load_default_theory(":- default(d1, a => b). :- default(d1, c => d).")
    with pytest.raises(SpecError):
        load_default_theory(":- exception(nope, a).")
    with pytest.raises(NotStratifiedError):
        load_default_theory(":- default(d1, a => b). :- exception(d1, b).")


def test_default_agrees_with_naf_compilation():
    rng = random.Random(72)
    consts = ["a", "b", "c"]
    conds = ["penguin(X)", "injured(X)", "caged(X)"]
    seen = set()
    for _ in range(60):
        facts = []
        for pred in ("bird", "penguin", "injured", "caged", "plane"):
            facts += [f"{pred}({c})." for c in consts if rng.random() < 0.4]
        defaults = [("d1", "bird(X)", "flies(X)"), ("d2", "plane(X)", "flies(X)"),
                    ("d3", "flies(X)", "travels(X)")]
        exceptions = [(name, cond) for name, _, _ in defaults for cond in conds
                      if rng.random() < 0.3]
        theory_text = "\n".join(
            [f":- default({n}, {p} => {c})." for n, p, c in defaults]
            + [f":- exception({n}, {cond})." for n, cond in exceptions] + facts)
        theory = load_default_theory(theory_text)
        # independent compilation: conclusion :- prerequisite, \+ condition
        compiled = []
        for n, p, c in defaults:
            negs = "".join(f", \\+ {cond}" for m, cond in exceptions if m == n)
            compiled.append(f"{c} :- {p}{negs}.")
        program = prog("\n".join(compiled + facts)).with_declared(
            [(p, 1) for p in ("bird", "penguin", "injured", "caged", "plane", "flies",
                              "travels")])
        for q in [f"{p}({c})" for p in ("flies", "travels") for c in consts]:
            verdict = default_conclusions(theory, q)
            derived = any(True for _ in solve(program, q, limits=EngineLimits(max_depth=100)))
            assert (verdict.status == "holds") == derived, (theory_text, q)
            seen.add(verdict.status)
    assert seen == {"holds", "blocked", "underivable"}
