"""Definite clause grammars, parsing, generation, and a question-answering agent.

A grammar rule ``H --> B`` becomes a definite clause by threading a
difference list through the body: each nonterminal gets two extra
arguments (the input list and the remainder), terminal lists are consumed
by unification, and ``{Goal}`` bodies run unthreaded.  Parsing and
generation both run the translated clauses on the SLD engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .clauses import Clause, Program, flatten, term_to_clause
from .reader import parse_program, parse_term, write_term
from .sld import (DepthFirst, EngineLimits, ProofTree, Strategy, consult, solve)
from .terms import (NIL, Atom, Compound, Term, Var, apply, indicator, is_ground,
                    list_items, mklist, resolve, variables_of)


class GrammarError(ValueError):
    """A grammar rule whose right-hand side cannot be translated."""


@dataclass(frozen=True)
class GrammarRule:
    lhs: Term
    rhs: Term

    @staticmethod
    def from_term(t: Term) -> "GrammarRule":
        if not (isinstance(t, Compound) and t.functor == "-->" and len(t.args) == 2):
            raise GrammarError(f"not a grammar rule: {write_term(t, quoted=True)}")
        return GrammarRule(*t.args)

    def to_term(self) -> Term:
        return Compound("-->", (self.lhs, self.rhs))


# -- translation -------------------------------------------------------------------

class _Threads:
    """Threading variables S0, S1, ... that avoid the rule's own names."""

    def __init__(self, avoid: Iterable[Var]):
        self.avoid = {v.name for v in avoid}
        self.n = 0

    def fresh(self) -> Var:
        while True:
            name = f"S{self.n}"
            self.n += 1
            if name not in self.avoid:
                return Var(name)


def _add_args(t: Term, s0: Term, s: Term) -> Term:
    if isinstance(t, Atom):
        return Compound(t.name, (s0, s))
    if isinstance(t, Compound):
        return Compound(t.functor, t.args + (s0, s))
    raise GrammarError(f"nonterminal expected, found {write_term(t, quoted=True)}")


def _translate_body(b: Term, s_in: Var, threads: _Threads, fold: bool,
                    goals: List[Term], eqs: Dict[Var, Term]) -> Var:
    """Append goals for body ``b`` starting at ``s_in``; return the end variable.

    With ``fold`` set, terminal lists are recorded in ``eqs`` for later
    substitution instead of becoming explicit ``=`` goals.
    """
    if isinstance(b, Var):
        raise GrammarError("variable in grammar body (call//N is not supported)")
    if isinstance(b, Compound) and b.functor == "," and len(b.args) == 2:
        mid = _translate_body(b.args[0], s_in, threads, fold, goals, eqs)
        return _translate_body(b.args[1], mid, threads, fold, goals, eqs)
    if isinstance(b, Compound) and b.functor in (";", "|") and len(b.args) == 2:
        s_out = threads.fresh()
        branches = []
        for alt in flatten(b, b.functor):
            sub: List[Term] = []
            end = _translate_body(alt, s_in, threads, False, sub, {})
            sub.append(Compound("=", (end, s_out)))
            conj = sub[-1]
            for g in reversed(sub[:-1]):
                conj = Compound(",", (g, conj))
            branches.append(conj)
        disj = branches[-1]
        for br in reversed(branches[:-1]):
            disj = Compound(";", (br, disj))
        goals.append(disj)
        return s_out
    if b == Atom("!"):
        goals.append(b)
        return s_in
    if b == NIL:
        return s_in
    if isinstance(b, Compound) and b.functor == "{}" and len(b.args) == 1:
        goals.append(b.args[0])
        return s_in
    if isinstance(b, Compound) and b.functor == "." and len(b.args) == 2:
        items = list_items(b)
        if items is None:
            raise GrammarError(f"terminal list must be a proper list: {write_term(b, quoted=True)}")
        s_out = threads.fresh()
        consumed = mklist(items, s_out)
        if fold:
            eqs[s_in] = consumed
        else:
            goals.append(Compound("=", (s_in, consumed)))
        return s_out
    if isinstance(b, Compound) and b.functor == "\\+":
        raise GrammarError("negation in grammar bodies is not supported")
    s_out = threads.fresh()
    goals.append(_add_args(b, s_in, s_out))
    return s_out


def dcg_translate(rule: Union[GrammarRule, Term, str]) -> Clause:
    """Difference-list translation of one grammar rule.

    ``s --> np, vp`` becomes ``s(S0,S2) :- np(S0,S1), vp(S1,S2)`` and
    ``n --> [dog]`` becomes ``n([dog|S1],S1)``.
    """
    if isinstance(rule, str):
        rule = parse_term(rule)
    if not isinstance(rule, GrammarRule):
        rule = GrammarRule.from_term(rule)
    threads = _Threads(variables_of([rule.lhs, rule.rhs]))
    s0 = threads.fresh()
    goals: List[Term] = []
    eqs: Dict[Var, Term] = {}
    end = _translate_body(rule.rhs, s0, threads, True, goals, eqs)
    head = _add_args(rule.lhs, s0, end)
    # Each threading variable is bound at most once, so resolving the
    # recorded equations against each other and substituting is exact.
    if eqs:
        full = {v: resolve(t, eqs) for v, t in eqs.items()}
        head = apply(full, head)
        goals = [apply(full, g) for g in goals]
    return Clause((head,), tuple(goals))


def dcg_translate_term(t: Term) -> Clause:
    return dcg_translate(GrammarRule.from_term(t))


# -- grammars ---------------------------------------------------------------------------

class Grammar:
    """Translated grammar rules plus any auxiliary clauses.

    ``nonterminals`` holds the translated indicators (arity includes the
    two threading arguments); ``terminals`` lists every terminal word in
    first-occurrence order.
    """

    def __init__(self, rules: Sequence[GrammarRule], extra: Program = Program()):
        self.rules = tuple(rules)
        clauses = [dcg_translate(r) for r in self.rules]
        self.program = extra.extend(clauses)
        self.nonterminals = frozenset(indicator(c.head[0]) for c in clauses)
        seen: Dict[Term, None] = {}
        for r in self.rules:
            for w in _terminals(r.rhs):
                seen.setdefault(w, None)
        self.terminals = list(seen)

    @staticmethod
    def from_text(text: str, origin: str = "<grammar>") -> "Grammar":
        rules, others = [], []
        for sc in parse_program(text, origin):
            if sc.kind == "dcg-rule":
                rules.append(GrammarRule.from_term(sc.term))
            else:
                others.append(sc)
        return Grammar(rules, consult(Program(), others))


def _terminals(b: Term) -> List[Term]:
    if isinstance(b, Compound) and b.functor in (",", ";", "|") and len(b.args) == 2:
        return _terminals(b.args[0]) + _terminals(b.args[1])
    if isinstance(b, Compound) and b.functor == "." and len(b.args) == 2:
        return list_items(b) or []
    return []


@dataclass(frozen=True)
class ParseTree:
    """A grammar node (nonterminal without threading arguments) over its
    daughters: subtrees and terminal words in sentence order."""
    label: Term
    children: Tuple[Union["ParseTree", Term], ...] = ()

    def format(self) -> str:
        inner = " ".join(c.format() if isinstance(c, ParseTree) else write_term(c, quoted=True)
                         for c in self.children)
        return f"{write_term(self.label, quoted=True)}[{inner}]"

    def words(self) -> List[Term]:
        out = []
        for c in self.children:
            out.extend(c.words() if isinstance(c, ParseTree) else [c])
        return out


@dataclass
class ParseResult:
    bindings: Dict[Var, Term]
    tree: ParseTree


def _strip(t: Term) -> Term:
    if isinstance(t, Compound) and len(t.args) == 2:
        return Atom(t.functor)
    return Compound(t.functor, t.args[:-2])


def _grammar_nodes(tree: ProofTree, nts) -> List[ProofTree]:
    if tree.kind != "query" and isinstance(tree.atom, (Atom, Compound)) and \
            indicator(tree.atom) in nts:
        return [tree]
    out = []
    for c in tree.children:
        out.extend(_grammar_nodes(c, nts))
    return out


def _parse_tree(node: ProofTree, nts, n_words: int) -> ParseTree:
    s0, s = node.atom.args[-2:]
    start = n_words - len(list_items(s0) or [])
    end = n_words - len(list_items(s) or [])
    words = (list_items(s0) or [])
    children: List[Union[ParseTree, Term]] = []
    pos = start
    for sub in [g for c in node.children for g in _grammar_nodes(c, nts)]:
        c0 = n_words - len(list_items(sub.atom.args[-2]) or [])
        while pos < c0:
            children.append(words[pos - start])
            pos += 1
        t = _parse_tree(sub, nts, n_words)
        children.append(t)
        pos = n_words - len(list_items(sub.atom.args[-1]) or [])
    while pos < end:
        children.append(words[pos - start])
        pos += 1
    return ParseTree(_strip(node.atom), tuple(children))


def _sentence(s) -> List[Term]:
    if isinstance(s, str):
        return [Atom(w) for w in s.split()]
    return [w if isinstance(w, (Atom, Compound, Var)) or not isinstance(w, str) else Atom(w)
            for w in s]


def parse(grammar: Grammar, nt, sentence, limits: EngineLimits = EngineLimits(),
          strategy: Strategy = DepthFirst()) -> Iterator[ParseResult]:
    """One result per derivation of ``sentence`` from nonterminal ``nt``."""
    if isinstance(nt, str):
        nt = parse_term(nt)
    words = _sentence(sentence)
    goal = _add_args(nt, mklist(words), NIL)
    qvars = variables_of(nt)
    for answer in solve(grammar.program, goal, strategy, limits):
        bindings = {v: t for v, t in answer.bindings.items() if v in qvars}
        tree = _parse_tree(answer.proof, grammar.nonterminals, len(words))
        yield ParseResult(bindings, tree)


def generate(grammar: Grammar, nt, max_len: int,
             limits: EngineLimits = EngineLimits(max_depth=200),
             strategy: Strategy = DepthFirst()) -> Iterator[List[Term]]:
    """Sentences derivable from ``nt`` of length at most ``max_len``, shortest
    first; within one length, in derivation order, without repeats."""
    if isinstance(nt, str):
        nt = parse_term(nt)
    for n in range(max_len + 1):
        slots = [Var(f"W__{i}") for i in range(n)]
        goal = _add_args(nt, mklist(slots), NIL)
        seen = set()
        for answer in solve(grammar.program, goal, strategy, limits):
            words = tuple(answer.bindings.get(v, v) for v in slots)
            if all(is_ground(w) for w in words) and words not in seen:
                seen.add(words)
                yield list(words)


def sentence_text(words: Sequence[Term]) -> str:
    return " ".join(write_term(w) for w in words)


# -- question answering -------------------------------------------------------------------

AGENT_RULES = """
statement(fact(P)) --> proper(X), [is], property(X, P).
statement(rule(Q, P)) --> [every], noun(X, P), [is], property(X, Q).
question(yes_no(P)) --> [is], proper(X), property(X, P).
question(who(X, P)) --> [who], [is], property(X, P).
property(X, P) --> [a], noun(X, P).
property(X, P) --> adj(X, P).
"""

DEFAULT_LEXICON: Dict[str, Tuple[str, ...]] = {
    "socrates": ("proper",),
    "plato": ("proper",),
    "tweety": ("proper",),
    "human": ("noun", "adj"),
    "man": ("noun",),
    "philosopher": ("noun",),
    "bird": ("noun",),
    "greek": ("noun", "adj"),
    "mortal": ("adj",),
    "immortal": ("adj",),
    "wise": ("adj",),
}


class QARejection(ValueError):
    """A sentence outside the agent's fragment."""

    def __init__(self, words: Sequence[Term], prefix: Sequence[Term], reason: str):
        self.words = list(words)
        self.prefix = list(prefix)
        super().__init__(f"{reason}: '{sentence_text(words)}'; "
                         f"longest parseable prefix: '{sentence_text(prefix)}'")


@dataclass(frozen=True)
class QAReply:
    kind: str  # yes | no-answer-found | answers
    answers: Tuple[str, ...] = ()

    def format(self) -> str:
        if self.kind == "answers":
            return "\n".join(self.answers)
        return self.kind


@dataclass(frozen=True)
class KnowledgeStore:
    """Facts and rules told so far, plus the agent's fixed lexicon.

    Meanings are composed inside the grammar: a lexicon entry for a noun
    or adjective ``w`` carries the meaning ``w(X)`` for its subject ``X``.
    """
    program: Program = field(default_factory=Program)
    lexicon: Tuple[Tuple[str, Tuple[str, ...]], ...] = tuple(DEFAULT_LEXICON.items())

    def grammar(self) -> Grammar:
        lines = [AGENT_RULES]
        for word, cats in self.lexicon:
            w = write_term(Atom(word), quoted=True)
            for cat in cats:
                if cat == "proper":
                    lines.append(f"proper({w}) --> [{w}].")
                elif cat in ("noun", "adj"):
                    lines.append(f"{cat}(X, {w}(X)) --> [{w}].")
                else:
                    raise ValueError(f"unknown lexical category {cat!r}")
        return Grammar.from_text("\n".join(lines), "<agent grammar>")


def _words(s) -> List[Term]:
    if isinstance(s, str):
        s = s.strip().rstrip("?.!").lower().split()
    return _sentence(s)


def _meanings(grammar: Grammar, nt: str, words: List[Term]) -> List[Term]:
    m = Var("M")
    goal = Compound(nt, (m, mklist(words), NIL))
    return [a.bindings[m] for a in solve(grammar.program, goal, limits=EngineLimits(max_depth=100))]


def _longest_prefix(grammar: Grammar, words: List[Term]) -> List[Term]:
    for k in range(len(words), -1, -1):
        for nt in ("statement", "question"):
            goal = Compound(nt, (Var("M"), mklist(words[:k], Var("Rest")), Var("End")))
            if next(iter(solve(grammar.program, goal, limits=EngineLimits(max_depth=100))), None):
                return words[:k]
    return []


def qa_tell(store: KnowledgeStore, sentence) -> KnowledgeStore:
    """Add the meaning of a declarative sentence; raises :class:`QARejection`."""
    words = _words(sentence)
    g = store.grammar()
    meanings = _meanings(g, "statement", words)
    if not meanings:
        reason = "not a statement" if _meanings(g, "question", words) else "cannot parse"
        raise QARejection(words, _longest_prefix(g, words), reason)
    m = meanings[0]
    if m.functor == "fact":
        clause = Clause((m.args[0],))
    else:
        clause = Clause((m.args[0],), (m.args[1],))
    if any(c == clause for c in store.program):
        return store
    return KnowledgeStore(store.program.extend([clause]), store.lexicon)


def qa_ask(store: KnowledgeStore, sentence, limits: EngineLimits = EngineLimits(max_depth=200)) -> QAReply:
    """Answer a yes/no or ``who`` question against the store."""
    words = _words(sentence)
    g = store.grammar()
    meanings = _meanings(g, "question", words)
    if not meanings:
        reason = "not a question" if _meanings(g, "statement", words) else "cannot parse"
        raise QARejection(words, _longest_prefix(g, words), reason)
    m = meanings[0]
    if m.functor == "yes_no":
        sols = solve(store.program, m.args[0], limits=limits, undefined_is_error=False)
        return QAReply("yes") if next(iter(sols), None) is not None else QAReply("no-answer-found")
    # answers report named query variables only, so give the wh-variable a name
    x = Var("Who")
    p = resolve(m.args[1], {m.args[0]: x})
    out: List[str] = []
    for answer in solve(store.program, p, limits=limits, undefined_is_error=False):
        value = answer.bindings.get(x, x)
        fact = resolve(p, {x: value})
        if not is_ground(fact):
            continue
        text = _say(g, Compound("fact", (fact,)))
        if text is not None and text not in out:
            out.append(text)
    return QAReply("answers", tuple(out)) if out else QAReply("no-answer-found")


def _say(grammar: Grammar, meaning: Term, max_len: int = 6) -> Optional[str]:
    """Shortest sentence expressing ``meaning`` (generation by the same grammar)."""
    for words in generate(grammar, Compound("statement", (meaning,)), max_len,
                          limits=EngineLimits(max_depth=100)):
        return sentence_text(words)
    return None
