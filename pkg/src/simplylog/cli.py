"""Command-line front end: an interactive session, a batch goal runner,
one subcommand per reasoning pipeline, and the golden-corpus runner.

Exit codes: 0 when every goal succeeds (or a subcommand produced its
result), 1 when a goal fails or a subcommand finds nothing, 2 on errors
(missing files, syntax errors, engine errors).
"""

from __future__ import annotations

import argparse
import difflib
import json
import os
import shlex
import sys
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Deque, Iterator, List, Optional, TextIO, Tuple

from . import clausal, fol, induce as induce_mod, lang, reason, search as search_mod
from .clauses import Clause, Program, format_clause, term_to_clause
from .formula import format_formula
from .reader import ReaderError, parse_program, parse_term, term_to_formula, write_term
from .sld import (EngineLimits, PrologError, Strategy, consult, library, proof_tree,
                  sld_tree, solve, strategy_named)
from .terms import Atom, Compound, Int, Term

DEFAULT_MAX_DEPTH = 1000
DEFAULT_MAX_NODES = 1_000_000
STRATEGIES = ("dfs", "bfs", "id")


class CommandError(Exception):
    """A malformed session command or subcommand argument."""


# -- session state ------------------------------------------------------------------------------

@dataclass
class SessionState:
    program: Program = field(default_factory=Program)
    strategy: str = "dfs"
    limits: EngineLimits = field(default_factory=lambda: EngineLimits(DEFAULT_MAX_DEPTH,
                                                                      DEFAULT_MAX_NODES))
    occurs_check: bool = True
    trace: bool = False
    undefined_is_error: bool = True
    store: lang.KnowledgeStore = field(default_factory=lang.KnowledgeStore)

    def solutions(self, goal, trace: Optional["TraceBuffer"] = None):
        tracer = trace.lines.append if (self.trace and trace is not None) else None
        return solve(self.program, goal, strategy_named(self.strategy), self.limits,
                     occurs_check=self.occurs_check,
                     undefined_is_error=self.undefined_is_error, tracer=tracer)


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CommandError(f"cannot read {path}: {e.strerror or e}") from None


def consult_file(program: Program, path: str) -> Tuple[Program, int]:
    """Consult a programme file (``library`` names the shipped utilities)."""
    if path == "library":
        lib = library()
        return program.extend(lib.clauses, as_library=True), len(lib)
    text = _read_file(path)
    before = len(program)
    new = consult(program, parse_program(text, path))
    return new, len(new) - before


# -- answer streams ------------------------------------------------------------------------------

class TraceBuffer:
    """Holds trace lines until the current output line is complete, so
    lines produced while looking ahead for the next answer never split an
    answer line."""

    def __init__(self, out: TextIO):
        self.out = out
        self.lines: List[str] = []

    def flush(self):
        for line in self.lines:
            self.out.write(line + "\n")
        self.lines.clear()


def _pull(sols) -> Tuple[str, object]:
    """Next item of an answer stream as (kind, value): ``answer``, ``end``
    (value: the stream status) or ``error`` (value: the exception)."""
    try:
        return "answer", next(sols)
    except StopIteration:
        return "end", sols.status
    except PrologError as e:
        return "error", e


def _write_end(status: str, out: TextIO):
    out.write("% resources exhausted\n" if status == "resources" else "false.\n")


def print_all_answers(sols, out: TextIO, trace: Optional[TraceBuffer] = None
                      ) -> Tuple[int, Optional[Exception]]:
    """Batch output: every answer, `` ;`` between answers, ``.`` after the
    last.  Returns the answer count and an error, if one occurred."""
    trace = trace or TraceBuffer(out)
    count = 0
    item = _pull(sols)
    while True:
        kind, value = item
        trace.flush()
        if kind == "error":
            return count, value
        if kind == "end":
            if count == 0:
                _write_end(value, out)
            return count, None
        count += 1
        out.write(value.format())
        item = _pull(sols)
        if item[0] == "end" and item[1] == "exhausted":
            out.write(".\n")
            trace.flush()
            return count, None
        out.write(" ;\n")
        if item[0] == "end":
            trace.flush()
            _write_end(item[1], out)
            return count, None


# -- the interactive loop --------------------------------------------------------------------------

class Repl:
    """Reads commands, queries and agent sentences from ``inp``.

    When input does not come from a terminal each line read is echoed after
    the prompt, so a scripted session prints as a readable transcript.
    After an answer with possibly more to come, a line ``;`` asks for the
    next one; any other line ends the query (a non-empty line is then read
    as the next input).
    """

    PROMPT = "?- "

    def __init__(self, state: SessionState, inp: TextIO, out: TextIO, echo: Optional[bool] = None):
        self.state = state
        self.inp = inp
        self.out = out
        self.echo = (not _isatty(inp)) if echo is None else echo
        self.pending: Deque[str] = deque()
        self.done = False

    # input -----------------------------------------------------------------

    def _raw_line(self) -> Optional[str]:
        if self.pending:
            return self.pending.popleft()
        line = self.inp.readline()
        if not line:
            return None
        return line.rstrip("\n")

    def _response(self) -> Optional[str]:
        line = self._raw_line()
        return None if line is None else line.strip()

    def _next_input(self) -> Optional[str]:
        """Next command text: agent lines are single lines, anything else
        runs up to a line ending in ``.``."""
        while True:
            if not self.echo:
                self.out.write(self.PROMPT)
                self.out.flush()
            line = self._raw_line()
            if line is None:
                return None
            text = line.strip()
            if text.startswith("?-"):
                text = text[2:].strip()
            if not text or text.startswith("%") or text == ";":
                continue
            if self.echo:
                self.out.write(self.PROMPT + text + "\n")
            if _agent_command(text) or text.endswith("."):
                return text
            parts = [text]
            while not parts[-1].endswith("."):
                line = self._raw_line()
                if line is None:
                    break
                more = line.strip()
                if self.echo:
                    self.out.write("|    " + more + "\n")
                parts.append(more)
            return " ".join(parts)

    # main loop ---------------------------------------------------------------

    def run(self) -> int:
        if not self.echo:
            self.out.write("simplylog: enter queries, commands, tell/ask sentences; halt. to leave\n")
        while not self.done:
            text = self._next_input()
            if text is None:
                break
            try:
                self.handle(text)
            except (CommandError, ReaderError, PrologError, lang.QARejection,
                    clausal.NotDefiniteError, ValueError) as e:
                self.out.write(f"error: {e}\n")
        if not self.echo:
            self.out.write("\n")
        return 0

    def handle(self, text: str):
        agent = _agent_command(text)
        if agent:
            return self.agent(*agent)
        term = parse_term(text)
        if self.command(term):
            return
        self.query(term)

    def agent(self, verb: str, sentence: str):
        st = self.state
        if verb == "tell":
            st.store = lang.qa_tell(st.store, sentence)
            self.out.write("ok.\n")
        else:
            reply = lang.qa_ask(st.store, sentence)
            self.out.write(reply.format() + "\n")

    def command(self, t: Term) -> bool:
        """Run a session command; False when ``t`` is an ordinary query."""
        st, out = self.state, self.out
        name = t.name if isinstance(t, Atom) else t.functor if isinstance(t, Compound) else None
        arity = len(t.args) if isinstance(t, Compound) else 0
        arg = t.args[0] if arity == 1 else None
        if (name, arity) == ("halt", 0):
            self.done = True
        elif (name, arity) == ("consult", 1):
            path = _atom_text(arg, "consult/1 expects a file name")
            st.program, n = consult_file(st.program, path)
            out.write(f"% consulted {path}: {n} clauses\n")
        elif (name, arity) == ("strategy", 1):
            s = _atom_text(arg, "strategy/1 expects dfs, bfs or id")
            if s not in STRATEGIES:
                raise CommandError("strategy/1 expects dfs, bfs or id")
            st.strategy = s
            out.write(f"% strategy {s}\n")
        elif (name, arity) in (("max_depth", 1), ("max_nodes", 1)):
            value = _limit_value(arg, name)
            if name == "max_depth":
                st.limits = EngineLimits(value, st.limits.max_nodes)
            else:
                st.limits = EngineLimits(st.limits.max_depth, value)
            out.write(f"% {name} {'none' if value is None else value}\n")
        elif (name, arity) in (("trace", 1), ("occurs_check", 1)):
            flag = _switch(arg, name)
            setattr(st, name, flag)
            out.write(f"% {name} {'on' if flag else 'off'}\n")
        elif (name, arity) == ("undefined", 1):
            mode = _atom_text(arg, "undefined/1 expects error or fail")
            if mode not in ("error", "fail"):
                raise CommandError("undefined/1 expects error or fail")
            st.undefined_is_error = mode == "error"
            out.write(f"% undefined {mode}\n")
        elif (name, arity) == ("listing", 0):
            for c in st.program:
                out.write(format_clause(c) + "\n")
        elif (name, arity) == ("proof", 1):
            tree = proof_tree(st.program, arg, strategy_named(st.strategy), st.limits,
                              occurs_check=st.occurs_check,
                              undefined_is_error=st.undefined_is_error)
            out.write(tree.to_text() if tree is not None else "false.\n")
        elif (name, arity) == ("sldtree", 2):
            depth = t.args[1]
            if not isinstance(depth, Int) or depth.value < 0:
                raise CommandError("sldtree/2 expects a goal and a depth")
            tree = sld_tree(st.program, t.args[0], depth.value, st.occurs_check)
            out.write(tree.to_text())
        else:
            return False
        return True

    def query(self, goal: Term):
        out = self.out
        trace = TraceBuffer(out)
        sols = self.state.solutions(goal, trace)
        item = _pull(sols)
        while True:
            kind, value = item
            trace.flush()
            if kind == "error":
                raise value
            if kind == "end":
                _write_end(value, out)
                return
            out.write(value.format())
            out.flush()
            item = _pull(sols)
            if item[0] == "end" and item[1] == "exhausted":
                out.write(".\n")
                trace.flush()
                return
            resp = self._response()
            if resp != ";":
                out.write(".\n")
                trace.flush()
                if resp:
                    self.pending.appendleft(resp)
                return
            out.write(" ;\n")


def _isatty(stream) -> bool:
    try:
        return stream.isatty()
    except (AttributeError, ValueError):
        return False


def _agent_command(text: str) -> Optional[Tuple[str, str]]:
    for verb in ("tell", "ask"):
        if text.startswith(verb + " "):
            return verb, text[len(verb) + 1:].strip()
    return None


def _atom_text(t: Optional[Term], message: str) -> str:
    if isinstance(t, Atom):
        return t.name
    raise CommandError(message)


def _limit_value(t: Optional[Term], name: str) -> Optional[int]:
    if isinstance(t, Atom) and t.name == "none":
        return None
    if isinstance(t, Int) and t.value >= 0:
        return t.value
    raise CommandError(f"{name}/1 expects a non-negative integer or none")


def _switch(t: Optional[Term], name: str) -> bool:
    if isinstance(t, Atom) and t.name in ("on", "off"):
        return t.name == "on"
    raise CommandError(f"{name}/1 expects on or off")


# -- argument parsing ----------------------------------------------------------------------------

def _limits_from(args) -> EngineLimits:
    depth = DEFAULT_MAX_DEPTH if args.max_depth is None else args.max_depth
    nodes = DEFAULT_MAX_NODES if args.max_nodes is None else args.max_nodes
    return EngineLimits(depth or None, nodes or None)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="simplylog",
        description="Logic programming engine and reasoning toolkit.  Without a "
                    "subcommand: consult files, then run --goal queries, or start the "
                    "interactive session when no goal is given.")
    p.add_argument("--consult", action="append", default=[], metavar="FILE",
                   help="consult a programme file (repeatable; 'library' loads the utilities)")
    p.add_argument("--goal", action="append", default=[], metavar="TERM",
                   help="run a query and print its answers (repeatable)")
    p.add_argument("--strategy", choices=STRATEGIES, default="dfs")
    p.add_argument("--max-depth", type=int, metavar="N",
                   help=f"derivation depth bound (default {DEFAULT_MAX_DEPTH}; 0 = none)")
    p.add_argument("--max-nodes", type=int, metavar="N",
                   help=f"node expansion bound (default {DEFAULT_MAX_NODES}; 0 = none)")
    p.add_argument("--no-occurs-check", action="store_true")
    p.add_argument("--undefined-fail", action="store_true",
                   help="calls to undefined predicates fail instead of raising an error")
    p.add_argument("--trace", action="store_true", help="print four-port trace lines")
    p.add_argument("--quiet", action="store_true", help="print no answers, only set the exit code")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    s = sub.add_parser("clausify", help="clausal form of the formulas in a file")
    s.add_argument("file")

    s = sub.add_parser("complete", help="predicate completion of a programme")
    s.add_argument("file")
    s.add_argument("--equality", action="store_true", help="also print the equality theory")

    s = sub.add_parser("model", help="least Herbrand model of a definite programme")
    s.add_argument("file")
    s.add_argument("--depth", type=int, default=2, help="term depth bound (default 2)")

    s = sub.add_parser("refute", help="resolution refutation of a clause set")
    s.add_argument("file")
    s.add_argument("--max-steps", type=int, default=10000)
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("search", help="state-space search over a problem file")
    s.add_argument("file")
    s.add_argument("--kind", choices=search_mod.KINDS, default="a-star")
    s.add_argument("--beam-width", type=int, default=1)
    s.add_argument("--cycle-policy", choices=("none", "path-check", "closed-set"))
    s.add_argument("--max-expanded", type=int)
    s.add_argument("--order", action="store_true", help="also print the expansion order")

    for name, help_text in (("sldtree", "SLD-tree of a query"),
                            ("prooftree", "proof tree of a query's first answer")):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("file")
        s.add_argument("--goal", required=True, dest="sub_goal")
        if name == "sldtree":
            s.add_argument("--depth", type=int, default=10)
        s.add_argument("--json", action="store_true")

    s = sub.add_parser("induce", help="learn clauses from a task file")
    s.add_argument("file")

    s = sub.add_parser("lgg", help="least general generalization of two clauses")
    s.add_argument("clause1")
    s.add_argument("clause2")

    s = sub.add_parser("generality", help="compare two clauses under theta-subsumption")
    s.add_argument("clause1")
    s.add_argument("clause2")

    s = sub.add_parser("abduce", help="abductive explanations of a goal")
    s.add_argument("file")
    s.add_argument("--goal", required=True, dest="sub_goal")

    s = sub.add_parser("defaults", help="default-rule verdict for a query")
    s.add_argument("file")
    s.add_argument("--goal", required=True, dest="sub_goal")

    s = sub.add_parser("parse", help="parse a sentence with a grammar file")
    s.add_argument("file")
    s.add_argument("--start", default="s", help="start nonterminal (default s)")
    s.add_argument("--sentence", required=True, help="space-separated words")

    s = sub.add_parser("generate", help="sentences of a grammar up to a length")
    s.add_argument("file")
    s.add_argument("--start", default="s")
    s.add_argument("--max-len", type=int, default=4)

    s = sub.add_parser("corpus", help="run the golden corpus")
    s.add_argument("dir", nargs="?", help="corpus directory (default: the shipped corpus)")
    s.add_argument("--update", action="store_true", help="rewrite expected outputs")
    return p


# -- subcommands ---------------------------------------------------------------------------------

def _program_file(path: str) -> Program:
    return consult(Program(), parse_program(_read_file(path), path))


def _goal(text: str) -> Term:
    return parse_term(text)


def cmd_clausify(args, out) -> int:
    supply = fol.SkolemSupply()
    for sc in parse_program(_read_file(args.file), args.file):
        for c in fol.to_clausal_form(term_to_formula(sc.term), supply):
            out.write(format_clause(c) + "\n")
    return 0


def cmd_complete(args, out) -> int:
    comp = fol.predicate_completion(_program_file(args.file))
    for f in comp.definitions:
        out.write(format_formula(f) + ".\n")
    if args.equality:
        for f in comp.equality_theory:
            out.write(format_formula(f) + ".\n")
    return 0


def cmd_model(args, out) -> int:
    model = clausal.least_herbrand_model(_program_file(args.file), args.depth)
    for a in model.sorted():
        out.write(write_term(a, quoted=True) + ".\n")
    if model.truncated:
        out.write(f"% atoms deeper than {args.depth} omitted\n")
    if model.partial:
        out.write("% fixpoint not reached: model is partial\n")
    return 0


def cmd_refute(args, out) -> int:
    cs: List[Clause] = [term_to_clause(sc.term)
                        for sc in parse_program(_read_file(args.file), args.file)]
    result = clausal.resolution_refute(cs, args.max_steps)
    if args.json:
        doc = {"status": result.status, "generated": result.generated,
               "steps": result.refutation.to_dicts() if result.refutation else []}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        if result.refutation is not None:
            out.write(result.refutation.to_text())
        out.write(f"% {result.status}\n")
    return 0 if result else 1


def cmd_search(args, out) -> int:
    try:
        graph = search_mod.load_problem(_read_file(args.file))
        opts = search_mod.SearchOptions(args.cycle_policy, args.max_expanded, args.beam_width)
    except ValueError as e:
        raise CommandError(f"{args.file}: {e}") from None
    result = search_mod.search(graph.problem(), args.kind, opts)
    out.write(search_mod.format_result(result))
    if args.order:
        out.write("order: " + " ".join(map(str, result.order)) + "\n")
    return 0 if result.found else 1


def cmd_sldtree(args, out) -> int:
    # calls to undefined predicates are failure leaves, as in the library default
    tree = sld_tree(_program_file(args.file), _goal(args.sub_goal), args.depth,
                    not args.no_occurs_check)
    out.write(json.dumps(tree.to_dict(), indent=2) + "\n" if args.json else tree.to_text())
    return 0 if any(n.status == "success" for n in tree.leaves()) else 1


def cmd_prooftree(args, out) -> int:
    tree = proof_tree(_program_file(args.file), _goal(args.sub_goal),
                      strategy_named(args.strategy), _limits_from(args),
                      occurs_check=not args.no_occurs_check,
                      undefined_is_error=not args.undefined_fail)
    if tree is None:
        out.write("false.\n")
        return 1
    out.write(json.dumps(tree.to_dict(), indent=2) + "\n" if args.json else tree.to_text())
    return 0


def cmd_induce(args, out) -> int:
    task = induce_mod.load_task(_read_file(args.file), args.file)
    hyp = induce_mod.induce(task)
    if hyp is None:
        out.write("% no hypothesis within the bounds\n")
        return 1
    for c in hyp:
        out.write(format_clause(c, number_vars=True) + "\n")
    return 0


def cmd_lgg(args, out) -> int:
    c1 = term_to_clause(parse_term(args.clause1))
    c2 = term_to_clause(parse_term(args.clause2))
    out.write(format_clause(induce_mod.lgg_clauses(c1, c2), number_vars=True) + "\n")
    return 0


def cmd_generality(args, out) -> int:
    c1 = term_to_clause(parse_term(args.clause1))
    c2 = term_to_clause(parse_term(args.clause2))
    out.write(induce_mod.generality_check(c1, c2) + "\n")
    return 0


def cmd_abduce(args, out) -> int:
    spec = reason.load_abduction_spec(_read_file(args.file), args.file)
    found = 0
    for e in reason.abduce(spec, _goal(args.sub_goal), _limits_from(args)):
        out.write(e.format() + "\n")
        found += 1
    if not found:
        out.write("% no explanation\n")
    return 0 if found else 1


def cmd_defaults(args, out) -> int:
    theory = reason.load_default_theory(_read_file(args.file), args.file)
    verdict = reason.default_conclusions(theory, _goal(args.sub_goal), _limits_from(args))
    out.write(verdict.format() + "\n")
    return 0 if verdict.status == "holds" else 1


def cmd_parse(args, out) -> int:
    grammar = lang.Grammar.from_text(_read_file(args.file), args.file)
    n = 0
    for r in lang.parse(grammar, args.start, args.sentence, _limits_from(args),
                        strategy_named(args.strategy)):
        out.write(r.tree.format() + "\n")
        n += 1
    out.write(f"% {n} parse{'' if n == 1 else 's'}\n")
    return 0 if n else 1


def cmd_generate(args, out) -> int:
    grammar = lang.Grammar.from_text(_read_file(args.file), args.file)
    for words in lang.generate(grammar, args.start, args.max_len):
        out.write(lang.sentence_text(words) + "\n")
    return 0


def cmd_corpus(args, out) -> int:
    root = Path(args.dir) if args.dir else Path(str(resources.files("simplylog") / "corpus"))
    failures = 0
    for case in corpus_cases(root):
        actual = run_case(case)
        expected_path = case.expected_path
        name = case.path.relative_to(root)
        if args.update:
            expected_path.write_text(actual)
            out.write(f"UPDATED {name}\n")
            continue
        expected = expected_path.read_text() if expected_path.exists() else None
        if actual == expected:
            out.write(f"PASS {name}\n")
        else:
            failures += 1
            out.write(f"FAIL {name}\n")
            out.writelines(difflib.unified_diff((expected or "").splitlines(True),
                                                actual.splitlines(True),
                                                "expected", "actual"))
    if not args.update:
        out.write(f"% {failures} failure{'' if failures == 1 else 's'}\n")
    return 1 if failures else 0


SUBCOMMANDS: dict = {
    "clausify": cmd_clausify, "complete": cmd_complete, "model": cmd_model,
    "refute": cmd_refute, "search": cmd_search, "sldtree": cmd_sldtree,
    "prooftree": cmd_prooftree, "induce": cmd_induce, "lgg": cmd_lgg,
    "generality": cmd_generality,
    "abduce": cmd_abduce, "defaults": cmd_defaults, "parse": cmd_parse,
    "generate": cmd_generate, "corpus": cmd_corpus,
}

# errors reported as "error: ..." with exit status 2
_ERRORS = (CommandError, ReaderError, PrologError, ValueError, lang.QARejection)


# -- golden corpus -------------------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusCase:
    """``*.session``: a scripted interactive session (with an optional first
    line ``%% args: ...`` giving command-line flags); ``*.cmd``: one
    command line.  The expected transcript sits next to it with ``.out``
    appended and ends with the exit status."""
    path: Path

    @property
    def expected_path(self) -> Path:
        return self.path.with_name(self.path.name + ".out")


def corpus_cases(root: Path) -> List[CorpusCase]:
    return [CorpusCase(p) for p in sorted(root.rglob("*"))
            if p.suffix in (".session", ".cmd") and p.is_file()]


def run_case(case: CorpusCase) -> str:
    import io
    text = case.path.read_text()
    if case.path.suffix == ".cmd":
        lines = [l for l in text.splitlines() if l.strip() and not l.startswith("%")]
        argv = shlex.split(lines[0]) if lines else []
        stdin = io.StringIO("")
    else:
        first = text.splitlines()[0] if text else ""
        argv = shlex.split(first[len("%% args:"):]) if first.startswith("%% args:") else []
        stdin = io.StringIO(text)
    buf = io.StringIO()
    cwd = os.getcwd()
    os.chdir(case.path.parent)
    try:
        status = main(argv, stdin=stdin, stdout=buf, stderr=buf, echo=True)
    finally:
        os.chdir(cwd)
    return buf.getvalue() + f"% exit {status}\n"


# -- entry point ---------------------------------------------------------------------------------

def main(argv: Optional[List[str]] = None, stdin: Optional[TextIO] = None,
         stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None,
         echo: Optional[bool] = None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        if args.command:
            return SUBCOMMANDS[args.command](args, out)
        state = SessionState(strategy=args.strategy, limits=_limits_from(args),
                             occurs_check=not args.no_occurs_check, trace=args.trace,
                             undefined_is_error=not args.undefined_fail)
        for path in args.consult:
            state.program, _ = consult_file(state.program, path)
        if args.goal:
            return run_goals(state, args.goal, out, args.quiet)
        return Repl(state, stdin, out, echo).run()
    except _ERRORS as e:
        out.flush()
        err.write(f"error: {e}\n")
        return 2


def run_goals(state: SessionState, goals: List[str], out: TextIO, quiet: bool = False) -> int:
    """Run each goal, printing all its answers; the status is 2 on the first
    error, else 1 if some goal had no answer, else 0."""
    import io
    status = 0
    for text in goals:
        sink = io.StringIO() if quiet else out
        trace = TraceBuffer(sink)
        count, error = print_all_answers(state.solutions(_goal(text), trace), sink, trace)
        if error is not None:
            raise error
        if count == 0:
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
