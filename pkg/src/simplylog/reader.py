"""Reading and writing the Prolog-subset concrete syntax.

The operator table is fixed.  Integers are the only numbers.  Variable
names beginning with ``_`` are anonymous: every occurrence is a distinct
variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .formula import And, AtomF, Equals, Exists, Forall, Formula, Iff, Implies, Not, Or
from .terms import NIL, Atom, Compound, Int, Term, Var, list_items

SYMBOL_CHARS = set("+-*/\\^<>=~:.?@#&$")
SOLO_CHARS = set("!;")
PUNCT_CHARS = set("()[]{},|")


class ReaderError(Exception):
    """Lexical or syntax error at a 1-based line/column."""

    def __init__(self, message: str, line: int = 0, column: int = 0, origin: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.origin = origin
        where = f"{origin}:" if origin else ""
        super().__init__(f"{where}{line}:{column}: {message}")


class ProgramSyntaxError(ReaderError):
    """Raised by :func:`parse_program` after reading the whole text.

    ``errors`` holds every error found (the first one is also the message);
    ``clauses`` holds the clauses that were read successfully.
    """

    def __init__(self, errors: List[ReaderError], clauses: List["SourceClause"]):
        first = errors[0]
        super().__init__(first.message, first.line, first.column, first.origin)
        self.errors = errors
        self.clauses = clauses


@dataclass(frozen=True)
class Token:
    kind: str  # atom | qatom | var | int | punct | end
    text: str
    line: int
    column: int
    layout_before: bool = False


# -- operator table -------------------------------------------------------------

@dataclass
class OperatorTable:
    prefix: Dict[str, Tuple[int, str]] = field(default_factory=dict)
    infix: Dict[str, Tuple[int, str]] = field(default_factory=dict)
    postfix: Dict[str, Tuple[int, str]] = field(default_factory=dict)

    def add(self, priority: int, kind: str, name: str):
        if not 1 <= priority <= 1200:
            raise ValueError(f"operator priority out of range: {priority}")
        if kind in ("fy", "fx"):
            self.prefix[name] = (priority, kind)
        elif kind in ("xfx", "xfy", "yfx"):
            self.infix[name] = (priority, kind)
        elif kind in ("xf", "yf"):
            self.postfix[name] = (priority, kind)
        else:
            raise ValueError(f"bad operator type {kind}")

    def is_op(self, name: str) -> bool:
        return name in self.prefix or name in self.infix or name in self.postfix


def default_operators() -> OperatorTable:
    table = OperatorTable()
    for priority, kind, names in [
        (1200, "xfx", [":-", "-->"]),
        (1200, "fx", [":-", "?-"]),
        (1100, "xfy", [";"]),
        (1050, "xfy", ["->"]),
        (1000, "xfy", [","]),
        # below 999 so "Prereq => Conclusion" can be a directive argument
        (950, "xfx", ["=>"]),
        (900, "fy", ["\\+"]),
        (700, "xfx", ["=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=",
                      "is", "=:=", "=\\=", "<", ">", "=<", ">="]),
        (500, "yfx", ["+", "-"]),
        (400, "yfx", ["*", "/", "//", "mod"]),
        (200, "fy", ["-"]),
    ]:
        for name in names:
            table.add(priority, kind, name)
    return table


DEFAULT_OPS = default_operators()


# -- tokenizer --------------------------------------------------------------------

def _scan(text: str):
    """Yield tokens; raise ReaderError on a lexical error."""
    i, line, col = 0, 1, 1
    n = len(text)
    layout = True

    def advance(k):
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c.isspace():
            advance(1)
            layout = True
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                advance(1)
            layout = True
            continue
        if text.startswith("/*", i):
            sl, sc = line, col
            end = text.find("*/", i + 2)
            if end < 0:
                raise ReaderError("unterminated block comment", sl, sc)
            advance(end + 2 - i)
            layout = True
            continue
        sl, sc = line, col
        start = i
        if c.isdigit():
            while i < n and text[i].isdigit():
                advance(1)
            yield Token("int", text[start:i], sl, sc, layout)
        elif c.isalpha() or c == "_":
            while i < n and (text[i].isalnum() or text[i] == "_"):
                advance(1)
            word = text[start:i]
            kind = "var" if (word[0].isupper() or word[0] == "_") else "atom"
            yield Token(kind, word, sl, sc, layout)
        elif c == "'":
            advance(1)
            chars = []
            while True:
                if i >= n:
                    raise ReaderError("unterminated quoted atom", sl, sc)
                ch = text[i]
                if ch == "'":
                    if i + 1 < n and text[i + 1] == "'":
                        chars.append("'")
                        advance(2)
                        continue
                    advance(1)
                    break
                if ch == "\\" and i + 1 < n:
                    esc = text[i + 1]
                    chars.append({"n": "\n", "t": "\t", "\\": "\\", "'": "'"}.get(esc, esc))
                    advance(2)
                    continue
                chars.append(ch)
                advance(1)
            yield Token("qatom", "".join(chars), sl, sc, layout)
        elif c == '"':
            raise ReaderError("double-quoted strings are not supported", sl, sc)
        elif c in PUNCT_CHARS:
            advance(1)
            yield Token("punct", c, sl, sc, layout)
        elif c in SOLO_CHARS:
            advance(1)
            yield Token("atom", c, sl, sc, layout)
        elif c in SYMBOL_CHARS:
            if c == "." and (i + 1 >= n or text[i + 1].isspace() or text[i + 1] == "%"):
                advance(1)
                yield Token("end", ".", sl, sc, layout)
            else:
                while i < n and text[i] in SYMBOL_CHARS:
                    advance(1)
                yield Token("atom", text[start:i], sl, sc, layout)
        else:
            raise ReaderError(f"unexpected character {c!r}", sl, sc)
        layout = False


def tokenize(text: str) -> List[Token]:
    """Token list for ``text``; comments and layout are dropped."""
    return list(_scan(text))


def _tokenize_partial(text: str) -> Tuple[List[Token], Optional[ReaderError]]:
    out = []
    try:
        for tok in _scan(text):
            out.append(tok)
    except ReaderError as e:
        return out, e
    return out, None


# -- parser -------------------------------------------------------------------------

_TERM_START_PUNCT = set("([{")


class _Parser:
    def __init__(self, tokens: Sequence[Token], ops: OperatorTable):
        self.toks = tokens
        self.pos = 0
        self.ops = ops
        self.anon = 0

    def peek(self, k: int = 0) -> Optional[Token]:
        j = self.pos + k
        return self.toks[j] if j < len(self.toks) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else None
            raise ReaderError("unexpected end of input",
                              last.line if last else 1, last.column if last else 1)
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.kind not in ("punct", "end") or tok.text != text:
            raise ReaderError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.column)
        return tok

    def is_punct(self, tok: Optional[Token], text: str) -> bool:
        return tok is not None and tok.kind == "punct" and tok.text == text

    def starts_term(self, tok: Optional[Token]) -> bool:
        if tok is None:
            return False
        if tok.kind in ("var", "int", "qatom"):
            return True
        if tok.kind == "punct":
            return tok.text in _TERM_START_PUNCT
        if tok.kind == "atom":
            name = tok.text
            if name in self.ops.infix and name not in self.ops.prefix:
                # tok is the lookahead token, so its successor is peek(1)
                nxt = self.peek(1)
                return self.is_punct(nxt, "(") and not nxt.layout_before
            return True
        return False

    def parse(self, maxp: int) -> Tuple[Term, int]:
        left, lp = self.primary(maxp)
        return self.infix_loop(left, lp, maxp)

    def primary(self, maxp: int) -> Tuple[Term, int]:
        tok = self.next()
        if tok.kind == "int":
            return Int(int(tok.text)), 0
        if tok.kind == "var":
            if tok.text.startswith("_"):
                self.anon += 1
                return Var(f"_{self.anon}"), 0
            return Var(tok.text), 0
        if tok.kind == "punct":
            if tok.text == "(":
                t, _ = self.parse(1200)
                self.expect(")")
                return t, 0
            if tok.text == "[":
                if self.is_punct(self.peek(), "]"):
                    self.next()
                    return self.maybe_functional("[]", tok)
                items = [self.parse(999)[0]]
                while self.is_punct(self.peek(), ","):
                    self.next()
                    items.append(self.parse(999)[0])
                tail: Term = NIL
                if self.is_punct(self.peek(), "|"):
                    self.next()
                    tail = self.parse(999)[0]
                self.expect("]")
                out = tail
                for item in reversed(items):
                    out = Compound(".", (item, out))
                return out, 0
            if tok.text == "{":
                if self.is_punct(self.peek(), "}"):
                    self.next()
                    return self.maybe_functional("{}", tok)
                t, _ = self.parse(1200)
                self.expect("}")
                return Compound("{}", (t,)), 0
            raise ReaderError(f"unexpected {tok.text!r}", tok.line, tok.column)
        if tok.kind == "end":
            raise ReaderError("unexpected end of clause", tok.line, tok.column)
        name = tok.text
        nxt = self.peek()
        if self.is_punct(nxt, "(") and not nxt.layout_before:
            return self.maybe_functional(name, tok)
        if tok.kind == "atom":
            if (name == "-" and nxt is not None and nxt.kind == "int"
                    and not nxt.layout_before):
                self.next()
                return Int(-int(nxt.text)), 0
            if name in self.ops.prefix and self.starts_term(nxt):
                p, kind = self.ops.prefix[name]
                argmax = p if kind == "fy" else p - 1
                if p > maxp:
                    p, argmax = maxp, min(argmax, maxp)
                arg, _ = self.parse(argmax)
                return Compound(name, (arg,)), p
        return Atom(name), 0

    def maybe_functional(self, name: str, tok: Token) -> Tuple[Term, int]:
        nxt = self.peek()
        if not (self.is_punct(nxt, "(") and not nxt.layout_before):
            return Atom(name), 0
        self.next()
        args = [self.parse(999)[0]]
        while self.is_punct(self.peek(), ","):
            self.next()
            args.append(self.parse(999)[0])
        self.expect(")")
        return Compound(name, tuple(args)), 0

    def infix_loop(self, left: Term, lp: int, maxp: int) -> Tuple[Term, int]:
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok.kind == "atom" and tok.text in self.ops.infix:
                name = tok.text
            elif tok.kind == "punct" and tok.text == ",":
                name = ","
            else:
                break
            p, kind = self.ops.infix[name]
            la = p - 1 if kind in ("xfx", "xfy") else p
            ra = p - 1 if kind in ("xfx", "yfx") else p
            if p > maxp or lp > la:
                break
            self.next()
            right, _ = self.parse(ra)
            left, lp = Compound(name, (left, right)), p
        return left, lp


def parse_term(source: Union[str, Sequence[Token]], table: OperatorTable = DEFAULT_OPS) -> Term:
    """Read one term.  A trailing end token is optional."""
    tokens = tokenize(source) if isinstance(source, str) else list(source)
    if not tokens:
        raise ReaderError("empty input", 1, 1)
    p = _Parser(tokens, table)
    t, _ = p.parse(1200)
    tok = p.peek()
    if tok is not None and tok.kind == "end":
        p.next()
        tok = p.peek()
    if tok is not None:
        raise ReaderError(f"operator priority clash or trailing input at {tok.text!r}",
                          tok.line, tok.column)
    return t


# -- programs ------------------------------------------------------------------------

@dataclass(frozen=True)
class SourceClause:
    term: Term
    origin: Tuple[str, int]
    kind: str  # clause | directive | dcg-rule | query


def clause_kind(t: Term) -> str:
    if isinstance(t, Compound):
        if t.functor == "-->" and len(t.args) == 2:
            return "dcg-rule"
        if t.functor == ":-" and len(t.args) == 1:
            return "directive"
        if t.functor == "?-" and len(t.args) == 1:
            return "query"
    return "clause"


def parse_program(text: str, origin: str = "<string>",
                  table: OperatorTable = DEFAULT_OPS) -> List[SourceClause]:
    """Read every clause of a programme text, in order.

    On syntax errors the reader skips to the next end token and carries on;
    after the whole text has been read a :class:`ProgramSyntaxError` listing
    every error is raised.
    """
    tokens, lex_error = _tokenize_partial(text)
    out: List[SourceClause] = []
    errors: List[ReaderError] = []
    i = 0
    while i < len(tokens):
        j = i
        while j < len(tokens) and tokens[j].kind != "end":
            j += 1
        chunk = tokens[i:j]
        if j == len(tokens):
            if lex_error is None:
                last = tokens[-1]
                errors.append(ReaderError("clause not terminated by '.'", last.line,
                                          last.column, origin))
            break
        if not chunk:
            errors.append(ReaderError("empty clause", tokens[j].line, tokens[j].column, origin))
        else:
            try:
                p = _Parser(chunk, table)
                t, _ = p.parse(1200)
                if p.peek() is not None:
                    tok = p.peek()
                    raise ReaderError(f"operator priority clash or trailing input at {tok.text!r}",
                                      tok.line, tok.column)
                out.append(SourceClause(t, (origin, chunk[0].line), clause_kind(t)))
            except ReaderError as e:
                errors.append(ReaderError(e.message, e.line, e.column, origin))
        i = j + 1
    if lex_error is not None:
        errors.append(ReaderError(lex_error.message, lex_error.line, lex_error.column, origin))
    if errors:
        raise ProgramSyntaxError(errors, out)
    return out


# -- writer ------------------------------------------------------------------------------

def _atom_needs_quotes(name: str) -> bool:
    if name in ("[]", "{}", "!", ";"):
        return False
    if not name:
        return True
    if name[0].islower() and all(ch.isalnum() or ch == "_" for ch in name):
        return False
    if all(ch in SYMBOL_CHARS for ch in name):
        return False
    return True


def format_atom(name: str, quoted: bool = True) -> str:
    if not quoted or not _atom_needs_quotes(name):
        return name
    body = name.replace("\\", "\\\\").replace("'", "\\'").replace("\n", "\\n")
    return f"'{body}'"


def _is_symbolic(ch: str) -> bool:
    return ch in SYMBOL_CHARS


def _is_alnum(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _glue(a: str, b: str) -> str:
    """Concatenate two token strings, adding a space if they would fuse."""
    if not a or not b:
        return a + b
    x, y = a[-1], b[0]
    if (_is_symbolic(x) and _is_symbolic(y)) or (_is_alnum(x) and _is_alnum(y)):
        return a + " " + b
    return a + b


class _Writer:
    def __init__(self, ops: OperatorTable, quoted: bool, names: Dict[Var, str]):
        self.ops = ops
        self.quoted = quoted
        self.names = names

    def atom(self, name: str) -> str:
        return format_atom(name, self.quoted)

    def w(self, t: Term, maxp: int, operand: bool = False) -> str:
        if isinstance(t, Var):
            return self.names.get(t, t.name)
        if isinstance(t, Int):
            return str(t.value)
        if isinstance(t, Atom):
            s = self.atom(t.name)
            if operand and self.ops.is_op(t.name):
                return f"({s})"
            return s
        name, args = t.functor, t.args
        if name == "." and len(args) == 2:
            return self.write_list(t)
        if name == "{}" and len(args) == 1:
            return "{" + self.w(args[0], 1200) + "}"
        if len(args) == 2 and name in self.ops.infix:
            p, kind = self.ops.infix[name]
            la = p - 1 if kind in ("xfx", "xfy") else p
            ra = p - 1 if kind in ("xfx", "yfx") else p
            left = self.w(args[0], la, True)
            right = self.w(args[1], ra, True)
            if name == ",":
                s = f"{left},{right}"
            elif _is_alnum(name[0]):
                s = f"{left} {name} {right}"
            else:
                s = _glue(_glue(left, self.atom(name)), right)
            return f"({s})" if p > maxp else s
        if len(args) == 1 and name in self.ops.prefix:
            p, kind = self.ops.prefix[name]
            argmax = p if kind == "fy" else p - 1
            arg = args[0]
            if name in ("-", "+") and isinstance(arg, Int):
                return f"{self.atom(name)}({arg.value})"
            a = self.w(arg, argmax, True)
            op = self.atom(name)
            if a.startswith("(") or _is_alnum(op[-1]):
                s = f"{op} {a}"
            else:
                s = _glue(op, a)
            return f"({s})" if p > maxp else s
        inner = ",".join(self.w(a, 999) for a in args)
        return f"{self.atom(name)}({inner})"

    def write_list(self, t: Term) -> str:
        items = []
        while isinstance(t, Compound) and t.functor == "." and len(t.args) == 2:
            items.append(self.w(t.args[0], 999))
            t = t.args[1]
        if t == NIL:
            return "[" + ",".join(items) + "]"
        return "[" + ",".join(items) + "|" + self.w(t, 999) + "]"


def letter_names(vs: Iterable[Var]) -> Dict[Var, str]:
    """Canonical names A, B, ..., Z, A1, ... in the given order."""
    out = {}
    for i, v in enumerate(vs):
        letter = chr(ord("A") + i % 26)
        out[v] = letter if i < 26 else f"{letter}{i // 26}"
    return out


def write_term(t: Term, table: OperatorTable = DEFAULT_OPS, quoted: bool = False,
               number_vars: bool = False, max_priority: int = 1200) -> str:
    """Text for ``t`` that reads back as the same term (up to renaming when
    variables are anonymous; use ``number_vars`` to name them canonically)."""
    from .terms import variables_of
    names = letter_names(variables_of(t)) if number_vars else {}
    return _Writer(table, quoted, names).w(t, max_priority)


# -- formulas --------------------------------------------------------------------------------

_CONNECTIVES = {("and", 2): And, ("or", 2): Or, ("implies", 2): Implies, ("iff", 2): Iff}


def term_to_formula(t: Term) -> Formula:
    if isinstance(t, Compound):
        key = (t.functor, len(t.args))
        if key == ("not", 1):
            return Not(term_to_formula(t.args[0]))
        if key in _CONNECTIVES:
            return _CONNECTIVES[key](term_to_formula(t.args[0]), term_to_formula(t.args[1]))
        if key in (("forall", 2), ("exists", 2)):
            quant = Forall if t.functor == "forall" else Exists
            bound = t.args[0]
            vs = list_items(bound) if not isinstance(bound, Var) else [bound]
            if not vs or not all(isinstance(v, Var) for v in vs):
                raise ReaderError(f"{t.functor} needs a variable or list of variables")
            body = term_to_formula(t.args[1])
            for v in reversed(vs):
                body = quant(v, body)
            return body
        if key == ("=", 2):
            return Equals(t.args[0], t.args[1])
    if isinstance(t, (Var, Int)):
        raise ReaderError(f"not a formula: {t!r}")
    return AtomF(t)


def parse_formula(text: str) -> Formula:
    """Read a formula in the functional syntax, e.g.
    ``forall(X, implies(p(X), q(X)))``."""
    return term_to_formula(parse_term(text))
