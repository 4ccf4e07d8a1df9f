"""Parser and printer for the declarative input language (`.sf` files).

The language is a ProbLog-compatible subset: plain facts, facts annotated
with a probability or a (trust, confidence) pair, definite rules with
conjunction / disjunction / negation-as-failure bodies, and queries.
Two arithmetic forms are admitted in rule bodies because the bundled
radius-bounded trust rules need them: ``V > k`` and ``V is W - k``.

Grammar (EBNF)::

    program     = { statement } ;
    statement   = ( query | annotated | clause ) "." ;
    query       = "query" "(" struct ")" ;
    annotated   = label "::" struct ;
    clause      = struct [ ":-" body ] ;
    label       = number | "(" number "," number ")" ;
    body        = disj ;
    disj        = conj { ";" conj } ;
    conj        = unary { "," unary } ;
    unary       = "\\+" struct | "(" disj ")" | compare | struct ;
    compare     = VARIABLE ">" number
                | VARIABLE "is" VARIABLE "-" number ;
    struct      = NAME [ "(" term { "," term } ")" ] ;
    term        = VARIABLE | number | list | struct ;
    list        = "[" [ term { "," term } [ "|" term ] ] "]" ;

Comments run from ``%`` to end of line.  Variables start with an
upper-case letter or ``_``; constants start with a lower-case letter.
``;`` binds looser than ``,`` (standard Prolog precedence).
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "Var", "Const", "Num", "ListTerm", "Struct",
    "Certain", "Prob", "Pair", "CERTAIN",
    "Lit", "Conj", "Disj", "Compare", "IsMinus",
    "Fact", "Rule", "Query", "Program",
    "ParseError", "parse_program", "print_program",
    "make_conj", "make_disj", "is_ground", "term_variables",
]


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    """A logic variable (upper-case initial or ``_``)."""
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    """A constant symbol (lower-case initial)."""
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Num:
    """A numeric constant; ``3`` stays an int, ``0.9`` becomes a float."""
    value: int | float

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class ListTerm:
    """A list ``[a, b]`` or cons pattern ``[H|T]``."""
    items: tuple = ()
    tail: object = None  # Term or None for a proper list

    def __str__(self):
        inner = ",".join(str(t) for t in self.items)
        if self.tail is not None:
            return f"[{inner}|{self.tail}]"
        return f"[{inner}]"


@dataclass(frozen=True)
class Struct:
    """A predicate application or compound term, e.g. ``firewall(cloud1)``."""
    name: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({','.join(str(a) for a in self.args)})"


def term_variables(term) -> set[str]:
    """All variable names occurring in a term."""
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, Struct):
        out: set[str] = set()
        for a in term.args:
            out |= term_variables(a)
        return out
    if isinstance(term, ListTerm):
        out = set()
        for a in term.items:
            out |= term_variables(a)
        if term.tail is not None:
            out |= term_variables(term.tail)
        return out
    return set()


def is_ground(term) -> bool:
    return not term_variables(term)


# ---------------------------------------------------------------------------
# Labels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Certain:
    """Label of a plain fact: true with probability 1."""

    def __str__(self):
        return ""


@dataclass(frozen=True)
class Prob:
    """Probability annotation ``p::fact``, p in [0, 1]."""
    p: float

    def __str__(self):
        return f"{self.p!r}::"


@dataclass(frozen=True)
class Pair:
    """Trust/confidence annotation ``(t,c)::fact``, t in [-1, 1], c in [0, 1]."""
    t: float
    c: float

    def __str__(self):
        return f"({self.t!r},{self.c!r})::"


CERTAIN = Certain()


# ---------------------------------------------------------------------------
# Rule bodies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    """A possibly negated atom in a rule body."""
    atom: Struct
    positive: bool = True

    def __str__(self):
        return str(self.atom) if self.positive else f"\\+{self.atom}"


@dataclass(frozen=True)
class Conj:
    items: tuple

    def __str__(self):
        return ",".join(_body_str(i, under_conj=True) for i in self.items)


@dataclass(frozen=True)
class Disj:
    items: tuple

    def __str__(self):
        return ";".join(_body_str(i, under_disj=True) for i in self.items)


@dataclass(frozen=True)
class Compare:
    """Built-in comparison ``V > k``."""
    var: Var
    op: str
    value: Num

    def __str__(self):
        return f"{self.var}{self.op}{self.value}"


@dataclass(frozen=True)
class IsMinus:
    """Built-in decrement binding ``Result is Operand - amount``."""
    result: Var
    operand: Var
    amount: Num

    def __str__(self):
        return f"{self.result} is {self.operand}-{self.amount}"


def _body_str(node, under_conj=False, under_disj=False) -> str:
    """Render a body node, parenthesising where precedence requires it."""
    s = str(node)
    if under_conj and isinstance(node, (Disj, Conj)):
        return f"({s})"
    if under_disj and isinstance(node, Disj):
        return f"({s})"
    return s


def make_conj(items):
    """Conjunction of body nodes, collapsing the singleton case."""
    items = tuple(items)
    if len(items) == 1:
        return items[0]
    return Conj(items)


def make_disj(items):
    items = tuple(items)
    if len(items) == 1:
        return items[0]
    return Disj(items)


# ---------------------------------------------------------------------------
# Statements and programs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fact:
    """A ground fact, plain (Certain) or annotated."""
    atom: Struct
    label: object = CERTAIN

    def __str__(self):
        return f"{self.label}{self.atom}."


@dataclass(frozen=True)
class Rule:
    """``head :- body.`` or a unit clause with variables (body None)."""
    head: Struct
    body: object = None

    def __str__(self):
        if self.body is None:
            return f"{self.head}."
        return f"{self.head} :- {self.body}."


@dataclass(frozen=True)
class Query:
    atom: Struct

    def __str__(self):
        return f"query({self.atom})."


@dataclass(frozen=True)
class Program:
    """A parsed program; spans give per-statement source offsets."""
    statements: tuple
    spans: tuple = field(default=(), compare=False)

    def __iter__(self):
        return iter(self.statements)


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

class ParseError(Exception):
    """Syntax or label-range error with source position."""

    def __init__(self, message: str, line: int, col: int, expected=()):
        self.line = line
        self.col = col
        self.expected = frozenset(expected)
        detail = f"line {line}, column {col}: {message}"
        if self.expected:
            detail += f" (expected {', '.join(sorted(self.expected))})"
        super().__init__(detail)


_PUNCT = {
    "::": "COLONS", ":-": "ARROW", "\\+": "NOT",
    "(": "LPAREN", ")": "RPAREN", "[": "LBRACKET", "]": "RBRACKET",
    "|": "BAR", ",": "COMMA", ";": "SEMI", ".": "DOT",
    ">": "GT", "-": "MINUS",
}


@dataclass(frozen=True)
class _Token:
    kind: str      # NAME | VAR | NUMBER | one of _PUNCT values | EOF
    text: str
    pos: int       # offset into the source
    line: int
    col: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        # numbers: 12, 0.9, .9, 1.4e-52  ('.' starts a number only before a digit)
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            start, start_col = i, col
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == "." and i + 1 < n and text[i + 1].isdigit():
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
            lexeme = text[start:i]
            col += i - start
            tokens.append(_Token("NUMBER", lexeme, start, line, start_col))
            continue
        if ch == "\\" and text[i:i + 2] == "\\+":
            tokens.append(_Token("NOT", "\\+", i, line, col))
            i += 2
            col += 2
            continue
        if text[i:i + 2] in ("::", ":-"):
            tokens.append(_Token(_PUNCT[text[i:i + 2]], text[i:i + 2], i, line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, i, line, col))
            i += 1
            col += 1
            continue
        if ch.isalpha() or ch == "_":
            start, start_col = i, col
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            lexeme = text[start:i]
            col += i - start
            kind = "VAR" if (lexeme[0].isupper() or lexeme[0] == "_") else "NAME"
            tokens.append(_Token(kind, lexeme, start, line, start_col))
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", n, line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"unexpected {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
                tok.line, tok.col, expected={what or kind},
            )
        return self.advance()

    def fail(self, message: str, expected=()):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col, expected=expected)

    # -- program ------------------------------------------------------------

    def program(self) -> Program:
        statements, spans = [], []
        while self.peek().kind != "EOF":
            start = self.peek().pos
            statements.append(self.statement())
            end = self.tokens[self.pos - 1]
            spans.append((start, end.pos + len(end.text)))
        return Program(tuple(statements), tuple(spans))

    def statement(self):
        label = self.try_label()
        head = self.struct()
        if label is None and head.name == "query" and head.arity == 1 \
                and isinstance(head.args[0], Struct):
            self.expect("DOT", "'.'")
            return Query(head.args[0])
        if self.peek().kind == "ARROW":
            if label is not None:
                self.fail("a label may only annotate a fact, not a rule")
            self.advance()
            body = self.disj()
            self.expect("DOT", "'.'")
            return Rule(head, body)
        self.expect("DOT", "'.'")
        if is_ground(head):
            return Fact(head, label if label is not None else CERTAIN)
        if label is not None:
            self.fail("an annotated fact must be ground")
        return Rule(head, None)  # unit clause with variables

    # -- labels ---------------------------------------------------------------

    def try_label(self):
        """Parse ``p::`` or ``(t,c)::`` if present, else None (no input consumed)."""
        save = self.pos
        tok = self.peek()
        if tok.kind in ("NUMBER", "MINUS"):
            p, (line, col) = self.signed_number()
            if self.peek().kind == "COLONS":
                self.advance()
                if not 0.0 <= p <= 1.0:
                    raise ParseError(f"probability {p!r} outside [0, 1]", line, col)
                return Prob(float(p))
            self.pos = save
            return None
        if tok.kind == "LPAREN":
            self.advance()
            if self.peek().kind not in ("NUMBER", "MINUS"):
                self.pos = save
                return None
            t, (tline, tcol) = self.signed_number()
            if self.peek().kind != "COMMA":
                self.pos = save
                return None
            self.advance()
            c, (cline, ccol) = self.signed_number()
            if self.peek().kind != "RPAREN":
                self.pos = save
                return None
            self.advance()
            if self.peek().kind != "COLONS":
                self.pos = save
                return None
            self.advance()
            if not -1.0 <= t <= 1.0:
                raise ParseError(f"trust value {t!r} outside [-1, 1]", tline, tcol)
            if not 0.0 <= c <= 1.0:
                raise ParseError(f"confidence {c!r} outside [0, 1]", cline, ccol)
            return Pair(float(t), float(c))
        return None

    def signed_number(self):
        """A number with optional leading minus; returns (value, position)."""
        neg = False
        tok = self.peek()
        if tok.kind == "MINUS":
            neg = True
            self.advance()
        num = self.expect("NUMBER", "number")
        if "." in num.text or "e" in num.text or "E" in num.text:
            value = float(num.text)
        else:
            value = int(num.text)
        return (-value if neg else value), (tok.line, tok.col)

    # -- rule bodies ----------------------------------------------------------

    def disj(self):
        items = [self.conj()]
        while self.peek().kind == "SEMI":
            self.advance()
            items.append(self.conj())
        return make_disj(items)

    def conj(self):
        items = [self.unary()]
        while self.peek().kind == "COMMA":
            self.advance()
            items.append(self.unary())
        return make_conj(items)

    def unary(self):
        tok = self.peek()
        if tok.kind == "NOT":
            self.advance()
            return Lit(self.struct(), positive=False)
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.disj()
            self.expect("RPAREN", "')'")
            return inner
        if tok.kind == "VAR":
            return self.builtin()
        if tok.kind == "NAME":
            return Lit(self.struct())
        self.fail("expected a body literal", expected={"atom", "'\\+'", "'('", "variable"})

    def builtin(self):
        """``V > k`` or ``Result is Operand - k`` (the only variable-led forms)."""
        var = Var(self.advance().text)
        tok = self.peek()
        if tok.kind == "GT":
            self.advance()
            value, _ = self.signed_number()
            return Compare(var, ">", Num(value))
        if tok.kind == "NAME" and tok.text == "is":
            self.advance()
            operand = Var(self.expect("VAR", "variable").text)
            self.expect("MINUS", "'-'")
            amount, _ = self.signed_number()
            return IsMinus(var, operand, Num(amount))
        self.fail("a variable here must start 'V > k' or 'V is W - k'",
                  expected={"'>'", "'is'"})

    # -- terms ------------------------------------------------------------------

    def struct(self) -> Struct:
        name = self.expect("NAME", "predicate name").text
        if self.peek().kind != "LPAREN":
            return Struct(name, ())
        self.advance()
        args = [self.term()]
        while self.peek().kind == "COMMA":
            self.advance()
            args.append(self.term())
        self.expect("RPAREN", "')'")
        return Struct(name, tuple(args))

    def term(self):
        tok = self.peek()
        if tok.kind == "VAR":
            self.advance()
            return Var(tok.text)
        if tok.kind in ("NUMBER", "MINUS"):
            value, _ = self.signed_number()
            return Num(value)
        if tok.kind == "LBRACKET":
            return self.list_term()
        if tok.kind == "NAME":
            self.advance()
            if self.peek().kind == "LPAREN":
                self.advance()
                args = [self.term()]
                while self.peek().kind == "COMMA":
                    self.advance()
                    args.append(self.term())
                self.expect("RPAREN", "')'")
                return Struct(tok.text, tuple(args))
            return Const(tok.text)
        self.fail("expected a term", expected={"constant", "variable", "number", "list"})

    def list_term(self) -> ListTerm:
        self.expect("LBRACKET", "'['")
        if self.peek().kind == "RBRACKET":
            self.advance()
            return ListTerm((), None)
        items = [self.term()]
        while self.peek().kind == "COMMA":
            self.advance()
            items.append(self.term())
        tail = None
        if self.peek().kind == "BAR":
            self.advance()
            tail = self.term()
        self.expect("RBRACKET", "']'")
        return ListTerm(tuple(items), tail)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def parse_program(text: str) -> Program:
    """Parse source text into a :class:`Program`.

    Raises :class:`ParseError` with line/column on malformed input or on a
    label outside its value range.
    """
    return _Parser(_lex(text)).program()


def print_program(program: Program) -> str:
    """Render a program as canonical source text.

    ``parse_program(print_program(p))`` is structurally equal to ``p``.
    """
    return "".join(f"{stmt}\n" for stmt in program.statements)
