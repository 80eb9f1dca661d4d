"""Lexer, parser, and canonical renderer for the IMP language.

The same grammar is used for every surface: lexing is driven by a
LexemeProfile, so standard and obfuscated sources produce identical ASTs.
Positions are recorded on every node but excluded from structural equality,
which makes parse/render round-trips directly comparable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .tokens import LexemeProfile, STANDARD, Tok


class UnknownLexeme(Exception):
    """A character sequence matched no profile entry and no id/literal rule."""

    def __init__(self, line: int, col: int, text: str):
        super().__init__(f"unknown lexeme {text!r} at {line}:{col}")
        self.line = line
        self.col = col
        self.text = text


class ParseError(Exception):
    def __init__(self, line: int, col: int, expected: str, found: str):
        super().__init__(f"at {line}:{col} expected {expected}, found {found}")
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class Pos:
    line: int
    col: int


@dataclass(frozen=True)
class Lexeme:
    """One lexed token: an abstract token, identifier, or integer literal."""

    kind: str  # "tok" | "id" | "int" | "bool"
    tok: Tok | None
    text: str
    value: int | bool | None
    pos: Pos


def _is_ident_part(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


def tokenize(source: str, profile: LexemeProfile = STANDARD) -> list[Lexeme]:
    """Longest-match lexing over codepoints; whitespace separates tokens."""
    # Keyword-shaped surfaces are recognized after identifier scanning so the
    # lexer never splits an identifier; everything else (including exotic
    # single-codepoint keywords) is matched longest-first so "<=" wins over "<".
    def is_word(surface: str) -> bool:
        return all(ch.isascii() and ch.isalpha() for ch in surface)

    symbol_surfaces = sorted(
        ((profile.surface(t), t) for t in Tok if not is_word(profile.surface(t))),
        key=lambda pair: -len(pair[0]),
    )
    words = {profile.surface(t): t for t in Tok if is_word(profile.surface(t))}

    out: list[Lexeme] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        pos = Pos(line, col)
        if ch.isascii() and ch.isalpha():
            j = i + 1
            while j < n and _is_ident_part(source[j]):
                j += 1
            word = source[i:j]
            if word in words:
                out.append(Lexeme("tok", words[word], word, None, pos))
            elif word == "true":
                out.append(Lexeme("bool", None, word, True, pos))
            elif word == "false":
                out.append(Lexeme("bool", None, word, False, pos))
            else:
                out.append(Lexeme("id", None, word, None, pos))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            text = source[i:j]
            out.append(Lexeme("int", None, text, int(text), pos))
            col += j - i
            i = j
            continue
        for surface, tok in symbol_surfaces:
            if source.startswith(surface, i):
                out.append(Lexeme("tok", tok, surface, None, pos))
                col += len(surface)
                i += len(surface)
                break
        else:
            # Word-keyword surfaces of non-standard profiles (single exotic
            # codepoints) land here since they are not ASCII-alphabetic.
            raise UnknownLexeme(line, col, ch)
    return out


# ---------------------------------------------------------------------------
# Abstract syntax
# ---------------------------------------------------------------------------

_POS = field(default=Pos(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class IntLit(Expr):
    value: int
    pos: Pos = _POS


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool
    pos: Pos = _POS


@dataclass(frozen=True)
class Id(Expr):
    name: str
    pos: Pos = _POS


@dataclass(frozen=True)
class Arith(Expr):
    op: Tok  # ADD SUB MUL DIV MOD
    left: Expr
    right: Expr
    pos: Pos = _POS


@dataclass(frozen=True)
class Rel(Expr):
    op: Tok  # LT LE GT GE EQ NE
    left: Expr
    right: Expr
    pos: Pos = _POS


@dataclass(frozen=True)
class Logic(Expr):
    op: Tok  # AND OR
    left: Expr
    right: Expr
    pos: Pos = _POS


@dataclass(frozen=True)
class Not(Expr):
    operand: Expr
    pos: Pos = _POS


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr
    pos: Pos = _POS


@dataclass(frozen=True)
class Paren(Expr):
    inner: Expr
    pos: Pos = _POS


@dataclass(frozen=True)
class Stmt:
    pass


@dataclass(frozen=True)
class Decl(Stmt):
    name: str
    type: Tok  # INT | BOOL
    pos: Pos = _POS


@dataclass(frozen=True)
class Assign(Stmt):
    name: str
    expr: Expr
    pos: Pos = _POS


@dataclass(frozen=True)
class While(Stmt):
    guard: Expr
    body: tuple[Stmt, ...]
    pos: Pos = _POS


@dataclass(frozen=True)
class IfElse(Stmt):
    guard: Expr
    then_body: tuple[Stmt, ...]
    else_body: tuple[Stmt, ...]
    pos: Pos = _POS


@dataclass(frozen=True)
class Break(Stmt):
    pos: Pos = _POS


@dataclass(frozen=True)
class Continue(Stmt):
    pos: Pos = _POS


@dataclass(frozen=True)
class Halt(Stmt):
    pos: Pos = _POS


@dataclass(frozen=True)
class Program:
    body: tuple[Stmt, ...]


Value = Union[int, bool]


def is_literal(e: Expr) -> bool:
    return isinstance(e, (IntLit, BoolLit))


# ---------------------------------------------------------------------------
# Recursive-descent parser
# ---------------------------------------------------------------------------

ARITH_OPS = (Tok.ADD, Tok.SUB, Tok.MUL, Tok.DIV, Tok.MOD)
REL_OPS = (Tok.LT, Tok.LE, Tok.GT, Tok.GE, Tok.EQ, Tok.NE)


class _Parser:
    def __init__(self, lexemes: list[Lexeme]):
        self.toks = lexemes
        self.i = 0

    def peek(self) -> Lexeme | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def at(self, tok: Tok) -> bool:
        cur = self.peek()
        return cur is not None and cur.kind == "tok" and cur.tok is tok

    def error(self, expected: str) -> ParseError:
        cur = self.peek()
        if cur is None:
            return ParseError(0, 0, expected, "end of input")
        return ParseError(cur.pos.line, cur.pos.col, expected, cur.text)

    def expect(self, tok: Tok) -> Lexeme:
        if not self.at(tok):
            raise self.error(tok.name)
        cur = self.toks[self.i]
        self.i += 1
        return cur

    def parse_program(self) -> Program:
        body = []
        while self.peek() is not None:
            body.append(self.statement())
        return Program(tuple(body))

    def statement(self) -> Stmt:
        cur = self.peek()
        if cur is None:
            raise self.error("statement")
        if cur.kind == "tok":
            if cur.tok in (Tok.INT, Tok.BOOL):
                self.i += 1
                name = self.identifier()
                self.expect(Tok.SEMI)
                return Decl(name, cur.tok, pos=cur.pos)
            if cur.tok is Tok.WHILE:
                self.i += 1
                self.expect(Tok.LPAREN)
                guard = self.expression()
                self.expect(Tok.RPAREN)
                body = self.block()
                self.expect(Tok.SEMI)
                return While(guard, body, pos=cur.pos)
            if cur.tok is Tok.IF:
                self.i += 1
                self.expect(Tok.LPAREN)
                guard = self.expression()
                self.expect(Tok.RPAREN)
                then_body = self.block()
                self.expect(Tok.ELSE)
                else_body = self.block()
                self.expect(Tok.SEMI)
                return IfElse(guard, then_body, else_body, pos=cur.pos)
            if cur.tok is Tok.BREAK:
                self.i += 1
                self.expect(Tok.SEMI)
                return Break(pos=cur.pos)
            if cur.tok is Tok.CONTINUE:
                self.i += 1
                self.expect(Tok.SEMI)
                return Continue(pos=cur.pos)
            if cur.tok is Tok.HALT:
                self.i += 1
                self.expect(Tok.SEMI)
                return Halt(pos=cur.pos)
        if cur.kind == "id":
            self.i += 1
            self.expect(Tok.ASSIGN)
            expr = self.expression()
            self.expect(Tok.SEMI)
            return Assign(cur.text, expr, pos=cur.pos)
        raise self.error("statement")

    def block(self) -> tuple[Stmt, ...]:
        self.expect(Tok.LBRACE)
        body = []
        while not self.at(Tok.RBRACE):
            body.append(self.statement())
        self.expect(Tok.RBRACE)
        return tuple(body)

    def identifier(self) -> str:
        cur = self.peek()
        if cur is None or cur.kind != "id":
            raise self.error("identifier")
        self.i += 1
        return cur.text

    # Precedence, loosest to tightest: || < && < relational < + - < * / % < unary.
    def expression(self) -> Expr:
        return self.or_expr()

    def or_expr(self) -> Expr:
        left = self.and_expr()
        while self.at(Tok.OR):
            pos = self.toks[self.i].pos
            self.i += 1
            left = Logic(Tok.OR, left, self.and_expr(), pos=pos)
        return left

    def and_expr(self) -> Expr:
        left = self.rel_expr()
        while self.at(Tok.AND):
            pos = self.toks[self.i].pos
            self.i += 1
            left = Logic(Tok.AND, left, self.rel_expr(), pos=pos)
        return left

    def rel_expr(self) -> Expr:
        left = self.add_expr()
        cur = self.peek()
        if cur is not None and cur.kind == "tok" and cur.tok in REL_OPS:
            self.i += 1
            return Rel(cur.tok, left, self.add_expr(), pos=cur.pos)
        return left

    def add_expr(self) -> Expr:
        left = self.mul_expr()
        while True:
            cur = self.peek()
            if cur is not None and cur.kind == "tok" and cur.tok in (Tok.ADD, Tok.SUB):
                self.i += 1
                left = Arith(cur.tok, left, self.mul_expr(), pos=cur.pos)
            else:
                return left

    def mul_expr(self) -> Expr:
        left = self.unary_expr()
        while True:
            cur = self.peek()
            if cur is not None and cur.kind == "tok" and cur.tok in (Tok.MUL, Tok.DIV, Tok.MOD):
                self.i += 1
                left = Arith(cur.tok, left, self.unary_expr(), pos=cur.pos)
            else:
                return left

    def unary_expr(self) -> Expr:
        cur = self.peek()
        if cur is not None and cur.kind == "tok" and cur.tok is Tok.NOT:
            self.i += 1
            return Not(self.unary_expr(), pos=cur.pos)
        if cur is not None and cur.kind == "tok" and cur.tok is Tok.SUB:
            self.i += 1
            return Neg(self.unary_expr(), pos=cur.pos)
        return self.primary()

    def primary(self) -> Expr:
        cur = self.peek()
        if cur is None:
            raise self.error("expression")
        if cur.kind == "int":
            self.i += 1
            return IntLit(cur.value, pos=cur.pos)
        if cur.kind == "bool":
            self.i += 1
            return BoolLit(cur.value, pos=cur.pos)
        if cur.kind == "id":
            self.i += 1
            return Id(cur.text, pos=cur.pos)
        if cur.kind == "tok" and cur.tok is Tok.LPAREN:
            self.i += 1
            inner = self.expression()
            self.expect(Tok.RPAREN)
            return Paren(inner, pos=cur.pos)
        raise self.error("expression")


def parse_program(lexemes: list[Lexeme]) -> Program:
    return _Parser(lexemes).parse_program()


def parse(source: str, profile: LexemeProfile = STANDARD) -> Program:
    return parse_program(tokenize(source, profile))


# ---------------------------------------------------------------------------
# Canonical renderer
# ---------------------------------------------------------------------------

INDENT = "    "


def render_expr(e: Expr, profile: LexemeProfile = STANDARD) -> str:
    s = profile.surface
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, Id):
        return e.name
    if isinstance(e, (Arith, Rel, Logic)):
        return f"{render_expr(e.left, profile)} {s(e.op)} {render_expr(e.right, profile)}"
    if isinstance(e, Not):
        return f"{s(Tok.NOT)}{render_expr(e.operand, profile)}"
    if isinstance(e, Neg):
        return f"{s(Tok.SUB)}{render_expr(e.operand, profile)}"
    if isinstance(e, Paren):
        return f"{s(Tok.LPAREN)}{render_expr(e.inner, profile)}{s(Tok.RPAREN)}"
    raise TypeError(f"not an expression: {e!r}")


def _render_stmt(st: Stmt, profile: LexemeProfile, depth: int, out: list[str]) -> None:
    s = profile.surface
    pad = INDENT * depth
    if isinstance(st, Decl):
        out.append(f"{pad}{s(st.type)} {st.name}{s(Tok.SEMI)}")
    elif isinstance(st, Assign):
        out.append(f"{pad}{st.name} {s(Tok.ASSIGN)} {render_expr(st.expr, profile)}{s(Tok.SEMI)}")
    elif isinstance(st, While):
        out.append(f"{pad}{s(Tok.WHILE)} {s(Tok.LPAREN)}{render_expr(st.guard, profile)}{s(Tok.RPAREN)}")
        out.append(f"{pad}{s(Tok.LBRACE)}")
        for inner in st.body:
            _render_stmt(inner, profile, depth + 1, out)
        out.append(f"{pad}{s(Tok.RBRACE)}{s(Tok.SEMI)}")
    elif isinstance(st, IfElse):
        out.append(f"{pad}{s(Tok.IF)} {s(Tok.LPAREN)}{render_expr(st.guard, profile)}{s(Tok.RPAREN)}")
        out.append(f"{pad}{s(Tok.LBRACE)}")
        for inner in st.then_body:
            _render_stmt(inner, profile, depth + 1, out)
        out.append(f"{pad}{s(Tok.RBRACE)}")
        out.append(f"{pad}{s(Tok.ELSE)}")
        out.append(f"{pad}{s(Tok.LBRACE)}")
        for inner in st.else_body:
            _render_stmt(inner, profile, depth + 1, out)
        out.append(f"{pad}{s(Tok.RBRACE)}{s(Tok.SEMI)}")
    elif isinstance(st, Break):
        out.append(f"{pad}{s(Tok.BREAK)}{s(Tok.SEMI)}")
    elif isinstance(st, Continue):
        out.append(f"{pad}{s(Tok.CONTINUE)}{s(Tok.SEMI)}")
    elif isinstance(st, Halt):
        out.append(f"{pad}{s(Tok.HALT)}{s(Tok.SEMI)}")
    else:
        raise TypeError(f"not a statement: {st!r}")


def render_program(p: Program, profile: LexemeProfile = STANDARD) -> str:
    lines: list[str] = []
    for st in p.body:
        _render_stmt(st, profile, 0, lines)
    return "\n".join(lines) + ("\n" if lines else "")


def iter_statements(p: Program) -> Iterator[Stmt]:
    """Yield every statement in the program, outer before inner."""

    def walk(stmts: tuple[Stmt, ...]) -> Iterator[Stmt]:
        for st in stmts:
            yield st
            if isinstance(st, While):
                yield from walk(st.body)
            elif isinstance(st, IfElse):
                yield from walk(st.then_body)
                yield from walk(st.else_body)

    return walk(p.body)
