"""Abstract token vocabulary and surface-lexeme profiles.

The grammar is defined over abstract tokens; a LexemeProfile maps each
abstract token to its concrete surface string.  Swapping the profile relexes
the whole language without touching the grammar, which is how the obfuscated
surface works.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Tok(enum.Enum):
    """Abstract tokens of the language (operators, keywords, punctuation)."""

    ADD = "ADD"
    SUB = "SUB"
    MUL = "MUL"
    DIV = "DIV"
    MOD = "MOD"
    ASSIGN = "ASSIGN"
    LT = "LT"
    LE = "LE"
    GT = "GT"
    GE = "GE"
    EQ = "EQ"
    NE = "NE"
    NOT = "NOT"
    AND = "AND"
    OR = "OR"
    WHILE = "WHILE"
    IF = "IF"
    ELSE = "ELSE"
    BREAK = "BREAK"
    CONTINUE = "CONTINUE"
    HALT = "HALT"
    INT = "INT"
    BOOL = "BOOL"
    LPAREN = "LPAREN"
    RPAREN = "RPAREN"
    LBRACE = "LBRACE"
    RBRACE = "RBRACE"
    SEMI = "SEMI"


@dataclass(frozen=True)
class LexemeProfile:
    """Total, injective map from abstract tokens to surface strings."""

    name: str
    surfaces: dict[Tok, str] = field(compare=False)

    def __post_init__(self) -> None:
        missing = [t for t in Tok if t not in self.surfaces]
        if missing:
            raise ValueError(f"profile {self.name!r} missing surfaces for {missing}")
        seen: dict[str, Tok] = {}
        for tok, s in self.surfaces.items():
            if not s:
                raise ValueError(f"profile {self.name!r} has empty surface for {tok}")
            if s in seen:
                raise ValueError(
                    f"profile {self.name!r} maps both {seen[s]} and {tok} to {s!r}"
                )
            seen[s] = tok

    def surface(self, tok: Tok) -> str:
        return self.surfaces[tok]

    def token_for(self, surface: str) -> Tok | None:
        for tok, s in self.surfaces.items():
            if s == surface:
                return tok
        return None


_STANDARD_SURFACES: dict[Tok, str] = {
    Tok.ADD: "+",
    Tok.SUB: "-",
    Tok.MUL: "*",
    Tok.DIV: "/",
    Tok.MOD: "%",
    Tok.ASSIGN: "=",
    Tok.LT: "<",
    Tok.LE: "<=",
    Tok.GT: ">",
    Tok.GE: ">=",
    Tok.EQ: "==",
    Tok.NE: "!=",
    Tok.NOT: "!",
    Tok.AND: "&&",
    Tok.OR: "||",
    Tok.WHILE: "while",
    Tok.IF: "if",
    Tok.ELSE: "else",
    Tok.BREAK: "break",
    Tok.CONTINUE: "continue",
    Tok.HALT: "halt",
    Tok.INT: "int",
    Tok.BOOL: "bool",
    Tok.LPAREN: "(",
    Tok.RPAREN: ")",
    Tok.LBRACE: "{",
    Tok.RBRACE: "}",
    Tok.SEMI: ";",
}

# Caucasian-Albanian codepoints for the obfuscated surface.  Operators and
# keywords are remapped; types, delimiters and the statement terminator keep
# their standard spelling.
_OBF_OVERRIDES: dict[Tok, str] = {
    Tok.ADD: "\U00010550",
    Tok.SUB: "\U00010559",
    Tok.MUL: "\U0001054A",
    Tok.DIV: "\U0001054F",
    Tok.MOD: "\U00010556",
    Tok.ASSIGN: "\U00010531",
    Tok.LT: "\U00010533",
    Tok.GT: "\U00010543",
    Tok.LE: "\U00010537",
    Tok.GE: "\U0001055B",
    Tok.EQ: "\U0001055F",
    Tok.NE: "\U00010540",
    Tok.NOT: "\U00010530",
    Tok.AND: "\U0001055C",
    Tok.OR: "\U0001053B",
    Tok.WHILE: "\U00010555",
    Tok.IF: "\U00010532",
    Tok.ELSE: "\U00010534",
    Tok.BREAK: "\U00010535",
    Tok.CONTINUE: "\U00010536",
    Tok.HALT: "\U00010538",
}

STANDARD = LexemeProfile("standard", dict(_STANDARD_SURFACES))
OBFUSCATED = LexemeProfile(
    "obfuscated", {**_STANDARD_SURFACES, **_OBF_OVERRIDES}
)
