"""Nonstandard semantics: operator-meaning swaps and surface obfuscation.

KeywordSwap re-binds what each operator symbol computes (the rule for ``+``
performs subtraction) while the surface stays familiar.  KeywordObf relexes
the surface to rare Unicode codepoints while meanings stay standard.  Each
comes with a program transformation chosen so that the transformed program
under the mutated semantics reproduces the standard program's final store.
"""
from __future__ import annotations

import enum

from . import kengine, sos
from .runtime import DEFAULT_STEP_LIMIT, Outcome
from .syntax import (
    Arith,
    Assign,
    Expr,
    IfElse,
    Logic,
    Neg,
    Not,
    Paren,
    Program,
    Rel,
    Stmt,
    While,
)
from .tokens import LexemeProfile, OBFUSCATED, STANDARD, Tok


class MutationKind(enum.Enum):
    STANDARD = "std"
    KEYWORD_SWAP = "swap"
    KEYWORD_OBF = "obf"


class SemanticsStyle(enum.Enum):
    SOS = "sos"
    K = "k"


# The swap table: + <-> -, * <-> /, < <-> >, <= <-> >=, == <-> !=, && <-> ||.
# Modulo, negation, and every keyword are fixed points.
OPERATOR_SWAP: dict[Tok, Tok] = {
    Tok.ADD: Tok.SUB,
    Tok.SUB: Tok.ADD,
    Tok.MUL: Tok.DIV,
    Tok.DIV: Tok.MUL,
    Tok.LT: Tok.GT,
    Tok.GT: Tok.LT,
    Tok.LE: Tok.GE,
    Tok.GE: Tok.LE,
    Tok.EQ: Tok.NE,
    Tok.NE: Tok.EQ,
    Tok.AND: Tok.OR,
    Tok.OR: Tok.AND,
}

SWAPPABLE = frozenset(OPERATOR_SWAP)


def operator_actions(kind: MutationKind) -> dict[Tok, Tok]:
    """Semantic action of each surface operator under the given semantics."""
    actions = {t: t for t in Tok}
    if kind is MutationKind.KEYWORD_SWAP:
        actions.update(OPERATOR_SWAP)
    return actions


def profile_for(kind: MutationKind) -> LexemeProfile:
    return OBFUSCATED if kind is MutationKind.KEYWORD_OBF else STANDARD


class NonTermination(Exception):
    """An equivalence check ran into the step limit on one side."""


def _swap_expr(e: Expr) -> Expr:
    if isinstance(e, Arith):
        op = OPERATOR_SWAP.get(e.op, e.op)
        return Arith(op, _swap_expr(e.left), _swap_expr(e.right))
    if isinstance(e, Rel):
        op = OPERATOR_SWAP.get(e.op, e.op)
        return Rel(op, _swap_expr(e.left), _swap_expr(e.right))
    if isinstance(e, Logic):
        op = OPERATOR_SWAP.get(e.op, e.op)
        return Logic(op, _swap_expr(e.left), _swap_expr(e.right))
    if isinstance(e, Not):
        return Not(_swap_expr(e.operand))
    if isinstance(e, Neg):
        return Neg(_swap_expr(e.operand))
    if isinstance(e, Paren):
        return Paren(_swap_expr(e.inner))
    return e


def _swap_stmt(st: Stmt) -> Stmt:
    if isinstance(st, Assign):
        return Assign(st.name, _swap_expr(st.expr))
    if isinstance(st, While):
        return While(_swap_expr(st.guard), tuple(_swap_stmt(s) for s in st.body))
    if isinstance(st, IfElse):
        return IfElse(
            _swap_expr(st.guard),
            tuple(_swap_stmt(s) for s in st.then_body),
            tuple(_swap_stmt(s) for s in st.else_body),
        )
    return st


def transform_program(p: Program, kind: MutationKind) -> Program:
    """The companion program: p' such that running p' under the mutated
    semantics reproduces p's standard behavior.

    KeywordSwap replaces every swappable operator by its image (an
    involution); KeywordObf leaves the tree alone, only the render profile
    changes.
    """
    if kind is MutationKind.KEYWORD_SWAP:
        return Program(tuple(_swap_stmt(s) for s in p.body))
    return p


def run_with(
    p: Program,
    style: SemanticsStyle,
    kind: MutationKind = MutationKind.STANDARD,
    step_limit: int = DEFAULT_STEP_LIMIT,
    store=None,
    collect: bool = True,
):
    """Execute p under the given style and semantics mutation."""
    actions = operator_actions(kind)
    if style is SemanticsStyle.SOS:
        return sos.run(p, step_limit, actions=actions, store=store, collect=collect)
    return kengine.k_run(p, step_limit, actions=actions, store=store, collect=collect)


def check_equivalence(
    p: Program,
    kind: MutationKind,
    step_limit: int = DEFAULT_STEP_LIMIT,
    style: SemanticsStyle = SemanticsStyle.SOS,
) -> bool:
    """True iff the (mutated semantics, transformed program) pair reproduces
    the standard final store and outcome class.

    The obfuscated program additionally round-trips through the obfuscated
    surface, so the exotic lexemes are exercised, not just the identity
    transform.
    """
    from .syntax import parse, render_program  # local import to avoid a cycle

    base = run_with(p, style, MutationKind.STANDARD, step_limit, collect=False)
    if base.outcome is Outcome.STEP_LIMIT:
        raise NonTermination("standard side hit the step limit")
    transformed = transform_program(p, kind)
    if kind is MutationKind.KEYWORD_OBF:
        transformed = parse(render_program(transformed, OBFUSCATED), OBFUSCATED)
    mutated = run_with(transformed, style, kind, step_limit, collect=False)
    if mutated.outcome is Outcome.STEP_LIMIT:
        raise NonTermination("mutated side hit the step limit")
    return base.outcome == mutated.outcome and base.final_store == mutated.final_store
