"""Rewriting-style interpreter: 36 named rules over a computation cell.

Loops desugar in two counted rewrites: rule 24 turns ``while`` into a
``while1`` followed by a ``breakMarker``; rule 25 unfolds ``while1`` into an
if-else whose taken branch ends with the same ``while1``.  Structural
heating/cooling (focusing into subexpressions, splicing branch bodies) is not
counted: every recorded step is one named rule.

Rule numbering:

  1-2    identifier lookup (int, bool)
  3-9    arithmetic: + - * / (with zero fault) % (with zero fault)
  10     parenthesis unwrap
  11     unary minus
  12-17  relational: < <= > >= == !=
  18-20  logical: && || (short-circuit) !
  21     assignment
  22-23  conditional (branch taken / not taken)
  24-25  loop desugaring (while -> while1 + breakMarker; while1 -> if-else)
  26     halt
  27-35  breakMarker consumption, break/continue unwinding, orphan faults
  36     declaration
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .runtime import (
    CList,
    Cons,
    DEFAULT_STEP_LIMIT,
    Outcome,
    Stuck,
    Trace,
    TraceStep,
    Value,
    cons_from,
)
from .sos import apply_arith, apply_rel
from .syntax import (
    Arith,
    Assign,
    BoolLit,
    Break,
    Continue,
    Decl,
    Expr,
    Halt,
    Id,
    IfElse,
    IntLit,
    Logic,
    Neg,
    Not,
    Paren,
    Program,
    Rel,
    Stmt,
    While,
    is_literal,
)
from .tokens import Tok

K_RULE_NAMES: dict[int, str] = {
    1: "id",
    2: "id_bool",
    3: "add",
    4: "sub",
    5: "mul",
    6: "div",
    7: "div_zero",
    8: "mod",
    9: "mod_zero",
    10: "paren",
    11: "neg",
    12: "lt",
    13: "le",
    14: "gt",
    15: "ge",
    16: "eq",
    17: "ne",
    18: "and",
    19: "or",
    20: "not",
    21: "assgn",
    22: "if_true",
    23: "if_false",
    24: "while_unfold",
    25: "while1_unfold",
    26: "halt",
    27: "break_marker",
    28: "break_skip",
    29: "break_skip_loop",
    30: "break_done",
    31: "cont_skip",
    32: "cont_done",
    33: "break_orphan",
    34: "cont_orphan",
    35: "cont_skip_marker",
    36: "decl",
}

K_CATEGORY_RANGES: dict[str, tuple[range, ...]] = {
    "Id": (range(1, 3),),
    "Arithmetic": (range(3, 12),),
    "Relational": (range(12, 18),),
    "Logical": (range(18, 21),),
    "Assignment": (range(21, 22),),
    "Conditional": (range(22, 24),),
    "Loop": (range(24, 26),),
    "Halt": (range(26, 27),),
    "BreakContinue": (range(27, 36),),
    "Declaration": (range(36, 37),),
}


def k_rule_category(rule: int) -> str | None:
    for cat, ranges in K_CATEGORY_RANGES.items():
        if any(rule in r for r in ranges):
            return cat
    return None


_K_ARITH = {Tok.ADD: (3, None), Tok.SUB: (4, None), Tok.MUL: (5, None),
            Tok.DIV: (6, 7), Tok.MOD: (8, 9)}
_K_REL = {Tok.LT: 12, Tok.LE: 13, Tok.GT: 14, Tok.GE: 15, Tok.EQ: 16, Tok.NE: 17}

IDENTITY_ACTIONS: dict[Tok, Tok] = {t: t for t in Tok}


class _KFault(Exception):
    def __init__(self, rule: int):
        self.rule = rule


@dataclass(frozen=True)
class While1:
    """Synthetic loop form awaiting its unfold into an if-else."""

    guard: Expr
    body: tuple[Stmt, ...]


@dataclass(frozen=True)
class BreakMarker:
    pass


@dataclass(frozen=True)
class KIf:
    """A conditional whose branches may contain synthetic items."""

    guard: Expr
    then_items: tuple
    else_items: tuple


@dataclass(frozen=True)
class KConfiguration:
    computation: CList
    store: dict[str, Value]
    halted: bool = False
    errored: bool = False

    @property
    def terminal(self) -> bool:
        return self.halted or self.errored or self.computation is None

    def outcome(self) -> Outcome:
        if self.errored:
            return Outcome.ERROR
        if self.halted:
            return Outcome.HALTED
        return Outcome.NORMAL


def k_initial(p: Program, store: dict[str, Value] | None = None) -> KConfiguration:
    return KConfiguration(cons_from(p.body), dict(store or {}))


def k_expr_step(
    e: Expr, store: dict[str, Value], actions: dict[Tok, Tok]
) -> tuple[int, Expr]:
    """Reduce the leftmost-innermost redex; one named rule per step."""
    if isinstance(e, Id):
        if e.name not in store:
            raise _KFault(1)
        v = store[e.name]
        lit: Expr = BoolLit(v) if isinstance(v, bool) else IntLit(v)
        return (2 if isinstance(v, bool) else 1), lit
    if isinstance(e, Paren):
        if is_literal(e.inner):
            return 10, e.inner
        rule, inner = k_expr_step(e.inner, store, actions)
        return rule, Paren(inner)
    if isinstance(e, Neg):
        if is_literal(e.operand):
            if not isinstance(e.operand, IntLit):
                raise _KFault(11)
            return 11, IntLit(-e.operand.value)
        rule, operand = k_expr_step(e.operand, store, actions)
        return rule, Neg(operand)
    if isinstance(e, Arith):
        if not is_literal(e.left):
            rule, left = k_expr_step(e.left, store, actions)
            return rule, Arith(e.op, left, e.right)
        if not is_literal(e.right):
            rule, right = k_expr_step(e.right, store, actions)
            return rule, Arith(e.op, e.left, right)
        app, zero = _K_ARITH[e.op]
        if not isinstance(e.left, IntLit) or not isinstance(e.right, IntLit):
            raise _KFault(app)
        result = apply_arith(actions[e.op], e.left.value, e.right.value)
        if result is None:
            raise _KFault(zero if zero is not None else app)
        return app, IntLit(result)
    if isinstance(e, Rel):
        if not is_literal(e.left):
            rule, left = k_expr_step(e.left, store, actions)
            return rule, Rel(e.op, left, e.right)
        if not is_literal(e.right):
            rule, right = k_expr_step(e.right, store, actions)
            return rule, Rel(e.op, e.left, right)
        rule = _K_REL[e.op]
        if not isinstance(e.left, IntLit) or not isinstance(e.right, IntLit):
            raise _KFault(rule)
        return rule, BoolLit(apply_rel(actions[e.op], e.left.value, e.right.value))
    if isinstance(e, Logic):
        if not is_literal(e.left):
            rule, left = k_expr_step(e.left, store, actions)
            return rule, Logic(e.op, left, e.right)
        rule = 18 if e.op is Tok.AND else 19
        if not isinstance(e.left, BoolLit):
            raise _KFault(rule)
        effective_and = actions[e.op] is Tok.AND
        if e.left.value:
            return rule, (e.right if effective_and else BoolLit(True))
        return rule, (BoolLit(False) if effective_and else e.right)
    if isinstance(e, Not):
        if is_literal(e.operand):
            if not isinstance(e.operand, BoolLit):
                raise _KFault(20)
            return 20, BoolLit(not e.operand.value)
        rule, operand = k_expr_step(e.operand, store, actions)
        return rule, Not(operand)
    raise Stuck(f"no expression rule for {e!r}")


def k_step(
    c: KConfiguration, actions: dict[Tok, Tok] | None = None
) -> tuple[int, KConfiguration]:
    """Apply the unique matching rewrite rule."""
    if actions is None:
        actions = IDENTITY_ACTIONS
    if c.terminal:
        raise Stuck("k_step on a terminal configuration")
    head = c.computation.head
    tail = c.computation.tail

    try:
        if isinstance(head, Decl):
            if head.name in c.store:
                raise _KFault(36)
            store = dict(c.store)
            store[head.name] = False if head.type is Tok.BOOL else 0
            return 36, replace(c, computation=tail, store=store)

        if isinstance(head, Assign):
            if head.name not in c.store:
                raise _KFault(21)
            if is_literal(head.expr):
                old = c.store[head.name]
                if isinstance(old, bool) != isinstance(head.expr.value, bool):
                    raise _KFault(21)
                store = dict(c.store)
                store[head.name] = head.expr.value
                return 21, replace(c, computation=tail, store=store)
            rule, expr = k_expr_step(head.expr, c.store, actions)
            return rule, replace(c, computation=Cons(Assign(head.name, expr), tail))

        if isinstance(head, While):
            items = (While1(head.guard, head.body), BreakMarker())
            return 24, replace(c, computation=cons_from(items, tail))

        if isinstance(head, While1):
            unfolded = KIf(head.guard, tuple(head.body) + (head,), ())
            return 25, replace(c, computation=Cons(unfolded, tail))

        if isinstance(head, IfElse):
            head = KIf(head.guard, head.then_body, head.else_body)
            # fall through to the KIf case without consuming a step

        if isinstance(head, KIf):
            if is_literal(head.guard):
                if not isinstance(head.guard, BoolLit):
                    raise _KFault(22)
                if head.guard.value:
                    return 22, replace(c, computation=cons_from(head.then_items, tail))
                return 23, replace(c, computation=cons_from(head.else_items, tail))
            rule, guard = k_expr_step(head.guard, c.store, actions)
            nxt = KIf(guard, head.then_items, head.else_items)
            return rule, replace(c, computation=Cons(nxt, tail))

        if isinstance(head, BreakMarker):
            return 27, replace(c, computation=tail)

        if isinstance(head, Break):
            if tail is None:
                return 33, replace(c, errored=True)
            nxt = tail.head
            if isinstance(nxt, BreakMarker):
                return 30, replace(c, computation=tail.tail)
            if isinstance(nxt, While1):
                return 29, replace(c, computation=Cons(head, tail.tail))
            return 28, replace(c, computation=Cons(head, tail.tail))

        if isinstance(head, Continue):
            if tail is None:
                return 34, replace(c, errored=True)
            nxt = tail.head
            if isinstance(nxt, While1):
                return 32, replace(c, computation=tail)
            if isinstance(nxt, BreakMarker):
                return 35, replace(c, errored=True)
            return 31, replace(c, computation=Cons(head, tail.tail))

        if isinstance(head, Halt):
            return 26, replace(c, halted=True)

    except _KFault as fault:
        return fault.rule, replace(c, errored=True)

    raise Stuck(f"no rewrite rule for {head!r}")


def k_applicable_rule(
    c: KConfiguration, actions: dict[Tok, Tok] | None = None
) -> int | str:
    if c.terminal:
        return "terminal"
    rule, _ = k_step(c, actions)
    return rule


def k_run(
    p: Program,
    step_limit: int = DEFAULT_STEP_LIMIT,
    actions: dict[Tok, Tok] | None = None,
    store: dict[str, Value] | None = None,
    collect: bool = True,
) -> Trace:
    if step_limit < 1:
        raise ValueError("step_limit must be >= 1")
    c = k_initial(p, store)
    steps: list[TraceStep] = []
    n = 0
    while not c.terminal:
        if n >= step_limit:
            return Trace(steps, Outcome.STEP_LIMIT, c.store, n_steps=n)
        rule, c = k_step(c, actions)
        n += 1
        if collect:
            steps.append(TraceStep(rule, c.store))
    return Trace(steps, c.outcome(), c.store, n_steps=n)
