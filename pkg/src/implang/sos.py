"""Small-step structural operational semantics over <operation, sigma, chi>.

The machine reduces a work list (the operation focus) one numbered rule at a
time.  Congruence rules are "announce" steps: descending into a non-literal
subterm costs exactly one step, after which the subterm's own rules apply.
This matches the anchored worked examples: evaluating ``i < 2`` with i bound
to 0 emits 28 (descend into the left side), 1 (identifier lookup), then 30
(the comparison itself).

Rule numbering (category ranges are load-bearing; tests pin them):

  1-2    identifier lookup (int, bool)
  3      declaration
  4-6    assignment (reduce rhs, store int, store bool)
  7-27   arithmetic: + - * (lred, rred, apply), / % (lred, rred, apply,
         zero-divisor fault), unary minus (reduce, apply), parentheses
         (reduce, unwrap)
  28-51  relational: < <= > >= == != with (lred, rred, true, false) each
  52-62  logical: && || short-circuit (lred, true, false), ! (reduce, true,
         false), boolean parentheses (reduce, unwrap)
  63     runtime fault (undeclared use, redeclaration, type mismatch)
  64-66  conditional (reduce guard, take then, take else)
  67-70  loop (arm, reduce guard, exit on false, enter on true)
  71-76  break/continue (skip, complete, orphan fault for each)
  77     loop re-arm after the body completes
  78     halt
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .runtime import (
    CList,
    Cons,
    DEFAULT_STEP_LIMIT,
    Outcome,
    PopEmpty,
    Stuck,
    Trace,
    TraceStep,
    Value,
    cons_from,
)
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

# ---------------------------------------------------------------------------
# Rule catalog
# ---------------------------------------------------------------------------

RULE_NAMES: dict[int, str] = {
    1: "id",
    2: "id_bool",
    3: "decl",
    4: "assgn_rred",
    5: "assgn",
    6: "assgn_bool",
    7: "add_lred",
    8: "add_rred",
    9: "add",
    10: "sub_lred",
    11: "sub_rred",
    12: "sub",
    13: "mul_lred",
    14: "mul_rred",
    15: "mul",
    16: "div_lred",
    17: "div_rred",
    18: "div",
    19: "div_zero",
    20: "mod_lred",
    21: "mod_rred",
    22: "mod",
    23: "mod_zero",
    24: "neg_red",
    25: "neg",
    26: "aparen_red",
    27: "aparen",
    28: "lt_lred",
    29: "lt_rred",
    30: "lt_true",
    31: "lt_false",
    32: "le_lred",
    33: "le_rred",
    34: "le_true",
    35: "le_false",
    36: "gt_lred",
    37: "gt_rred",
    38: "gt_true",
    39: "gt_false",
    40: "ge_lred",
    41: "ge_rred",
    42: "ge_true",
    43: "ge_false",
    44: "eq_lred",
    45: "eq_rred",
    46: "eq_true",
    47: "eq_false",
    48: "ne_lred",
    49: "ne_rred",
    50: "ne_true",
    51: "ne_false",
    52: "and_lred",
    53: "and_true",
    54: "and_false",
    55: "or_lred",
    56: "or_true",
    57: "or_false",
    58: "not_red",
    59: "not_true",
    60: "not_false",
    61: "bparen_red",
    62: "bparen",
    63: "fault",
    64: "if_red",
    65: "if_true",
    66: "if_false",
    67: "while_loop",
    68: "loop_red",
    69: "loop_false",
    70: "loop_true",
    71: "break_skip",
    72: "break_loop",
    73: "cont_skip",
    74: "cont_loop",
    75: "break_orphan",
    76: "cont_orphan",
    77: "loop_repeat",
    78: "halt",
}

CATEGORY_RANGES: dict[str, tuple[range, ...]] = {
    "Id": (range(1, 3),),
    "Declaration": (range(3, 4),),
    "Assignment": (range(4, 7),),
    "Arithmetic": (range(7, 28),),
    "Relational": (range(28, 52),),
    "Logical": (range(52, 63),),
    "Conditional": (range(64, 67),),
    "Loop": (range(67, 71), range(77, 78)),
    "BreakContinue": (range(71, 77),),
    "Halt": (range(78, 79),),
}


def rule_category(rule: int) -> str | None:
    for cat, ranges in CATEGORY_RANGES.items():
        if any(rule in r for r in ranges):
            return cat
    return None


# Per operator: (lred, rred, apply) plus the zero-divisor fault for / and %.
_ARITH_RULES = {
    Tok.ADD: (7, 8, 9, None),
    Tok.SUB: (10, 11, 12, None),
    Tok.MUL: (13, 14, 15, None),
    Tok.DIV: (16, 17, 18, 19),
    Tok.MOD: (20, 21, 22, 23),
}
# Per operator: (lred, rred, true, false).
_REL_RULES = {
    Tok.LT: (28, 29, 30, 31),
    Tok.LE: (32, 33, 34, 35),
    Tok.GT: (36, 37, 38, 39),
    Tok.GE: (40, 41, 42, 43),
    Tok.EQ: (44, 45, 46, 47),
    Tok.NE: (48, 49, 50, 51),
}
# Per operator: (lred, on-true, on-false); && and || short-circuit.
_LOGIC_RULES = {Tok.AND: (52, 53, 54), Tok.OR: (55, 56, 57)}

FAULT = 63

# Steps that execute a whole statement; used for the statement-granularity
# trace length (decl, assign store, branch taken, loop body entered,
# break/continue completed, halt).
STATEMENT_RULES = frozenset({3, 5, 6, 65, 66, 70, 72, 74, 78})


IDENTITY_ACTIONS: dict[Tok, Tok] = {t: t for t in Tok}


def apply_arith(op: Tok, a: int, b: int) -> int | None:
    """Truncating (C-style) integer arithmetic; None signals zero divisor."""
    if op is Tok.ADD:
        return a + b
    if op is Tok.SUB:
        return a - b
    if op is Tok.MUL:
        return a * b
    if op is Tok.DIV:
        if b == 0:
            return None
        q = abs(a) // abs(b)
        return q if (a >= 0) == (b >= 0) else -q
    if op is Tok.MOD:
        if b == 0:
            return None
        r = abs(a) % abs(b)
        return r if a >= 0 else -r
    raise ValueError(op)


def apply_rel(op: Tok, a: int, b: int) -> bool:
    if op is Tok.LT:
        return a < b
    if op is Tok.LE:
        return a <= b
    if op is Tok.GT:
        return a > b
    if op is Tok.GE:
        return a >= b
    if op is Tok.EQ:
        return a == b
    if op is Tok.NE:
        return a != b
    raise ValueError(op)


def expr_sort(e: Expr, store: dict[str, Value]) -> str:
    """Syntactic sort of an expression: "int" or "bool" (ids by stored type)."""
    if isinstance(e, (Rel, Logic, Not, BoolLit)):
        return "bool"
    if isinstance(e, (Arith, Neg, IntLit)):
        return "int"
    if isinstance(e, Paren):
        return expr_sort(e.inner, store)
    if isinstance(e, Id):
        return "bool" if isinstance(store.get(e.name), bool) else "int"
    raise TypeError(e)


# ---------------------------------------------------------------------------
# Expression-evaluation zipper
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """One pending operator context above the subterm under reduction."""

    kind: str  # arith | rel | and | or | not | neg | paren
    op: Tok | None = None
    left_value: Value | None = None
    right: Expr | None = None
    sort: str | None = None  # paren frames only


@dataclass(frozen=True)
class EvalState:
    current: Expr
    frames: CList = None

    @property
    def done(self) -> bool:
        return self.frames is None and is_literal(self.current)

    @property
    def value(self) -> Value:
        assert isinstance(self.current, (IntLit, BoolLit))
        return self.current.value


class _Fault(Exception):
    """Internal: the current step resolves to the fault rule / an error rule."""

    def __init__(self, rule: int = FAULT):
        self.rule = rule


def _lit(v: Value) -> Expr:
    return BoolLit(v) if isinstance(v, bool) else IntLit(v)


def _int_value(e: Expr) -> int:
    if not isinstance(e, IntLit):
        raise _Fault()
    return e.value


def _bool_value(e: Expr) -> bool:
    if not isinstance(e, BoolLit):
        raise _Fault()
    return e.value


def eval_step(
    state: EvalState, store: dict[str, Value], actions: dict[Tok, Tok]
) -> tuple[int, EvalState]:
    """Perform one reduction step inside an expression.

    Raises _Fault for zero divisors (dedicated rules) and type/scope faults
    (rule 63).
    """
    cur = state.current
    if not is_literal(cur):
        return _descend(cur, state.frames, store, actions)
    return _resume(state.current, state.frames, store, actions)


def _descend(
    cur: Expr, frames: CList, store: dict[str, Value], actions: dict[Tok, Tok]
) -> tuple[int, EvalState]:
    if isinstance(cur, Id):
        if cur.name not in store:
            raise _Fault()
        v = store[cur.name]
        return (2 if isinstance(v, bool) else 1), EvalState(_lit(v), frames)
    if isinstance(cur, Arith):
        lred, rred, app, zero = _ARITH_RULES[cur.op]
        if not is_literal(cur.left):
            return lred, EvalState(cur.left, Cons(Frame("arith", cur.op, right=cur.right), frames))
        if not is_literal(cur.right):
            return rred, EvalState(
                cur.right, Cons(Frame("arith", cur.op, left_value=_int_value(cur.left)), frames)
            )
        return _apply_arith_step(cur.op, _int_value(cur.left), _int_value(cur.right), frames, actions)
    if isinstance(cur, Rel):
        lred, rred, tru, fls = _REL_RULES[cur.op]
        if not is_literal(cur.left):
            return lred, EvalState(cur.left, Cons(Frame("rel", cur.op, right=cur.right), frames))
        if not is_literal(cur.right):
            return rred, EvalState(
                cur.right, Cons(Frame("rel", cur.op, left_value=_int_value(cur.left)), frames)
            )
        return _apply_rel_step(cur.op, _int_value(cur.left), _int_value(cur.right), frames, actions)
    if isinstance(cur, Logic):
        lred, on_true, on_false = _LOGIC_RULES[cur.op]
        if not is_literal(cur.left):
            kind = "and" if cur.op is Tok.AND else "or"
            return lred, EvalState(cur.left, Cons(Frame(kind, cur.op, right=cur.right), frames))
        return _apply_logic_step(cur.op, _bool_value(cur.left), cur.right, frames, actions)
    if isinstance(cur, Not):
        if not is_literal(cur.operand):
            return 58, EvalState(cur.operand, Cons(Frame("not"), frames))
        v = _bool_value(cur.operand)
        return (59 if v else 60), EvalState(BoolLit(not v), frames)
    if isinstance(cur, Neg):
        if not is_literal(cur.operand):
            return 24, EvalState(cur.operand, Cons(Frame("neg"), frames))
        return 25, EvalState(IntLit(-_int_value(cur.operand)), frames)
    if isinstance(cur, Paren):
        sort = expr_sort(cur.inner, store)
        red, unwrap = (26, 27) if sort == "int" else (61, 62)
        if not is_literal(cur.inner):
            return red, EvalState(cur.inner, Cons(Frame("paren", sort=sort), frames))
        return unwrap, EvalState(cur.inner, frames)
    raise TypeError(cur)


def _resume(
    lit: Expr, frames: CList, store: dict[str, Value], actions: dict[Tok, Tok]
) -> tuple[int, EvalState]:
    assert frames is not None, "complete state stepped"
    frame: Frame = frames.head
    rest = frames.tail
    if frame.kind == "arith":
        if frame.left_value is None:
            # Left side just finished reducing.
            lv = _int_value(lit)
            if is_literal(frame.right):
                return _apply_arith_step(frame.op, lv, _int_value(frame.right), rest, actions)
            rred = _ARITH_RULES[frame.op][1]
            return rred, EvalState(frame.right, Cons(Frame("arith", frame.op, left_value=lv), rest))
        return _apply_arith_step(frame.op, frame.left_value, _int_value(lit), rest, actions)
    if frame.kind == "rel":
        if frame.left_value is None:
            lv = _int_value(lit)
            if is_literal(frame.right):
                return _apply_rel_step(frame.op, lv, _int_value(frame.right), rest, actions)
            rred = _REL_RULES[frame.op][1]
            return rred, EvalState(frame.right, Cons(Frame("rel", frame.op, left_value=lv), rest))
        return _apply_rel_step(frame.op, frame.left_value, _int_value(lit), rest, actions)
    if frame.kind in ("and", "or"):
        return _apply_logic_step(frame.op, _bool_value(lit), frame.right, rest, actions)
    if frame.kind == "not":
        v = _bool_value(lit)
        return (59 if v else 60), EvalState(BoolLit(not v), rest)
    if frame.kind == "neg":
        return 25, EvalState(IntLit(-_int_value(lit)), rest)
    if frame.kind == "paren":
        return (27 if frame.sort == "int" else 62), EvalState(lit, rest)
    raise ValueError(frame.kind)


def _apply_arith_step(
    op: Tok, a: int, b: int, frames: CList, actions: dict[Tok, Tok]
) -> tuple[int, EvalState]:
    _, _, app, zero = _ARITH_RULES[op]
    result = apply_arith(actions[op], a, b)
    if result is None:
        # Zero divisor.  The surface operator owns a dedicated fault rule only
        # when its standard meaning is / or %; under a swapped binding the
        # generic fault rule reports the error instead.
        raise _Fault(zero if zero is not None else FAULT)
    return app, EvalState(IntLit(result), frames)


def _apply_rel_step(
    op: Tok, a: int, b: int, frames: CList, actions: dict[Tok, Tok]
) -> tuple[int, EvalState]:
    _, _, tru, fls = _REL_RULES[op]
    result = apply_rel(actions[op], a, b)
    return (tru if result else fls), EvalState(BoolLit(result), frames)


def _apply_logic_step(
    op: Tok, left: bool, right: Expr, frames: CList, actions: dict[Tok, Tok]
) -> tuple[int, EvalState]:
    _, on_true, on_false = _LOGIC_RULES[op]
    effective_and = actions[op] is Tok.AND
    if left:
        # true && b -> b ; true || b -> true  (mutatis mutandis when swapped)
        nxt = right if effective_and else BoolLit(True)
        return on_true, EvalState(nxt, frames)
    nxt = BoolLit(False) if effective_and else right
    return on_false, EvalState(nxt, frames)


# ---------------------------------------------------------------------------
# Configurations and the statement-level transition relation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LoopForm:
    """An armed loop whose guard is about to be (re-)evaluated."""

    header: While


@dataclass(frozen=True)
class LoopRepeat:
    """End-of-body marker: re-arms the loop (or absorbs break/continue)."""

    header: While


@dataclass(frozen=True)
class PopIf:
    """Bookkeeping marker closing a taken if-branch; consumed silently."""


@dataclass(frozen=True)
class AssignEval:
    name: str
    state: EvalState


@dataclass(frozen=True)
class LoopEval:
    header: While
    state: EvalState


@dataclass(frozen=True)
class IfEval:
    stmt: IfElse
    state: EvalState


@dataclass(frozen=True)
class Configuration:
    focus: CList  # None means the empty statement list (normal terminal)
    store: dict[str, Value]
    stack: tuple[While, ...]  # chi: innermost executing loop first
    halted: bool = False
    errored: bool = False
    if_depth: int = 0

    @property
    def terminal(self) -> bool:
        return self.halted or self.errored or self._clean_focus() is None

    def _clean_focus(self) -> CList:
        focus = self.focus
        while focus is not None and isinstance(focus.head, PopIf):
            focus = focus.tail
        return focus

    def outcome(self) -> Outcome:
        if self.errored:
            return Outcome.ERROR
        if self.halted:
            return Outcome.HALTED
        return Outcome.NORMAL


def initial_configuration(p: Program, store: dict[str, Value] | None = None,
                          stack: tuple[While, ...] = ()) -> Configuration:
    return Configuration(cons_from(p.body), dict(store or {}), stack)


def stack_push(s: While, chi: tuple[While, ...]) -> tuple[While, ...]:
    return (s,) + chi


def stack_pop(chi: tuple[While, ...]) -> tuple[While, ...]:
    if not chi:
        raise PopEmpty("pop on empty control stack")
    return chi[1:]


def stack_top(chi: tuple[While, ...]) -> While | None:
    return chi[0] if chi else None


def _splice(stmts: tuple[Stmt, ...], marker, tail: CList) -> CList:
    return cons_from(stmts, Cons(marker, tail) if marker is not None else tail)


def step(
    c: Configuration, actions: dict[Tok, Tok] | None = None
) -> tuple[int, Configuration]:
    """Apply the unique matching rule; raises Stuck on a catalog gap."""
    if actions is None:
        actions = IDENTITY_ACTIONS
    if c.halted or c.errored:
        raise Stuck("step on a terminal configuration")

    # Silent bookkeeping: close finished if-branches before matching.
    focus = c.focus
    if_depth = c.if_depth
    while focus is not None and isinstance(focus.head, PopIf):
        focus = focus.tail
        if_depth -= 1
    if focus is None:
        raise Stuck("step on the empty statement list")
    if if_depth != c.if_depth:
        c = replace(c, focus=focus, if_depth=if_depth)

    head = focus.head
    tail = focus.tail

    try:
        if isinstance(head, Decl):
            if head.name in c.store:
                raise _Fault()
            store = dict(c.store)
            store[head.name] = False if head.type is Tok.BOOL else 0
            return 3, replace(c, focus=tail, store=store)

        if isinstance(head, Assign):
            if head.name not in c.store:
                raise _Fault()
            if is_literal(head.expr):
                return _store_step(c, head.name, head.expr.value, tail)
            return 4, replace(c, focus=Cons(AssignEval(head.name, EvalState(head.expr)), tail))

        if isinstance(head, AssignEval):
            if head.state.done:
                return _store_step(c, head.name, head.state.value, tail)
            rule, state = eval_step(head.state, c.store, actions)
            return rule, replace(c, focus=Cons(AssignEval(head.name, state), tail))

        if isinstance(head, While):
            return 67, replace(
                c, focus=Cons(LoopForm(head), tail), stack=stack_push(head, c.stack)
            )

        if isinstance(head, LoopForm):
            guard = head.header.guard
            if is_literal(guard):
                return _loop_outcome(c, head.header, guard.value, tail)
            return 68, replace(c, focus=Cons(LoopEval(head.header, EvalState(guard)), tail))

        if isinstance(head, LoopEval):
            if head.state.done:
                return _loop_outcome(c, head.header, head.state.value, tail)
            rule, state = eval_step(head.state, c.store, actions)
            return rule, replace(c, focus=Cons(LoopEval(head.header, state), tail))

        if isinstance(head, LoopRepeat):
            return 77, replace(c, focus=Cons(LoopForm(head.header), tail))

        if isinstance(head, IfElse):
            if is_literal(head.guard):
                return _if_outcome(c, head, head.guard.value, tail)
            return 64, replace(c, focus=Cons(IfEval(head, EvalState(head.guard)), tail))

        if isinstance(head, IfEval):
            if head.state.done:
                return _if_outcome(c, head.stmt, head.state.value, tail)
            rule, state = eval_step(head.state, c.store, actions)
            return rule, replace(c, focus=Cons(IfEval(head.stmt, state), tail))

        if isinstance(head, Break):
            if not c.stack:
                return 75, replace(c, errored=True)
            tail, if_depth = _drop_popifs(tail, c.if_depth)
            if tail is not None and isinstance(tail.head, LoopRepeat):
                return 72, replace(
                    c, focus=tail.tail, stack=stack_pop(c.stack), if_depth=if_depth
                )
            if tail is None:
                # chi says we are in a loop but no repeat marker remains;
                # unreachable for machine-built configurations.
                raise _Fault()
            return 71, replace(c, focus=Cons(head, tail.tail), if_depth=if_depth)

        if isinstance(head, Continue):
            if not c.stack:
                return 76, replace(c, errored=True)
            tail, if_depth = _drop_popifs(tail, c.if_depth)
            if tail is not None and isinstance(tail.head, LoopRepeat):
                return 74, replace(c, focus=tail, if_depth=if_depth)
            if tail is None:
                raise _Fault()
            return 73, replace(c, focus=Cons(head, tail.tail), if_depth=if_depth)

        if isinstance(head, Halt):
            return 78, replace(c, halted=True)

    except _Fault as fault:
        return fault.rule, replace(c, errored=True)

    raise Stuck(f"no rule for {head!r}")


def _drop_popifs(tail: CList, if_depth: int) -> tuple[CList, int]:
    while tail is not None and isinstance(tail.head, PopIf):
        tail = tail.tail
        if_depth -= 1
    return tail, if_depth


def _store_step(c: Configuration, name: str, value: Value, tail: CList) -> tuple[int, Configuration]:
    old = c.store[name]
    if isinstance(old, bool) != isinstance(value, bool):
        raise _Fault()
    store = dict(c.store)
    store[name] = value
    rule = 6 if isinstance(value, bool) else 5
    return rule, replace(c, focus=tail, store=store)


def _loop_outcome(c: Configuration, header: While, guard_value, tail: CList) -> tuple[int, Configuration]:
    if not isinstance(guard_value, bool):
        raise _Fault()
    if guard_value:
        return 70, replace(c, focus=_splice(header.body, LoopRepeat(header), tail))
    return 69, replace(c, focus=tail, stack=stack_pop(c.stack))


def _if_outcome(c: Configuration, stmt: IfElse, guard_value, tail: CList) -> tuple[int, Configuration]:
    if not isinstance(guard_value, bool):
        raise _Fault()
    branch = stmt.then_body if guard_value else stmt.else_body
    rule = 65 if guard_value else 66
    return rule, replace(
        c, focus=_splice(branch, PopIf(), tail), if_depth=c.if_depth + 1
    )


TERMINAL = "terminal"


def applicable_rule(c: Configuration, actions: dict[Tok, Tok] | None = None) -> int | str:
    """The unique rule whose guards match, or TERMINAL; Stuck on a gap."""
    if c.terminal:
        return TERMINAL
    rule, _ = step(c, actions)
    return rule


def debug_lines(
    p: Program,
    step_limit: int = DEFAULT_STEP_LIMIT,
    actions: dict[Tok, Tok] | None = None,
    store: dict[str, Value] | None = None,
):
    """Line-oriented debug trace: step k: rule N; sigma = {..}; chi = [..]."""
    from .runtime import render_store
    from .syntax import render_expr

    c = initial_configuration(p, store)
    k = 0
    while not c.terminal and k < step_limit:
        rule, c = step(c, actions)
        k += 1
        chi = ", ".join(f"while ({render_expr(h.guard)})" for h in c.stack)
        yield f"step {k}: rule {rule}; sigma = {render_store(c.store)}; chi = [{chi}]"
    yield f"outcome: {c.outcome().value if c.terminal else Outcome.STEP_LIMIT.value}"


def run(
    p: Program,
    step_limit: int = DEFAULT_STEP_LIMIT,
    actions: dict[Tok, Tok] | None = None,
    store: dict[str, Value] | None = None,
    stack: tuple[While, ...] = (),
    collect: bool = True,
) -> Trace:
    """Iterate the transition relation from <SL, sigma, chi> to a terminal."""
    if step_limit < 1:
        raise ValueError("step_limit must be >= 1")
    c = initial_configuration(p, store, stack)
    steps: list[TraceStep] = []
    taken_loop = 0
    taken_if = 0
    n = 0
    while not c.terminal:
        if n >= step_limit:
            return Trace(steps, Outcome.STEP_LIMIT, c.store, taken_loop, taken_if, n)
        rule, c = step(c, actions)
        n += 1
        if rule == 70:
            taken_loop = max(taken_loop, len(c.stack))
        elif rule in (65, 66):
            taken_if = max(taken_if, c.if_depth)
        if collect:
            steps.append(TraceStep(rule, c.store))
    return Trace(steps, c.outcome(), c.store, taken_loop, taken_if, n)
