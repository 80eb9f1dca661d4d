"""Three-axis complexity profile: control flow, data flow, program size.

Control flow: extended cyclomatic complexity (short-circuit operators count
as decisions), static if/loop nesting, and the nesting actually reached by an
execution.  Data flow: DepDegree, the number of reaching def-use edges, plus
executed assignment count.  Size: lines of canonical code, Halstead
vocabulary/volume over lexed token classes, and trace length at either the
micro (every rule) or statement granularity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .runtime import DEFAULT_STEP_LIMIT, RequiresTermination, Trace
from .sos import STATEMENT_RULES, run
from .syntax import (
    Arith,
    Assign,
    Break,
    Continue,
    Decl,
    Expr,
    Halt,
    Id,
    IfElse,
    Logic,
    Neg,
    Not,
    Paren,
    Program,
    Rel,
    Stmt,
    While,
    render_program,
    tokenize,
)
from .tokens import STANDARD


@dataclass(frozen=True)
class MetricProfile:
    # control flow
    cc: int
    max_nested_if: int
    max_nested_loop: int
    taken_if_depth: int
    taken_loop_depth: int
    # data flow
    dep_degree: int
    executed_assignments: int
    # size
    loc: int
    halstead_volume: float
    halstead_vocabulary: int
    trace_length: int
    trace_length_micro: int

    def as_record(self, program_id: str | None = None) -> dict:
        rec = asdict(self)
        rec["halstead_volume"] = round(self.halstead_volume, 2)
        if program_id is not None:
            rec = {"program_id": program_id, **rec}
        return rec


@dataclass(frozen=True)
class StaticMetrics:
    cc: int
    max_nested_if: int
    max_nested_loop: int
    dep_degree: int
    loc: int
    halstead_volume: float
    halstead_vocabulary: int


@dataclass(frozen=True)
class DynamicMetrics:
    taken_if_depth: int
    taken_loop_depth: int
    executed_assignments: int
    trace_length: int
    trace_length_micro: int


def _expr_vars(e: Expr, acc: set[str]) -> None:
    if isinstance(e, Id):
        acc.add(e.name)
    elif isinstance(e, (Arith, Rel, Logic)):
        _expr_vars(e.left, acc)
        _expr_vars(e.right, acc)
    elif isinstance(e, (Not, Neg)):
        _expr_vars(e.operand, acc)
    elif isinstance(e, Paren):
        _expr_vars(e.inner, acc)


def _count_decisions(e: Expr) -> int:
    if isinstance(e, Logic):
        return 1 + _count_decisions(e.left) + _count_decisions(e.right)
    if isinstance(e, (Arith, Rel)):
        return _count_decisions(e.left) + _count_decisions(e.right)
    if isinstance(e, (Not, Neg)):
        return _count_decisions(e.operand)
    if isinstance(e, Paren):
        return _count_decisions(e.inner)
    return 0


def cyclomatic_complexity(p: Program) -> int:
    count = 0

    def walk(stmts: tuple[Stmt, ...]) -> None:
        nonlocal count
        for st in stmts:
            if isinstance(st, Assign):
                count += _count_decisions(st.expr)
            elif isinstance(st, While):
                count += 1 + _count_decisions(st.guard)
                walk(st.body)
            elif isinstance(st, IfElse):
                count += 1 + _count_decisions(st.guard)
                walk(st.then_body)
                walk(st.else_body)

    walk(p.body)
    return 1 + count


def nesting_depths(p: Program) -> tuple[int, int]:
    """(max if nesting, max loop nesting), each counted per construct kind."""
    max_if = max_loop = 0

    def walk(stmts: tuple[Stmt, ...], if_d: int, loop_d: int) -> None:
        nonlocal max_if, max_loop
        for st in stmts:
            if isinstance(st, IfElse):
                max_if = max(max_if, if_d + 1)
                walk(st.then_body, if_d + 1, loop_d)
                walk(st.else_body, if_d + 1, loop_d)
            elif isinstance(st, While):
                max_loop = max(max_loop, loop_d + 1)
                walk(st.body, if_d, loop_d + 1)

    walk(p.body, 0, 0)
    return max_if, max_loop


def halstead(p: Program) -> tuple[int, float]:
    """(vocabulary, volume) over canonically rendered token classes.

    Operators are the abstract tokens (keywords, delimiters, operator
    symbols); operands are identifiers and literals.
    """
    lexemes = tokenize(render_program(p), STANDARD)
    operators: dict[str, int] = {}
    operands: dict[str, int] = {}
    for lx in lexemes:
        if lx.kind == "tok":
            operators[lx.tok.name] = operators.get(lx.tok.name, 0) + 1
        else:
            key = f"{lx.kind}:{lx.text}"
            operands[key] = operands.get(key, 0) + 1
    n = len(operators) + len(operands)
    total = sum(operators.values()) + sum(operands.values())
    volume = total * math.log2(n) if n > 1 else 0.0
    return n, volume


# ---------------------------------------------------------------------------
# DepDegree: reaching-definition def-use edges over the statement-level CFG
# ---------------------------------------------------------------------------


class _Node:
    __slots__ = ("index", "defs", "uses", "succ")

    def __init__(self, index: int, defs: frozenset[str], uses: frozenset[str]):
        self.index = index
        self.defs = defs
        self.uses = uses
        self.succ: list[int] = []


def _build_cfg(p: Program) -> list[_Node]:
    nodes: list[_Node] = []

    def new_node(defs: set[str] | None = None, uses: set[str] | None = None) -> _Node:
        node = _Node(len(nodes), frozenset(defs or ()), frozenset(uses or ()))
        nodes.append(node)
        return node

    def link(frm: list[_Node], to: _Node) -> None:
        for n in frm:
            n.succ.append(to.index)

    def walk(
        stmts: tuple[Stmt, ...],
        entry: list[_Node],
        loop_guard: _Node | None,
        loop_exits: list[_Node] | None,
    ) -> list[_Node]:
        """Wire stmts after the `entry` frontier; returns the exit frontier."""
        frontier = entry
        for st in stmts:
            if isinstance(st, Decl):
                node = new_node(defs={st.name})
                link(frontier, node)
                frontier = [node]
            elif isinstance(st, Assign):
                uses: set[str] = set()
                _expr_vars(st.expr, uses)
                node = new_node(defs={st.name}, uses=uses)
                link(frontier, node)
                frontier = [node]
            elif isinstance(st, Halt):
                node = new_node()
                link(frontier, node)
                frontier = []  # no fallthrough
            elif isinstance(st, Break):
                node = new_node()
                link(frontier, node)
                if loop_exits is not None:
                    loop_exits.append(node)
                frontier = []
            elif isinstance(st, Continue):
                node = new_node()
                link(frontier, node)
                if loop_guard is not None:
                    node.succ.append(loop_guard.index)
                frontier = []
            elif isinstance(st, IfElse):
                uses = set()
                _expr_vars(st.guard, uses)
                guard = new_node(uses=uses)
                link(frontier, guard)
                then_exit = walk(st.then_body, [guard], loop_guard, loop_exits)
                else_exit = walk(st.else_body, [guard], loop_guard, loop_exits)
                frontier = then_exit + else_exit
            elif isinstance(st, While):
                uses = set()
                _expr_vars(st.guard, uses)
                guard = new_node(uses=uses)
                link(frontier, guard)
                exits: list[_Node] = [guard]  # guard-false falls through
                body_exit = walk(st.body, [guard], guard, exits)
                link(body_exit, guard)
                frontier = exits
            else:
                raise TypeError(st)
        return frontier

    entry = new_node()
    walk(p.body, [entry], None, None)
    return nodes


def dep_degree(p: Program) -> int:
    nodes = _build_cfg(p)
    all_defs: list[tuple[int, str]] = []
    defs_at: dict[int, int] = {}
    for node in nodes:
        for var in node.defs:
            defs_at[node.index] = len(all_defs)
            all_defs.append((node.index, var))
    defs_of: dict[str, set[int]] = {}
    for di, (_, var) in enumerate(all_defs):
        defs_of.setdefault(var, set()).add(di)

    preds: dict[int, list[int]] = {n.index: [] for n in nodes}
    for node in nodes:
        for s in node.succ:
            preds[s].append(node.index)

    in_sets: dict[int, set[int]] = {n.index: set() for n in nodes}
    out_sets: dict[int, set[int]] = {n.index: set() for n in nodes}
    changed = True
    while changed:
        changed = False
        for node in nodes:
            new_in = set()
            for pr in preds[node.index]:
                new_in |= out_sets[pr]
            gen = {defs_at[node.index]} if node.defs else set()
            kill = set()
            for var in node.defs:
                kill |= defs_of.get(var, set()) - gen
            new_out = gen | (new_in - kill)
            if new_in != in_sets[node.index] or new_out != out_sets[node.index]:
                in_sets[node.index] = new_in
                out_sets[node.index] = new_out
                changed = True

    edges = 0
    for node in nodes:
        for var in node.uses:
            reaching = {d for d in in_sets[node.index] if all_defs[d][1] == var}
            edges += len(reaching)
    return edges


def static_metrics(p: Program) -> StaticMetrics:
    max_if, max_loop = nesting_depths(p)
    vocab, volume = halstead(p)
    loc = len(render_program(p).splitlines())
    return StaticMetrics(
        cc=cyclomatic_complexity(p),
        max_nested_if=max_if,
        max_nested_loop=max_loop,
        dep_degree=dep_degree(p),
        loc=loc,
        halstead_volume=volume,
        halstead_vocabulary=vocab,
    )


def dynamic_metrics(p: Program, trace: Trace) -> DynamicMetrics:
    if not trace.outcome.terminated:
        raise RequiresTermination(f"trace ended with {trace.outcome.value}")
    executed = 0
    prev: dict = {}
    for step in trace.steps:
        if step.rule in (5, 6) and step.post_state != prev:
            executed += 1
        prev = step.post_state
    stmt_len = sum(1 for s in trace.steps if s.rule in STATEMENT_RULES)
    return DynamicMetrics(
        taken_if_depth=trace.taken_if_depth,
        taken_loop_depth=trace.taken_loop_depth,
        executed_assignments=executed,
        trace_length=stmt_len,
        trace_length_micro=len(trace.steps),
    )


def profile(
    p: Program,
    step_limit: int = DEFAULT_STEP_LIMIT,
    granularity: str = "stmt",
) -> MetricProfile:
    stat = static_metrics(p)
    trace = run(p, step_limit)
    dyn = dynamic_metrics(p, trace)
    return MetricProfile(
        cc=stat.cc,
        max_nested_if=stat.max_nested_if,
        max_nested_loop=stat.max_nested_loop,
        taken_if_depth=dyn.taken_if_depth,
        taken_loop_depth=dyn.taken_loop_depth,
        dep_degree=stat.dep_degree,
        executed_assignments=dyn.executed_assignments,
        loc=stat.loc,
        halstead_volume=stat.halstead_volume,
        halstead_vocabulary=stat.halstead_vocabulary,
        trace_length=(
            dyn.trace_length if granularity == "stmt" else dyn.trace_length_micro
        ),
        trace_length_micro=dyn.trace_length_micro,
    )
