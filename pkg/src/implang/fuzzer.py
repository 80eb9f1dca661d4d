"""Depth-tapered, semantics-aware random program generator.

Every generated ``while`` is instrumented with a private, monotonically
updated loop-breaker variable whose bound is conjoined with the loop
predicate, so almost every sample terminates.  Statement choice follows the
base probability table until the block depth passes the minimum, after which
a cosine decay drives the chance of new control flow to zero at the maximum
depth.
"""
from __future__ import annotations

import json
import math
import random
import string
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .runtime import DEFAULT_STEP_LIMIT
from .sos import run
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
    IntLit,
    Logic,
    Neg,
    Not,
    Paren,
    Program,
    Rel,
    Stmt,
    While,
    render_program,
)
from .tokens import Tok

KINDS = ("assign", "while", "if", "break", "continue", "halt")


@dataclass(frozen=True)
class FuzzConfig:
    min_stmts_per_block: int = 1
    max_stmts_per_block: int = 3
    min_block_depth: int = 5
    max_block_depth: int = 10
    min_variables: int = 5
    max_variables: int = 10
    probabilities: dict[str, float] = field(
        default_factory=lambda: {
            "assign": 0.4,
            "while": 0.3,
            "if": 0.2,
            "break": 0.09,
            "continue": 0.005,
            "halt": 0.005,
        }
    )
    max_arith_terms: int = 6
    max_arith_var_terms: int = 3
    max_bool_terms: int = 4

    def __post_init__(self) -> None:
        total = sum(self.probabilities.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"base probabilities sum to {total}, expected 1")
        for name in ("min_stmts_per_block", "max_stmts_per_block", "min_block_depth",
                     "max_block_depth", "min_variables", "max_variables",
                     "max_arith_terms", "max_arith_var_terms", "max_bool_terms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class LoopBreakerPlan:
    name: str
    increment: bool
    initial: int
    final: int
    step: int

    def guard_conjunct(self) -> Rel:
        op = Tok.LT if self.increment else Tok.GT
        return Rel(op, Id(self.name), _int_expr(self.final))

    def update_stmt(self) -> Assign:
        op = Tok.ADD if self.increment else Tok.SUB
        return Assign(self.name, Arith(op, Id(self.name), IntLit(self.step)))

    def prologue(self) -> list[Stmt]:
        return [Decl(self.name, Tok.INT), Assign(self.name, _int_expr(self.initial))]


def _int_expr(v: int) -> Expr:
    return IntLit(v) if v >= 0 else Neg(IntLit(-v))


def taper_probabilities(
    base: dict[str, float], depth: int, min_depth: int, max_depth: int
) -> dict[str, float]:
    """Scale while/if mass by the cosine decay, handing the removed mass to
    the remaining statement kinds in proportion to their probability."""
    if min_depth > depth:
        raise ValueError("depth below min_depth")
    if depth <= min_depth:
        return dict(base)
    if depth >= max_depth:
        scale = 0.0
    else:
        frac = (depth - min_depth) / (max_depth - min_depth)
        scale = 0.5 * (1.0 + math.cos(math.pi * frac))
    out = dict(base)
    removed = 0.0
    for kind in ("while", "if"):
        if kind in out:
            removed += out[kind] * (1.0 - scale)
            out[kind] *= scale
    others = [k for k in out if k not in ("while", "if")]
    others_sum = sum(out[k] for k in others)
    if others_sum > 0 and removed > 0:
        for k in others:
            out[k] += removed * out[k] / others_sum
    return out


def legality_mask(in_loop: bool) -> frozenset[str]:
    """Statement kinds allowed in the current generation context."""
    if in_loop:
        return frozenset(KINDS)
    return frozenset(k for k in KINDS if k not in ("break", "continue"))


def statement_distribution(
    cfg: FuzzConfig, depth: int, in_loop: bool
) -> dict[str, float]:
    """Masked-and-renormalized base table, then depth taper."""
    allowed = legality_mask(in_loop)
    masked = {k: v for k, v in cfg.probabilities.items() if k in allowed}
    total = sum(masked.values())
    masked = {k: v / total for k, v in masked.items()}
    depth_clamped = max(depth, cfg.min_block_depth)
    return taper_probabilities(
        masked, depth_clamped, cfg.min_block_depth, cfg.max_block_depth
    )


def sample_statement_kind(
    cfg: FuzzConfig, depth: int, in_loop: bool, rng: random.Random
) -> str:
    dist = statement_distribution(cfg, depth, in_loop)
    roll = rng.random()
    acc = 0.0
    for kind in KINDS:
        if kind in dist:
            acc += dist[kind]
            if roll < acc:
                return kind
    return "assign"


class _Generator:
    def __init__(self, cfg: FuzzConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.variables: list[str] = []
        self.breakers: list[LoopBreakerPlan] = []

    # -- expressions --------------------------------------------------------

    def arith_term(self, allow_var: bool) -> Expr:
        if allow_var and self.rng.random() < 0.5:
            return Id(self.rng.choice(self.variables))
        return IntLit(self.rng.randrange(10))

    def arith_expr(self) -> Expr:
        n_terms = self.rng.randint(1, self.cfg.max_arith_terms)
        var_budget = self.cfg.max_arith_var_terms
        ops: list[Tok] = [
            self.rng.choice((Tok.ADD, Tok.SUB, Tok.MUL, Tok.DIV, Tok.MOD))
            for _ in range(n_terms - 1)
        ]
        terms: list[Expr] = []
        for i in range(n_terms):
            # Divisors are nonzero literals so / and % cannot fault.
            if i > 0 and ops[i - 1] in (Tok.DIV, Tok.MOD):
                terms.append(IntLit(self.rng.randint(1, 9)))
                continue
            term = self.arith_term(var_budget > 0)
            if isinstance(term, Id):
                var_budget -= 1
            terms.append(term)
        return build_arith_chain(terms, ops)

    def rel_atom(self) -> Expr:
        op = self.rng.choice((Tok.LT, Tok.LE, Tok.GT, Tok.GE, Tok.EQ, Tok.NE))
        atom = Rel(op, self.arith_term(True), self.arith_term(True))
        if self.rng.random() < 0.15:
            return Not(Paren(atom))
        return atom

    def bool_expr(self) -> Expr:
        n = self.rng.randint(1, self.cfg.max_bool_terms)
        atoms = [self.rel_atom() for _ in range(n)]
        ops = [self.rng.choice((Tok.AND, Tok.OR)) for _ in range(n - 1)]
        return build_bool_chain(atoms, ops)

    # -- statements ---------------------------------------------------------

    def block(self, depth: int, in_loop: bool) -> tuple[Stmt, ...]:
        n = self.rng.randint(self.cfg.min_stmts_per_block, self.cfg.max_stmts_per_block)
        out: list[Stmt] = []
        for _ in range(n):
            kind = sample_statement_kind(self.cfg, depth, in_loop, self.rng)
            out.append(self.statement(kind, depth, in_loop))
        return tuple(out)

    def statement(self, kind: str, depth: int, in_loop: bool) -> Stmt:
        if kind == "assign":
            return Assign(self.rng.choice(self.variables), self.arith_expr())
        if kind == "while":
            body = self.block(depth + 1, True)
            return self.instrument(While(self.bool_expr(), body))
        if kind == "if":
            return IfElse(
                self.bool_expr(),
                self.block(depth + 1, in_loop),
                self.block(depth + 1, in_loop),
            )
        if kind == "break":
            return Break()
        if kind == "continue":
            return Continue()
        return Halt()

    def instrument(self, loop: While) -> While:
        loop, plan = instrument_loop(loop, self.rng, index=len(self.breakers))
        self.breakers.append(plan)
        return loop


def build_arith_chain(terms: list[Expr], ops: list[Tok]) -> Expr:
    """Fold a term/operator chain into the same tree the parser would build
    (multiplicative operators bind tighter, everything left-associative)."""
    assert len(terms) == len(ops) + 1
    nodes = [terms[0]]
    add_ops: list[Tok] = []
    for op, term in zip(ops, terms[1:]):
        if op in (Tok.MUL, Tok.DIV, Tok.MOD):
            nodes[-1] = Arith(op, nodes[-1], term)
        else:
            add_ops.append(op)
            nodes.append(term)
    expr = nodes[0]
    for op, node in zip(add_ops, nodes[1:]):
        expr = Arith(op, expr, node)
    return expr


def build_bool_chain(atoms: list[Expr], ops: list[Tok]) -> Expr:
    """Left-associative fold with && binding tighter than ||."""
    assert len(atoms) == len(ops) + 1
    nodes = [atoms[0]]
    or_ops: list[Tok] = []
    for op, atom in zip(ops, atoms[1:]):
        if op is Tok.AND:
            nodes[-1] = Logic(Tok.AND, nodes[-1], atom)
        else:
            or_ops.append(op)
            nodes.append(atom)
    expr = nodes[0]
    for op, node in zip(or_ops, nodes[1:]):
        expr = Logic(Tok.OR, expr, node)
    return expr


def _can_skip_rest(st: Stmt) -> bool:
    """Whether this statement can jump past the rest of the current
    iteration.  break/continue inside a nested while bind to that loop, and a
    halt ends the whole program, so neither threatens this loop's breaker."""
    if isinstance(st, (Break, Continue)):
        return True
    if isinstance(st, IfElse):
        return any(_can_skip_rest(s) for s in st.then_body + st.else_body)
    return False


def instrument_loop(
    loop: While, rng: random.Random, index: int = 0
) -> tuple[While, LoopBreakerPlan]:
    """Conjoin a monotone bound with the guard and place the update towards
    the end of the body: at the latest position every iteration still
    reaches, so break/continue cannot starve the breaker.  The breaker's
    declaration and initial assignment are returned on the plan for insertion
    after the variable prologue."""
    increment = rng.random() < 0.5
    a, b = rng.randint(-20, 20), rng.randint(-20, 20)
    initial, final = (min(a, b), max(a, b)) if increment else (max(a, b), min(a, b))
    step = rng.randint(1, max(1, abs(final) // 3))
    plan = LoopBreakerPlan(f"ble{index}", increment, initial, final, step)

    cond = loop.guard
    if isinstance(cond, Logic) and cond.op is Tok.OR:
        cond = Paren(cond)
    guard = Logic(Tok.AND, cond, plan.guard_conjunct())
    slot = len(loop.body)
    for i, st in enumerate(loop.body):
        if _can_skip_rest(st):
            slot = i
            break
    body = loop.body[:slot] + (plan.update_stmt(),) + loop.body[slot:]
    return While(guard, body), plan


def sample_program(cfg: FuzzConfig, seed) -> Program:
    """Deterministic in (cfg, seed)."""
    rng = random.Random(seed)
    gen = _Generator(cfg, rng)

    n_vars = rng.randint(cfg.min_variables, cfg.max_variables)
    letters = list(string.ascii_lowercase) + list(string.ascii_uppercase)
    while len(gen.variables) < n_vars:
        name = rng.choice(letters)
        if name not in gen.variables:
            gen.variables.append(name)

    decls: list[Stmt] = [Decl(v, Tok.INT) for v in gen.variables]
    inits: list[Stmt] = [Assign(v, gen.arith_expr()) for v in gen.variables]
    body = gen.block(depth=1, in_loop=False)

    breaker_prologue: list[Stmt] = []
    for plan in gen.breakers:
        breaker_prologue.extend(plan.prologue())
    return Program(tuple(decls + inits + breaker_prologue + list(body)))


def validate_termination(p: Program, step_limit: int = DEFAULT_STEP_LIMIT) -> bool:
    """Accept iff the SOS run ends Normal or Halted within the limit."""
    trace = run(p, step_limit, collect=False)
    return trace.outcome.terminated


@dataclass
class CorpusEntry:
    name: str
    seed: str
    attempts: int
    outcome: str
    accepted: bool
    steps: int


def generate_corpus(
    cfg: FuzzConfig,
    count: int,
    seed: int,
    out_dir: str | Path,
    step_limit: int = DEFAULT_STEP_LIMIT,
    max_attempts: int = 25,
) -> dict:
    """Write fuzz_<n>.imp files plus a JSON manifest; rejected samples are
    regenerated from derived seeds and the rejection rate recorded."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries: list[CorpusEntry] = []
    rejected = 0
    total_raw = 0
    for i in range(count):
        accepted = False
        program = None
        used_seed = ""
        attempts = 0
        outcome = ""
        n_steps = 0
        for attempt in range(max_attempts):
            attempts += 1
            total_raw += 1
            used_seed = f"{seed}:{i}:{attempt}"
            program = sample_program(cfg, used_seed)
            trace = run(program, step_limit, collect=False)
            outcome = trace.outcome.value
            n_steps = trace.n_steps
            if trace.outcome.terminated:
                accepted = True
                break
            rejected += 1
        name = f"fuzz_{i}.imp"
        (out / name).write_text(render_program(program), encoding="utf-8")
        entries.append(CorpusEntry(name, used_seed, attempts, outcome, accepted, n_steps))
    manifest = {
        "seed": seed,
        "count": count,
        "config": asdict(cfg),
        "step_limit": step_limit,
        "raw_samples": total_raw,
        "rejected": rejected,
        "rejection_rate": (rejected / total_raw) if total_raw else 0.0,
        "programs": [asdict(e) for e in entries],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    return manifest
