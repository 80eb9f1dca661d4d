"""Benchmark task curation: gold answers, processed statements, prompts.

Three tasks are generated from each program: final-state prediction, rule-
sequence prediction over sampled statements, and full execution-trace
prediction serialized as XML.  Gold data is always regenerated by running the
(transformed) program under the (mutated) interpreter, so any (style,
mutation) configuration is self-consistent by construction.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .documents import ebnf_text, semantics_text
from .mutation import (
    MutationKind,
    SemanticsStyle,
    operator_actions,
    profile_for,
    transform_program,
)
from .runtime import DEFAULT_STEP_LIMIT, Outcome, RequiresTermination, Trace, Value
from .sos import PopIf, initial_configuration, step
from .syntax import (
    Assign,
    Break,
    Continue,
    Decl,
    Halt,
    IfElse,
    Logic,
    Paren,
    Program,
    Rel,
    IntLit,
    Id,
    Arith,
    Stmt,
    While,
    iter_statements as _iter_statements,
    render_program,
)
from .tokens import Tok
from . import mutation as _mutation

TIMEOUT_WORD = "##timeout##"
ERROR_WORD = "##error##"


# ---------------------------------------------------------------------------
# Gold answers
# ---------------------------------------------------------------------------


def gold_final_state(
    p: Program,
    style: SemanticsStyle,
    kind: MutationKind = MutationKind.STANDARD,
    step_limit: int = DEFAULT_STEP_LIMIT,
) -> dict[str, Value] | str:
    """Final store of the transformed program under the mutated semantics,
    or the special timeout/error words."""
    trace = _mutation.run_with(
        transform_program(p, kind), style, kind, step_limit, collect=False
    )
    if trace.outcome is Outcome.STEP_LIMIT:
        return TIMEOUT_WORD
    if trace.outcome is Outcome.ERROR:
        return ERROR_WORD
    return trace.final_store


def _fmt_value(v: Value) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def trace_to_xml(trace: Trace) -> str:
    if not trace.steps:
        return "<answer></answer>"
    lines = ["<answer>"]
    for st in trace.steps:
        lines.append("    <step>")
        lines.append(f"        <rule>{st.rule}</rule>")
        lines.append("        <program_state>")
        for name, value in st.post_state.items():
            lines.append(f"            <{name}>{_fmt_value(value)}</{name}>")
        lines.append("        </program_state>")
        lines.append("    </step>")
    lines.append("</answer>")
    return "\n".join(lines)


def gold_trace_xml(
    p: Program,
    style: SemanticsStyle,
    kind: MutationKind = MutationKind.STANDARD,
    step_limit: int = DEFAULT_STEP_LIMIT,
) -> str:
    trace = _mutation.run_with(transform_program(p, kind), style, kind, step_limit)
    if not trace.outcome.terminated:
        raise RequiresTermination(f"gold trace ended with {trace.outcome.value}")
    return trace_to_xml(trace)


# ---------------------------------------------------------------------------
# Statement processing for rule-sequence questions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProcessedStatement:
    kind: str  # declaration | assignment | while | ifelse | break | continue | halt
    snippet: Program
    pre_state: dict[str, Value]
    pre_stack: tuple = ()  # snippets are self-contained, so always empty
    gold: tuple[int, ...] = ()

    def snippet_source(self, mutation: MutationKind = MutationKind.STANDARD) -> str:
        return render_program(
            transform_program(self.snippet, mutation), profile_for(mutation)
        )


class NoEnclosingLoop(Exception):
    """break/continue sampled outside any loop; impossible for parsed programs."""


_KIND_NAMES = {
    Decl: "declaration",
    Assign: "assignment",
    While: "while",
    IfElse: "ifelse",
    Break: "break",
    Continue: "continue",
    Halt: "halt",
}


def _fresh_breaker(sigma: dict[str, Value]) -> str:
    if "ble" not in sigma:
        return "ble"
    n = 1
    while f"ble{n}" in sigma:
        n += 1
    return f"ble{n}"


def process_statement(
    stmt: Stmt,
    sigma: dict[str, Value],
    enclosing_loop: While | None = None,
) -> ProcessedStatement:
    """Minimal self-contained snippet whose evaluation needs at most one
    state update beyond the recorded pre-state."""
    kind = _KIND_NAMES[type(stmt)]
    state = dict(sigma)
    if isinstance(stmt, (Decl, Assign, Halt)):
        snippet: tuple[Stmt, ...] = (stmt,)
    elif isinstance(stmt, While):
        snippet = (While(stmt.guard, (Halt(),)),)
    elif isinstance(stmt, IfElse):
        snippet = (IfElse(stmt.guard, (Halt(),), (Halt(),)),)
    elif isinstance(stmt, Break):
        if enclosing_loop is None:
            raise NoEnclosingLoop("break outside any loop")
        idx = enclosing_loop.body.index(stmt)
        snippet = (While(enclosing_loop.guard, enclosing_loop.body[idx:]),)
    elif isinstance(stmt, Continue):
        if enclosing_loop is None:
            raise NoEnclosingLoop("continue outside any loop")
        breaker = _fresh_breaker(state)
        guard = enclosing_loop.guard
        if isinstance(guard, Logic) and guard.op is Tok.OR:
            guard = Paren(guard)
        guard = Logic(Tok.AND, guard, Paren(Rel(Tok.NE, Id(breaker), IntLit(1))))
        idx = enclosing_loop.body.index(stmt)
        body = (Assign(breaker, Arith(Tok.ADD, Id(breaker), IntLit(1))),) + enclosing_loop.body[idx:]
        snippet = (While(guard, body),)
        state[breaker] = 0
    else:
        raise TypeError(stmt)
    return ProcessedStatement(kind, Program(snippet), state)


def gold_sequence(
    processed: ProcessedStatement,
    style: SemanticsStyle,
    kind: MutationKind = MutationKind.STANDARD,
    step_limit: int = 100_000,
) -> tuple[int, ...]:
    """Rule sequence for evaluating the (transformed) snippet from its
    recorded pre-state to a terminal configuration."""
    trace = _mutation.run_with(
        transform_program(processed.snippet, kind),
        style,
        kind,
        step_limit,
        store=dict(processed.pre_state),
    )
    return tuple(trace.rule_sequence())


# ---------------------------------------------------------------------------
# Collecting executed statement occurrences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StatementOccurrence:
    stmt: Stmt
    pre_state: dict[str, Value]
    enclosing_loop: While | None


_SOURCE_STMTS = (Decl, Assign, While, IfElse, Break, Continue, Halt)


def collect_occurrences(
    p: Program, step_limit: int = DEFAULT_STEP_LIMIT
) -> list[StatementOccurrence]:
    """Every statement execution point of the standard SOS run, with the
    store captured immediately before the statement's first step."""
    c = initial_configuration(p)
    out: list[StatementOccurrence] = []
    n = 0
    while not c.terminal and n < step_limit:
        focus = c.focus
        while focus is not None and isinstance(focus.head, PopIf):
            focus = focus.tail
        if focus is not None and isinstance(focus.head, _SOURCE_STMTS):
            loop = c.stack[0] if c.stack else None
            out.append(StatementOccurrence(focus.head, dict(c.store), loop))
        _, c = step(c)
        n += 1
    return out


def sample_pred_rule(
    p: Program,
    style: SemanticsStyle,
    kind: MutationKind = MutationKind.STANDARD,
    max_per_program: int = 10,
    seed: int | str = 0,
    step_limit: int = DEFAULT_STEP_LIMIT,
) -> list[ProcessedStatement]:
    """Group executed statements by identical gold rule sequences, keep one
    uniform representative per group, capped at max_per_program groups."""
    rng = random.Random(f"pred-rule:{seed}")
    groups: dict[tuple[int, ...], list[ProcessedStatement]] = {}
    order: list[tuple[int, ...]] = []
    for occ in collect_occurrences(p, step_limit):
        processed = process_statement(occ.stmt, occ.pre_state, occ.enclosing_loop)
        gold = gold_sequence(processed, style, kind)
        processed = ProcessedStatement(
            processed.kind, processed.snippet, processed.pre_state, (), gold
        )
        if gold not in groups:
            groups[gold] = []
            order.append(gold)
        groups[gold].append(processed)
    chosen_keys = order
    if len(chosen_keys) > max_per_program:
        chosen_keys = sorted(rng.sample(range(len(order)), max_per_program))
        chosen_keys = [order[i] for i in chosen_keys]
    return [rng.choice(groups[key]) for key in chosen_keys]


# ---------------------------------------------------------------------------
# Prompt rendering
# ---------------------------------------------------------------------------

_SOS_PREAMBLE = """You are an interpreter for a language called {language}. I will
describe the syntax for {language} in EBNF and its semantics using
small-step operational semantics. You will use this to execute a
{language} program. You will only use the rules described in the
semantics I provide. Assume all the rules in the semantics I give are
correct. A program has finished execution when one of the terminal
configurations ⟨ε,σ,χ⟩, ⟨{HALT},σ,χ⟩, ⟨{ERROR},σ,χ⟩ is reached.

Here is the syntax of {language} in EBNF
{syntax}

Here is the small-step operational semantics of {language}
{semantics}

Here is the {language} program
{program}
"""

_K_PREAMBLE = """You are an interpreter for a language called {language}. I will
describe the syntax and the semantics of the language using the
K-framework. You will use this to execute a {language} program. You
will only use the rules described in the semantics I provide. Assume
all the rules in the semantics I give are correct.

Here is the K-framework formalization of {language}
{semantics}

Here is the {language} program
{program}
"""

_NO_SEMANTICS_PREAMBLE = """You are an interpreter for my language called {language}.

Here is the {language} program
{program}
"""

_STATE_TASK = """
## TASK: predict the values of all the declared variables after executing the above program.
- If you think the program will never terminate, answer with the special word '##timeout##':

    <answer>##timeout##</answer>

- If you believe the program has an error or has undefined behavior, answer with the special word '##error##':

    <answer>##error##</answer>

- Otherwise, provide the predicted values of all the declared variables in the following format:

    <answer>[Your answer]</answer>

Here is one example:

** Program **
int a;
int b;
int ans;
int c;
a {ASSIGN_OP} 10;
b {ASSIGN_OP} 23;
c {ASSIGN_OP} 12;
ans {ASSIGN_OP} a {ADD_OP} b;

The final expected output is:
<answer>
    <a>10</a>
    <b>23</b>
    <c>12</c>
    <ans>33</ans>
</answer>
"""

_RULE_TASK_HEADER = """
## TASK:
For each question below, you'll be given:
1. A program
2. The program state (σ) (variable values) before executing the program
3. The control stack (χ) before executing the program

Assume that all necessary variables have been declared and have the values as
indicated in the provided program state.

You must:
- Correctly identify and apply the {rule_flavor} required to evaluate the program to completion
- List them in the correct order of application
"""

_RULE_TASK_FOOTER = """
## Questions:
{questions}

## Response Format:
Respond with an XML block structured as follows:

<ans>
    <answer id="1">
        <rule>1</rule>
        <rule>2</rule>
    ...
    </answer>
    <answer id="2">
        <rule>1</rule>
        <rule>2</rule>
    ...
    </answer>
    ...
</ans>

### Notes:
- Each <answer id="N"> element corresponds to the N-th question.
- Inside each <answer> block, list each semantic rule in the correct order using <rule> tags.

## Important Notes:
- The **order** of rules matters and should reflect the evaluation sequence.
- A single rule may be needed to be applied multiple times during evaluation.
- You must include **all** semantic rules required for complete execution.
- Base your analysis solely on the provided semantics, not on general programming knowledge.
"""

_TRACE_TASK = """
## TASK:
Given a program and its semantics, predict the execution trace. Your goal is to simulate execution, step by step of executing the program using the given {rule_flavor}. Do not skip any rules that is needed to evaluate the program. You will output your answer in the following format.

## Response Format:
Respond with an XML block structured as follows:

<answer>
    <step>
        <rule>1</rule>
        <program_state>
            <n>0</n>
            <sum>0</sum>
        </program_state>
    </step>
    <step>
        <rule>2</rule>
        <program_state>
            <n>100</n>
            <sum>0</sum>
        </program_state>
    </step>
  ...
</answer>

## Notes:
- Each '<step>' must correspond to **exactly one rule** that is needed to evaluate a statement in the given program.
- The '<rule>' must indicate a rule used in the evaluation of a statement.
- The '<program_state>' must represent the **entire program state immediately after** the execution of that rule.
- The program state must list **all variables currently in scope**, using the variable names as XML tags and their current values as tag content.
- Include variables even if they did not change.
- Do not skip any step or merge multiple steps into one.
- Do not skip any rules (including those used to reduce expressions and variables) that are needed to evaluate the program.
"""

_NON_COT = {
    "state": "Only write the answer. You **MUST** wrap your prediction with '<answer>' tags.",
    "rule": "Only output the '<ans>' XML block. Do not include any other content.",
    "trace": "Only output the '<answer>' XML block. Do not include explanations, comments, or any other text.",
}
_COT = (
    "Explain your reasoning step-by-step **before** answering. Wrap your reasoning in "
    "'<reason>' tags. Note that you **MUST** wrap your reasoning steps with '<reason>' "
    "tags and the prediction with '<answer>' tags."
)


def _meaning_surface(meaning: Tok, kind: MutationKind) -> str:
    """Surface lexeme that carries the given standard meaning under the
    mutated semantics."""
    actions = operator_actions(kind)
    for tok, action in actions.items():
        if action is meaning:
            return profile_for(kind).surface(tok)
    raise KeyError(meaning)


def _rule_example(style: SemanticsStyle, kind: MutationKind) -> str:
    """Worked one-shot example: the rule sequence is recomputed under the
    active configuration so the numbers stay correct for mutated semantics."""
    snippet = Program((While(Rel(Tok.LE, Id("n"), IntLit(0)), (Halt(),)),))
    processed = ProcessedStatement("while", snippet, {"n": 100, "sum": 0})
    gold = gold_sequence(processed, style, kind)
    program_text = processed.snippet_source(kind).rstrip("\n")
    rules_xml = "\n".join(f"        <rule>{r}</rule>" for r in gold)
    return f"""
Here is one example:
** Program:**
{program_text}

**Program state(σ) before execution:**
{{{{'n': 100, 'sum': 0}}}}

**Control stack(χ) before execution:**
 ε

Therefore, the final answer is:
<ans>
    <answer id="1">
{rules_xml}
    </answer>
</ans>
"""


@dataclass
class TaskInstance:
    instance_id: str
    task: str  # state | rule | trace
    style: str  # sos | k | none
    mutation: str  # std | swap | obf
    program_id: str
    program_source: str
    prompt: str
    gold: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, ensure_ascii=False)

    @staticmethod
    def from_json(line: str) -> "TaskInstance":
        return TaskInstance(**json.loads(line))


def _preamble(task: str, style: SemanticsStyle | None, kind: MutationKind,
              program_text: str, language: str) -> str:
    if style is None:
        base = _NO_SEMANTICS_PREAMBLE
        filled = base.replace("{language}", language)
        return filled.replace("{program}", program_text)
    if style is SemanticsStyle.SOS:
        base = _SOS_PREAMBLE
    else:
        base = _K_PREAMBLE
    filled = base.replace("{language}", language)
    filled = filled.replace("{HALT}", profile_for(kind).surface(Tok.HALT))
    filled = filled.replace("{ERROR}", "ERROR")
    filled = filled.replace("{syntax}", ebnf_text(kind))
    filled = filled.replace("{semantics}", semantics_text(style, kind))
    return filled.replace("{program}", program_text)


def render_prompt(
    task: str,
    program_text: str,
    style: SemanticsStyle | None,
    kind: MutationKind = MutationKind.STANDARD,
    cot: bool = False,
    questions: str = "",
    language: str = "IMP",
) -> str:
    """Fill the task template for the given configuration."""
    parts = [_preamble(task, style, kind, program_text, language)]
    if task == "state":
        body = _STATE_TASK.replace(
            "{ASSIGN_OP}", _meaning_surface(Tok.ASSIGN, kind)
        ).replace("{ADD_OP}", _meaning_surface(Tok.ADD, kind))
        parts.append(body)
    elif task == "rule":
        flavor = (
            "small-step operational semantic rules"
            if style is SemanticsStyle.SOS
            else "K-semantic rules"
        )
        parts.append(_RULE_TASK_HEADER.replace("{rule_flavor}", flavor))
        parts.append(_rule_example(style or SemanticsStyle.SOS, kind))
        parts.append(_RULE_TASK_FOOTER.replace("{questions}", questions))
    elif task == "trace":
        flavor = (
            "small-step operational semantics rules"
            if style is SemanticsStyle.SOS
            else "K-framework semantics rules"
        )
        parts.append(_TRACE_TASK.replace("{rule_flavor}", flavor))
    else:
        raise ValueError(task)
    parts.append(_COT if cot else _NON_COT[task])
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# Dataset assembly
# ---------------------------------------------------------------------------


def _questions_block(samples: list[ProcessedStatement], kind: MutationKind) -> str:
    blocks = []
    for i, ps in enumerate(samples, start=1):
        sigma = ", ".join(f"'{k}': {_fmt_value(v)}" for k, v in ps.pre_state.items())
        blocks.append(
            f"Question {i}:\n"
            f"** Program:**\n{ps.snippet_source(kind).rstrip()}\n\n"
            f"**Program state(σ) before execution:**\n{{{sigma}}}\n\n"
            f"**Control stack(χ) before execution:**\n ε\n"
        )
    return "\n".join(blocks)


def build_instance(
    program_id: str,
    p: Program,
    task: str,
    style: SemanticsStyle | None,
    kind: MutationKind = MutationKind.STANDARD,
    cot: bool = False,
    seed: int | str = 0,
    step_limit: int = DEFAULT_STEP_LIMIT,
    max_questions: int = 10,
) -> TaskInstance:
    style_name = style.value if style is not None else "none"
    program_text = render_program(transform_program(p, kind), profile_for(kind))
    gold: dict
    questions = ""
    if task == "state":
        result = gold_final_state(p, style or SemanticsStyle.SOS, kind, step_limit)
        if isinstance(result, str):
            gold = {"kind": "special", "word": result}
        else:
            assigned = sorted(
                {st.name for st in _iter_statements(p) if isinstance(st, Assign)}
            )
            gold = {
                "kind": "state",
                "state": {k: _fmt_value(v) for k, v in result.items()},
                "assigned": [v for v in assigned if v in result],
            }
    elif task == "rule":
        if style is None:
            raise ValueError("rule task requires a semantics style")
        samples = sample_pred_rule(p, style, kind, max_questions, seed, step_limit)
        gold = {
            "kind": "rule",
            "questions": [
                {
                    "id": i + 1,
                    "statement_kind": ps.kind,
                    "program": ps.snippet_source(kind),
                    "pre_state": {k: _fmt_value(v) for k, v in ps.pre_state.items()},
                    "control_stack": [],
                    "gold": list(ps.gold),
                }
                for i, ps in enumerate(samples)
            ],
        }
        questions = _questions_block(samples, kind)
    elif task == "trace":
        if style is None:
            raise ValueError("trace task requires a semantics style")
        gold = {"kind": "trace", "xml": gold_trace_xml(p, style, kind, step_limit)}
    else:
        raise ValueError(task)
    prompt = render_prompt(task, program_text, style, kind, cot, questions)
    instance_id = f"{program_id}.{task}.{style_name}.{kind.value}" + (".cot" if cot else "")
    return TaskInstance(
        instance_id, task, style_name, kind.value, program_id, program_text, prompt, gold
    )
