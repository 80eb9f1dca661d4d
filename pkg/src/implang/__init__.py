"""IMP language stack: parser, dual interpreters, fuzzer, metrics, tasks."""

from .tokens import LexemeProfile, OBFUSCATED, STANDARD, Tok
from .syntax import (
    ParseError,
    Program,
    UnknownLexeme,
    parse,
    parse_program,
    render_program,
    tokenize,
)
from .runtime import DEFAULT_STEP_LIMIT, Outcome, Trace, TraceStep
from .sos import applicable_rule, debug_lines, run, stack_pop, stack_push, stack_top, step
from .kengine import k_applicable_rule, k_run, k_step
from .mutation import (
    MutationKind,
    OPERATOR_SWAP,
    SemanticsStyle,
    check_equivalence,
    run_with,
    transform_program,
)
from .documents import ebnf_text, k_semantics_text, semantics_text, sos_semantics_text
from .fuzzer import (
    FuzzConfig,
    LoopBreakerPlan,
    generate_corpus,
    instrument_loop,
    legality_mask,
    sample_program,
    taper_probabilities,
    validate_termination,
)
from .metrics import MetricProfile, dynamic_metrics, profile, static_metrics
from .tasks import (
    ProcessedStatement,
    TaskInstance,
    build_instance,
    gold_final_state,
    gold_trace_xml,
    process_statement,
    render_prompt,
    sample_pred_rule,
)
from .scoring import (
    ParsedAnswer,
    ScoreReport,
    first_mismatch_stats,
    gold_response_text,
    parse_rule_answer,
    parse_state_answer,
    parse_trace_answer,
    score_batch,
    score_pred_rule,
    score_pred_state,
    score_pred_trace,
)

__all__ = [name for name in dir() if not name.startswith("_")]
