from __future__ import annotations

from implang.mutation import MutationKind, SemanticsStyle
from implang.syntax import (
    Assign,
    Break,
    Continue,
    Halt,
    IfElse,
    IntLit,
    Id,
    Logic,
    Rel,
    While,
    parse,
    render_program,
)
from implang.tasks import (
    ERROR_WORD,
    TIMEOUT_WORD,
    build_instance,
    collect_occurrences,
    gold_final_state,
    gold_sequence,
    gold_trace_xml,
    process_statement,
    render_prompt,
    sample_pred_rule,
)
from implang.tokens import Tok


def _steps(rules_and_states):
    parts = []
    for rule, state in rules_and_states:
        rows = "\n".join(
            f"            <{k}>{v}</{k}>" for k, v in state.items()
        )
        parts.append(
            "    <step>\n"
            f"        <rule>{rule}</rule>\n"
            "        <program_state>\n"
            f"{rows}\n"
            "        </program_state>\n"
            "    </step>"
        )
    return "<answer>\n" + "\n".join(parts) + "\n</answer>"


def test_trace_example_sos_xml_exact(trace_example):
    both = {"i": 0, "j": 0}
    expected = _steps(
        [(3, {"i": 0})] + [(r, both) for r in (3, 5, 67, 68, 28, 1, 30, 70, 78)]
    )
    assert gold_trace_xml(trace_example, SemanticsStyle.SOS) == expected


def test_trace_example_k_xml_exact(trace_example):
    both = {"i": 0, "j": 0}
    expected = _steps(
        [(36, {"i": 0})] + [(r, both) for r in (36, 21, 24, 25, 1, 12, 22, 26)]
    )
    assert gold_trace_xml(trace_example, SemanticsStyle.K) == expected


def test_empty_program_trace_xml():
    assert gold_trace_xml(parse(""), SemanticsStyle.SOS) == "<answer></answer>"


def test_gold_final_state_values(mbpp_program):
    gold = gold_final_state(mbpp_program, SemanticsStyle.SOS)
    assert gold == {"l": 3, "r": 8, "sum": 18, "i": 9}


def test_gold_final_state_specials():
    nonterm = parse("int x;\nwhile (true) { x = x + 1; };\n")
    assert gold_final_state(nonterm, SemanticsStyle.SOS, step_limit=2_000) == TIMEOUT_WORD
    failing = parse("int x;\nx = 1 / 0;\n")
    assert gold_final_state(failing, SemanticsStyle.SOS) == ERROR_WORD
    assert gold_final_state(failing, SemanticsStyle.K) == ERROR_WORD


# ---------------------------------------------------------------------------
# Statement processing (the published table of snippet edits)
# ---------------------------------------------------------------------------


def test_process_declaration_assignment_halt_are_unchanged():
    sigma = {"a": 1}
    for stmt in (Assign("a", IntLit(2)), Halt()):
        ps = process_statement(stmt, sigma, None)
        assert ps.snippet.body == (stmt,)
        assert ps.pre_state == sigma


def test_process_while_replaces_body_with_halt():
    loop = While(Rel(Tok.LT, Id("a"), IntLit(3)), (Assign("a", IntLit(1)), Break()))
    ps = process_statement(loop, {"a": 0}, None)
    assert ps.snippet.body == (While(loop.guard, (Halt(),)),)


def test_process_ifelse_replaces_both_bodies():
    stmt = IfElse(Rel(Tok.LT, Id("a"), IntLit(3)), (Assign("a", IntLit(1)),), (Break(),))
    ps = process_statement(stmt, {"a": 0}, None)
    assert ps.snippet.body == (IfElse(stmt.guard, (Halt(),), (Halt(),)),)


def test_process_break_trims_preceding_statements():
    brk = Break()
    loop = While(
        Rel(Tok.LT, Id("a"), IntLit(3)),
        (Assign("a", IntLit(1)), brk, Assign("a", IntLit(2))),
    )
    ps = process_statement(brk, {"a": 0}, loop)
    snippet_loop = ps.snippet.body[0]
    assert snippet_loop.guard == loop.guard
    assert snippet_loop.body == (brk, Assign("a", IntLit(2)))


def test_process_continue_injects_one_iteration_bound():
    cont = Continue()
    loop = While(
        Rel(Tok.LT, Id("a"), IntLit(3)),
        (Assign("a", IntLit(1)), cont, Assign("a", IntLit(2))),
    )
    ps = process_statement(cont, {"a": 0}, loop)
    snippet_loop = ps.snippet.body[0]
    assert isinstance(snippet_loop.guard, Logic) and snippet_loop.guard.op is Tok.AND
    rendered = render_program(ps.snippet)
    assert "(ble != 1)" in rendered
    assert snippet_loop.body[0] == Assign("ble", parse("x = ble + 1;").body[0].expr)
    assert snippet_loop.body[1] is cont
    assert ps.pre_state == {"a": 0, "ble": 0}
    # the processed loop executes exactly one iteration
    gold = gold_sequence(ps, SemanticsStyle.SOS)
    trace_rules = list(gold)
    assert trace_rules.count(70) == 1  # body entered exactly once


def test_rule_example_golds(rule_example):
    loop = rule_example.body[0]
    ps = process_statement(loop, {"n": 100, "sum": 0}, None)
    processed = process_statement(loop, {"n": 100, "sum": 0}, None)
    assert gold_sequence(processed, SemanticsStyle.SOS) == (67, 68, 32, 1, 35, 69)
    assert gold_sequence(processed, SemanticsStyle.K) == (24, 25, 1, 13, 23, 27)
    # processing replaced the body with halt (it already was halt)
    assert ps.snippet.body[0].body == (Halt(),)


def test_pred_rule_grouping_identical_sequences():
    # two textually different assignments with identical rule sequences
    src = "int a;\nint b;\na = 1;\nb = 2;\n"
    samples = sample_pred_rule(parse(src), SemanticsStyle.SOS, seed=0)
    kinds = sorted(ps.kind for ps in samples)
    assert kinds == ["assignment", "declaration"]  # grouped down to 2


def test_pred_rule_distinct_sequences_stay_separate():
    src = "int a;\na = 1;\na = a + 1;\nhalt;\n"
    samples = sample_pred_rule(parse(src), SemanticsStyle.SOS, seed=0)
    golds = {ps.gold for ps in samples}
    assert len(golds) == len(samples) == 4


def test_pred_rule_cap_at_ten():
    stmts = ["int v0;"]
    for i in range(14):
        stmts.append(f"v0 = v0 {'+' if i % 2 else '-'} " + " + ".join(["1"] * (i + 1)) + ";")
    p = parse("\n".join(stmts))
    samples = sample_pred_rule(p, SemanticsStyle.SOS, max_per_program=10, seed=3)
    assert len(samples) == 10


def test_pred_rule_determinism():
    p = parse("int a;\na = 1;\na = a + 2;\nwhile (a > 0) { a = a - 1; };\n")
    first = sample_pred_rule(p, SemanticsStyle.SOS, seed=9)
    second = sample_pred_rule(p, SemanticsStyle.SOS, seed=9)
    assert [ps.gold for ps in first] == [ps.gold for ps in second]


def test_collect_occurrences_records_pre_states():
    p = parse("int a;\na = 1;\na = a + 1;\n")
    occs = collect_occurrences(p)
    assert [type(o.stmt).__name__ for o in occs] == ["Decl", "Assign", "Assign"]
    assert occs[1].pre_state == {"a": 0}
    assert occs[2].pre_state == {"a": 1}


# ---------------------------------------------------------------------------
# Prompts
# ---------------------------------------------------------------------------


def test_sos_prompt_contains_terminal_configuration_sentence(mbpp_program):
    prompt = render_prompt(
        "state", render_program(mbpp_program), SemanticsStyle.SOS
    )
    assert "⟨ε,σ,χ⟩" in prompt
    assert "Here is the syntax of IMP in EBNF" in prompt
    assert "##timeout##" in prompt and "##error##" in prompt


def test_no_semantics_prompt_omits_syntax_and_semantics(mbpp_program):
    prompt = render_prompt("state", render_program(mbpp_program), None)
    assert "EBNF" not in prompt
    assert "semantics" not in prompt.lower()
    assert "interpreter for my language" in prompt


def test_obf_prompt_uses_codepoint_for_addition(mbpp_program):
    prompt = render_prompt(
        "state",
        render_program(mbpp_program),
        SemanticsStyle.SOS,
        MutationKind.KEYWORD_OBF,
    )
    assert "ans \U00010531 a \U00010550 b;" in prompt


def test_swap_prompt_example_preserves_meaning(mbpp_program):
    # {ADD_OP} is the surface that MEANS addition: "-" under the swap
    prompt = render_prompt(
        "state",
        render_program(mbpp_program),
        SemanticsStyle.SOS,
        MutationKind.KEYWORD_SWAP,
    )
    assert "ans = a - b;" in prompt
    assert "<ans>33</ans>" in prompt


def test_rule_prompt_embeds_recomputed_example():
    prompt = render_prompt("rule", "", SemanticsStyle.SOS, questions="Question 1: ...")
    for rule in (67, 68, 32, 1, 35, 69):
        assert f"<rule>{rule}</rule>" in prompt
    k_prompt = render_prompt("rule", "", SemanticsStyle.K, questions="q")
    for rule in (24, 25, 1, 13, 23, 27):
        assert f"<rule>{rule}</rule>" in k_prompt


def test_cot_suffix():
    prompt = render_prompt("trace", "halt;", SemanticsStyle.SOS, cot=True)
    assert "<reason>" in prompt


def test_build_instance_state(mbpp_program):
    inst = build_instance("mbpp_962", mbpp_program, "state", SemanticsStyle.SOS)
    assert inst.gold["kind"] == "state"
    assert inst.gold["state"]["sum"] == "18"
    assert set(inst.gold["assigned"]) == {"l", "r", "sum", "i"}
    assert inst.instance_id == "mbpp_962.state.sos.std"


def test_build_instance_rule_golds_rerun(mbpp_program):
    inst = build_instance("mbpp_962", mbpp_program, "rule", SemanticsStyle.SOS, seed=4)
    assert 1 <= len(inst.gold["questions"]) <= 10
    for q in inst.gold["questions"]:
        snippet = parse(q["program"])
        store = {
            k: (v == "true" if v in ("true", "false") else int(v))
            for k, v in q["pre_state"].items()
        }
        from implang.sos import run

        trace = run(snippet, 100_000, store=store)
        assert trace.rule_sequence() == q["gold"]


def test_build_instance_trace_gold_matches_direct(mbpp_program):
    inst = build_instance("mbpp_962", mbpp_program, "trace", SemanticsStyle.K)
    assert inst.gold["xml"] == gold_trace_xml(mbpp_program, SemanticsStyle.K)
    assert inst.prompt.count("<answer>") >= 1


def test_regeneration_determinism(mbpp_program):
    a = build_instance("x", mbpp_program, "rule", SemanticsStyle.SOS, seed=12)
    b = build_instance("x", mbpp_program, "rule", SemanticsStyle.SOS, seed=12)
    assert a.prompt == b.prompt and a.gold == b.gold


def test_pred_state_gold_equals_final_trace_state(mbpp_program):
    state_inst = build_instance("m", mbpp_program, "state", SemanticsStyle.SOS)
    trace_inst = build_instance("m", mbpp_program, "trace", SemanticsStyle.SOS)
    last_state = trace_inst.gold["xml"].rsplit("<program_state>", 1)[1]
    for var, value in state_inst.gold["state"].items():
        assert f"<{var}>{value}</{var}>" in last_state
