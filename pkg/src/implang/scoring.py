"""Response parsing and evaluation metrics.

Answers are extracted from the outermost <answer>/<ans> block of the raw
model response; malformed responses score zero but never abort a batch.
Exact-match is strict: extra variables, missing steps, or reordered rules all
fail.  The first-point-of-mismatch statistics attribute each wrong rule
sequence to the gold rule at the earliest divergence.
"""
from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from xml.etree import ElementTree

from .kengine import k_rule_category
from .sos import rule_category
from .tasks import ERROR_WORD, TIMEOUT_WORD, TaskInstance


@dataclass(frozen=True)
class ParsedAnswer:
    kind: str  # state | timeout | error | rule | trace | malformed
    state: dict[str, str] | None = None
    sequences: dict[int, list[int]] | None = None
    steps: list[tuple[int, dict[str, str]]] | None = None
    reason: str = ""


def _outermost(text: str, tag: str) -> str | None:
    start = text.find(f"<{tag}>")
    end = text.rfind(f"</{tag}>")
    if start < 0 or end < 0 or end < start:
        return None
    return text[start : end + len(tag) + 3]


def _normalize_int(text: str) -> str | None:
    cleaned = text.strip()
    if cleaned.startswith("+"):
        cleaned = cleaned[1:]
    if cleaned in ("true", "false"):
        return cleaned
    if re.fullmatch(r"-?\d+", cleaned):
        return str(int(cleaned))
    return None


def parse_state_answer(response: str) -> ParsedAnswer:
    block = _outermost(response, "answer")
    if block is None:
        return ParsedAnswer("malformed", reason="no <answer> block")
    inner = block[len("<answer>") : -len("</answer>")].strip()
    if inner == TIMEOUT_WORD:
        return ParsedAnswer("timeout")
    if inner == ERROR_WORD:
        return ParsedAnswer("error")
    try:
        root = ElementTree.fromstring(block)
    except ElementTree.ParseError as exc:
        return ParsedAnswer("malformed", reason=str(exc))
    state: dict[str, str] = {}
    for child in root:
        value = _normalize_int(child.text or "")
        if value is None:
            return ParsedAnswer("malformed", reason=f"bad value for {child.tag}")
        state[child.tag] = value
    return ParsedAnswer("state", state=state)


def parse_rule_answer(response: str) -> ParsedAnswer:
    block = _outermost(response, "ans")
    if block is None:
        return ParsedAnswer("malformed", reason="no <ans> block")
    try:
        root = ElementTree.fromstring(block)
    except ElementTree.ParseError as exc:
        return ParsedAnswer("malformed", reason=str(exc))
    sequences: dict[int, list[int]] = {}
    for answer in root.findall("answer"):
        try:
            qid = int(answer.attrib.get("id", ""))
        except ValueError:
            return ParsedAnswer("malformed", reason="non-integer answer id")
        rules = []
        for rule in answer.findall("rule"):
            value = _normalize_int(rule.text or "")
            if value is None or value in ("true", "false"):
                return ParsedAnswer("malformed", reason="non-integer rule")
            rules.append(int(value))
        sequences[qid] = rules
    return ParsedAnswer("rule", sequences=sequences)


def parse_trace_answer(response: str) -> ParsedAnswer:
    block = _outermost(response, "answer")
    if block is None:
        return ParsedAnswer("malformed", reason="no <answer> block")
    try:
        root = ElementTree.fromstring(block)
    except ElementTree.ParseError as exc:
        return ParsedAnswer("malformed", reason=str(exc))
    steps: list[tuple[int, dict[str, str]]] = []
    for step in root.findall("step"):
        rule = step.find("rule")
        state_el = step.find("program_state")
        if rule is None or state_el is None:
            return ParsedAnswer("malformed", reason="step missing rule/program_state")
        rule_text = _normalize_int(rule.text or "")
        if rule_text is None or rule_text in ("true", "false"):
            return ParsedAnswer("malformed", reason="non-integer rule")
        state: dict[str, str] = {}
        for child in state_el:
            value = _normalize_int(child.text or "")
            if value is None:
                return ParsedAnswer("malformed", reason=f"bad value for {child.tag}")
            state[child.tag] = value
        steps.append((int(rule_text), state))
    return ParsedAnswer("trace", steps=steps)


# ---------------------------------------------------------------------------
# Per-task scoring
# ---------------------------------------------------------------------------


def score_pred_state(answer: ParsedAnswer, gold: dict) -> tuple[bool, float]:
    """(exact, fraction of assigned variables predicted correctly)."""
    if gold["kind"] == "special":
        special = "timeout" if gold["word"] == TIMEOUT_WORD else "error"
        exact = answer.kind == special
        return exact, 1.0 if exact else 0.0
    gold_state: dict[str, str] = gold["state"]
    if answer.kind != "state" or answer.state is None:
        return False, 0.0
    assigned = gold.get("assigned", list(gold_state))
    correct = sum(
        1 for var in assigned if answer.state.get(var) == gold_state[var]
    )
    fraction = correct / len(assigned) if assigned else 1.0
    exact = (
        all(answer.state.get(v) == val for v, val in gold_state.items())
        and set(answer.state) == set(gold_state)
    )
    return exact, fraction


def score_pred_rule(
    answer: ParsedAnswer, gold_questions: list[dict]
) -> list[bool]:
    """Per-question exact flags, aligned with the gold question order."""
    flags = []
    for q in gold_questions:
        if answer.kind != "rule" or answer.sequences is None:
            flags.append(False)
            continue
        predicted = answer.sequences.get(q["id"])
        flags.append(predicted == list(q["gold"]))
    return flags


def score_pred_trace(answer: ParsedAnswer, gold_xml: str) -> bool:
    gold = parse_trace_answer(gold_xml)
    assert gold.kind == "trace", "gold XML must parse"
    if answer.kind != "trace" or answer.steps is None:
        return False
    if len(answer.steps) != len(gold.steps):
        return False
    for (rule_a, state_a), (rule_g, state_g) in zip(answer.steps, gold.steps):
        if rule_a != rule_g or state_a != state_g:
            return False
    return True


def first_divergence(gold: list[int], predicted: list[int]) -> int | None:
    """0-based index of the first divergence, or None when equal."""
    for i, (g, p) in enumerate(zip(gold, predicted)):
        if g != p:
            return i
    if len(gold) != len(predicted):
        return min(len(gold), len(predicted))
    return None


def first_mismatch_stats(
    results: list[tuple[list[int], list[int]]], style: str
) -> tuple[dict[int, float], dict[str, float]]:
    """Per-rule and per-category first-point-of-mismatch rates.

    rate(r) = (# sequences whose first divergence falls on gold rule r)
            / (# occurrences of r across all gold sequences).
    A divergence past the end of the gold sequence has no gold rule to blame
    and only counts against exactness.  Category rate is the max over member
    rules.
    """
    occurrences: dict[int, int] = {}
    firsts: dict[int, int] = {}
    for gold, predicted in results:
        for r in gold:
            occurrences[r] = occurrences.get(r, 0) + 1
        idx = first_divergence(gold, predicted)
        if idx is not None and idx < len(gold):
            firsts[gold[idx]] = firsts.get(gold[idx], 0) + 1
    rates = {r: firsts.get(r, 0) / n for r, n in occurrences.items()}
    categorize = rule_category if style == "sos" else k_rule_category
    by_category: dict[str, float] = {}
    for r, rate in rates.items():
        cat = categorize(r) or "Uncategorized"
        by_category[cat] = max(by_category.get(cat, 0.0), rate)
    return rates, by_category


# ---------------------------------------------------------------------------
# Batch scoring
# ---------------------------------------------------------------------------


@dataclass
class ScoreReport:
    task: str
    style: str
    per_instance: dict[str, bool] = field(default_factory=dict)
    accuracy: float = 0.0
    var_fraction: float | None = None
    rule_rates: dict[int, float] = field(default_factory=dict)
    category_rates: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "task": self.task,
            "style": self.style,
            "accuracy": self.accuracy,
            "per_instance": self.per_instance,
        }
        if self.var_fraction is not None:
            payload["var_fraction"] = self.var_fraction
        if self.rule_rates:
            payload["rule_rates"] = {str(k): v for k, v in self.rule_rates.items()}
        if self.category_rates:
            payload["category_rates"] = self.category_rates
        return json.dumps(payload, indent=2)

    def write_category_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["category", "first_mismatch_rate"])
            for cat, rate in sorted(self.category_rates.items()):
                writer.writerow([cat, f"{rate:.6f}"])


def score_batch(
    instances: list[TaskInstance], responses: dict[str, str]
) -> ScoreReport:
    """Score one task's instances against raw response texts."""
    task = instances[0].task if instances else "state"
    style = instances[0].style if instances else "sos"
    report = ScoreReport(task=task, style=style)
    exact_flags: list[bool] = []
    fractions: list[float] = []
    rule_results: list[tuple[list[int], list[int]]] = []

    for inst in instances:
        response = responses.get(inst.instance_id, "")
        if task == "state":
            parsed = parse_state_answer(response)
            exact, fraction = score_pred_state(parsed, inst.gold)
            report.per_instance[inst.instance_id] = exact
            exact_flags.append(exact)
            fractions.append(fraction)
        elif task == "rule":
            parsed = parse_rule_answer(response)
            questions = inst.gold["questions"]
            flags = score_pred_rule(parsed, questions)
            for q, flag in zip(questions, flags):
                report.per_instance[f"{inst.instance_id}#{q['id']}"] = flag
                exact_flags.append(flag)
                predicted = (
                    parsed.sequences.get(q["id"], [])
                    if parsed.kind == "rule" and parsed.sequences
                    else []
                )
                rule_results.append((list(q["gold"]), predicted))
        elif task == "trace":
            parsed = parse_trace_answer(response)
            exact = score_pred_trace(parsed, inst.gold["xml"])
            report.per_instance[inst.instance_id] = exact
            exact_flags.append(exact)
        else:
            raise ValueError(task)

    report.accuracy = (
        sum(exact_flags) / len(exact_flags) if exact_flags else 0.0
    )
    if task == "state":
        report.var_fraction = sum(fractions) / len(fractions) if fractions else None
    if task == "rule":
        report.rule_rates, report.category_rates = first_mismatch_stats(
            rule_results, style
        )
    return report


def gold_response_text(inst: TaskInstance) -> str:
    """Serialize the gold answer the way a perfect responder would."""
    gold = inst.gold
    if gold["kind"] == "special":
        return f"<answer>{gold['word']}</answer>"
    if gold["kind"] == "state":
        rows = "\n".join(f"    <{k}>{v}</{k}>" for k, v in gold["state"].items())
        return f"<answer>\n{rows}\n</answer>"
    if gold["kind"] == "rule":
        parts = ["<ans>"]
        for q in gold["questions"]:
            parts.append(f'    <answer id="{q["id"]}">')
            parts.extend(f"        <rule>{r}</rule>" for r in q["gold"])
            parts.append("    </answer>")
        parts.append("</ans>")
        return "\n".join(parts)
    if gold["kind"] == "trace":
        return gold["xml"]
    raise ValueError(gold["kind"])
