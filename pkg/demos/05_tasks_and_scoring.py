#!/usr/bin/env python3
"""Build the three benchmark tasks for one program and score gold responses.

Final-state prediction asks for the store after execution; rule-sequence
prediction asks for the numbered rules evaluating sampled statements;
trace prediction asks for the full rule+state sequence as XML.  Scoring the
serialized gold back against itself must give accuracy 1.0.
"""
from implang import (
    SemanticsStyle,
    build_instance,
    gold_response_text,
    parse,
    score_batch,
)

program = parse(
    "int n;\nint sum;\nn = 3;\nwhile (n > 0)\n{\n    sum = sum + n;\n    n = n - 1;\n};\n"
)

for task in ("state", "rule", "trace"):
    instance = build_instance("demo", program, task, SemanticsStyle.SOS, seed=5)
    report = score_batch([instance], {instance.instance_id: gold_response_text(instance)})
    print(f"{task:6s} accuracy={report.accuracy:.2f} id={instance.instance_id}")

instance = build_instance("demo", program, "state", SemanticsStyle.SOS)
print()
print("gold final state:", instance.gold["state"])
print()
print("--- prompt (first 40 lines) ---")
print("\n".join(instance.prompt.splitlines()[:40]))

# Rule questions come with the pre-state and the edited snippet:
rule_instance = build_instance("demo", program, "rule", SemanticsStyle.SOS, seed=5)
print()
print("--- sampled rule questions ---")
for q in rule_instance.gold["questions"]:
    print(q["statement_kind"], "->", q["gold"])
