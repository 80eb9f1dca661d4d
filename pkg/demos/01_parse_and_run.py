#!/usr/bin/env python3
"""Parse a program and execute it with both interpreters.

Walks through the basic pipeline: source text -> AST -> execution trace,
showing the numbered-rule sequences that the two semantics styles emit for
the same program.
"""
from implang import k_run, parse, render_program, run

SOURCE = """\
int i;
int j;
i = 0;
while (i < 2)
{
    halt;
};
"""

program = parse(SOURCE)
print("canonical form:")
print(render_program(program))

# Small-step operational semantics: every reduction is one numbered rule.
trace = run(program)
print("small-step rules:", trace.rule_sequence())
print("outcome:", trace.outcome.value, "| final store:", trace.final_store)

# Rewriting style: loops desugar through while1 + breakMarker, so the same
# program takes a different (shorter) rule path to the same store.
k_trace = k_run(program)
print("rewriting rules: ", k_trace.rule_sequence())
print("outcome:", k_trace.outcome.value, "| final store:", k_trace.final_store)

# Step-by-step view with the store and control stack after every rule:
from implang.sos import debug_lines

print()
for line in debug_lines(program):
    print(line)
