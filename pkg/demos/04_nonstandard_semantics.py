#!/usr/bin/env python3
"""Derive the two nonstandard semantics and check behavior preservation.

KeywordSwap re-binds operator meanings (+ computes subtraction, < compares
greater-than, ...) while KeywordObf relexes the surface to rare Unicode
codepoints.  In both cases a companion program transformation makes the
mutated configuration reproduce the standard final store.
"""
from implang import (
    MutationKind,
    OBFUSCATED,
    SemanticsStyle,
    check_equivalence,
    parse,
    render_program,
    run,
    run_with,
    sos_semantics_text,
    transform_program,
)

program = parse("int a;\nint b;\na = 7;\nb = a + 2;\n")
print("standard program:")
print(render_program(program))
print("standard store:", run(program).final_store)

swapped = transform_program(program, MutationKind.KEYWORD_SWAP)
print("swap-transformed program (runs under swapped semantics):")
print(render_program(swapped))
trace = run_with(swapped, SemanticsStyle.SOS, MutationKind.KEYWORD_SWAP)
print("store under swapped semantics:", trace.final_store)

print("obfuscated surface of the same program:")
print(render_program(program, OBFUSCATED))

for kind in (MutationKind.KEYWORD_SWAP, MutationKind.KEYWORD_OBF):
    for style in SemanticsStyle:
        assert check_equivalence(program, kind, style=style)
print("equivalence holds for both mutations under both styles")

# The mutated semantics document keeps rule numbering but re-binds rule
# bodies: the rule for the + symbol now computes -Int.
doc = sos_semantics_text(MutationKind.KEYWORD_SWAP)
add_rule = doc.split("Rule 9 [add]:")[1].split("Rule 10")[0]
print("swapped addition rule:")
print(add_rule.strip())
