"""Renderable text assets: the EBNF grammar and both semantics documents.

Documents are generated from the rule catalogs so that the two mutations are
mechanical: KeywordSwap re-binds what each rule computes while keeping the
rule's surface pattern and number; KeywordObf substitutes surface lexemes and
leaves computations alone.
"""
from __future__ import annotations

from .mutation import MutationKind, SemanticsStyle, operator_actions, profile_for
from .tokens import Tok

_MEANING = {
    Tok.ADD: "+Int",
    Tok.SUB: "-Int",
    Tok.MUL: "*Int",
    Tok.DIV: "/Int",
    Tok.MOD: "%Int",
    Tok.LT: "<Int",
    Tok.LE: "<=Int",
    Tok.GT: ">Int",
    Tok.GE: ">=Int",
    Tok.EQ: "==Int",
    Tok.NE: "!=Int",
}


def ebnf_text(kind: MutationKind = MutationKind.STANDARD) -> str:
    """The complete grammar in EBNF, spelled in the active surface lexemes."""
    p = profile_for(kind)
    s = p.surface

    def q(tok: Tok) -> str:
        return f'"{s(tok)}"'

    return f"""program     ::= {{ statement }}
statement   ::= declaration | assignment | while | ifelse
              | {q(Tok.BREAK)} {q(Tok.SEMI)} | {q(Tok.CONTINUE)} {q(Tok.SEMI)} | {q(Tok.HALT)} {q(Tok.SEMI)}
declaration ::= ( {q(Tok.INT)} | {q(Tok.BOOL)} ) identifier {q(Tok.SEMI)}
assignment  ::= identifier {q(Tok.ASSIGN)} exp {q(Tok.SEMI)}
while       ::= {q(Tok.WHILE)} {q(Tok.LPAREN)} exp {q(Tok.RPAREN)} {q(Tok.LBRACE)} {{ statement }} {q(Tok.RBRACE)} {q(Tok.SEMI)}
ifelse      ::= {q(Tok.IF)} {q(Tok.LPAREN)} exp {q(Tok.RPAREN)} {q(Tok.LBRACE)} {{ statement }} {q(Tok.RBRACE)}
                {q(Tok.ELSE)} {q(Tok.LBRACE)} {{ statement }} {q(Tok.RBRACE)} {q(Tok.SEMI)}
exp         ::= orexp
orexp       ::= andexp {{ {q(Tok.OR)} andexp }}
andexp      ::= relexp {{ {q(Tok.AND)} relexp }}
relexp      ::= addexp [ ( {q(Tok.LT)} | {q(Tok.LE)} | {q(Tok.GT)} | {q(Tok.GE)} | {q(Tok.EQ)} | {q(Tok.NE)} ) addexp ]
addexp      ::= mulexp {{ ( {q(Tok.ADD)} | {q(Tok.SUB)} ) mulexp }}
mulexp      ::= unary {{ ( {q(Tok.MUL)} | {q(Tok.DIV)} | {q(Tok.MOD)} ) unary }}
unary       ::= {q(Tok.NOT)} unary | {q(Tok.SUB)} unary | primary
primary     ::= literal | "true" | "false" | identifier
              | {q(Tok.LPAREN)} exp {q(Tok.RPAREN)}
identifier  ::= letter {{ letter | digit | "_" }}
literal     ::= digit {{ digit }}
"""


def _sos_rule_blocks(kind: MutationKind) -> list[tuple[int, str, list[str]]]:
    """(number, name, lines) per rule, surface and meaning per the mutation."""
    p = profile_for(kind)
    acts = operator_actions(kind)
    s = p.surface

    def cfg(op: str, state: str = "σ", stack: str = "χ") -> str:
        return f"⟨{op}, {state}, {stack}⟩"

    def axiom(lhs: str, rhs: str, side: str | None = None) -> list[str]:
        lines = [f"    {lhs}  →  {rhs}"]
        if side:
            lines.append(f"        if {side}")
        return lines

    def congr(prem_l: str, prem_r: str, con_l: str, con_r: str) -> list[str]:
        return [
            f"    {prem_l}  →  {prem_r}",
            "    " + "─" * 48,
            f"    {con_l}  →  {con_r}",
        ]

    blocks: list[tuple[int, str, list[str]]] = []

    blocks.append((1, "id", axiom(cfg("x"), cfg("σ(x)"), "x is a declared int variable")))
    blocks.append((2, "id_bool", axiom(cfg("x"), cfg("σ(x)"), "x is a declared bool variable")))
    blocks.append((3, "decl", axiom(
        cfg("T x; :: SL"), cfg("SL", "σ[x ↦ zero(T)]"),
        "x not yet declared; zero(int)=0, zero(bool)=false")))
    blocks.append((4, "assgn_rred", congr(cfg("e"), cfg("e'"),
                                          cfg(f"x {s(Tok.ASSIGN)} e; :: SL"),
                                          cfg(f"x {s(Tok.ASSIGN)} e'; :: SL"))))
    blocks.append((5, "assgn", axiom(cfg(f"x {s(Tok.ASSIGN)} v; :: SL"),
                                     cfg("SL", "σ[x ↦ v]"), "v is an integer literal")))
    blocks.append((6, "assgn_bool", axiom(cfg(f"x {s(Tok.ASSIGN)} q; :: SL"),
                                          cfg("SL", "σ[x ↦ q]"), "q is a boolean literal")))

    arith = [(Tok.ADD, 7), (Tok.SUB, 10), (Tok.MUL, 13), (Tok.DIV, 16), (Tok.MOD, 20)]
    names = {Tok.ADD: "add", Tok.SUB: "sub", Tok.MUL: "mul", Tok.DIV: "div", Tok.MOD: "mod"}
    for op, base in arith:
        nm, sur, mean = names[op], s(op), _MEANING[acts[op]]
        blocks.append((base, f"{nm}_lred", congr(cfg("a1"), cfg("a1'"),
                                                 cfg(f"a1 {sur} a2"), cfg(f"a1' {sur} a2"))))
        blocks.append((base + 1, f"{nm}_rred", congr(cfg("a2"), cfg("a2'"),
                                                     cfg(f"v1 {sur} a2"), cfg(f"v1 {sur} a2'"))))
        if op in (Tok.DIV, Tok.MOD):
            blocks.append((base + 2, nm, axiom(cfg(f"v1 {sur} v2"), cfg(f"v1 {mean} v2"),
                                               "v2 ≠ 0")))
            blocks.append((base + 3, f"{nm}_zero", axiom(cfg(f"v1 {sur} 0"),
                                                         cfg("ERROR"))))
        else:
            blocks.append((base + 2, nm, axiom(cfg(f"v1 {sur} v2"), cfg(f"v1 {mean} v2"))))
    blocks.append((24, "neg_red", congr(cfg("a"), cfg("a'"),
                                        cfg(f"{s(Tok.SUB)}a"), cfg(f"{s(Tok.SUB)}a'"))))
    blocks.append((25, "neg", axiom(cfg(f"{s(Tok.SUB)}v"), cfg("0 -Int v"))))
    blocks.append((26, "aparen_red", congr(cfg("a"), cfg("a'"),
                                           cfg(f"{s(Tok.LPAREN)}a{s(Tok.RPAREN)}"),
                                           cfg(f"{s(Tok.LPAREN)}a'{s(Tok.RPAREN)}"))))
    blocks.append((27, "aparen", axiom(cfg(f"{s(Tok.LPAREN)}v{s(Tok.RPAREN)}"), cfg("v"))))

    rel = [(Tok.LT, 28, "lt"), (Tok.LE, 32, "le"), (Tok.GT, 36, "gt"),
           (Tok.GE, 40, "ge"), (Tok.EQ, 44, "eq"), (Tok.NE, 48, "ne")]
    for op, base, nm in rel:
        sur, mean = s(op), _MEANING[acts[op]]
        blocks.append((base, f"{nm}_lred", congr(cfg("a1"), cfg("a1'"),
                                                 cfg(f"a1 {sur} a2"), cfg(f"a1' {sur} a2"))))
        blocks.append((base + 1, f"{nm}_rred", congr(cfg("a2"), cfg("a2'"),
                                                     cfg(f"v1 {sur} a2"), cfg(f"v1 {sur} a2'"))))
        blocks.append((base + 2, f"{nm}_true", axiom(cfg(f"v1 {sur} v2"), cfg("true"),
                                                     f"v1 {mean} v2")))
        blocks.append((base + 3, f"{nm}_false", axiom(cfg(f"v1 {sur} v2"), cfg("false"),
                                                      f"not (v1 {mean} v2)")))

    and_first = acts[Tok.AND] is Tok.AND
    a_sur, o_sur = s(Tok.AND), s(Tok.OR)
    blocks.append((52, "and_lred", congr(cfg("b1"), cfg("b1'"),
                                         cfg(f"b1 {a_sur} b2"), cfg(f"b1' {a_sur} b2"))))
    blocks.append((53, "and_true", axiom(cfg(f"true {a_sur} b2"),
                                         cfg("b2" if and_first else "true"))))
    blocks.append((54, "and_false", axiom(cfg(f"false {a_sur} b2"),
                                          cfg("false" if and_first else "b2"))))
    blocks.append((55, "or_lred", congr(cfg("b1"), cfg("b1'"),
                                        cfg(f"b1 {o_sur} b2"), cfg(f"b1' {o_sur} b2"))))
    blocks.append((56, "or_true", axiom(cfg(f"true {o_sur} b2"),
                                        cfg("true" if and_first else "b2"))))
    blocks.append((57, "or_false", axiom(cfg(f"false {o_sur} b2"),
                                         cfg("b2" if and_first else "false"))))
    n_sur = s(Tok.NOT)
    blocks.append((58, "not_red", congr(cfg("b"), cfg("b'"),
                                        cfg(f"{n_sur}b"), cfg(f"{n_sur}b'"))))
    blocks.append((59, "not_true", axiom(cfg(f"{n_sur}true"), cfg("false"))))
    blocks.append((60, "not_false", axiom(cfg(f"{n_sur}false"), cfg("true"))))
    blocks.append((61, "bparen_red", congr(cfg("b"), cfg("b'"),
                                           cfg(f"{s(Tok.LPAREN)}b{s(Tok.RPAREN)}"),
                                           cfg(f"{s(Tok.LPAREN)}b'{s(Tok.RPAREN)}"))))
    blocks.append((62, "bparen", axiom(cfg(f"{s(Tok.LPAREN)}q{s(Tok.RPAREN)}"), cfg("q"))))

    blocks.append((63, "fault", axiom(
        cfg("s :: SL"), cfg("ERROR"),
        "s uses an undeclared variable, re-declares a variable, or applies an operator to a value of the wrong type")))

    i_sur, e_sur = s(Tok.IF), s(Tok.ELSE)
    lb, rb, lp, rp, sm = s(Tok.LBRACE), s(Tok.RBRACE), s(Tok.LPAREN), s(Tok.RPAREN), s(Tok.SEMI)
    if_head = f"{i_sur} {lp}b{rp} {lb}SL1{rb} {e_sur} {lb}SL2{rb}{sm}"
    blocks.append((64, "if_red", congr(cfg("b"), cfg("b'"),
                                       cfg(f"{if_head} :: SL"),
                                       cfg(f"{i_sur} {lp}b'{rp} {lb}SL1{rb} {e_sur} {lb}SL2{rb}{sm} :: SL"))))
    blocks.append((65, "if_true", axiom(
        cfg(f"{i_sur} {lp}true{rp} {lb}SL1{rb} {e_sur} {lb}SL2{rb}{sm} :: SL"),
        cfg("SL1 ++ SL"))))
    blocks.append((66, "if_false", axiom(
        cfg(f"{i_sur} {lp}false{rp} {lb}SL1{rb} {e_sur} {lb}SL2{rb}{sm} :: SL"),
        cfg("SL2 ++ SL"))))

    w_sur = s(Tok.WHILE)
    w = f"{w_sur} {lp}b{rp} {lb}SL1{rb}{sm}"
    blocks.append((67, "while_loop", axiom(
        cfg(f"{w} :: SL"), cfg("LOOP(b, SL1) :: SL", stack="push(" + w_sur + ", χ)"),
        "the loop header is pushed onto χ")))
    blocks.append((68, "loop_red", congr(cfg("b"), cfg("b'"),
                                         cfg("LOOP(b, SL1) :: SL"),
                                         cfg("LOOP(b', SL1) :: SL"))))
    blocks.append((69, "loop_false", axiom(
        cfg("LOOP(false, SL1) :: SL"), cfg("SL", stack="pop(χ)"))))
    blocks.append((70, "loop_true", axiom(
        cfg("LOOP(true, SL1) :: SL"), cfg("SL1 ++ REPEAT :: SL"),
        "REPEAT re-arms the loop when the body completes")))
    blocks.append((71, "break_skip", axiom(
        cfg(f"{s(Tok.BREAK)}{sm} :: s :: SL"), cfg(f"{s(Tok.BREAK)}{sm} :: SL"),
        "s is not the innermost REPEAT marker; χ ≠ ε")))
    blocks.append((72, "break_loop", axiom(
        cfg(f"{s(Tok.BREAK)}{sm} :: REPEAT :: SL"), cfg("SL", stack="pop(χ)"))))
    blocks.append((73, "cont_skip", axiom(
        cfg(f"{s(Tok.CONTINUE)}{sm} :: s :: SL"), cfg(f"{s(Tok.CONTINUE)}{sm} :: SL"),
        "s is not the innermost REPEAT marker; χ ≠ ε")))
    blocks.append((74, "cont_loop", axiom(
        cfg(f"{s(Tok.CONTINUE)}{sm} :: REPEAT :: SL"), cfg("REPEAT :: SL"))))
    blocks.append((75, "break_orphan", axiom(
        cfg(f"{s(Tok.BREAK)}{sm} :: SL", stack="ε"), cfg("ERROR", stack="ε"))))
    blocks.append((76, "cont_orphan", axiom(
        cfg(f"{s(Tok.CONTINUE)}{sm} :: SL", stack="ε"), cfg("ERROR", stack="ε"))))
    blocks.append((77, "loop_repeat", axiom(
        cfg("REPEAT :: SL"), cfg("LOOP(b, SL1) :: SL"),
        "b and SL1 are the guard and body of the loop at the top of χ")))
    blocks.append((78, "halt", axiom(cfg(f"{s(Tok.HALT)}{sm} :: SL"), cfg("HALT"))))

    return blocks


def sos_semantics_text(kind: MutationKind = MutationKind.STANDARD) -> str:
    header = """Small-step operational semantics over configurations ⟨operation, σ, χ⟩,
where σ maps declared variables to values and χ is a LIFO control stack of
loop headers (the top of χ is the innermost executing loop).

Metavariables: x identifier, v integer literal, q boolean literal,
a arithmetic expression, b boolean expression, s statement,
SL statement list (SL ::= ε | s :: SL').

Metafunctions: push(s, χ) = s :: χ ; pop(s :: χ) = χ ;
top(ε) = ε, top(s :: χ) = s ; SL1 ++ SL2 is list concatenation.

Execution starts from ⟨SL, σ, χ⟩ and repeatedly applies the unique
matching rule.  Terminal configurations: ⟨ε, σ, χ⟩, ⟨HALT, σ, χ⟩,
⟨ERROR, σ, χ⟩.

+Int, -Int, *Int, /Int, %Int compare/compute on integers; /Int truncates
toward zero and %Int takes the dividend's sign.
"""
    parts = [header]
    for num, name, lines in _sos_rule_blocks(kind):
        parts.append(f"Rule {num} [{name}]:")
        parts.extend(lines)
        parts.append("")
    return "\n".join(parts)


def _k_rule_lines(kind: MutationKind) -> list[str]:
    p = profile_for(kind)
    acts = operator_actions(kind)
    s = p.surface
    lines: list[str] = []

    def rule(num: int, name: str, text: str, side: str | None = None) -> None:
        lines.append(f"  rule [{num}:{name}]: {text}" + (f"  requires {side}" if side else ""))

    rule(1, "id", "<k> X:Id => I ...</k> <state>... X |-> I:Int ...</state>")
    rule(2, "id_bool", "<k> X:Id => Q ...</k> <state>... X |-> Q:Bool ...</state>")
    names = {Tok.ADD: "add", Tok.SUB: "sub", Tok.MUL: "mul", Tok.DIV: "div", Tok.MOD: "mod"}
    bases = {Tok.ADD: 3, Tok.SUB: 4, Tok.MUL: 5, Tok.DIV: 6, Tok.MOD: 8}
    for op in (Tok.ADD, Tok.SUB, Tok.MUL, Tok.DIV, Tok.MOD):
        mean = _MEANING[acts[op]]
        if op in (Tok.DIV, Tok.MOD):
            rule(bases[op], names[op], f"I1 {s(op)} I2 => I1 {mean} I2", "I2 =/=Int 0")
            rule(bases[op] + 1, names[op] + "_zero", f"I1 {s(op)} 0 => ERROR")
        else:
            rule(bases[op], names[op], f"I1 {s(op)} I2 => I1 {mean} I2")
    rule(10, "paren", f"{s(Tok.LPAREN)} V {s(Tok.RPAREN)} => V")
    rule(11, "neg", f"{s(Tok.SUB)} I => 0 -Int I")
    rel_bases = {Tok.LT: 12, Tok.LE: 13, Tok.GT: 14, Tok.GE: 15, Tok.EQ: 16, Tok.NE: 17}
    rel_names = {Tok.LT: "lt", Tok.LE: "le", Tok.GT: "gt", Tok.GE: "ge", Tok.EQ: "eq", Tok.NE: "ne"}
    for op, num in rel_bases.items():
        rule(num, rel_names[op], f"I1 {s(op)} I2 => I1 {_MEANING[acts[op]]} I2")
    and_first = acts[Tok.AND] is Tok.AND
    rule(18, "and", f"Q {s(Tok.AND)} B => " + ("#if Q #then B #else false #fi"
                                               if and_first else "#if Q #then true #else B #fi"))
    rule(19, "or", f"Q {s(Tok.OR)} B => " + ("#if Q #then true #else B #fi"
                                             if and_first else "#if Q #then B #else false #fi"))
    rule(20, "not", f"{s(Tok.NOT)} Q => notBool Q")
    rule(21, "assgn", f"<k> X {s(Tok.ASSIGN)} V{s(Tok.SEMI)} => . ...</k>"
                      " <state>... X |-> (_ => V) ...</state>")
    lb, rb, sm = s(Tok.LBRACE), s(Tok.RBRACE), s(Tok.SEMI)
    rule(22, "if_true", f"{s(Tok.IF)} (true) {lb} SL1 {rb} {s(Tok.ELSE)} {lb} SL2 {rb}{sm} => SL1")
    rule(23, "if_false", f"{s(Tok.IF)} (false) {lb} SL1 {rb} {s(Tok.ELSE)} {lb} SL2 {rb}{sm} => SL2")
    rule(24, "while_unfold",
         f"{s(Tok.WHILE)} (B) {lb} SL {rb}{sm} => {s(Tok.WHILE)}1 (B) {lb} SL {rb} ~> breakMarker")
    rule(25, "while1_unfold",
         f"{s(Tok.WHILE)}1 (B) {lb} SL {rb} => "
         f"{s(Tok.IF)} (B) {lb} SL {s(Tok.WHILE)}1 (B) {lb} SL {rb} {rb} {s(Tok.ELSE)} {lb} {rb}{sm}")
    rule(26, "halt", f"<k> {s(Tok.HALT)}{sm} ~> K => . </k>")
    rule(27, "break_marker", "breakMarker => .")
    rule(28, "break_skip", f"{s(Tok.BREAK)}{sm} ~> S:Stmt => {s(Tok.BREAK)}{sm}")
    rule(29, "break_skip_loop",
         f"{s(Tok.BREAK)}{sm} ~> {s(Tok.WHILE)}1 (B) {lb} SL {rb} => {s(Tok.BREAK)}{sm}")
    rule(30, "break_done", f"{s(Tok.BREAK)}{sm} ~> breakMarker => .")
    rule(31, "cont_skip", f"{s(Tok.CONTINUE)}{sm} ~> S:Stmt => {s(Tok.CONTINUE)}{sm}")
    rule(32, "cont_done",
         f"{s(Tok.CONTINUE)}{sm} ~> {s(Tok.WHILE)}1 (B) {lb} SL {rb} => {s(Tok.WHILE)}1 (B) {lb} SL {rb}")
    rule(33, "break_orphan", f"<k> {s(Tok.BREAK)}{sm} </k> => ERROR")
    rule(34, "cont_orphan", f"<k> {s(Tok.CONTINUE)}{sm} </k> => ERROR")
    rule(35, "cont_skip_marker", f"{s(Tok.CONTINUE)}{sm} ~> breakMarker => ERROR")
    rule(36, "decl", "<k> T:Type X:Id; => . ...</k> <state> S => S[X <- zero(T)] </state>")
    return lines


def k_semantics_text(kind: MutationKind = MutationKind.STANDARD) -> str:
    header = """module SEMANTICS
  imports SYNTAX
  configuration <T> <k> $PGM:Pgm </k> <state> .Map </state> </T>

  // The state cell maps declared variables to values; zero(int) = 0,
  // zero(bool) = false.  Only rules with a [number:name] label count as
  // execution steps; heating and cooling are structural.
"""
    footer = "endmodule\n"
    return header + "\n".join(_k_rule_lines(kind)) + "\n" + footer


def semantics_text(style: SemanticsStyle, kind: MutationKind = MutationKind.STANDARD) -> str:
    if style is SemanticsStyle.SOS:
        return sos_semantics_text(kind)
    return k_semantics_text(kind)
