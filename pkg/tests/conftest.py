from __future__ import annotations

from pathlib import Path

import pytest

from implang.syntax import Program, parse

ASSETS = Path(__file__).resolve().parent.parent / "src" / "implang" / "assets"

TRACE_EXAMPLE_SRC = """int i;
int j;
i = 0;
while (i < 2)
{
    halt;
};
"""

RULE_EXAMPLE_SRC = """while (n <= 0)
{
    halt;
};
"""


@pytest.fixture(scope="session")
def mbpp_source() -> str:
    return (ASSETS / "mbpp_962.imp").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def mbpp_program(mbpp_source) -> Program:
    return parse(mbpp_source)


@pytest.fixture(scope="session")
def trace_example() -> Program:
    return parse(TRACE_EXAMPLE_SRC)


@pytest.fixture(scope="session")
def rule_example() -> Program:
    return parse(RULE_EXAMPLE_SRC)
