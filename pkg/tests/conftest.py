import pytest

from fta import Position, parse_automaton, parse_term

# Two-state automaton over {0,1}: g negates, f1 is conjunction-like,
# f2 is disjunction-like; q1 is the only final state.
SAMPLE_AUTOMATON = """\
signature: 0/0 1/0 g/1 f1/2 f2/2
states: q0 q1
final: q1
rule: 0 -> q0
rule: 1 -> q1
rule: g(q0) -> q1
rule: g(q1) -> q0
rule: f1(q0,q0) -> q0
rule: f1(q0,q1) -> q0
rule: f1(q1,q0) -> q0
rule: f1(q1,q1) -> q1
rule: f2(q0,q0) -> q0
rule: f2(q0,q1) -> q1
rule: f2(q1,q0) -> q1
rule: f2(q1,q1) -> q1
"""

# 16-node term with four variables, two of which occur twice.
SAMPLE_TERM = "f1(g(f1(x1,x2)),f2(g(f1(x3,f1(x4,x3))),g(f1(x2,x1))))"


def P(text: str) -> Position:
    return Position.parse(text)


def PS(*texts: str) -> set:
    return {Position.parse(t) for t in texts}


@pytest.fixture(scope="session")
def sig_aut():
    return parse_automaton(SAMPLE_AUTOMATON)


@pytest.fixture(scope="session")
def sig(sig_aut):
    return sig_aut[0]


@pytest.fixture(scope="session")
def aut(sig_aut):
    return sig_aut[1]


@pytest.fixture(scope="session")
def term(sig):
    return parse_term(SAMPLE_TERM, sig)
