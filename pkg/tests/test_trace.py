import re

import pytest

from tlk.formula_parser import parse_formula as P, parse_so as S
from tlk.trace import RULES, ReplayError, TraceStep, TranslationTrace, replay, rule
from tlk.translator import (
    d_sentence_to_id, eliminate_all_ivee, fo_to_id, pi11_to_id, sigma11_to_d, so_to_bid, so_to_id,
    so_to_ld,
)

LINE = re.compile(r"^RULE (\S+) \[([^\]]+)\] : .+ ==> .+$")

ROUTES = [
    (fo_to_id, P("(a(x) | (~b(x) | c(x))) & d(x)")),
    (fo_to_id, P("A x. E y. (x=y | ~(f(x)=y))")),
    (sigma11_to_d, S("Ef f:1. A x. A y. (f(x)=f(y) -> x=y)")),
    (pi11_to_id, S("Af f:1. E x. E y. (~(x=y) & f(x)=f(y))")),
    (so_to_bid, S("Ef f:1. A x. R(x,f(x))")),
    (so_to_id, S("Af f:1. Ef g:1. A x. g(f(x))=x")),
    (so_to_ld, S("Af f:1. Ef g:1. A x. f(x)=g(x)")),
    (eliminate_all_ivee, P("(dep(x) || dep(y)) || x=y")),
]


@pytest.mark.parametrize("fn, phi", ROUTES)
def test_traces_replay_to_the_output(fn, phi):
    trace = TranslationTrace()
    out = fn(phi, trace)
    assert len(trace) > 0
    assert replay(trace, trace.steps[0].before, out) == out
    for a, b in zip(trace.steps, trace.steps[1:]):
        assert a.after == b.before


def test_trace_chain_starts_at_the_input_for_single_stage_routes():
    phi = P("(a(x) | (~b(x) | c(x))) & d(x)")
    trace = TranslationTrace()
    out = fo_to_id(phi, trace)
    assert trace.steps[0].before == phi and trace.steps[-1].after == out
    assert [s.rule for s in trace] == ["tensor_to_impl", "tensor_to_impl", "negation_to_impl"]


@pytest.mark.parametrize("fn, phi", ROUTES)
def test_trace_lines_name_rule_and_citation(fn, phi):
    trace = TranslationTrace()
    fn(phi, trace)
    for line in trace.render().splitlines():
        m = LINE.match(line)
        assert m and m.group(1) in RULES and m.group(2) == RULES[m.group(1)].citation


def test_replay_detects_tampering():
    phi = P("(a(x) | (~b(x) | c(x))) & d(x)")
    trace = TranslationTrace()
    out = fo_to_id(phi, trace)
    with pytest.raises(ReplayError):
        replay(trace, phi, P("a(x)"))
    broken = TranslationTrace(list(trace.steps))
    s = broken.steps[1]
    broken.steps[1] = TraceStep(s.rule, s.citation, s.before, P("a(x)"))
    with pytest.raises(ReplayError):
        replay(broken, phi, out)
    with pytest.raises(ReplayError):
        replay(trace, P("b(x)"))


def test_no_step_recorded_without_change():
    trace = TranslationTrace()
    assert d_sentence_to_id(P("A x. (dep(x) -> x=x)"), trace) == P("A x. (dep(x) -> x=x)")
    assert len(trace) == 0


def test_rule_names_are_unique():
    with pytest.raises(ValueError):
        rule("expand_dep", "again")(lambda phi: phi)
