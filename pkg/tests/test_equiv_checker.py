import json

import pytest

from tlk.equiv_checker import (
    SUITES, CheckConfig, Counterexample, EquivVerdict, Status, check_equiv,
    check_sentence_translation, recheck, run_law_suite,
)
from tlk.finite_model import Model, Team, load_model, load_team
from tlk.formula_parser import parse_formula as P, parse_so as S, render
from tlk.generators import law_generator
from tlk.logic_ast import Fragment
from tlk.so_eval import so_sentence_true
from tlk.team_eval import EvalBudget, satisfies
from tlk.translator import so_to_bid, so_to_id

from conftest import UNARY_F


def test_spec_examples():
    assert check_equiv(P("dep(x,y)"), P("dep(x) -> dep(y)"), max_size=3).passed
    v = check_equiv(P("dep(x)"), P("x=x"), max_size=2)
    assert v.status is Status.FAIL
    assert v.counterexample.team == Team.make(["x"], [(0,), (1,)])
    assert v.counterexample.model.size == 2
    phi = P("E y. (dep(x,y) & x=y)")
    same = check_equiv(phi, phi, max_size=3)
    assert same.passed and same.counterexample is None and same.teams_checked > 0


def test_counterexamples_recheck_with_both_engines():
    gen = law_generator(71, UNARY_F, free=("x", "y"))
    found = 0
    for _ in range(40):
        phi, psi = gen.formula(Fragment.BID, 2), gen.formula(Fragment.BID, 2)
        v = check_equiv(phi, psi, UNARY_F, max_size=2)
        if v.status is Status.FAIL:
            found += 1
            assert recheck(v, phi, psi)
            assert recheck(v, phi, psi, engine="maximal")
            cex = v.counterexample
            model, team = load_model(cex.model.to_text()), load_team(cex.team.to_text())
            assert satisfies(model, team, phi) == cex.left
            assert satisfies(model, team, psi) == cex.right
    assert found > 10


def test_symmetry():
    gen = law_generator(72, UNARY_F, free=("x", "y"))
    for _ in range(30):
        phi, psi = gen.formula(Fragment.BID, 2), gen.formula(Fragment.BID, 2)
        a = check_equiv(phi, psi, UNARY_F, max_size=2)
        b = check_equiv(psi, phi, UNARY_F, max_size=2)
        assert a.status is b.status
        if a.counterexample:
            assert recheck(a, psi, phi) and recheck(b, phi, psi)


def test_pass_is_monotone_in_size():
    gen = law_generator(73, UNARY_F, free=("x",))
    for _ in range(20):
        phi = gen.formula(Fragment.BID, 3)
        psi = P("~(x=x)") if gen.rng.random() < 0.5 else P("x=x")
        verdicts = [check_equiv(phi, psi, UNARY_F, max_size=k).status for k in (1, 2, 3)]
        for small, big in zip(verdicts, verdicts[1:]):
            if big is Status.PASS:
                assert small is Status.PASS


def test_parallel_runs_are_identical():
    phi, psi = P("dep(x,y) | dep(y,x)"), P("dep(x) || dep(y)")
    serial = check_equiv(phi, psi, UNARY_F, max_size=2)
    parallel = check_equiv(phi, psi, UNARY_F, max_size=2, jobs=2)
    assert serial.to_json() == parallel.to_json()
    r1 = run_law_suite("downward", UNARY_F, max_size=2, count=30, seed=5)
    r2 = run_law_suite("downward", UNARY_F, max_size=2, count=30, seed=5, jobs=2)
    assert r1.render() == r2.render()


def test_budget_verdicts():
    v = check_equiv(P("dep(x,y,z)"), P("dep(x,y,z)"), max_size=3)
    assert v.status is Status.BUDGET and v.counterexample is None and v.message
    v = check_equiv(P("f(x)=f(x)"), P("x=x"), UNARY_F, max_size=3, config=CheckConfig(max_models=5))
    assert v.status is Status.BUDGET


def test_verdict_invariants():
    with pytest.raises(ValueError):
        EquivVerdict(Status.FAIL, 1, 1)
    cex = Counterexample(Model(1), Team.unit(), True, False)
    with pytest.raises(ValueError):
        EquivVerdict(Status.PASS, 1, 1, cex)
    with pytest.raises(ValueError):
        CheckConfig(max_size=1, min_size=2)
    doc = json.loads(json.dumps(EquivVerdict(Status.FAIL, 1, 1, cex).to_json()))
    assert doc["status"] == "FAIL" and doc["counterexample"]["team"] == {"vars": [], "rows": [[]]}


COPY = S("Af f:1. Ef g:1. A x. f(x)=g(x)")
INJ_NOT_SURJ = S("Ef f:1. (A x. A y. (f(x)=f(y) -> x=y)) & E w. A x. ~(f(x)=w)")


def test_sentence_translation_examples():
    assert check_sentence_translation(COPY, so_to_id(COPY), max_size=2).passed
    v = check_sentence_translation(INJ_NOT_SURJ, so_to_id(INJ_NOT_SURJ), max_size=2)
    assert v.passed
    assert not any(so_sentence_true(Model(n), INJ_NOT_SURJ) for n in (1, 2, 3))


def test_corrupted_translation_is_caught():
    star = so_to_bid(COPY)
    broken = P(render(star).replace("(dep(x,u_1_1) -> ", "(").replace(")))", "))", 1))
    v = check_sentence_translation(COPY, broken, max_size=2)
    assert v.status is Status.FAIL
    cex = v.counterexample
    assert so_sentence_true(cex.model, COPY) == cex.left
    assert satisfies(cex.model, cex.team, broken) == cex.right


def test_sentence_translation_errors():
    with pytest.raises(ValueError):
        check_sentence_translation(COPY, P("x=x"))
    with pytest.raises(ValueError):
        check_sentence_translation(COPY, P("A x. x=x"), at="both")


@pytest.mark.parametrize("suite", SUITES)
def test_every_suite_passes_small(suite):
    report = run_law_suite(suite, UNARY_F, max_size=2, count=40, seed=1)
    assert report.status is Status.PASS, report.to_text()
    assert report.items >= 40 and report.instances > 0


def test_empty_suite_reports_linear_implication():
    phi = P("(x=x) -* ~(x=x)")
    report = run_law_suite("empty", max_size=2, count=20, formulas=[phi])
    assert report.status is Status.FAIL and report.failed_items == 1
    failure = report.failures[0]
    assert failure.item == (render(phi),)
    assert not satisfies(failure.model, failure.team, phi)


def test_downward_suite_catches_a_broken_engine(monkeypatch):
    import tlk.equiv_checker as ec

    class UpwardEvaluator:
        def __init__(self, model, *a, **k):
            from tlk.team_eval import MaximalEvaluator
            self.inner = MaximalEvaluator(model)

        def satisfaction_table(self, phi, vars=None, masks=None):
            table = self.inner.satisfaction_table(phi, vars, masks)
            return [not v for v in table[:1]] + table[1:]   # claim the empty team fails

    monkeypatch.setattr(ec, "evaluator", lambda M, budget=None, engine="maximal": UpwardEvaluator(M))
    report = run_law_suite("downward", max_size=1, count=5, formulas=[P("x=x")])
    assert report.status is Status.FAIL


def test_report_is_reproducible_and_parseable():
    a = run_law_suite("flat", UNARY_F, max_size=2, count=25, seed=9)
    b = run_law_suite("flat", UNARY_F, max_size=2, count=25, seed=9)
    assert a.render() == b.render()
    doc = json.loads(a.render().split("--- json ---\n", 1)[1])
    assert doc["seed"] == 9 and doc["status"] == "PASS" and doc["signature"]["functions"] == {"f": 1}


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_law_suite("nope")


def test_paranoid_budget_gives_same_verdicts():
    phi, psi = P("dep(x,y)"), P("dep(x) -> dep(y)")
    fast = check_equiv(phi, psi, max_size=2)
    slow = check_equiv(phi, psi, max_size=2, budget=EvalBudget(paranoid=True), engine="clauses")
    assert fast.to_json() == slow.to_json()
