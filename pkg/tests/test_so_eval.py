import itertools

import pytest

from tlk.finite_model import BudgetExceeded, Model, Team, enumerate_models
from tlk.formula_parser import parse_so as S
from tlk.generators import law_generator
from tlk.logic_ast import ExistsFn, ForallFn, Fragment, Not, bid_to_classical, fragment_of
from tlk.so_eval import (
    FunctionEnvironment, count_function_tables, enumerate_function_tables, so_satisfies,
    so_sentence_true,
)
from tlk.team_eval import satisfies, sentence_true
from tlk.translator import replace_fns_with_vars

from conftest import EMPTY, UNARY_F

SMALL = [Model(n) for n in (1, 2, 3)]

INJECTIVE_NOT_SURJECTIVE = "Ef f:1. (A x. A y. (f(x)=f(y) -> x=y)) & E w. A x. ~(f(x)=w)"


@pytest.mark.parametrize("n, q, count", [(2, 1, 4), (2, 2, 16), (3, 1, 27)])
def test_function_table_counts(n, q, count):
    tables = list(enumerate_function_tables(Model(n), q))
    assert len(tables) == count == count_function_tables(n, q)
    assert len({tuple(sorted(t.items())) for t in tables}) == count


def test_function_table_budget_and_arity():
    with pytest.raises(BudgetExceeded):
        list(enumerate_function_tables(Model(3), 2, budget=1000))
    with pytest.raises(ValueError):
        list(enumerate_function_tables(Model(2), 0))


def test_examples():
    for M in SMALL:
        assert so_sentence_true(M, S("Af f:1. Ef g:1. A x. f(x)=g(x)"))
        assert not so_sentence_true(M, S(INJECTIVE_NOT_SURJECTIVE))
        assert so_sentence_true(M, S("Ef f:1. A x. A y. (f(x)=f(y) -> x=y)"))
    assert not so_sentence_true(Model(1), S("Ef f:1. A x. ~(f(x)=x)"))
    assert so_sentence_true(Model(2), S("Ef f:1. A x. ~(f(x)=x)"))


def test_environment_and_assignment():
    env = FunctionEnvironment().bind("g", 1, {(0,): 1, (1,): 0})
    M = Model(2)
    assert so_satisfies(M, S("~(g(x)=x)"), env, {"x": 0})
    with pytest.raises(KeyError):
        so_satisfies(M, S("g(x)=x"), FunctionEnvironment(), {"x": 0})
    with pytest.raises(KeyError):
        so_satisfies(M, S("x=y"), env, {"x": 0})
    with pytest.raises(ValueError):
        so_satisfies(M, S("g(x)=x"), FunctionEnvironment().bind("g", 1, {(0,): 1}), {"x": 0})
    with pytest.raises(ValueError):
        so_sentence_true(M, S("x=x"))


def test_fo_sentences_agree_with_team_semantics():
    gen = law_generator(31, UNARY_F)
    for _ in range(200):
        phi = gen.sentence(Fragment.FO)
        classical = bid_to_classical(phi)
        for n in (1, 2, 3):
            for M in enumerate_models(UNARY_F, n):
                assert so_sentence_true(M, classical) == sentence_true(M, phi)


def test_universal_is_dual_of_existential():
    gen = law_generator(32, EMPTY)
    for i in range(40):
        phi = gen.so_sentence(3, fn_quantifiers=1 + i % 2)
        if not isinstance(phi, (ForallFn, ExistsFn)):
            continue
        body = phi.body
        if isinstance(phi, ForallFn):
            dual = Not(ExistsFn(phi.name, phi.arity, Not(body)))
        else:
            dual = Not(ForallFn(phi.name, phi.arity, Not(body)))
        for M in SMALL[:2]:
            assert so_sentence_true(M, phi) == so_sentence_true(M, dual)


def _func_team_instances():
    gen = law_generator(33, EMPTY)
    for i in range(100):
        p = 2 if i % 5 == 0 else 1
        yield gen.nice_form(n=1, p=p, q=1, m=1 + i % 3, size=3)


def test_functions_simulated_by_team_variables():
    # s extended by u_f := F(s(x_f)) satisfies psi' iff s, F satisfy psi
    for nf in _func_team_instances():
        fns = [f for block in nf.blocks for f in block]
        var_map = {f: f"u_{f}" for f in fns}
        occ = dict(nf.occurrences)
        psi = replace_fns_with_vars(nf.matrix, var_map, occ)
        assert fragment_of(psi) is Fragment.FO
        for M in SMALL[:2]:
            tables = list(enumerate_function_tables(M, 1))
            for choice in itertools.product(tables, repeat=len(fns)):
                env = FunctionEnvironment()
                for f, table in zip(fns, choice):
                    env = env.bind(f, 1, table)
                for values in itertools.product(M.domain, repeat=nf.m):
                    s = dict(zip(nf.fo_vars, values))
                    ext = dict(s)
                    for f, table in zip(fns, choice):
                        ext[var_map[f]] = table[tuple(s[a] for a in occ[f])]
                    X = Team.from_assignments(sorted(ext), [ext])
                    assert so_satisfies(M, nf.matrix, env, s) == satisfies(M, X, psi)
