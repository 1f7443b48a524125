import itertools
import json

import pytest
from hypothesis import given, strategies as st

from tlk.finite_model import (
    BudgetExceeded, Model, Team, count_models, duplicate, enumerate_models, enumerate_subteams,
    enumerate_supplement_functions, enumerate_teams, full_team, load_model, load_team,
    model_from_json, supplement,
)
from tlk.logic_ast import Signature

from conftest import EMPTY, UNARY_F

M1, M2, M3 = (Model(n) for n in (1, 2, 3))

MODEL_JSON = ('{"domain":2,"relations":{"R":[[0,1]]},'
              '"functions":{"f":{"arity":1,"table":[[0,1],[1,0]]}},"constants":{"c":0}}')


def T(vars, *rows):
    return Team.make(vars, rows)


def test_supplement_examples():
    assert supplement(Team.unit(), "x", {(): 1}) == T(["x"], (1,))
    assert supplement(Team.empty(), "x", {}) == Team.empty(["x"])
    X = T(["x", "y"], (0, 0), (0, 1), (1, 1))
    out = supplement(X, "y", {(0, 0): 1, (0, 1): 1, (1, 1): 1})
    assert out == T(["x", "y"], (0, 1), (1, 1))


def test_supplement_requires_a_total_function():
    with pytest.raises(ValueError):
        supplement(T(["x"], (0,), (1,)), "y", {(0,): 0})


def test_duplicate_examples():
    assert duplicate(Team.unit(), "x", M2) == T(["x"], (0,), (1,))
    assert duplicate(Team.empty(), "x", M2) == Team.empty(["x"])
    assert duplicate(T(["x"], (0,)), "x", M3) == T(["x"], (0,), (1,), (2,))


def test_duplicate_is_union_of_constant_supplements():
    for M in (M1, M2, M3):
        full = list(full_team(M, ["x", "y"]))
        for k in range(min(len(full), 4) + 1):
            for rows in itertools.combinations(full, k):
                X = Team.from_assignments(["x", "y"], rows)
                for var in ("y", "z"):
                    parts = [supplement(X, var, {tuple(s[v] for v in X.vars): a for s in X})
                             for a in range(M.size)]
                    union = set().union(*(p.row_set() for p in parts))
                    assert duplicate(X, var, M).row_set() == union


def test_full_team_examples():
    assert len(full_team(M2, ["x"])) == 2
    assert full_team(M2, []) == Team.unit()
    assert len(full_team(M3, ["x", "y"])) == 9


def test_subteams_order_and_count():
    assert list(enumerate_subteams(Team.empty(["x"]))) == [Team.empty(["x"])]
    X = full_team(M3, ["x"])
    subs = list(enumerate_subteams(X))
    assert len(subs) == 8 == len(set(subs))
    assert subs[0] == Team.empty(["x"]) and subs[-1] == X
    assert subs == list(enumerate_subteams(X))


def test_subteam_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_subteams(full_team(M3, ["x", "y"]), max_rows=8))


def test_enumerate_teams_examples():
    assert len(list(enumerate_teams(M2, ["x"]))) == 4
    assert list(enumerate_teams(M1, [])) == [Team.empty(), Team.unit()]
    assert len(list(enumerate_teams(M2, ["x", "y"]))) == 2 ** 4
    with pytest.raises(BudgetExceeded):
        list(enumerate_teams(M3, ["x", "y", "z"]))


@pytest.mark.parametrize("sig, n, count", [
    (EMPTY, 2, 1),
    (UNARY_F, 2, 4),
    (Signature(relations={"R": 2}), 2, 16),
    (Signature(relations={"P": 1}, functions={"f": 1}, constants=("c",)), 2, 4 * 4 * 2),
])
def test_model_counts(sig, n, count):
    models = list(enumerate_models(sig, n))
    assert len(models) == count == count_models(sig, n)
    assert len({m.to_text() for m in models}) == count


def test_model_enumeration_order_is_stable():
    assert [m.to_text() for m in enumerate_models(UNARY_F, 3)] == \
        [m.to_text() for m in enumerate_models(UNARY_F, 3)]


def test_model_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_models(UNARY_F, 3, budget=10))


@pytest.mark.parametrize("rows, n, count", [(0, 2, 1), (2, 2, 4), (1, 3, 3)])
def test_supplement_function_counts(rows, n, count):
    M = Model(n)
    X = Team.from_assignments(["x"], list(full_team(M, ["x"]))[:rows])
    fns = list(enumerate_supplement_functions(X, M))
    assert len(fns) == count
    assert len({tuple(sorted(F.items())) for F in fns}) == count


def test_load_model_round_trip():
    M = load_model(MODEL_JSON)
    assert M.size == 2 and M.functions["f"] == {(0,): 1, (1,): 0}
    assert (0, 1) in M.relations["R"] and M.constants["c"] == 0
    assert load_model(M.to_text()) == M
    assert model_from_json(json.loads(M.to_text())) == M


@pytest.mark.parametrize("bad", [
    '{"domain":2,"functions":{"f":{"arity":1,"table":[[0,1,1],[1,0]]}}}',
    '{"domain":2,"functions":{"f":{"arity":1,"table":[[0,1]]}}}',
    '{"domain":2,"relations":{"R":[[0,5]]}}',
    '{"domain":2,"constants":{"c":2}}',
    '{"domain":0}',
    '{"relations":{}}',
    'nope',
])
def test_load_model_errors(bad):
    with pytest.raises(ValueError):
        load_model(bad)


def test_load_team():
    assert load_team('{"vars":[],"rows":[[]]}') == Team.unit()
    assert load_team('{"vars":[],"rows":[]}') == Team.empty()
    X = load_team('{"vars":["x","y"],"rows":[[0,0],[0,1]]}', M2)
    assert len(X) == 2 and X.vars == ("x", "y")
    with pytest.raises(ValueError):
        load_team('{"vars":["x"],"rows":[[2]]}', M2)
    with pytest.raises(ValueError):
        load_team('{"vars":["x"],"rows":[[0,1]]}')
    with pytest.raises(ValueError):
        load_team('{"vars":["x","x"],"rows":[]}')


@given(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2))))
def test_equal_teams_serialize_identically(rows):
    a = Team.make(["x", "y"], rows)
    b = Team.make(["x", "y"], sorted(rows, reverse=True))
    assert a == b and a.to_text() == b.to_text()
    assert load_team(a.to_text()) == a
