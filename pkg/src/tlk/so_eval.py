"""Tarskian evaluation of second-order sentences by brute force.

Function quantifiers range over every total table ``M^q -> M``.  This is
the ground truth against which every translation is checked, so it is kept
deliberately naive.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .finite_model import BudgetExceeded, Model
from .logic_ast import (
    And, Bot, Dep, Eq, Exists, ExistsFn, Forall, ForallFn, Implies, Neg, Not, Or, Rel, Tensor,
    free_fn_vars, free_vars,
)

DEFAULT_TABLE_BUDGET = 1_000_000


@dataclass(frozen=True)
class FunctionEnvironment:
    """Interpretations of function variables: name -> (arity, table)."""

    tables: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "tables", dict(self.tables))

    def bind(self, name: str, arity: int, table: Mapping) -> "FunctionEnvironment":
        tables = dict(self.tables)
        tables[name] = (arity, table)
        return FunctionEnvironment(tables)

    def validate(self, model: Model):
        for name, (arity, table) in self.tables.items():
            for args in itertools.product(model.domain, repeat=arity):
                if args not in table or not 0 <= table[args] < model.size:
                    raise ValueError(f"function variable {name} is not total on {args}")

    def lookup(self) -> dict:
        return {name: table for name, (_, table) in self.tables.items()}


EMPTY_ENV = FunctionEnvironment()


def count_function_tables(n: int, q: int) -> int:
    return n ** (n ** q)


def enumerate_function_tables(M: Model, q: int, budget: int = DEFAULT_TABLE_BUDGET) -> Iterator[dict]:
    """All total tables ``M^q -> M``, lexicographic in the value vector."""
    if q < 1:
        raise ValueError("function variables need arity >= 1")
    total = count_function_tables(M.size, q)
    if total > budget:
        raise BudgetExceeded(f"{total} function tables of arity {q} exceed budget of {budget}")
    args = list(itertools.product(M.domain, repeat=q))
    for values in itertools.product(M.domain, repeat=len(args)):
        yield dict(zip(args, values))


class SOEvaluator:
    def __init__(self, model: Model, budget: int = DEFAULT_TABLE_BUDGET):
        self.model = model
        self.budget = budget
        self._tables: dict = {}

    def tables(self, q: int) -> list:
        hit = self._tables.get(q)
        if hit is None:
            hit = self._tables[q] = list(enumerate_function_tables(self.model, q, self.budget))
        return hit

    def eval(self, phi, fns: dict, s: dict) -> bool:
        M = self.model
        if isinstance(phi, Eq):
            return M.term_value(phi.left, s, fns) == M.term_value(phi.right, s, fns)
        if isinstance(phi, Rel):
            if phi.name not in M.relations:
                raise KeyError(f"relation symbol {phi.name} is not interpreted")
            return tuple(M.term_value(t, s, fns) for t in phi.args) in M.relations[phi.name]
        if isinstance(phi, (Not, Neg)):
            return not self.eval(phi.body if isinstance(phi, Not) else phi.atom, fns, s)
        if isinstance(phi, And):
            return self.eval(phi.left, fns, s) and self.eval(phi.right, fns, s)
        if isinstance(phi, (Or, Tensor)):
            return self.eval(phi.left, fns, s) or self.eval(phi.right, fns, s)
        if isinstance(phi, Implies):
            return not self.eval(phi.left, fns, s) or self.eval(phi.right, fns, s)
        if isinstance(phi, Bot):
            return False
        if isinstance(phi, (Forall, Exists)):
            want = isinstance(phi, Exists)
            for a in M.domain:
                if self.eval(phi.body, fns, {**s, phi.var: a}) == want:
                    return want
            return not want
        if isinstance(phi, (ForallFn, ExistsFn)):
            want = isinstance(phi, ExistsFn)
            for table in self.tables(phi.arity):
                if self.eval(phi.body, {**fns, phi.name: table}, s) == want:
                    return want
            return not want
        if isinstance(phi, Dep):
            raise TypeError("dependence atoms have no Tarskian reading")
        raise TypeError(f"{type(phi).__name__} is not a second-order node")


def so_satisfies(M: Model, phi, env: FunctionEnvironment = EMPTY_ENV, s: Mapping | None = None,
                 budget: int = DEFAULT_TABLE_BUDGET) -> bool:
    s = dict(s or {})
    missing = free_vars(phi) - set(s)
    if missing:
        raise KeyError(f"unbound individual variables {sorted(missing)}")
    unbound = free_fn_vars(phi) - set(env.tables) - set(M.functions)
    if unbound:
        raise KeyError(f"unbound function symbols {sorted(unbound)}")
    env.validate(M)
    return SOEvaluator(M, budget).eval(phi, env.lookup(), s)


def so_sentence_true(M: Model, phi, budget: int = DEFAULT_TABLE_BUDGET) -> bool:
    if free_vars(phi):
        raise ValueError(f"not a sentence: free variables {sorted(free_vars(phi))}")
    return so_satisfies(M, phi, EMPTY_ENV, {}, budget)
