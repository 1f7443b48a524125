"""Hypothesis strategies for terms and formulas."""
from hypothesis import strategies as st

from tlk.logic_ast import (
    And, App, Bot, Dep, Eq, Exists, ExistsFn, Forall, ForallFn, Impl, Implies, IVee, LImpl,
    NDep, Neg, Not, Or, Rel, Tensor, Var,
)

VARS = ("x", "y", "z")
variables = st.sampled_from(VARS).map(Var)
terms = st.recursive(variables, lambda t: t.map(lambda a: App("f", (a,))), max_leaves=3)


def _fo_atoms():
    eq = st.builds(Eq, terms, terms)
    rel = st.builds(lambda a: Rel("P", (a,)), terms)
    return st.one_of(eq, rel)


def _bid_leaves():
    atom = _fo_atoms()
    deps = st.lists(terms, min_size=1, max_size=3).map(tuple)
    return st.one_of(atom, atom.map(Neg), deps.map(Dep), deps.map(NDep), st.just(Bot()))


def _quant(kind):
    return lambda s: st.builds(kind, st.sampled_from(VARS), s)


def _bid_step(s):
    return st.one_of(
        *(st.builds(op, s, s) for op in (And, Tensor, IVee, Impl, LImpl)),
        _quant(Forall)(s), _quant(Exists)(s),
    )


bid_formulas = st.recursive(_bid_leaves(), _bid_step, max_leaves=8)


def _so_step(s):
    g = App("g", (Var("x"),))
    fn_leaf = st.builds(lambda a: Eq(g, a), terms)
    return st.one_of(
        *(st.builds(op, s, s) for op in (And, Or, Implies)),
        s.map(Not), _quant(Forall)(s), _quant(Exists)(s),
        st.builds(lambda b, a: ForallFn("g", 1, And(b, a)), s, fn_leaf),
        st.builds(lambda b, a: ExistsFn("g", 1, Or(b, a)), s, fn_leaf),
    )


so_formulas = st.recursive(_fo_atoms(), _so_step, max_leaves=8)
