import pytest

from tlk.finite_model import enumerate_models
from tlk.formula_parser import parse_so as S, render
from tlk.generators import law_generator
from tlk.logic_ast import App, ExistsFn, ForallFn, Signature, Var, subformulas
from tlk.normal_form import (
    PIPELINE, NiceNormalForm, NormalFormError, decompose, flatten_fn_args, fn_occurrences,
    normalize, pad_blocks, so_nice_normal_form, split_prefix, unify_fn_occurrences,
)
from tlk.so_eval import so_sentence_true
from tlk.trace import replay

P1 = Signature(relations={"P": 1})
SAMPLE_MODELS = [M for n in (1, 2) for M in enumerate_models(P1, n)]


def _cost(phi, n=2):
    total = 1
    for node in subformulas(phi):
        if isinstance(node, (ForallFn, ExistsFn)):
            total *= n ** (n ** node.arity)
    return total


def _equivalent(a, b):
    return all(so_sentence_true(M, a) == so_sentence_true(M, b) for M in SAMPLE_MODELS)


def _corpus(seed, count, fn_quantifiers=(1, 2), max_arity=1, limit=1 << 12):
    """Generated sentences whose normal form stays cheap to brute-force."""
    gen = law_generator(seed, P1)
    out = []
    while len(out) < count:
        phi = gen.so_sentence(3, fn_quantifiers=fn_quantifiers[len(out) % len(fn_quantifiers)],
                              max_arity=max_arity)
        if _cost(normalize(phi)[0]) <= limit:
            out.append(phi)
    return out


def _fn_var_apps(phi):
    bound = {n.name for n in subformulas(phi) if isinstance(n, (ForallFn, ExistsFn))}
    from tlk.logic_ast import atom_terms, term_apps
    for node in subformulas(phi):
        for t in atom_terms(node):
            for app in term_apps(t):
                if app.fn in bound:
                    yield app


def test_flatten_example():
    phi = S("Ef f:1. Ef g:1. A x. f(g(x))=x")
    out = flatten_fn_args(phi)
    assert render(out) == "Ef f:1. Ef g:1. A x. A v. (~(g(x)=v) | f(v)=x)"


def test_flatten_leaves_flat_input_alone():
    phi = S("Af f:1. A x. f(x)=x")
    assert flatten_fn_args(phi) == phi


def test_flatten_preserves_truth_and_flattens():
    for phi in _corpus(51, 50):
        prenexed = normalize(phi, pad=False)[0]
        out = flatten_fn_args(phi)
        for app in _fn_var_apps(flatten_fn_args(prenexed)):
            assert all(isinstance(a, Var) for a in app.args)
            assert len(set(app.args)) == len(app.args)
        assert _equivalent(phi, out)


def test_unify_example():
    phi = S("Af f:1. A x. A y. (f(x)=f(y) -> x=y)")
    out = unify_fn_occurrences(phi)
    fn_prefix, _, matrix = decompose(out)
    assert [(k, n) for k, n, _ in fn_prefix] == [(ForallFn, "f"), (ExistsFn, "f_c")]
    assert all(len(v) == 1 for v in fn_occurrences(matrix, ["f", "f_c"]).values())
    assert _equivalent(phi, out)


def test_unify_single_occurrence_unchanged():
    phi = S("Af f:1. A x. f(x)=x")
    assert unify_fn_occurrences(phi) == phi


def test_unify_preserves_truth():
    checked = 0
    for phi in _corpus(52, 40):
        before, _ = normalize(phi, pad=False)
        assert _equivalent(phi, before)
        fn_prefix, _, matrix = decompose(before)
        occ = fn_occurrences(matrix, [n for _, n, _ in fn_prefix])
        assert all(len(v) <= 1 for v in occ.values())
        checked += 1
    assert checked == 40


def test_unify_needs_flat_input():
    with pytest.raises(NormalFormError):
        unify_fn_occurrences(S("Af f:1. A x. f(f(x))=x"))


def test_nice_form_example_pads_a_universal_block():
    nf, trace = so_nice_normal_form(S("Ef f:1. A x. R(x,f(x))"))
    assert (nf.n, nf.p, nf.q, nf.m) == (1, 1, 1, 1)
    assert nf.blocks[1] == ("f",) and nf.blocks[0][0].startswith("f_pad")
    assert render(nf.to_so()) == "Af f_pad:1. Ef f:1. A x. R(x,f(x))"
    assert trace.steps[-1].rule == "pad_blocks"


def test_nice_input_is_a_fixpoint():
    phi = S("Af f:1. Ef g:1. A x. f(x)=g(x)")
    nf, trace = so_nice_normal_form(phi)
    assert nf.to_so() == phi and len(trace) == 0


def test_normal_forms_are_equivalent_and_well_formed():
    for phi in _corpus(53, 15, max_arity=2):
        nf, trace = so_nice_normal_form(phi)
        assert _equivalent(phi, nf.to_so())
        assert replay(trace, phi, nf.to_so()) == nf.to_so()
        assert len({a for b in nf.blocks for a in b}) == 2 * nf.n * nf.p
        for f, args in nf.occurrences:
            assert len(args) == nf.q


def test_padding_makes_uniform_blocks():
    phi = S("Af f:1. Af g:2. Ef h:1. A x. A y. (f(x)=h(x) & g(x,y)=y)")
    out = pad_blocks(phi)
    prefix, _ = split_prefix(out)
    arities = {a for k, _, a in prefix if k in (ForallFn, ExistsFn)}
    assert arities == {2}
    assert [k for k, _, _ in prefix[:4]] == [ForallFn, ForallFn, ExistsFn, ExistsFn]
    assert _equivalent(phi, out)


def test_pipeline_names():
    assert PIPELINE[0] == "nnf" and PIPELINE[-1] == "unify_fn_occurrences"


def test_errors():
    with pytest.raises(NormalFormError):
        so_nice_normal_form(S("A x. f(y)=x"))
    with pytest.raises(NormalFormError):
        decompose(S("A x. E y. x=y"))
    with pytest.raises(NormalFormError):
        NiceNormalForm((("f",),), 1, ("x",), S("x=x"), (("f", ("x",)),))
    with pytest.raises(NormalFormError):
        NiceNormalForm((("f",), ("g",)), 1, ("x",), S("x=x"), (("f", ("x",)), ("g", ("y",))))
    with pytest.raises(NormalFormError):
        NiceNormalForm.from_so(S("Af f:1. A x. f(x)=f(f(x))"))


def test_app_terms_are_values():
    assert App("f", (Var("x"),)) == App("f", (Var("x"),))
