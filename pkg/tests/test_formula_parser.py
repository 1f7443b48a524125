import pytest
from hypothesis import given

from tlk.formula_parser import ParseError, SourceSpan, load_signature, parse_formula, parse_so, render
from tlk.generators import law_generator
from tlk.logic_ast import (
    And, App, Bot, Dep, Eq, Exists, ExistsFn, ForallFn, Fragment, Impl, IVee, LImpl, NDep, Neg, Or, Signature,
    Tensor, Var,
)

from conftest import UNARY_F
from strategies import bid_formulas, so_formulas

x, y, z = Var("x"), Var("y"), Var("z")


def test_precedence_and_associativity():
    phi = parse_formula("x=y & y=z | dep(x) -> bot -> x=x")
    assert phi == Impl(
        Tensor(And(Eq(x, y), Eq(y, z)), Dep((x,))),
        Impl(Bot(), Eq(x, x)),
    )
    assert parse_formula("dep(x) || dep(y) | dep(z)") == Tensor(IVee(Dep((x,)), Dep((y,))), Dep((z,)))
    assert parse_formula("x=x -* y=y -* z=z") == LImpl(Eq(x, x), LImpl(Eq(y, y), Eq(z, z)))


def test_quantifiers_extend_right():
    phi = parse_formula("E x. x=y & dep(x)")
    assert phi == Exists("x", And(Eq(x, y), Dep((x,))))
    assert parse_formula("(E x. x=y) & dep(x)") == And(Exists("x", Eq(x, y)), Dep((x,)))


def test_negation_and_ndep():
    assert parse_formula("~x=y") == Neg(Eq(x, y))
    assert parse_formula("ndep(x,f(y))") == NDep((x, App("f", (y,))))


def test_second_order_quantifiers():
    phi = parse_so("Af f:1. Ef g:2. A x. f(x)=g(x,x)")
    assert isinstance(phi, ForallFn) and phi.arity == 1
    assert isinstance(phi.body, ExistsFn) and phi.body.arity == 2
    assert parse_so("x=y | x=z") == Or(Eq(x, y), Eq(x, z))


@pytest.mark.parametrize("text, span", [
    ("dep(x,", (6, 6)),
    ("A x x=x", (4, 5)),
    ("x=y &", (5, 5)),
    ("~dep(x)", (0, 7)),
    ("f(x)=f(x,y)", (5, 11)),
    ("(x=y", (4, 4)),
    ("x==y", (2, 3)),
    ("x=y $ y=z", (4, 5)),
])
def test_parse_errors_point_at_the_problem(text, span):
    with pytest.raises(ParseError) as info:
        parse_formula(text)
    assert (info.value.span.start, info.value.span.end) == span
    lines = info.value.pretty().splitlines()
    assert lines[1].strip() == text and "^" in lines[2]


@pytest.mark.parametrize("text", [
    "Af f:2. bot",
    "Ef f:0. x=x",
    "Af f:1. A x. R(f)",
    "Af f:1. A x. f(x,x)=x",
    "Ef R:1. R(x)",
])
def test_second_order_errors(text):
    with pytest.raises(ParseError):
        parse_so(text)


def test_bid_connectives_rejected_in_second_order_input():
    for text in ("dep(x)", "x=y -* x=y", "x=y || x=y", "bot"):
        with pytest.raises(ParseError):
            parse_so(text)


def test_signature_checks():
    sig = Signature(relations={"P": 1}, functions={"f": 1})
    parse_formula("P(f(x))", sig)
    for bad in ("Q(x)", "P(x,y)", "g(x)=x", "f(x,y)=x", "f(P(x))=x"):
        with pytest.raises(ParseError):
            parse_formula(bad, sig)


def test_inferred_vocabulary_must_be_consistent():
    with pytest.raises(ParseError):
        parse_formula("P(x) & P(x,y)")
    with pytest.raises(ParseError):
        parse_formula("P(x) & P(y)=x")


def test_load_signature():
    sig = load_signature('{"relations": {"P": 1}, "functions": {"f": 1}, "constants": ["c"]}')
    assert sig.relations == {"P": 1} and sig.functions == {"f": 1} and sig.constants == ("c",)
    for bad in ("[]", "{", '{"preds": {}}'):
        with pytest.raises(ValueError):
            load_signature(bad)


def test_source_span_validates():
    with pytest.raises(ValueError):
        SourceSpan(3, 1)


@given(bid_formulas)
def test_bid_round_trip(phi):
    assert parse_formula(render(phi)) == phi


@given(so_formulas)
def test_so_round_trip(phi):
    assert parse_so(render(phi)) == phi


def test_round_trip_on_generated_asts():
    gen = law_generator(2, UNARY_F, depth=4)
    for i in range(1000):
        frag = list(Fragment)[i % 5]
        phi = gen.formula(frag)
        assert parse_formula(render(phi)) == phi
        so = gen.so_sentence(3, fn_quantifiers=i % 3, max_arity=2)
        assert parse_so(render(so)) == so
