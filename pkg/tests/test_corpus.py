import pytest

from tlk.corpus import (
    FIXED, PI12_CORPUS, SHAPES, drop_first_theta, generated_sentences, main_corpus, swap_first_impl,
)
from tlk.formula_parser import parse_formula as P, parse_so as S, render
from tlk.normal_form import NiceNormalForm


def test_corpus_is_deterministic_and_shaped():
    a, b = main_corpus(), main_corpus()
    assert [render(phi) for _, phi, _ in a] == [render(phi) for _, phi, _ in b]
    assert len(a) == len(FIXED) + len(SHAPES) == 12
    for (n, p, q), phi in zip(SHAPES, generated_sentences()):
        nf = NiceNormalForm.from_so(phi)
        assert (nf.n, nf.p, nf.q) == (n, p, q)


def test_pi12_corpus_parses():
    assert all(S(t) for t in PI12_CORPUS)


def test_mutators():
    star = P("A u. A x. (dep(x,u) -> E v. (dep(x,v) & u=v))")
    assert render(drop_first_theta(star)) == "A u. A x. E v. (dep(x,v) & u=v)"
    assert render(swap_first_impl(star)) == "A u. A x. (dep(x,u) & E v. (dep(x,v) & u=v))"
    assert render(drop_first_theta(P("x=y & dep(x)"))) == "x=y"
    with pytest.raises(ValueError):
        drop_first_theta(P("x=y"))
    with pytest.raises(ValueError):
        swap_first_impl(P("dep(x)"))
