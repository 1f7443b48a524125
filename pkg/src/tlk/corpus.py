"""Fixed second-order sentences used by the translation checks, and mutators for ``φ*``.

``main_corpus()`` returns twelve ``(name, sentence, signature)`` triples: four
hand-written sentences followed by eight generated ones already in nice normal
form.  ``PI12_CORPUS`` lists sentences with one universal and one existential
function block, the shape accepted by the linear-implication translation.
"""
from __future__ import annotations

from .finite_model import enumerate_models
from .formula_parser import parse_so
from .generators import law_generator
from .logic_ast import And, Dep, Impl, Signature, children, rebuild
from .so_eval import so_sentence_true

EMPTY = Signature()
UNARY_P = Signature(relations={"P": 1})

FIXED = (
    ("copy", "Af f:1. Ef g:1. A x. f(x)=g(x)"),
    ("injective_not_surjective", "Ef f:1. (A x. A y. (f(x)=f(y) -> x=y)) & E w. A x. ~(f(x)=w)"),
    ("injective_implies_surjective",
     "Af f:1. (E x. E y. (f(x)=f(y) & ~(x=y))) | A w. E x. f(x)=w"),
    ("left_inverse", "Af f:1. Ef g:1. A x. g(f(x))=x"),
)

PI12_CORPUS = (
    "Af f:1. Ef g:1. A x. f(x)=g(x)",
    "Af f:1. Ef g:1. A x. g(f(x))=x",
    "Af f:1. Ef g:1. A x. ~(g(x)=f(x))",
    "Af f:1. Ef g:1. A x. g(x)=f(f(x))",
)

# (n, p, q) for the generated sentences: alternation depth, block length, arity
SHAPES = ((1, 1, 1), (1, 2, 1), (1, 1, 2), (2, 1, 1), (1, 2, 2), (2, 2, 1), (2, 1, 2), (1, 2, 1))


def _informative(phi, sig: Signature) -> bool:
    values = {so_sentence_true(M, phi) for n in (1, 2) for M in enumerate_models(sig, n)}
    return len(values) == 2


def generated_sentences(seed: int = 1, sig: Signature = UNARY_P, tries: int = 20) -> list:
    """One nice-form sentence per shape in :data:`SHAPES`.

    Per shape, the first of ``tries`` candidates whose truth differs between
    models of size at most 2 is kept, so the corpus is not all tautologies
    and contradictions; otherwise the first candidate is used.
    """
    gen = law_generator(seed, sig)
    out = []
    for n, p, q in SHAPES:
        candidates = [gen.nice_form(n, p, q, m=2, size=4).to_so() for _ in range(tries)]
        out.append(next((c for c in candidates if _informative(c, sig)), candidates[0]))
    return out


def main_corpus(seed: int = 1) -> list:
    items = [(name, parse_so(text), EMPTY) for name, text in FIXED]
    for i, phi in enumerate(generated_sentences(seed)):
        n, p, q = SHAPES[i]
        items.append((f"nice_{i + 1}_n{n}p{p}q{q}", phi, UNARY_P))
    return items


def _rewrite_first(phi, match, replace):
    """Rewrite the first node (pre-order) accepted by ``match``; ``None`` if there is none."""
    if match(phi):
        return replace(phi)
    kids = children(phi)
    for i, kid in enumerate(kids):
        new = _rewrite_first(kid, match, replace)
        if new is not None:
            return rebuild(phi, kids[:i] + (new,) + kids[i + 1:])
    return None


def drop_first_theta(phi_star):
    """Remove the first dependence-atom conjunct or antecedent from ``φ*``."""
    def match(node):
        return (isinstance(node, Impl) and isinstance(node.left, Dep)) or (
            isinstance(node, And) and (isinstance(node.left, Dep) or isinstance(node.right, Dep)))

    def replace(node):
        if isinstance(node, Impl) or isinstance(node.left, Dep):
            return node.right
        return node.left

    out = _rewrite_first(phi_star, match, replace)
    if out is None:
        raise ValueError("no dependence atom to drop")
    return out


def swap_first_impl(phi_star):
    """Turn the first intuitionistic implication of ``φ*`` into a conjunction."""
    out = _rewrite_first(phi_star, lambda n: isinstance(n, Impl), lambda n: And(n.left, n.right))
    if out is None:
        raise ValueError("no implication to swap")
    return out


MUTATIONS = {"drop_theta": drop_first_theta, "swap_impl": swap_first_impl}

__all__ = ["FIXED", "PI12_CORPUS", "SHAPES", "MUTATIONS", "main_corpus", "generated_sentences",
           "drop_first_theta", "swap_first_impl"]
