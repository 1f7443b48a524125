"""Seeded random formulas for property checks.

Every generator draws from a :class:`random.Random` passed in by the caller,
so a seed fixes the whole corpus.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .logic_ast import (
    And, App, Bot, Const, Dep, Eq, Exists, ExistsFn, Forall, ForallFn, Fragment, Impl, Implies,
    IVee, LImpl, NDep, Neg, Not, Or, Rel, Signature, Tensor, Var,
)
from .normal_form import NiceNormalForm

UNARY_FN_SIG = Signature(functions={"f": 1})
EMPTY_SIG = Signature()

_FRAGMENT_CHOICES = {
    Fragment.FO: ("lit", "and", "tensor", "forall", "exists"),
    Fragment.D: ("lit", "dep", "ndep", "and", "tensor", "forall", "exists"),
    Fragment.ID: ("atom", "const", "bot", "and", "ivee", "impl", "forall", "exists"),
    Fragment.LD: ("lit", "dep", "ndep", "and", "tensor", "limpl", "forall", "exists"),
    Fragment.BID: ("lit", "dep", "ndep", "bot", "and", "tensor", "ivee", "impl", "limpl",
                   "forall", "exists"),
}
_LEAVES = {"lit", "atom", "dep", "ndep", "const", "bot"}


@dataclass(frozen=True)
class GenConfig:
    depth: int = 3
    free: tuple = ("x", "y")
    bound: tuple = ("x", "y", "z")
    term_depth: int = 1
    max_dep_terms: int = 3


class FormulaGenerator:
    def __init__(self, rng: random.Random, sig: Signature = EMPTY_SIG, config: GenConfig = GenConfig()):
        self.rng = rng
        self.sig = sig
        self.config = config

    # terms and atoms

    def term(self, scope: list, depth: int | None = None, fns: dict | None = None):
        depth = self.config.term_depth if depth is None else depth
        rng = self.rng
        fns = dict(self.sig.functions, **(fns or {}))
        options = ["var"] * 3 if scope else []
        if self.sig.constants:
            options.append("const")
        if depth > 0 and fns:
            options.append("app")
        if not options:
            raise ValueError("no terms available: empty scope and no constants")
        kind = rng.choice(options)
        if kind == "var":
            return Var(rng.choice(scope))
        if kind == "const":
            return Const(rng.choice(list(self.sig.constants)))
        name = rng.choice(sorted(fns))
        return App(name, tuple(self.term(scope, depth - 1, fns) for _ in range(fns[name])))

    def atom(self, scope: list):
        rng = self.rng
        rels = sorted(self.sig.relations)
        if rels and rng.random() < 0.5:
            name = rng.choice(rels)
            return Rel(name, tuple(self.term(scope) for _ in range(self.sig.relations[name])))
        return Eq(self.term(scope), self.term(scope))

    # formulas

    def formula(self, fragment: Fragment, depth: int | None = None, scope: list | None = None):
        depth = self.config.depth if depth is None else depth
        scope = list(self.config.free) if scope is None else scope
        return self._gen(fragment, depth, scope)

    def _gen(self, fragment, depth, scope):
        rng = self.rng
        choices = _FRAGMENT_CHOICES[fragment]
        if not scope and not self.sig.constants:
            # no terms to build atoms from: only quantifiers (and bot) apply
            choices = tuple(c for c in choices if c in ("forall", "exists", "bot"))
        if depth <= 0:
            leaves = [c for c in choices if c in _LEAVES]
            if not leaves:
                return self._quantified_leaf(fragment)
            kind = rng.choice(leaves)
        else:
            kind = rng.choice(choices)
        if kind == "lit":
            a = self.atom(scope)
            return Neg(a) if rng.random() < 0.4 else a
        if kind == "atom":
            return self.atom(scope)
        if kind in ("dep", "ndep"):
            k = rng.randint(1, self.config.max_dep_terms)
            terms = tuple(self.term(scope) for _ in range(k))
            return Dep(terms) if kind == "dep" else NDep(terms)
        if kind == "const":
            return Dep((self.term(scope),))
        if kind == "bot":
            return Bot()
        if kind in ("forall", "exists"):
            v = rng.choice(self.config.bound)
            body = self._gen(fragment, depth - 1, sorted(set(scope) | {v}))
            return (Forall if kind == "forall" else Exists)(v, body)
        op = {"and": And, "tensor": Tensor, "ivee": IVee, "impl": Impl, "limpl": LImpl}[kind]
        return op(self._gen(fragment, depth - 1, scope), self._gen(fragment, depth - 1, scope))

    def _quantified_leaf(self, fragment):
        v = self.config.bound[0]
        kind = self.rng.choice((Forall, Exists))
        return kind(v, self._gen(fragment, 0, [v]))

    def sentence(self, fragment: Fragment, depth: int | None = None):
        return self.formula(fragment, depth, scope=[])

    # classical and second-order

    def classical(self, depth: int, scope: list, fns: dict | None = None, quantifiers: bool = True):
        """A classical first-order formula over SO nodes (``Not``, ``Or``, ``Implies``)."""
        rng = self.rng
        if depth <= 0 or not scope:
            a = self._classical_atom(scope, fns)
            return Not(a) if rng.random() < 0.3 else a
        kinds = ["not", "and", "or", "implies"] + (["forall", "exists"] if quantifiers else [])
        kind = rng.choice(kinds)
        if kind == "not":
            return Not(self.classical(depth - 1, scope, fns, quantifiers))
        if kind in ("forall", "exists"):
            v = rng.choice(self.config.bound)
            body = self.classical(depth - 1, sorted(set(scope) | {v}), fns, quantifiers)
            return (Forall if kind == "forall" else Exists)(v, body)
        op = {"and": And, "or": Or, "implies": Implies}[kind]
        return op(self.classical(depth - 1, scope, fns, quantifiers),
                  self.classical(depth - 1, scope, fns, quantifiers))

    def _classical_atom(self, scope, fns):
        rng = self.rng
        rels = sorted(self.sig.relations)
        if rels and rng.random() < 0.4:
            name = rng.choice(rels)
            return Rel(name, tuple(self.term(scope, fns=fns) for _ in range(self.sig.relations[name])))
        return Eq(self.term(scope, fns=fns), self.term(scope, fns=fns))

    def so_sentence(self, depth: int = 3, fn_quantifiers: int = 2, max_arity: int = 1):
        """A second-order sentence with function quantifiers mixed among first-order ones."""
        rng = self.rng
        fns = {}
        prefix = []
        scope: list = []
        for i in range(fn_quantifiers):
            name = f"g{i}"
            fns[name] = rng.randint(1, max_arity)
            prefix.append(("fn", rng.choice((ForallFn, ExistsFn)), name))
        for v in ("x", "y")[: rng.randint(1, 2)]:
            prefix.insert(rng.randint(0, len(prefix)), ("fo", rng.choice((Forall, Exists)), v))
        for item in prefix:
            if item[0] == "fo":
                scope.append(item[2])
        old = self.config
        self.config = GenConfig(depth=old.depth, free=old.free, bound=old.bound, term_depth=2)
        try:
            body = self.classical(depth - 1, scope, fns)
        finally:
            self.config = old
        for kind_tag, kind, name in reversed(prefix):
            body = kind(name, fns[name], body) if kind_tag == "fn" else kind(name, body)
        return body

    def nice_form(self, n: int = 1, p: int = 1, q: int = 1, m: int | None = None,
                  size: int = 3) -> NiceNormalForm:
        """A random sentence already in nice normal form."""
        rng = self.rng
        m = max(q, m or q)
        xs = tuple(f"x{i}" for i in range(1, m + 1))
        blocks = tuple(tuple(f"f{i}_{j}" for j in range(1, p + 1)) for i in range(1, 2 * n + 1))
        occurrences = tuple((f, tuple(rng.sample(xs, q))) for b in blocks for f in b)
        fn_terms = [App(f, tuple(Var(a) for a in args)) for f, args in occurrences]
        base = [Var(x) for x in xs] + [Const(c) for c in self.sig.constants]
        # bias towards the existential blocks so the matrix constrains them
        weights = [1 + (i % 2) for i, b in enumerate(blocks) for _ in b]

        def term():
            if rng.random() < 0.6:
                return rng.choices(fn_terms, weights)[0]
            return rng.choice(base)

        def atom():
            rels = sorted(self.sig.relations)
            if rels and rng.random() < 0.4:
                name = rng.choice(rels)
                return Rel(name, tuple(term() for _ in range(self.sig.relations[name])))
            return Eq(term(), term())

        def lit():
            a = atom()
            return Not(a) if rng.random() < 0.4 else a

        def gen(k):
            if k <= 1:
                return lit()
            left = rng.randint(1, k - 1)
            op = rng.choice((And, Or))
            return op(gen(left), gen(k - left))

        return NiceNormalForm(blocks, q, xs, gen(size), occurrences)

    def any_ast(self, depth: int = 3):
        """An AST from a uniformly chosen fragment, or a second-order sentence."""
        rng = self.rng
        pick = rng.randrange(len(Fragment) + 1)
        if pick == len(Fragment):
            return self.so_sentence(depth, fn_quantifiers=rng.randint(0, 2), max_arity=2)
        return self.formula(list(Fragment)[pick], depth)


def law_generator(seed: int, sig: Signature = EMPTY_SIG, **config) -> FormulaGenerator:
    return FormulaGenerator(random.Random(seed), sig, GenConfig(**config))
