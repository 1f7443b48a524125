"""Second-order sentences into a blocked, uniform-occurrence normal form.

The pipeline, each stage a registered rewrite rule:

1. classical negation normal form
2. rename bound symbols apart
3. prenex, preferring function quantifiers and ``∃`` ahead of ``∀x``
4. Skolemise first-order ``∃`` and move function quantifiers in front of
   every first-order ``∀``, raising their arity by the universals they cross
5. flatten function-variable arguments to distinct variables
6. prenex again (flattening introduces universals inside the matrix)
7. give every function variable a single argument tuple, adding linked copies
8. pad to ``2n`` alternating blocks of ``p`` quantifiers of arity ``q``

The result is a sentence ``Q¹f̄¹ … Q²ⁿf̄²ⁿ ∀x̄ ψ`` with ``ψ`` quantifier-free in
which every ``f`` is always applied to the same tuple of variables.
"""
from __future__ import annotations

from dataclasses import dataclass

from .logic_ast import (
    And, App, Eq, Exists, ExistsFn, Forall, ForallFn, Implies, Not, Or, Rel, Var,
    all_names, atom_terms, children, classical_nnf, free_fn_vars, free_vars, fresh_vars, map_term,
    rebuild, signature_of, subformulas, subst_vars, term_apps,
)
from .trace import TranslationTrace, rule

FN_QUANTS = (ForallFn, ExistsFn)
FO_QUANTS = (Forall, Exists)


class NormalFormError(ValueError):
    pass


# --------------------------------------------------------------------------
# prefix helpers


def split_prefix(phi):
    """``(prefix, matrix)`` where prefix items are ``(kind, name, arity)``."""
    prefix = []
    while isinstance(phi, FN_QUANTS + FO_QUANTS):
        if isinstance(phi, FN_QUANTS):
            prefix.append((type(phi), phi.name, phi.arity))
        else:
            prefix.append((type(phi), phi.var, None))
        phi = phi.body
    return prefix, phi


def build_prefix(prefix, matrix):
    for kind, name, arity in reversed(prefix):
        matrix = kind(name, arity, matrix) if kind in FN_QUANTS else kind(name, matrix)
    return matrix


def is_quantifier_free(phi) -> bool:
    return not any(isinstance(n, FN_QUANTS + FO_QUANTS) for n in subformulas(phi))


def decompose(phi):
    """Split ``fn-prefix ∀x̄ matrix``; raise unless ``phi`` has that shape."""
    prefix, matrix = split_prefix(phi)
    k = 0
    while k < len(prefix) and prefix[k][0] in FN_QUANTS:
        k += 1
    fn_prefix, rest = prefix[:k], prefix[k:]
    if any(kind is not Forall for kind, _, _ in rest):
        raise NormalFormError("first-order quantifiers must be universal and follow the function prefix")
    if not is_quantifier_free(matrix):
        raise NormalFormError("matrix is not quantifier-free")
    return fn_prefix, [name for _, name, _ in rest], matrix


def fn_occurrences(matrix, names) -> dict:
    """Distinct argument tuples of each function variable, in order of appearance."""
    out: dict = {name: [] for name in names}
    for node in subformulas(matrix):
        for t in atom_terms(node):
            for app in term_apps(t):
                if app.fn in out and app.args not in out[app.fn]:
                    out[app.fn].append(app.args)
    return out


def _rename_fn(phi, old: str, new: str):
    if isinstance(phi, FN_QUANTS) and phi.name == old:
        return phi
    if isinstance(phi, (Eq, Rel)):
        def tm(t):
            return App(new, t.args) if isinstance(t, App) and t.fn == old else t
        if isinstance(phi, Eq):
            return Eq(map_term(phi.left, tm), map_term(phi.right, tm))
        return Rel(phi.name, tuple(map_term(a, tm) for a in phi.args))
    kids = children(phi)
    if not kids:
        return phi
    return rebuild(phi, tuple(_rename_fn(k, old, new) for k in kids))


def _replace_term(phi, old, new):
    """Replace every occurrence of the term ``old`` inside atoms of ``phi``."""
    def tm(t):
        return new if t == old else t

    if isinstance(phi, Eq):
        return Eq(map_term(phi.left, tm), map_term(phi.right, tm))
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(map_term(a, tm) for a in phi.args))
    kids = children(phi)
    if not kids:
        return phi
    return rebuild(phi, tuple(_replace_term(k, old, new) for k in kids))


def _guarded(pairs, body):
    """``(t₁=v₁ ∧ … ) →fo body`` in negation normal form."""
    for t, v in reversed(pairs):
        body = Or(Not(Eq(t, v)), body)
    return body


# --------------------------------------------------------------------------
# rules


@rule("nnf", "classical negation normal form")
def so_nnf(phi):
    return classical_nnf(phi)


@rule("rename_apart", "alpha-renaming of bound symbols")
def rename_apart(phi):
    used = all_names(phi)
    taken = set(free_vars(phi)) | set(free_fn_vars(phi)) | signature_of(phi).names()
    seen: set = set()

    def go(node):
        if isinstance(node, FO_QUANTS):
            name, body = node.var, node.body
            if name in seen or name in taken:
                new = fresh_vars(name, 1, used)[0]
                used.add(new)
                body = subst_vars(body, {name: Var(new)})
                name = new
            seen.add(name)
            return type(node)(name, go(body))
        if isinstance(node, FN_QUANTS):
            name, body = node.name, node.body
            if name in seen or name in taken:
                new = fresh_vars(name, 1, used)[0]
                used.add(new)
                body = _rename_fn(body, name, new)
                name = new
            seen.add(name)
            return type(node)(name, node.arity, go(body))
        kids = children(node)
        if not kids:
            return node
        return rebuild(node, tuple(go(k) for k in kids))

    return go(phi)


def _priority(item) -> int:
    kind = item[0]
    if kind in FN_QUANTS:
        return 0
    return 1 if kind is Exists else 2


def _merge(left: list, right: list) -> list:
    out = []
    i = j = 0
    while i < len(left) and j < len(right):
        if _priority(right[j]) < _priority(left[i]):
            out.append(right[j])
            j += 1
        else:
            out.append(left[i])
            i += 1
    return out + left[i:] + right[j:]


def _prenex(phi):
    if isinstance(phi, FN_QUANTS):
        p, m = _prenex(phi.body)
        return [(type(phi), phi.name, phi.arity)] + p, m
    if isinstance(phi, FO_QUANTS):
        p, m = _prenex(phi.body)
        return [(type(phi), phi.var, None)] + p, m
    if isinstance(phi, (And, Or)):
        lp, lm = _prenex(phi.left)
        rp, rm = _prenex(phi.right)
        return _merge(lp, rp), type(phi)(lm, rm)
    if isinstance(phi, Implies):
        raise NormalFormError("prenex expects negation normal form")
    return [], phi


@rule("prenex", "prenex laws for bound symbols renamed apart")
def prenex(phi):
    binders = [n.var if isinstance(n, FO_QUANTS) else n.name
               for n in subformulas(phi) if isinstance(n, FO_QUANTS + FN_QUANTS)]
    if len(binders) != len(set(binders)):
        raise NormalFormError("prenex needs bound symbols renamed apart")
    prefix, matrix = _prenex(phi)
    return build_prefix(prefix, matrix)


@rule("skolemize", "Skolem functions; function quantifiers commuted past universals by arity raising")
def skolemize(phi):
    prefix, matrix = split_prefix(phi)
    if not is_quantifier_free(matrix):
        raise NormalFormError("skolemize expects a prenex formula")
    universals: list = []
    fn_prefix: list = []
    raised: dict = {}
    sub: dict = {}
    used = all_names(phi)
    anchor = None
    changed = False
    for kind, name, arity in prefix:
        if kind is Forall:
            universals.append(name)
        elif kind is Exists:
            changed = True
            g = fresh_vars("sk", 1, used)[0]
            used.add(g)
            if universals:
                args = tuple(Var(u) for u in universals)
            else:
                if anchor is None:
                    anchor = fresh_vars("z", 1, used)[0]
                    used.add(anchor)
                args = (Var(anchor),)
            fn_prefix.append((ExistsFn, g, len(args)))
            sub[name] = App(g, args)
        else:
            if universals:
                changed = True
                raised[name] = tuple(Var(u) for u in universals)
            fn_prefix.append((kind, name, arity + len(raised.get(name, ()))))
    if not changed:
        return phi

    def tm(t):
        if isinstance(t, Var) and t.name in sub:
            return sub[t.name]
        if isinstance(t, App) and t.fn in raised:
            return App(t.fn, raised[t.fn] + t.args)
        return t

    def on(node):
        if isinstance(node, Eq):
            return Eq(map_term(node.left, tm), map_term(node.right, tm))
        if isinstance(node, Rel):
            return Rel(node.name, tuple(map_term(a, tm) for a in node.args))
        return rebuild(node, tuple(on(k) for k in children(node)))

    if anchor is not None:
        universals.append(anchor)
    body = build_prefix([(Forall, u, None) for u in universals], on(matrix))
    return build_prefix(fn_prefix, body)


def _bound_fn_names(phi) -> set:
    return {n.name for n in subformulas(phi) if isinstance(n, FN_QUANTS)}


def _bad_positions(app: App) -> list:
    seen = set()
    bad = []
    for i, a in enumerate(app.args):
        if not isinstance(a, Var) or a.name in seen:
            bad.append(i)
        else:
            seen.add(a.name)
    return bad


def _first_bad(literal, fnvars):
    for t in atom_terms(literal.body if isinstance(literal, Not) else literal):
        for app in term_apps(t):
            if app.fn in fnvars and _bad_positions(app):
                return app
    return None


@rule("flatten_fn_args", "nested function terms removed through fresh universal variables")
def flatten_fn_args(phi):
    """Give every function-variable occurrence distinct variable arguments.

    A literal ``α(f t̄)`` with offending arguments becomes
    ``∀v̄ ((tᵢ = vᵢ ∧ …) → α(f t̄′))`` where only the offending positions get a
    fresh ``vᵢ``.  Innermost occurrences go first.  The rewrite is an
    equivalence, so it is applied under any connective.
    """
    fnvars = _bound_fn_names(phi)
    used = all_names(phi)

    def fix(literal):
        app = _first_bad(literal, fnvars)
        if app is None:
            return literal
        bad = _bad_positions(app)
        fresh = fresh_vars("v", len(bad), used)
        used.update(fresh)
        args = list(app.args)
        pairs = []
        for i, v in zip(bad, fresh):
            pairs.append((args[i], Var(v)))
            args[i] = Var(v)
        new = _replace_term(literal, app, App(app.fn, tuple(args)))
        body = _guarded(pairs, fix(new))
        for v in reversed(fresh):
            body = Forall(v, body)
        return body

    def go(node):
        if isinstance(node, (Eq, Rel)) or (isinstance(node, Not) and isinstance(node.body, (Eq, Rel))):
            return fix(node)
        kids = children(node)
        if not kids:
            return node
        return rebuild(node, tuple(go(k) for k in kids))

    return go(phi)


@rule("unify_fn_occurrences", "linked copies give each function variable one argument tuple")
def unify_fn_occurrences(phi):
    fn_prefix, universals, matrix = decompose(phi)
    names = [name for _, name, _ in fn_prefix]
    occ = fn_occurrences(matrix, names)
    for name in names:
        for args in occ[name]:
            if _bad_positions(App(name, args)):
                raise NormalFormError(f"occurrence {name}{args} is not flattened")
    used = all_names(phi)
    new_prefix = []
    universals = list(universals)
    links = []
    for kind, name, arity in fn_prefix:
        new_prefix.append((kind, name, arity))
        tuples = occ[name]
        if len(tuples) < 2:
            continue
        first = tuples[0]
        first_vars = {a.name for a in first}
        for args in tuples[1:]:
            g = fresh_vars(f"{name}_c", 1, used)[0]
            used.add(g)
            new_prefix.append((ExistsFn, g, arity))
            if first_vars & {a.name for a in args}:
                zs = fresh_vars("v", len(args), used)
                used.update(zs)
                universals.extend(zs)
                target = tuple(Var(z) for z in zs)
                matrix = _guarded(list(zip(args, target)), _replace_term(matrix, App(name, args), App(g, target)))
            else:
                target = args
                matrix = _replace_term(matrix, App(name, args), App(g, target))
            links.append(_guarded(list(zip(first, target)), Eq(App(name, first), App(g, target))))
    if not links:
        return phi
    for link in links:
        matrix = And(matrix, link)
    body = build_prefix([(Forall, u, None) for u in universals], matrix)
    return build_prefix(new_prefix, body)


def _blocks(fn_prefix):
    blocks: list = []
    for kind, name, arity in fn_prefix:
        if blocks and blocks[-1][0] is kind:
            blocks[-1][1].append((name, arity))
        else:
            blocks.append((kind, [(name, arity)]))
    return blocks


@rule("pad_blocks", "dummy quantifiers and arguments for uniform alternating blocks")
def pad_blocks(phi):
    fn_prefix, universals, matrix = decompose(phi)
    blocks = _blocks(fn_prefix)
    if not blocks or blocks[0][0] is not ForallFn:
        blocks.insert(0, (ForallFn, []))
    if blocks[-1][0] is not ExistsFn:
        blocks.append((ExistsFn, []))
    p = max(1, max(len(b) for _, b in blocks))
    q = max([1] + [a for _, b in blocks for _, a in b])
    used = all_names(phi)
    universals = list(universals)
    if not universals:
        z = fresh_vars("z", 1, used)[0]
        used.add(z)
        universals.append(z)
    missing = sum(p - len(b) for _, b in blocks)
    dummies = iter(fresh_vars("f_pad", missing, used))
    widen = {name: q - a for _, b in blocks for name, a in b if a < q}

    def tm(t):
        if isinstance(t, App) and t.fn in widen:
            return App(t.fn, t.args + (t.args[-1],) * widen[t.fn])
        return t

    def on(node):
        if isinstance(node, Eq):
            return Eq(map_term(node.left, tm), map_term(node.right, tm))
        if isinstance(node, Rel):
            return Rel(node.name, tuple(map_term(a, tm) for a in node.args))
        return rebuild(node, tuple(on(k) for k in children(node)))

    prefix = []
    for kind, members in blocks:
        for name, _ in members:
            prefix.append((kind, name, q))
        for _ in range(p - len(members)):
            prefix.append((kind, next(dummies), q))
    body = build_prefix([(Forall, u, None) for u in universals], on(matrix) if widen else matrix)
    return build_prefix(prefix, body)


PIPELINE = ("nnf", "rename_apart", "prenex", "skolemize", "flatten_fn_args", "prenex",
            "unify_fn_occurrences")


# --------------------------------------------------------------------------
# the normal form as data


@dataclass(frozen=True)
class NiceNormalForm:
    """``Q¹f̄¹ … Q²ⁿf̄²ⁿ ∀x̄ ψ`` with odd blocks universal.

    ``blocks[i]`` lists the ``p`` function variables of block ``i + 1``, all of
    arity ``q``; ``occurrences`` maps each of them to its fixed argument tuple.
    """

    blocks: tuple
    q: int
    fo_vars: tuple
    matrix: object
    occurrences: tuple   # ((name, (var, ...)), ...)

    def __post_init__(self):
        if not self.blocks or len(self.blocks) % 2:
            raise NormalFormError("need an even, non-zero number of blocks")
        p = len(self.blocks[0])
        if p < 1 or any(len(b) != p for b in self.blocks):
            raise NormalFormError("blocks must share one non-zero length")
        if self.q < 1:
            raise NormalFormError("arity must be at least 1")
        occ = dict(self.occurrences)
        for b in self.blocks:
            for f in b:
                args = occ.get(f)
                if args is None or len(args) != self.q or any(a not in self.fo_vars for a in args):
                    raise NormalFormError(f"bad occurrence tuple for {f}")
        if not is_quantifier_free(self.matrix):
            raise NormalFormError("matrix must be quantifier-free")

    @property
    def n(self) -> int:
        return len(self.blocks) // 2

    @property
    def p(self) -> int:
        return len(self.blocks[0])

    @property
    def m(self) -> int:
        return len(self.fo_vars)

    def occurrence(self, f: str) -> tuple:
        return dict(self.occurrences)[f]

    def to_so(self):
        prefix = []
        for i, block in enumerate(self.blocks):
            kind = ForallFn if i % 2 == 0 else ExistsFn
            prefix.extend((kind, f, self.q) for f in block)
        prefix.extend((Forall, x, None) for x in self.fo_vars)
        return build_prefix(prefix, self.matrix)

    @classmethod
    def from_so(cls, phi) -> "NiceNormalForm":
        fn_prefix, universals, matrix = decompose(phi)
        if not universals:
            raise NormalFormError("nice normal form needs at least one universal variable")
        blocks = _blocks(fn_prefix)
        if not blocks or blocks[0][0] is not ForallFn:
            raise NormalFormError("the first block must be universal")
        arities = {a for _, b in blocks for _, a in b}
        if len(arities) != 1:
            raise NormalFormError("function variables must share one arity")
        q = arities.pop()
        names = [name for _, name, _ in fn_prefix]
        occ = fn_occurrences(matrix, names)
        occurrences = []
        for name in names:
            tuples = occ[name]
            if len(tuples) > 1:
                raise NormalFormError(f"{name} is applied to more than one argument tuple")
            if tuples:
                args = tuples[0]
                if any(not isinstance(a, Var) for a in args):
                    raise NormalFormError(f"{name} has a non-variable argument")
                occurrences.append((name, tuple(a.name for a in args)))
            else:
                occurrences.append((name, (universals[0],) * q))
        return cls(tuple(tuple(n for n, _ in b) for _, b in blocks), q, tuple(universals),
                   matrix, tuple(occurrences))


def normalize(phi, pad: bool = True):
    """Run the pipeline; returns ``(formula, trace)``."""
    trace = TranslationTrace()
    for name in PIPELINE + (("pad_blocks",) if pad else ()):
        phi = trace.apply(name, phi)
    return phi, trace


def so_nice_normal_form(phi):
    """``(NiceNormalForm, trace)`` for an SO sentence over function variables."""
    if free_vars(phi):
        raise NormalFormError(f"not a sentence: free variables {sorted(free_vars(phi))}")
    out, trace = normalize(phi, pad=True)
    return NiceNormalForm.from_so(out), trace


__all__ = [
    "NiceNormalForm", "NormalFormError", "so_nice_normal_form", "normalize", "decompose",
    "fn_occurrences", "flatten_fn_args", "unify_fn_occurrences", "pad_blocks", "skolemize",
    "prenex", "rename_apart", "so_nnf", "split_prefix", "build_prefix",
]
