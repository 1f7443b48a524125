"""Formula translations between the team logics and second-order logic.

Every public translation accepts an optional :class:`TranslationTrace` and
records one step per rule application; the steps replay through
:func:`tlk.trace.replay`.
"""
from __future__ import annotations

import warnings

from .logic_ast import (
    And, App, Bot, Dep, Eq, Exists, ExistsFn, Forall, ForallFn, Fragment, Impl, IVee, LImpl, NDep,
    Neg, Not, Or, Rel, Tensor, Var, all_names, bid_to_classical, children, classical_nnf,
    classical_to_bid, conj, fragments_admitting, fresh_vars, free_vars, is_flat_fo, map_term,
    quantify, rebuild, subformulas,
)
from .normal_form import (
    FN_QUANTS, NiceNormalForm, NormalFormError, build_prefix, decompose, fn_occurrences, normalize,
    prenex, rename_apart, so_nice_normal_form, split_prefix,
)
from .trace import TranslationTrace, rule

CNF_WARN_CLAUSES = 4096


class TranslationError(ValueError):
    pass


# --------------------------------------------------------------------------
# single rewrites


def expand_dep_atom(atom):
    """``dep(t₁,…,tₙ)`` as ``(dep(t₁) ∧ … ∧ dep(tₙ₋₁)) → dep(tₙ)``; constancy atoms unchanged."""
    if not isinstance(atom, Dep):
        raise TypeError("expand_dep_atom expects a dependence atom")
    if len(atom.terms) < 2:
        return atom
    return Impl(conj([Dep((t,)) for t in atom.terms[:-1]]), Dep((atom.terms[-1],)))


def literal_to_id(lit):
    """A negated atom ``¬α`` as ``α → ⊥``."""
    if isinstance(lit, Neg):
        return Impl(lit.atom, Bot())
    if isinstance(lit, NDep):
        return Impl(Dep(lit.terms), Bot())
    raise TranslationError(f"{type(lit).__name__} is not a negated atom")


def _first(phi, pred):
    """Path-free rewrite of the first pre-order node satisfying ``pred``."""
    done = False

    def go(node, fn):
        nonlocal done
        if done:
            return node
        if pred(node):
            done = True
            return fn(node)
        kids = children(node)
        if not kids:
            return node
        return rebuild(node, tuple(go(k, fn) for k in kids))

    return go


def _rewrite_first(phi, pred, fn):
    return _first(phi, pred)(phi, fn)


@rule("expand_dep", "dependence atom as implication between constancy atoms")
def expand_deps(phi):
    def go(node):
        if isinstance(node, Dep):
            return expand_dep_atom(node)
        kids = children(node)
        if not kids:
            return node
        return rebuild(node, tuple(go(k) for k in kids))

    return go(phi)


def _is_tensor_of_flat(node) -> bool:
    return isinstance(node, Tensor) and is_flat_fo(node.left) and is_flat_fo(node.right)


@rule("tensor_to_impl", "split disjunction of flat formulas as (phi -> bot) -> psi")
def tensor_to_impl(phi):
    return _rewrite_first(phi, _is_tensor_of_flat, lambda t: Impl(Impl(t.left, Bot()), t.right))


@rule("negation_to_impl", "negated atom as implication into bot")
def negation_to_impl(phi):
    def fn(lit):
        if isinstance(lit, NDep):
            return Impl(expand_dep_atom(Dep(lit.terms)), Bot())
        return literal_to_id(lit)

    return _rewrite_first(phi, lambda n: isinstance(n, (Neg, NDep)), fn)


@rule("prenex_fo", "prenex laws, valid for flat formulas")
def prenex_fo(phi):
    return classical_to_bid(prenex(rename_apart(bid_to_classical(phi))))


_QF_FO = (Eq, Rel, Neg, And, Tensor)


def _is_qf_fo(phi) -> bool:
    return all(isinstance(n, _QF_FO) for n in subformulas(phi))


def _clauses(phi) -> list:
    if isinstance(phi, And):
        return _clauses(phi.left) + _clauses(phi.right)
    if isinstance(phi, Tensor):
        left, right = _clauses(phi.left), _clauses(phi.right)
        out = [a + b for a in left for b in right]
        if len(out) > CNF_WARN_CLAUSES:
            warnings.warn(f"CNF distribution produced {len(out)} clauses", RuntimeWarning, stacklevel=2)
        return out
    return [[phi]]


def cnf_of(phi):
    """Conjunctive normal form by distribution; chains associate to the right."""
    return conj([conj(c, op=Tensor) for c in _clauses(phi)])


@rule("cnf", "distribution of split disjunction over conjunction, valid for flat formulas")
def cnf(phi):
    if _is_qf_fo(phi):
        return cnf_of(phi)
    kids = children(phi)
    if not kids:
        return phi
    return rebuild(phi, tuple(cnf(k) for k in kids))


def _exhaust(trace: TranslationTrace, name: str, phi):
    while True:
        out = trace.apply(name, phi)
        if out == phi:
            return out
        phi = out


def _fo_matrix_to_id(phi, trace: TranslationTrace):
    phi = trace.apply("cnf", phi)
    phi = _exhaust(trace, "tensor_to_impl", phi)
    return _exhaust(trace, "negation_to_impl", phi)


def fo_to_id(phi, trace: TranslationTrace | None = None):
    """A first-order formula as an equivalent ID formula."""
    if Fragment.FO not in fragments_admitting(phi):
        raise TranslationError("fo_to_id expects a first-order formula")
    trace = trace if trace is not None else TranslationTrace()
    phi = trace.apply("prenex_fo", phi)
    return _fo_matrix_to_id(phi, trace)


# --------------------------------------------------------------------------
# second-order sentences


def replace_fns_with_vars(psi, var_map: dict, occurrences: dict | None = None):
    """Replace each ``f x̄`` by the variable ``var_map[f]``.

    Every occurrence of ``f`` must use the same argument tuple (``occurrences[f]``
    when given).  Classical input is also mapped onto first-order BID nodes.
    """
    seen: dict = dict(occurrences or {})

    def tm(t):
        if isinstance(t, App) and t.fn in var_map:
            args = tuple(a.name if isinstance(a, Var) else None for a in t.args)
            expected = seen.setdefault(t.fn, args)
            if None in args or tuple(expected) != args:
                raise TranslationError(f"non-uniform occurrence of {t.fn}")
            return Var(var_map[t.fn])
        return t

    def go(node):
        if isinstance(node, Eq):
            return Eq(map_term(node.left, tm), map_term(node.right, tm))
        if isinstance(node, Rel):
            return Rel(node.name, tuple(map_term(a, tm) for a in node.args))
        kids = children(node)
        if not kids:
            return node
        return rebuild(node, tuple(go(k) for k in kids))

    out = go(psi)
    if any(isinstance(n, (Not, Or)) for n in subformulas(out)):
        out = classical_to_bid(out)
    return out


@rule("sigma11_to_d", "existential function variables as dependence atoms over fresh variables")
def skolem_form_to_d(phi):
    fn_prefix, universals, matrix = decompose(phi)
    if any(kind is not ExistsFn for kind, _, _ in fn_prefix):
        raise TranslationError("prefix is not purely existential")
    names = [name for _, name, _ in fn_prefix]
    occ = fn_occurrences(matrix, names)
    live = [n for n in names if occ[n]]
    for n in live:
        if len(occ[n]) > 1:
            raise TranslationError(f"{n} is applied to more than one argument tuple")
    ys = fresh_vars("y", len(live), all_names(phi))
    var_map = dict(zip(live, ys))
    psi = replace_fns_with_vars(matrix, var_map)
    if live:
        deps = [Dep(occ[f][0] + (Var(y),)) for f, y in zip(live, ys)]
        body = quantify(Exists, ys, And(conj(deps), psi))
    else:
        body = psi
    return quantify(Forall, universals, body)


def _fn_kinds(phi) -> set:
    return {type(n) for n in subformulas(classical_nnf(phi)) if isinstance(n, FN_QUANTS)}


def sigma11_to_d(phi, trace: TranslationTrace | None = None):
    """A Σ¹₁ sentence as a dependence-logic sentence ``∀x̄ ∃ȳ (⋀ dep(x̄ᵢ, yᵢ) ∧ ψ′)``."""
    if free_vars(phi):
        raise TranslationError("not a sentence")
    if ForallFn in _fn_kinds(phi):
        raise TranslationError("prefix is not purely existential")
    trace = trace if trace is not None else TranslationTrace()
    norm, steps = normalize(phi, pad=False)
    trace.extend(steps)
    return trace.apply("sigma11_to_d", norm)


def _is_d_normal_form(phi) -> bool:
    while isinstance(phi, Forall):
        phi = phi.body
    while isinstance(phi, Exists):
        phi = phi.body
    allowed = (Eq, Rel, Neg, Dep, NDep, And, Tensor)
    return all(isinstance(n, allowed) for n in subformulas(phi))


def d_sentence_to_id(phi, trace: TranslationTrace | None = None):
    """A dependence sentence ``∀x̄ ∃ȳ (deps ∧ ψ)`` as an ID sentence."""
    trace = trace if trace is not None else TranslationTrace()
    if Fragment.ID in fragments_admitting(phi):
        return phi
    if not _is_d_normal_form(phi):
        raise TranslationError("input is not of the form ∀x̄ ∃ȳ (dependence atoms ∧ quantifier-free ψ)")
    phi = trace.apply("expand_dep", phi)
    return _fo_matrix_to_id(phi, trace)


@rule("negate_sentence", "classical negation pushed inward")
def negate_sentence(phi):
    return classical_nnf(phi, negate=True)


@rule("append_bot", "intuitionistic negation of a sentence")
def append_bot(phi):
    return Impl(phi, Bot())


def pi11_to_id(psi, trace: TranslationTrace | None = None):
    """A Π¹₁ sentence ``ψ`` as ``χ → ⊥`` where ``χ`` translates the Σ¹₁ sentence ``¬ψ``."""
    if free_vars(psi):
        raise TranslationError("not a sentence")
    if ExistsFn in _fn_kinds(psi):
        raise TranslationError("prefix is not purely universal")
    trace = trace if trace is not None else TranslationTrace()
    neg = trace.apply("negate_sentence", psi)
    chi = sigma11_to_d(neg, trace)
    chi = d_sentence_to_id(chi, trace)
    return trace.apply("append_bot", chi)


def u_names(nf: NiceNormalForm) -> list:
    """Fresh ``u_i_j`` for every function variable, block by block."""
    used = all_names(nf.to_so())
    out = []
    for i, block in enumerate(nf.blocks, start=1):
        row = []
        for j in range(1, len(block) + 1):
            name = fresh_vars(f"u_{i}_{j}", 1, used)[0]
            used.add(name)
            row.append(name)
        out.append(row)
    return out


def phi_star(nf: NiceNormalForm):
    """The BID sentence simulating the function quantifiers of ``nf`` by team variables."""
    us = u_names(nf)
    occ = dict(nf.occurrences)
    var_map = {f: u for block, row in zip(nf.blocks, us) for f, u in zip(block, row)}
    psi = replace_fns_with_vars(nf.matrix, var_map, occ)

    def theta(i):
        block, row = nf.blocks[i], us[i]
        return conj([Dep(tuple(Var(a) for a in occ[f]) + (Var(u),)) for f, u in zip(block, row)])

    last = len(nf.blocks) - 1
    delta = quantify(Exists, us[last], And(theta(last), psi))
    for i in range(last - 1, -1, -1):
        if i % 2 == 0:
            delta = Impl(theta(i), delta)
        else:
            delta = quantify(Exists, us[i], And(theta(i), delta))
    outer = [u for i in range(0, len(us), 2) for u in us[i]] + list(nf.fo_vars)
    return quantify(Forall, outer, delta)


@rule("so_to_bid", "function quantifiers simulated by dependence atoms on fresh variables")
def nice_form_to_bid(phi):
    return phi_star(NiceNormalForm.from_so(phi))


def so_to_bid(phi, trace: TranslationTrace | None = None):
    """An SO sentence as the BID sentence ``φ*`` (multi-argument dependence atoms kept)."""
    trace = trace if trace is not None else TranslationTrace()
    nf, steps = so_nice_normal_form(phi)
    trace.extend(steps)
    return trace.apply("so_to_bid", nf.to_so())


def so_to_id(phi, trace: TranslationTrace | None = None):
    """An SO sentence as an equivalent ID sentence."""
    trace = trace if trace is not None else TranslationTrace()
    star = so_to_bid(phi, trace)
    star = trace.apply("expand_dep", star)
    return _fo_matrix_to_id(star, trace)


@rule("impl_to_limpl", "intuitionistic implication replaced by linear implication")
def impl_to_limpl(phi):
    def go(node):
        kids = children(node)
        if not kids:
            return node
        kids = tuple(go(k) for k in kids)
        if isinstance(node, Impl):
            return LImpl(*kids)
        return rebuild(node, kids)

    return go(phi)


def so_to_ld(phi, trace: TranslationTrace | None = None):
    """A Π¹₂ sentence as the LD sentence ``φ**``; read it at the empty team."""
    trace = trace if trace is not None else TranslationTrace()
    nf, steps = so_nice_normal_form(phi)
    if nf.n != 1:
        raise TranslationError(f"so_to_ld needs exactly two blocks, got {2 * nf.n}")
    trace.extend(steps)
    star = trace.apply("so_to_bid", nf.to_so())
    return trace.apply("impl_to_limpl", star)


def eliminate_ivee(phi):
    """``φ ⊻ ψ`` as an ⊻-free formula; sound when φ and ψ hold at the empty team."""
    if not isinstance(phi, IVee):
        raise TypeError("eliminate_ivee expects an intuitionistic disjunction")
    left, right = phi.left, phi.right
    used = all_names(phi)
    x, y, w, u = (Var(v) for v in (fresh_vars(base, 1, used)[0] for base in "xywu"))
    theta1 = Impl(Forall(x.name, Forall(y.name, Eq(x, y))), Impl(Impl(left, Bot()), right))
    same = Eq(w, u)
    theta2 = Impl(
        Forall(x.name, Exists(y.name, Impl(Eq(x, y), Bot()))),
        Exists(w.name, Exists(u.name, conj([
            Dep((w,)), Dep((u,)), Impl(same, left), Impl(Impl(same, Bot()), right)]))),
    )
    return And(theta1, theta2)


def _innermost_ivee(node) -> bool:
    return isinstance(node, IVee) and not any(
        isinstance(n, IVee) for k in children(node) for n in subformulas(k))


@rule("ivee_elimination", "intuitionistic disjunction defined from the other ID connectives")
def eliminate_first_ivee(phi):
    def fn(node):
        if any(isinstance(n, LImpl) for n in subformulas(node)):
            raise TranslationError("⊻-elimination needs operands with the empty team property")
        return eliminate_ivee(node)

    return _rewrite_first(phi, _innermost_ivee, fn)


def eliminate_all_ivee(phi, trace: TranslationTrace | None = None):
    trace = trace if trace is not None else TranslationTrace()
    return _exhaust(trace, "ivee_elimination", phi)


__all__ = [
    "expand_dep_atom", "literal_to_id", "fo_to_id", "sigma11_to_d", "d_sentence_to_id", "pi11_to_id",
    "replace_fns_with_vars", "so_to_bid", "so_to_id", "so_to_ld", "eliminate_ivee",
    "eliminate_all_ivee", "phi_star", "cnf_of", "TranslationError", "NormalFormError",
    "NiceNormalForm", "so_nice_normal_form", "build_prefix", "split_prefix", "Fragment",
]
