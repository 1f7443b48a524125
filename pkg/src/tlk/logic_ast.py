"""Syntax of BID-logic and of function-variable second-order logic.

Formulas are immutable dataclasses compared structurally.  The BID node
kinds follow the team-semantics grammar in negation normal form; the
second-order (SO) side reuses the first-order nodes and adds classical
negation, disjunction, implication and function quantifiers.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Union


# --------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError(f"application of {self.fn} needs at least one argument")


Term = Union[Var, Const, App]


def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Const):
        return frozenset()
    out: set = set()
    for a in t.args:
        out |= term_vars(a)
    return frozenset(out)


def term_apps(t: Term) -> Iterator[App]:
    """All applications inside ``t``, innermost first."""
    if isinstance(t, App):
        for a in t.args:
            yield from term_apps(a)
        yield t


# --------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple


@dataclass(frozen=True)
class Neg:
    """Negated first-order atom (BID literal)."""
    atom: Union[Eq, Rel]


@dataclass(frozen=True)
class Dep:
    """Dependence atom; the last term is determined by the others."""
    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ValueError("dependence atom needs at least one term")


@dataclass(frozen=True)
class NDep:
    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ValueError("dependence atom needs at least one term")


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Tensor:
    """Split disjunction."""
    left: object
    right: object


@dataclass(frozen=True)
class IVee:
    """Intuitionistic disjunction."""
    left: object
    right: object


@dataclass(frozen=True)
class Impl:
    """Intuitionistic implication."""
    left: object
    right: object


@dataclass(frozen=True)
class LImpl:
    """Linear implication."""
    left: object
    right: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


# classical / second-order only


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class ForallFn:
    name: str
    arity: int
    body: object


@dataclass(frozen=True)
class ExistsFn:
    name: str
    arity: int
    body: object


ATOMS = (Eq, Rel)
BINARY = (And, Tensor, IVee, Impl, LImpl, Or, Implies)
QUANTIFIERS = (Forall, Exists)
FN_QUANTIFIERS = (ForallFn, ExistsFn)
BID_NODES = (Eq, Rel, Neg, Dep, NDep, Bot, And, Tensor, IVee, Impl, LImpl, Forall, Exists)
SO_NODES = (Eq, Rel, Not, And, Or, Implies, Forall, Exists, ForallFn, ExistsFn)

Formula = object


def is_atom(phi) -> bool:
    return isinstance(phi, ATOMS)


def atom_terms(phi) -> tuple:
    if isinstance(phi, Eq):
        return (phi.left, phi.right)
    if isinstance(phi, Rel):
        return phi.args
    if isinstance(phi, (Dep, NDep)):
        return phi.terms
    if isinstance(phi, Neg):
        return atom_terms(phi.atom)
    return ()


def children(phi) -> tuple:
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, (Forall, Exists, ForallFn, ExistsFn, Not)):
        return (phi.body,)
    return ()


def subformulas(phi) -> Iterator:
    """Pre-order traversal."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def rebuild(phi, kids: tuple):
    """Copy of ``phi`` with its children replaced."""
    if isinstance(phi, BINARY):
        return type(phi)(kids[0], kids[1])
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, kids[0])
    if isinstance(phi, (ForallFn, ExistsFn)):
        return type(phi)(phi.name, phi.arity, kids[0])
    if isinstance(phi, Not):
        return Not(kids[0])
    return phi


# --------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Signature:
    relations: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    constants: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(self.constants))
        names = list(self.relations) + list(self.functions) + list(self.constants)
        if len(names) != len(set(names)):
            raise ValueError(f"signature symbol names must be unique: {names}")
        for kind, table in (("relation", self.relations), ("function", self.functions)):
            for name, ar in table.items():
                if not isinstance(ar, int) or ar < 1:
                    raise ValueError(f"{kind} {name} has invalid arity {ar!r}")

    def __hash__(self):
        return hash((tuple(sorted(self.relations.items())),
                     tuple(sorted(self.functions.items())), self.constants))

    def names(self) -> set:
        return set(self.relations) | set(self.functions) | set(self.constants)

    def merge(self, other: "Signature") -> "Signature":
        rels = dict(self.relations)
        fns = dict(self.functions)
        for k, v in other.relations.items():
            if rels.setdefault(k, v) != v:
                raise ValueError(f"relation {k} used with arities {rels[k]} and {v}")
        for k, v in other.functions.items():
            if fns.setdefault(k, v) != v:
                raise ValueError(f"function {k} used with arities {fns[k]} and {v}")
        consts = tuple(dict.fromkeys(self.constants + other.constants))
        return Signature(rels, fns, consts)

    def to_json(self) -> dict:
        return {"relations": dict(self.relations), "functions": dict(self.functions),
                "constants": list(self.constants)}

    @classmethod
    def from_json(cls, data: dict) -> "Signature":
        return cls(dict(data.get("relations", {})), dict(data.get("functions", {})),
                   tuple(data.get("constants", ())))


EMPTY_SIGNATURE = Signature()


def signature_of(phi, bound_fns: Iterable[str] = ()) -> Signature:
    """The vocabulary used by ``phi``; function variables bound in ``phi`` are skipped."""
    rels: dict = {}
    fns: dict = {}
    consts: dict = {}

    def visit_term(t, bound):
        if isinstance(t, Const):
            consts[t.name] = None
        elif isinstance(t, App):
            if t.fn not in bound:
                fns[t.fn] = len(t.args)
            for a in t.args:
                visit_term(a, bound)

    def visit(node, bound):
        if isinstance(node, (ForallFn, ExistsFn)):
            visit(node.body, bound | {node.name})
            return
        if isinstance(node, Rel):
            rels[node.name] = len(node.args)
        for t in atom_terms(node):
            visit_term(t, bound)
        for k in children(node):
            visit(k, bound)

    visit(phi, frozenset(bound_fns))
    return Signature(rels, fns, tuple(consts))


# --------------------------------------------------------------------------
# variables


def free_vars(phi) -> frozenset:
    """Free individual variables.  Function-variable binders do not bind individuals."""
    if isinstance(phi, (Eq, Rel, Neg, Dep, NDep)):
        out: set = set()
        for t in atom_terms(phi):
            out |= term_vars(t)
        return frozenset(out)
    if isinstance(phi, (Forall, Exists)):
        return free_vars(phi.body) - {phi.var}
    out = frozenset()
    for k in children(phi):
        out |= free_vars(k)
    return out


def free_fn_vars(phi, bound: frozenset = frozenset()) -> frozenset:
    """Applied function symbols not bound by a function quantifier."""
    if isinstance(phi, (ForallFn, ExistsFn)):
        return free_fn_vars(phi.body, bound | {phi.name})
    out: set = set()
    for t in atom_terms(phi):
        out |= {a.fn for a in term_apps(t) if a.fn not in bound}
    for k in children(phi):
        out |= free_fn_vars(k, bound)
    return frozenset(out)


def all_names(phi) -> set:
    """Every identifier in ``phi``: variables, binders, symbols."""
    out: set = set()

    def visit_term(t):
        if isinstance(t, (Var, Const)):
            out.add(t.name)
        else:
            out.add(t.fn)
            for a in t.args:
                visit_term(a)

    for node in subformulas(phi):
        if isinstance(node, (Forall, Exists)):
            out.add(node.var)
        elif isinstance(node, (ForallFn, ExistsFn)):
            out.add(node.name)
        elif isinstance(node, Rel):
            out.add(node.name)
        for t in atom_terms(node):
            visit_term(t)
    return out


def is_sentence(phi) -> bool:
    return not free_vars(phi)


def fresh_vars(base: str, count: int, avoid: Iterable[str]) -> list:
    """``count`` distinct names ``base, base_1, base_2, ...`` skipping ``avoid``."""
    avoid = set(avoid)
    out = []
    k = 0
    while len(out) < count:
        name = base if k == 0 else f"{base}_{k}"
        if name not in avoid:
            out.append(name)
            avoid.add(name)
        k += 1
    return out


# --------------------------------------------------------------------------
# fragments


class Fragment(enum.Enum):
    FO = "FO"
    D = "D"
    ID = "ID"
    LD = "LD"
    BID = "BID"


FRAGMENT_ORDER = (Fragment.FO, Fragment.D, Fragment.ID, Fragment.LD, Fragment.BID)

_FRAGMENT_NODES = {
    Fragment.FO: (Eq, Rel, Neg, And, Tensor, Forall, Exists),
    Fragment.D: (Eq, Rel, Neg, Dep, NDep, And, Tensor, Forall, Exists),
    Fragment.ID: (Eq, Rel, Dep, Bot, And, IVee, Impl, Forall, Exists),
    Fragment.LD: (Eq, Rel, Neg, Dep, NDep, And, Tensor, LImpl, Forall, Exists),
    Fragment.BID: BID_NODES,
}


def _admits(frag: Fragment, phi) -> bool:
    allowed = _FRAGMENT_NODES[frag]
    for node in subformulas(phi):
        if not isinstance(node, allowed):
            return False
        if frag is Fragment.ID and isinstance(node, Dep) and len(node.terms) != 1:
            return False
    return True


def fragments_admitting(phi) -> frozenset:
    return frozenset(f for f in FRAGMENT_ORDER if _admits(f, phi))


def fragment_of(phi) -> Fragment:
    """Least fragment (in the order FO, D, ID, LD, BID) whose grammar generates ``phi``."""
    for frag in FRAGMENT_ORDER:
        if _admits(frag, phi):
            return frag
    raise TypeError(f"not a BID formula: {phi!r}")


def is_bid(phi) -> bool:
    return all(isinstance(n, BID_NODES) for n in subformulas(phi))


def is_so(phi) -> bool:
    return all(isinstance(n, SO_NODES) for n in subformulas(phi))


def is_flat_fo(phi) -> bool:
    return _admits(Fragment.FO, phi)


# --------------------------------------------------------------------------
# builders


def conj(parts: Iterable, op=And):
    """Right-associated chain ``p1 op (p2 op (...))``."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = op(p, out)
    return out


def flatten_op(phi, op) -> list:
    """Operands of a nested ``op`` tree, left to right."""
    if isinstance(phi, op):
        return flatten_op(phi.left, op) + flatten_op(phi.right, op)
    return [phi]


def quantify(kind, names: Iterable[str], body):
    for name in reversed(list(names)):
        body = kind(name, body)
    return body


# --------------------------------------------------------------------------
# term rewriting


def map_term(t: Term, fn: Callable) -> Term:
    """Bottom-up term rewrite; ``fn`` sees already-rewritten subterms."""
    if isinstance(t, App):
        t = App(t.fn, tuple(map_term(a, fn) for a in t.args))
    return fn(t)


def map_atoms(phi, fn: Callable):
    """Rebuild ``phi`` with every atom-like node passed through ``fn``."""
    if isinstance(phi, (Eq, Rel, Dep, NDep, Neg, Bot)):
        return fn(phi)
    kids = children(phi)
    if not kids:
        return phi
    return rebuild(phi, tuple(map_atoms(k, fn) for k in kids))


def map_terms(phi, fn: Callable):
    """Apply the term rewrite ``fn`` (bottom-up) to every term of ``phi``."""

    def on_atom(a):
        if isinstance(a, Eq):
            return Eq(map_term(a.left, fn), map_term(a.right, fn))
        if isinstance(a, Rel):
            return Rel(a.name, tuple(map_term(t, fn) for t in a.args))
        if isinstance(a, Dep):
            return Dep(tuple(map_term(t, fn) for t in a.terms))
        if isinstance(a, NDep):
            return NDep(tuple(map_term(t, fn) for t in a.terms))
        if isinstance(a, Neg):
            return Neg(on_atom(a.atom))
        return a

    return map_atoms(phi, on_atom)


def subst_vars(phi, mapping: dict):
    """Replace free occurrences of variables by terms (no capture check)."""
    if not mapping:
        return phi
    if isinstance(phi, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        return type(phi)(phi.var, subst_vars(phi.body, inner))
    if isinstance(phi, (Eq, Rel, Dep, NDep, Neg, Bot)):
        return map_terms(phi, lambda t: mapping.get(t.name, t) if isinstance(t, Var) else t)
    kids = children(phi)
    return rebuild(phi, tuple(subst_vars(k, mapping) for k in kids))


# --------------------------------------------------------------------------
# negation normal form


def classical_nnf(phi, negate: bool = False):
    """Classical NNF over SO nodes: ``Not`` only on atoms, no ``Implies``."""
    if isinstance(phi, (Eq, Rel)):
        return Not(phi) if negate else phi
    if isinstance(phi, Not):
        return classical_nnf(phi.body, not negate)
    if isinstance(phi, Implies):
        return classical_nnf(Or(Not(phi.left), phi.right), negate)
    if isinstance(phi, And):
        op = Or if negate else And
        return op(classical_nnf(phi.left, negate), classical_nnf(phi.right, negate))
    if isinstance(phi, (Or, Tensor)):
        op = And if negate else Or
        return op(classical_nnf(phi.left, negate), classical_nnf(phi.right, negate))
    if isinstance(phi, Neg):
        return phi.atom if negate else Not(phi.atom)
    if isinstance(phi, (Forall, Exists)):
        flip = {Forall: Exists, Exists: Forall}
        kind = flip[type(phi)] if negate else type(phi)
        return kind(phi.var, classical_nnf(phi.body, negate))
    if isinstance(phi, (ForallFn, ExistsFn)):
        flip = {ForallFn: ExistsFn, ExistsFn: ForallFn}
        kind = flip[type(phi)] if negate else type(phi)
        return kind(phi.name, phi.arity, classical_nnf(phi.body, negate))
    raise TypeError(f"not a classical formula: {type(phi).__name__}")


def classical_to_bid(phi):
    """Map a classical NNF formula without function quantifiers onto BID FO nodes."""
    if isinstance(phi, (Eq, Rel)):
        return phi
    if isinstance(phi, Not):
        if not isinstance(phi.body, (Eq, Rel)):
            raise ValueError("formula is not in negation normal form")
        return Neg(phi.body)
    if isinstance(phi, And):
        return And(classical_to_bid(phi.left), classical_to_bid(phi.right))
    if isinstance(phi, Or):
        return Tensor(classical_to_bid(phi.left), classical_to_bid(phi.right))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, classical_to_bid(phi.body))
    raise TypeError(f"cannot map {type(phi).__name__} into first-order BID")


def bid_to_classical(phi):
    """Inverse of :func:`classical_to_bid` on first-order BID formulas."""
    if isinstance(phi, (Eq, Rel)):
        return phi
    if isinstance(phi, Neg):
        return Not(phi.atom)
    if isinstance(phi, And):
        return And(bid_to_classical(phi.left), bid_to_classical(phi.right))
    if isinstance(phi, Tensor):
        return Or(bid_to_classical(phi.left), bid_to_classical(phi.right))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, bid_to_classical(phi.body))
    raise TypeError(f"{type(phi).__name__} is not first-order")


def to_nnf(phi):
    """Classical first-order formula (``Not``/``Implies``/``Or`` allowed) to BID NNF."""
    for node in subformulas(phi):
        if isinstance(node, (Dep, NDep, Bot, IVee, Impl, LImpl, ForallFn, ExistsFn)):
            raise ValueError(f"to_nnf: {type(node).__name__} is not classical first-order")
    return classical_to_bid(classical_nnf(phi))
