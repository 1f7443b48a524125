"""Finite structures, assignments and teams, plus exhaustive enumerators.

Elements of a model of size ``n`` are the integers ``0..n-1``.  A team is a
set of assignments over a common variable domain; it is stored with the
variables sorted and the rows sorted, so equal teams serialise identically.
Every enumerator refuses to start when its output would exceed the given
budget instead of silently truncating.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .logic_ast import Const, Signature, Var


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration or evaluation would exceed its configured budget."""


DEFAULT_SUBTEAM_ROWS = 20
DEFAULT_TEAM_SPACE_ROWS = 12
HARD_TEAM_SPACE_ROWS = 16
DEFAULT_MODEL_BUDGET = 1_000_000
DEFAULT_FUNCTION_BUDGET = 1_000_000


@dataclass(frozen=True)
class Model:
    size: int
    relations: Mapping = field(default_factory=dict)   # name -> frozenset of tuples
    functions: Mapping = field(default_factory=dict)   # name -> {args tuple: value}
    constants: Mapping = field(default_factory=dict)   # name -> element
    signature: Signature = field(default_factory=Signature)

    def __post_init__(self):
        n = self.size
        if n < 1:
            raise ValueError("model domain must be non-empty")
        sig = self.signature
        for name, ar in sig.relations.items():
            tuples = self.relations.get(name)
            if tuples is None:
                raise ValueError(f"relation {name} has no interpretation")
            for tup in tuples:
                if len(tup) != ar or any(not 0 <= a < n for a in tup):
                    raise ValueError(f"relation {name}: bad tuple {tup}")
        for name, ar in sig.functions.items():
            table = self.functions.get(name)
            if table is None:
                raise ValueError(f"function {name} has no interpretation")
            for args in itertools.product(range(n), repeat=ar):
                if args not in table:
                    raise ValueError(f"function {name} is not total: missing {args}")
            for args, v in table.items():
                if len(args) != ar or any(not 0 <= a < n for a in args) or not 0 <= v < n:
                    raise ValueError(f"function {name}: bad entry {args} -> {v}")
        for name in sig.constants:
            if name not in self.constants or not 0 <= self.constants[name] < n:
                raise ValueError(f"constant {name} uninterpreted or out of range")

    @property
    def domain(self) -> range:
        return range(self.size)

    def __hash__(self):
        return hash((self.size, self.signature, self.to_text()))

    def __eq__(self, other):
        return isinstance(other, Model) and self.size == other.size and self.to_json() == other.to_json()

    def term_value(self, t, s: Mapping, fns: Mapping | None = None) -> int:
        """Value of term ``t`` under assignment ``s`` (and function variables ``fns``)."""
        if isinstance(t, Var):
            try:
                return s[t.name]
            except KeyError:
                raise KeyError(f"variable {t.name} is not assigned") from None
        if isinstance(t, Const):
            return self.constants[t.name]
        args = tuple(self.term_value(a, s, fns) for a in t.args)
        if fns is not None and t.fn in fns:
            return fns[t.fn][args]
        try:
            return self.functions[t.fn][args]
        except KeyError:
            raise KeyError(f"function symbol {t.fn} is not interpreted") from None

    def to_json(self) -> dict:
        rels = {k: sorted(list(t) for t in v) for k, v in sorted(self.relations.items())}
        fns = {}
        for name, table in sorted(self.functions.items()):
            ar = self.signature.functions.get(name, len(next(iter(table))) if table else 1)
            fns[name] = {"arity": ar, "table": [list(k) + [v] for k, v in sorted(table.items())]}
        return {"domain": self.size, "relations": rels, "functions": fns,
                "constants": dict(sorted(self.constants.items()))}

    def to_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def load_model(text: str) -> Model:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"model file is not JSON: {exc}") from None
    return model_from_json(data)


def model_from_json(data: dict) -> Model:
    if not isinstance(data, dict) or "domain" not in data:
        raise ValueError("model needs a 'domain' size")
    n = data["domain"]
    if not isinstance(n, int) or n < 1:
        raise ValueError("model domain must be a positive integer")
    rels: dict = {}
    rel_ar: dict = {}
    for name, tuples in data.get("relations", {}).items():
        tuples = [tuple(t) for t in tuples]
        arities = {len(t) for t in tuples}
        if len(arities) > 1:
            raise ValueError(f"relation {name}: tuples of mixed arity")
        ar = data.get("relation_arities", {}).get(name) or (arities.pop() if arities else 1)
        rels[name] = frozenset(tuples)
        rel_ar[name] = ar
    fns: dict = {}
    fn_ar: dict = {}
    for name, entry in data.get("functions", {}).items():
        ar = entry.get("arity")
        if not isinstance(ar, int) or ar < 1:
            raise ValueError(f"function {name}: arity must be a positive integer")
        table = {}
        for row in entry.get("table", []):
            if len(row) != ar + 1:
                raise ValueError(f"function {name}: row {row} does not match arity {ar}")
            table[tuple(row[:-1])] = row[-1]
        fns[name] = table
        fn_ar[name] = ar
    consts = dict(data.get("constants", {}))
    sig = Signature(rel_ar, fn_ar, tuple(consts))
    return Model(n, rels, fns, consts, sig)


# --------------------------------------------------------------------------
# teams


@dataclass(frozen=True)
class Team:
    vars: tuple
    rows: tuple

    def __post_init__(self):
        k = len(self.vars)
        if len(set(self.vars)) != k:
            raise ValueError("team variables must be distinct")
        if any(len(r) != k for r in self.rows):
            raise ValueError("every assignment must cover exactly the team domain")

    @classmethod
    def make(cls, vars: Iterable[str], rows: Iterable[tuple]) -> "Team":
        """Canonical team: variables sorted, rows deduplicated and sorted."""
        vars = tuple(vars)
        order = sorted(range(len(vars)), key=lambda i: vars[i])
        svars = tuple(vars[i] for i in order)
        srows = sorted({tuple(r[i] for i in order) for r in rows})
        return cls(svars, tuple(srows))

    @classmethod
    def from_assignments(cls, vars: Iterable[str], assignments: Iterable[Mapping]) -> "Team":
        vars = tuple(vars)
        return cls.make(vars, (tuple(s[v] for v in vars) for s in assignments))

    @classmethod
    def empty(cls, vars: Iterable[str] = ()) -> "Team":
        return cls.make(vars, ())

    @classmethod
    def unit(cls) -> "Team":
        """The team ``{∅}`` holding only the empty assignment."""
        return cls((), ((),))

    def __len__(self):
        return len(self.rows)

    def __iter__(self) -> Iterator[dict]:
        for r in self.rows:
            yield dict(zip(self.vars, r))

    def __contains__(self, s) -> bool:
        if isinstance(s, Mapping):
            s = tuple(s[v] for v in self.vars)
        return s in set(self.rows)

    def row_set(self) -> frozenset:
        return frozenset(self.rows)

    def issubset(self, other: "Team") -> bool:
        return self.vars == other.vars and self.row_set() <= other.row_set()

    def project(self, vars: Iterable[str]) -> "Team":
        vars = tuple(vars)
        idx = [self.vars.index(v) for v in vars]
        return Team.make(vars, (tuple(r[i] for i in idx) for r in self.rows))

    def to_json(self) -> dict:
        return {"vars": list(self.vars), "rows": [list(r) for r in self.rows]}

    def to_text(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def __str__(self):
        if not self.rows:
            return "{}"
        return "{" + ", ".join(
            "{" + ",".join(f"{v}:{a}" for v, a in zip(self.vars, r)) + "}" for r in self.rows) + "}"


def load_team(text: str, model: Model | None = None) -> Team:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"team file is not JSON: {exc}") from None
    if not isinstance(data, dict) or "vars" not in data or "rows" not in data:
        raise ValueError("team needs 'vars' and 'rows'")
    vars = tuple(data["vars"])
    rows = [tuple(r) for r in data["rows"]]
    for r in rows:
        if len(r) != len(vars):
            raise ValueError(f"row {list(r)} does not match variables {list(vars)}")
        if model is not None and any(not isinstance(a, int) or not 0 <= a < model.size for a in r):
            raise ValueError(f"row {list(r)} has an element outside the model domain")
    return Team.make(vars, rows)


def _extend(team: Team, x: str, value_for_row) -> Team:
    if x in team.vars:
        i = team.vars.index(x)
        rows = []
        for r in team.rows:
            for a in value_for_row(r):
                rows.append(r[:i] + (a,) + r[i + 1:])
        return Team.make(team.vars, rows)
    vars = team.vars + (x,)
    return Team.make(vars, (r + (a,) for r in team.rows for a in value_for_row(r)))


def supplement(X: Team, x: str, F: Mapping) -> Team:
    """``X(F/x) = {s(F(s)/x) : s ∈ X}``; ``F`` maps the rows of ``X`` to elements."""
    missing = [r for r in X.rows if r not in F]
    if missing:
        raise ValueError(f"supplement function undefined on {missing[0]}")
    return _extend(X, x, lambda r: (F[r],))


def duplicate(X: Team, x: str, M: Model) -> Team:
    """``X(M/x) = {s(a/x) : a ∈ M, s ∈ X}``."""
    return _extend(X, x, lambda r: M.domain)


def full_team(M: Model, vars: Iterable[str]) -> Team:
    vars = tuple(vars)
    return Team.make(vars, itertools.product(M.domain, repeat=len(vars)))


def enumerate_subteams(X: Team, max_rows: int = DEFAULT_SUBTEAM_ROWS) -> Iterator[Team]:
    """All ``2^|X|`` subteams in bitmask order: ∅ first, ``X`` last."""
    k = len(X.rows)
    if k > max_rows:
        raise BudgetExceeded(f"subteam enumeration over {k} rows exceeds budget of {max_rows}")
    for mask in range(1 << k):
        yield Team(X.vars, tuple(r for i, r in enumerate(X.rows) if mask >> i & 1))


def enumerate_teams(M: Model, vars: Iterable[str], max_rows: int = DEFAULT_TEAM_SPACE_ROWS) -> Iterator[Team]:
    """All teams with domain ``vars``: the subteams of ``full_team(M, vars)``."""
    max_rows = min(max_rows, HARD_TEAM_SPACE_ROWS)
    full = full_team(M, vars)
    if len(full) > max_rows:
        raise BudgetExceeded(f"team space of {len(full)} rows exceeds budget of {max_rows}")
    return enumerate_subteams(full, max_rows)


def count_models(sig: Signature, n: int) -> int:
    count = 1
    for ar in sig.relations.values():
        count *= 2 ** (n ** ar)
    for ar in sig.functions.values():
        count *= n ** (n ** ar)
    return count * n ** len(sig.constants)


def enumerate_models(sig: Signature, n: int, budget: int = DEFAULT_MODEL_BUDGET) -> Iterator[Model]:
    """Every interpretation of ``sig`` over ``0..n-1`` in lexicographic order."""
    total = count_models(sig, n)
    if total > budget:
        raise BudgetExceeded(f"{total} models of size {n} exceed budget of {budget}")
    rel_names = sorted(sig.relations)
    fn_names = sorted(sig.functions)
    const_names = sorted(sig.constants)
    rel_spaces = [list(itertools.product(range(n), repeat=sig.relations[r])) for r in rel_names]
    fn_spaces = [list(itertools.product(range(n), repeat=sig.functions[f])) for f in fn_names]
    choices = ([range(1 << len(sp)) for sp in rel_spaces]
               + [list(itertools.product(range(n), repeat=len(sp))) for sp in fn_spaces]
               + [range(n) for _ in const_names])
    for pick in itertools.product(*choices):
        pos = 0
        rels = {}
        for name, sp in zip(rel_names, rel_spaces):
            mask = pick[pos]
            pos += 1
            rels[name] = frozenset(t for i, t in enumerate(sp) if mask >> i & 1)
        fns = {}
        for name, sp in zip(fn_names, fn_spaces):
            fns[name] = dict(zip(sp, pick[pos]))
            pos += 1
        consts = {name: pick[pos + i] for i, name in enumerate(const_names)}
        yield Model(n, rels, fns, consts, sig)


def enumerate_supplement_functions(X: Team, M: Model, budget: int = DEFAULT_FUNCTION_BUDGET) -> Iterator[dict]:
    """All ``n^|X|`` maps from the rows of ``X`` to elements; the empty team has exactly one."""
    total = M.size ** len(X.rows)
    if total > budget:
        raise BudgetExceeded(f"{total} supplement functions exceed budget of {budget}")
    for values in itertools.product(M.domain, repeat=len(X.rows)):
        yield dict(zip(X.rows, values))
