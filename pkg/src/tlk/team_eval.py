"""Team semantics for BID-logic.

Two evaluators decide ``M ⊨_X φ``:

``clauses``
    A literal transcription of the semantic clauses over :class:`Team`
    values: implication enumerates every subteam, linear implication every
    team on the same domain, the existential every supplement function.
    Exponential and budgeted; it is the reference.

``maximal`` (default)
    Works on bitmask teams inside the space ``M^vars`` and represents the
    downward-closed family ``{Y ⊆ X : M ⊨_Y φ}`` by its maximal members.
    Satisfaction is projected onto the free variables of each subformula
    before memoisation.  Exact, but its correctness rests on downward
    closure and locality, which the test-suite checks against ``clauses``.
"""
from __future__ import annotations

import enum
import itertools
import sys
import time
from dataclasses import dataclass
from typing import Iterable

from .finite_model import (
    BudgetExceeded, Model, Team, duplicate, enumerate_subteams, enumerate_supplement_functions,
    enumerate_teams, supplement,
)
from .logic_ast import (
    And, Bot, Dep, Eq, Exists, Forall, Impl, IVee, LImpl, NDep, Neg, Rel, Tensor,
    free_vars, BID_NODES, children,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


@dataclass(frozen=True)
class EvalBudget:
    max_subteam_rows: int = 20          # clauses: 2^rows subteams for -> and the split
    max_team_space_rows: int = 12       # clauses: teams on dom(X) for -*
    max_supplement_functions: int = 1_000_000
    max_depth: int = 2000
    max_space_rows: int = 1 << 14       # maximal: rows of M^vars
    max_family: int = 200_000           # maximal: size of a family of maximal subteams
    timeout_s: float | None = None
    paranoid: bool = False              # no memoisation, literal split search

    def __post_init__(self):
        for name in ("max_subteam_rows", "max_team_space_rows", "max_supplement_functions",
                     "max_depth", "max_space_rows", "max_family"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_BUDGET = EvalBudget()


class TruthValue(enum.Enum):
    TRUE = "TRUE"              # {{∅}, ∅}
    EMPTY_ONLY = "EMPTY_ONLY"  # {∅}
    FALSE = "FALSE"            # ∅


class DownwardClosureViolation(AssertionError):
    pass


def _check_bid(phi, budget: EvalBudget):
    stack = [(phi, 1)]
    while stack:
        node, depth = stack.pop()
        if not isinstance(node, BID_NODES):
            raise TypeError(f"{type(node).__name__} is not a BID node")
        if depth > budget.max_depth:
            raise BudgetExceeded(f"formula nesting exceeds the depth budget of {budget.max_depth}")
        stack.extend((c, depth + 1) for c in children(node))


def _check_domain(phi, team: Team):
    missing = free_vars(phi) - set(team.vars)
    if missing:
        raise ValueError(f"domain mismatch: team lacks free variables {sorted(missing)}")


class _Clock:
    def __init__(self, budget: EvalBudget):
        self.deadline = None if budget.timeout_s is None else time.monotonic() + budget.timeout_s
        self.ticks = 0

    def tick(self):
        if self.deadline is None:
            return
        self.ticks += 1
        if self.ticks & 1023 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("evaluation timed out")


def _literal(model: Model, phi, s) -> bool:
    if isinstance(phi, Neg):
        return not _literal(model, phi.atom, s)
    if isinstance(phi, Eq):
        return model.term_value(phi.left, s) == model.term_value(phi.right, s)
    args = tuple(model.term_value(t, s) for t in phi.args)
    try:
        return args in model.relations[phi.name]
    except KeyError:
        raise KeyError(f"relation symbol {phi.name} is not interpreted") from None


def team_from_mask(vars: tuple, rows: list, mask: int) -> Team:
    """The team whose rows are ``rows[i]`` for the set bits ``i`` of ``mask``.

    ``rows`` must be the lexicographic listing of ``M^vars``; bit ``i`` of a
    mask always refers to that listing in both evaluators.
    """
    return Team(tuple(vars), tuple(rows[i] for i in range(len(rows)) if mask >> i & 1))


# --------------------------------------------------------------------------
# reference evaluator


class ClauseEvaluator:
    """Direct implementation of the satisfaction clauses."""

    def __init__(self, model: Model, budget: EvalBudget = DEFAULT_BUDGET):
        self.model = model
        self.budget = budget
        self.memo: dict = {}
        self._keep: list = []
        self.clock = _Clock(budget)

    def satisfies(self, team: Team, phi) -> bool:
        _check_bid(phi, self.budget)
        _check_domain(phi, team)
        self._keep.append(phi)
        return self._sat(phi, team, 0)

    def satisfaction_table(self, phi, vars: tuple | None = None, masks: Iterable[int] | None = None) -> list:
        """Same contract as :meth:`MaximalEvaluator.satisfaction_table`."""
        vars = tuple(sorted(free_vars(phi))) if vars is None else tuple(vars)
        rows = list(itertools.product(self.model.domain, repeat=len(vars)))
        if masks is None:
            if len(rows) > 20:
                raise BudgetExceeded(f"2^{len(rows)} teams requested")
            masks = range(1 << len(rows))
        return [self.satisfies(team_from_mask(vars, rows, X), phi) for X in masks]

    def _sat(self, phi, X: Team, depth: int) -> bool:
        if depth > self.budget.max_depth:
            raise BudgetExceeded("recursion depth budget exceeded")
        self.clock.tick()
        if self.budget.paranoid:
            return self._eval(phi, X, depth)
        key = (id(phi), X)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._eval(phi, X, depth)
        return hit

    def _eval(self, phi, X: Team, depth: int) -> bool:
        M = self.model
        d = depth + 1
        if isinstance(phi, (Eq, Rel, Neg)):
            return all(_literal(M, phi, s) for s in X)
        if isinstance(phi, Dep):
            seen: dict = {}
            for s in X:
                vals = [M.term_value(t, s) for t in phi.terms]
                key = tuple(vals[:-1])
                if seen.setdefault(key, vals[-1]) != vals[-1]:
                    return False
            return True
        if isinstance(phi, (NDep, Bot)):
            return len(X) == 0
        if isinstance(phi, And):
            return self._sat(phi.left, X, d) and self._sat(phi.right, X, d)
        if isinstance(phi, IVee):
            return self._sat(phi.left, X, d) or self._sat(phi.right, X, d)
        if isinstance(phi, Tensor):
            for Y in enumerate_subteams(X, self.budget.max_subteam_rows):
                if not self._sat(phi.left, Y, d):
                    continue
                taken = Y.row_set()
                rest = tuple(r for r in X.rows if r not in taken)
                if self.budget.paranoid:
                    # every Z with X = Y ∪ Z, overlap allowed
                    for extra in enumerate_subteams(Y, self.budget.max_subteam_rows):
                        if self._sat(phi.right, Team.make(X.vars, rest + extra.rows), d):
                            return True
                elif self._sat(phi.right, Team(X.vars, rest), d):
                    return True
            return False
        if isinstance(phi, Impl):
            return all(self._sat(phi.right, Y, d)
                       for Y in enumerate_subteams(X, self.budget.max_subteam_rows)
                       if self._sat(phi.left, Y, d))
        if isinstance(phi, LImpl):
            xs = X.row_set()
            for Y in enumerate_teams(M, X.vars, self.budget.max_team_space_rows):
                if self._sat(phi.left, Y, d):
                    U = Team.make(X.vars, xs | Y.row_set())
                    if not self._sat(phi.right, U, d):
                        return False
            return True
        if isinstance(phi, Forall):
            return self._sat(phi.body, duplicate(X, phi.var, M), d)
        if isinstance(phi, Exists):
            for F in enumerate_supplement_functions(X, M, self.budget.max_supplement_functions):
                if self._sat(phi.body, supplement(X, phi.var, F), d):
                    return True
            return False
        raise TypeError(f"{type(phi).__name__} is not a BID node")


# --------------------------------------------------------------------------
# maximal-subteam evaluator


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _maximal(masks: Iterable[int], limit: int) -> list:
    uniq = set(masks)
    if len(uniq) > limit:
        raise BudgetExceeded(f"family of {len(uniq)} maximal subteams exceeds budget of {limit}")
    ordered = sorted(uniq, key=lambda m: (-bin(m).count("1"), m))
    kept: list = []
    for m in ordered:
        if not any(m & ~k == 0 for k in kept):
            kept.append(m)
    return kept


class _Space:
    """All assignments ``vars -> 0..n-1`` indexed lexicographically."""

    def __init__(self, n: int, vars: tuple):
        self.n = n
        self.vars = vars
        self.size = n ** len(vars)
        self.full = (1 << self.size) - 1
        self._rows = None

    @property
    def rows(self) -> list:
        if self._rows is None:
            self._rows = list(itertools.product(range(self.n), repeat=len(self.vars)))
        return self._rows

    def index(self, row: tuple) -> int:
        i = 0
        for a in row:
            i = i * self.n + a
        return i


class _Projection:
    """Row map from a larger space onto a sub-domain, with fibres."""

    def __init__(self, big: _Space, small: _Space):
        pos = [big.vars.index(v) for v in small.vars]
        n = big.n
        self.image = []
        fibres = [0] * small.size
        for i, row in enumerate(big.rows):
            j = 0
            for p in pos:
                j = j * n + row[p]
            self.image.append(j)
            fibres[j] |= 1 << i
        self.fibres = fibres
        # byte lookup tables pay off for small spaces; large ones would cost too much memory
        small_enough = big.size <= _TABLE_ROWS
        self._down = _chunk_tables(self.image, lambda j: 1 << j, big.size) if small_enough else None
        self._up = _chunk_tables(fibres, lambda f: f, small.size) if small_enough else None

    def down(self, mask: int) -> int:
        if self._down is not None:
            return _apply_chunks(self._down, mask)
        out = 0
        image = self.image
        for i in _bits(mask):
            out |= 1 << image[i]
        return out

    def up(self, mask: int) -> int:
        """Every big row over a row of ``mask``."""
        if self._up is not None:
            return _apply_chunks(self._up, mask)
        out = 0
        fib = self.fibres
        for j in _bits(mask):
            out |= fib[j]
        return out


_CHUNK = 8
_TABLE_ROWS = 256


def _chunk_tables(images: list, lift, size: int) -> list:
    # table[c][b] = union of lift(images[i]) over the bits i of byte b in chunk c
    tables = []
    for start in range(0, size, _CHUNK):
        width = min(_CHUNK, size - start)
        table = [0] * (1 << width)
        for b in range(1, 1 << width):
            low = b & -b
            table[b] = table[b ^ low] | lift(images[start + low.bit_length() - 1])
        tables.append(table)
    return tables


def _apply_chunks(tables: list, mask: int) -> int:
    out = 0
    for table in tables:
        if not mask:
            break
        out |= table[mask & 0xFF]
        mask >>= _CHUNK
    return out


_EXISTS_SEARCH_STEPS = 256


class _SearchCutoff(Exception):
    pass


class MaximalEvaluator:
    """Bitmask evaluator; see the module docstring.

    With ``project=False`` no subformula is ever restricted to its free
    variables: every node is evaluated over the full current domain, which is
    slower but does not presuppose locality.
    """

    def __init__(self, model: Model, budget: EvalBudget = DEFAULT_BUDGET, project: bool = True):
        self.model = model
        self.budget = budget
        self.project = project
        self.clock = _Clock(budget)
        self._keep: list = []
        self._fv: dict = {}
        self._spaces: dict = {}
        self._proj: dict = {}
        self._lit: dict = {}
        self._dep: dict = {}
        self._routes: dict = {}
        self._ext: dict = {}
        self._dispatch = {
            Eq: self._h_literal, Rel: self._h_literal, Neg: self._h_literal, Dep: self._h_dep,
            NDep: self._h_empty, Bot: self._h_empty, And: self._h_and, IVee: self._h_ivee,
            Tensor: self._h_tensor, Impl: self._h_impl, LImpl: self._h_limpl,
            Forall: self._h_forall, Exists: self._holds_exists,
        }
        # memo keys hold id(phi); every formula seen is pinned in _keep so ids stay unique
        self._holds: dict | None = None if budget.paranoid else {}
        self._max: dict | None = None if budget.paranoid else {}

    def clear_memo(self):
        """Drop per-formula caches; spaces and projections are kept."""
        for memo in (self._holds, self._max):
            if memo is not None:
                memo.clear()
        self._routes.clear()
        self._lit.clear()
        self._dep.clear()
        self._fv.clear()
        self._keep.clear()

    # plumbing

    def fv(self, phi) -> tuple:
        key = id(phi)
        hit = self._fv.get(key)
        if hit is None:
            self._keep.append(phi)
            hit = self._fv[key] = tuple(sorted(free_vars(phi)))
        return hit

    def space(self, vars: tuple) -> _Space:
        sp = self._spaces.get(vars)
        if sp is None:
            size = self.model.size ** len(vars)
            if size > self.budget.max_space_rows:
                raise BudgetExceeded(f"assignment space of {size} rows exceeds budget of "
                                     f"{self.budget.max_space_rows}")
            sp = self._spaces[vars] = _Space(self.model.size, vars)
        return sp

    def projection(self, big: tuple, small: tuple) -> _Projection:
        key = (big, small)
        pr = self._proj.get(key)
        if pr is None:
            pr = self._proj[key] = _Projection(self.space(big), self.space(small))
        return pr

    def team_mask(self, team: Team, vars: tuple) -> int:
        sp = self.space(vars)
        pos = [team.vars.index(v) for v in vars]
        mask = 0
        for r in team.rows:
            mask |= 1 << sp.index(tuple(r[p] for p in pos))
        return mask

    def lit_mask(self, phi, vars: tuple) -> int:
        key = (id(phi), vars)
        hit = self._lit.get(key)
        if hit is None:
            self._keep.append(phi)
            hit = 0
            for i, row in enumerate(self.space(vars).rows):
                if _literal(self.model, phi, dict(zip(vars, row))):
                    hit |= 1 << i
            self._lit[key] = hit
        return hit

    def dep_table(self, phi, vars: tuple) -> list:
        key = (id(phi), vars)
        hit = self._dep.get(key)
        if hit is None:
            self._keep.append(phi)
            M = self.model
            hit = []
            for row in self.space(vars).rows:
                s = dict(zip(vars, row))
                vals = tuple(M.term_value(t, s) for t in phi.terms)
                hit.append((vals[:-1], vals[-1]))
            self._dep[key] = hit
        return hit

    # public entry points

    def _domain(self, team: Team, phi) -> tuple:
        return self.fv(phi) if self.project else tuple(sorted(team.vars))

    def satisfies(self, team: Team, phi) -> bool:
        _check_bid(phi, self.budget)
        _check_domain(phi, team)
        self._keep.append(phi)
        vars = self._domain(team, phi)
        return self._holds_in(phi, vars, self.team_mask(team, vars))

    def satisfying_maxima(self, team: Team, phi) -> list:
        """Maximal subteams of ``team`` satisfying ``phi``, as teams."""
        _check_bid(phi, self.budget)
        _check_domain(phi, team)
        self._keep.append(phi)
        vars = tuple(sorted(team.vars))
        sp = self.space(vars)
        out = []
        for m in self.maxima(phi, vars, self.team_mask(team, vars)):
            out.append(Team(vars, tuple(sp.rows[i] for i in _bits(m))))
        return out

    def satisfaction_table(self, phi, vars: tuple | None = None, masks: Iterable[int] | None = None) -> list:
        """Satisfaction of every team mask over ``vars`` (default: Fv(phi), sorted).

        Bit ``i`` of a mask is row ``i`` of ``M^vars`` in lexicographic order.
        Without ``masks`` the result is indexed by mask, over all ``2^(n^|vars|)`` teams.
        """
        _check_bid(phi, self.budget)
        self._keep.append(phi)
        vars = self.fv(phi) if vars is None else tuple(vars)
        missing = set(self.fv(phi)) - set(vars)
        if missing:
            raise ValueError(f"domain mismatch: team lacks free variables {sorted(missing)}")
        size = self.space(vars).size
        if masks is None:
            if size > 20:
                raise BudgetExceeded(f"2^{size} teams requested")
            masks = range(1 << size)
        run = self.holds if self.project else self._holds_in
        return [run(phi, vars, X) for X in masks]

    # core: ``vars`` is the domain of the team mask ``X`` and contains Fv(phi)

    def _route(self, phi, vars: tuple):
        key = (id(phi), vars)
        hit = self._routes.get(key)
        if hit is None:
            fv = self.fv(phi)
            hit = self._routes[key] = (fv, None if fv == vars else self.projection(vars, fv))
        return hit

    def holds(self, phi, vars: tuple, X: int) -> bool:
        if self.project:
            fv, pr = self._route(phi, vars)
            if pr is not None:
                X = pr.down(X)
                vars = fv
        return self._holds_in(phi, vars, X)

    def maxima(self, phi, vars: tuple, X: int) -> list:
        if self.project:
            fv, pr = self._route(phi, vars)
            if pr is not None:
                return [X & pr.up(Z) for Z in self._maxima_in(phi, fv, pr.down(X))]
        return self._maxima_in(phi, vars, X)

    def _tick(self):
        if self.clock.deadline is not None:
            self.clock.tick()

    def _holds_in(self, phi, vars: tuple, X: int) -> bool:
        memo = self._holds
        key = (id(phi), vars, X)
        if memo is not None:
            hit = memo.get(key)
            if hit is not None:
                return hit
        self._tick()
        try:
            out = self._dispatch[type(phi)](phi, vars, X)
        except KeyError:
            raise TypeError(f"{type(phi).__name__} is not a BID node") from None
        if memo is not None:
            memo[key] = out
        return out

    def _extension(self, vars: tuple, x: str):
        """Domain after (re)binding ``x`` and the projections onto the untouched variables."""
        key = (vars, x)
        hit = self._ext.get(key)
        if hit is None:
            base = tuple(v for v in vars if v != x)
            big = vars if x in vars else tuple(sorted(vars + (x,)))
            hit = self._ext[key] = (big, base, self.projection(big, base),
                                    self.projection(vars, base) if x in vars else None)
        return hit

    # satisfaction, one method per connective

    def _h_literal(self, phi, vars, X):
        return X & ~self.lit_mask(phi, vars) == 0

    def _h_dep(self, phi, vars, X):
        table = self.dep_table(phi, vars)
        seen: dict = {}
        for i in _bits(X):
            k, v = table[i]
            if seen.setdefault(k, v) != v:
                return False
        return True

    def _h_empty(self, phi, vars, X):
        return X == 0

    def _h_and(self, phi, vars, X):
        return self.holds(phi.left, vars, X) and self.holds(phi.right, vars, X)

    def _h_ivee(self, phi, vars, X):
        return self.holds(phi.left, vars, X) or self.holds(phi.right, vars, X)

    def _h_tensor(self, phi, vars, X):
        # complement split suffices by downward closure
        return any(self.holds(phi.right, vars, X & ~A) for A in self.maxima(phi.left, vars, X))

    def _h_impl(self, phi, vars, X):
        return all(self.holds(phi.right, vars, A) for A in self.maxima(phi.left, vars, X))

    def _h_limpl(self, phi, vars, X):
        full = self.space(vars).full
        return all(self.holds(phi.right, vars, X | A) for A in self.maxima(phi.left, vars, full))

    def _h_forall(self, phi, vars, X):
        big, base, up, down = self._extension(vars, phi.var)
        return self.holds(phi.body, big, up.up(down.down(X) if down else X))

    def _holds_exists(self, phi, vars: tuple, X: int) -> bool:
        # a run of existentials is searched jointly, one row at a time; the run
        # stops after a variable that is already in the domain, since
        # overwriting it can merge rows
        block = []
        body = phi
        while isinstance(body, Exists) and body.var not in block:
            block.append(body.var)
            body = body.body
            if block[-1] in vars:
                break
        big = tuple(sorted(set(vars) | set(block)))
        base = tuple(v for v in vars if v not in block)
        up = self.projection(big, base)
        down = self.projection(vars, base) if base != vars else None
        if X == 0:
            return self.holds(body, big, 0)
        rows = []
        for i in _bits(X):
            j = down.image[i] if down else i
            cands = [b for b in _bits(up.fibres[j]) if self.holds(body, big, 1 << b)]
            if not cands:
                return False
            rows.append(cands)
        rows.sort(key=len)
        steps = [_EXISTS_SEARCH_STEPS + 8 * len(rows)]

        def search(k: int, acc: int) -> bool:
            if k == len(rows):
                return True
            for b in rows[k]:
                steps[0] -= 1
                if steps[0] < 0:
                    raise _SearchCutoff
                nxt = acc | (1 << b)
                if self.holds(body, big, nxt) and search(k + 1, nxt):
                    return True
            return False

        try:
            return search(0, 0)
        except _SearchCutoff:
            pass
        # the search is stuck on choices that do not matter; decide through the
        # maximal satisfying subteams of the extension instead: a witness exists
        # iff one of them meets the fibre of every row
        base_rows = down.down(X) if down else X
        fibres = [up.fibres[j] for j in _bits(base_rows)]
        return any(all(f & Z for f in fibres) for Z in self.maxima(body, big, up.up(base_rows)))

    def _maxima_in(self, phi, vars: tuple, X: int) -> list:
        memo = self._max
        key = (id(phi), vars, X)
        if memo is not None:
            hit = memo.get(key)
            if hit is not None:
                return hit
        self._tick()
        out = self._maxima_eval(phi, vars, X)
        if memo is not None:
            memo[key] = out
        return out

    def _maxima_eval(self, phi, vars: tuple, X: int) -> list:
        limit = self.budget.max_family
        if isinstance(phi, (Eq, Rel, Neg)):
            return [X & self.lit_mask(phi, vars)]
        if isinstance(phi, (NDep, Bot)):
            return [0]
        if X == 0 or X & (X - 1) == 0:
            if self._holds_in(phi, vars, X):
                return [X]
            return [0] if X and self._holds_in(phi, vars, 0) else []
        if isinstance(phi, Dep):
            table = self.dep_table(phi, vars)
            groups: dict = {}
            for i in _bits(X):
                k, v = table[i]
                g = groups.setdefault(k, {})
                g[v] = g.get(v, 0) | (1 << i)
            count = 1
            for g in groups.values():
                count *= len(g)
            if count > limit:
                raise BudgetExceeded(f"dependence atom has {count} maximal subteams, budget {limit}")
            return [sum(choice) for choice in itertools.product(*(list(g.values()) for g in groups.values()))]
        if self._holds_in(phi, vars, X):
            return [X]
        if isinstance(phi, And):
            left = self.maxima(phi.left, vars, X)
            right = self.maxima(phi.right, vars, X)
            self._guard(len(left) * len(right))
            return _maximal((a & b for a in left for b in right), limit)
        if isinstance(phi, Tensor):
            left = self.maxima(phi.left, vars, X)
            right = self.maxima(phi.right, vars, X)
            self._guard(len(left) * len(right))
            return _maximal((a | b for a in left for b in right), limit)
        if isinstance(phi, IVee):
            return _maximal(self.maxima(phi.left, vars, X) + self.maxima(phi.right, vars, X), limit)
        if isinstance(phi, Impl):
            # Y satisfies iff for each maximal A of the antecedent, Y ∩ A sits inside
            # some maximal B of the consequent, i.e. Y ⊆ (X \ A) ∪ B
            right = self.maxima(phi.right, vars, X)
            cur = [X]
            for A in self.maxima(phi.left, vars, X):
                opts = _maximal(((X & ~A) | B for B in right), limit)
                self._guard(len(cur) * len(opts))
                cur = _maximal((c & o for c in cur for o in opts), limit)
            return cur
        if isinstance(phi, LImpl):
            full = self.space(vars).full
            right = self.maxima(phi.right, vars, full)
            cur = [X]
            for A in self.maxima(phi.left, vars, full):
                opts = _maximal((B & X for B in right if A & ~B == 0), limit)
                if not opts:
                    return []
                self._guard(len(cur) * len(opts))
                cur = _maximal((c & o for c in cur for o in opts), limit)
            return cur
        if isinstance(phi, (Forall, Exists)):
            big, base, up, down = self._extension(vars, phi.var)
            fam = self.maxima(phi.body, big, up.up(down.down(X) if down else X))
            universal = isinstance(phi, Forall)
            out = []
            for Z in fam:
                m = 0
                for i in _bits(X):
                    f = up.fibres[down.image[i] if down else i]
                    if (f & ~Z == 0) if universal else (f & Z):
                        m |= 1 << i
                out.append(m)
            return _maximal(out, limit)
        raise TypeError(f"{type(phi).__name__} is not a BID node")

    def _guard(self, count: int):
        if count > self.budget.max_family * 50:
            raise BudgetExceeded(f"{count} candidate subteams exceed budget")


# --------------------------------------------------------------------------
# API


ENGINES = {"maximal": MaximalEvaluator, "clauses": ClauseEvaluator}


def evaluator(model: Model, budget: EvalBudget | None = None, engine: str = "maximal"):
    """``maximal``, ``unprojected`` (maximal without locality projection) or ``clauses``."""
    budget = budget or DEFAULT_BUDGET
    if engine == "unprojected":
        return MaximalEvaluator(model, budget, project=False)
    try:
        cls = ENGINES[engine]
    except KeyError:
        raise ValueError(f"unknown engine {engine!r}; choose from {sorted(ENGINES) + ['unprojected']}") from None
    return cls(model, budget)


def satisfies(M: Model, X: Team, phi, budget: EvalBudget | None = None, engine: str = "maximal") -> bool:
    """Decide ``M ⊨_X φ``."""
    return evaluator(M, budget, engine).satisfies(X, phi)


def sentence_true(M: Model, phi, budget: EvalBudget | None = None, engine: str = "maximal") -> bool:
    if free_vars(phi):
        raise ValueError(f"not a sentence: free variables {sorted(free_vars(phi))}")
    return satisfies(M, Team.unit(), phi, budget, engine)


def truth_value(M: Model, phi, budget: EvalBudget | None = None, engine: str = "maximal") -> TruthValue:
    """Which of ``∅`` and ``{∅}`` satisfy the sentence ``phi``."""
    if free_vars(phi):
        raise ValueError(f"not a sentence: free variables {sorted(free_vars(phi))}")
    ev = evaluator(M, budget, engine)
    at_empty = ev.satisfies(Team.empty(), phi)
    at_unit = ev.satisfies(Team.unit(), phi)
    if at_unit and not at_empty:
        raise DownwardClosureViolation(
            "internal error: {∅} satisfies the sentence but ∅ does not")
    if at_unit:
        return TruthValue.TRUE
    return TruthValue.EMPTY_ONLY if at_empty else TruthValue.FALSE


__all__ = [
    "EvalBudget", "TruthValue", "ClauseEvaluator", "MaximalEvaluator", "evaluator",
    "satisfies", "sentence_true", "truth_value", "DownwardClosureViolation", "BudgetExceeded",
    "team_from_mask", "ENGINES", "DEFAULT_BUDGET",
]
