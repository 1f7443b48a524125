"""Exhaustive checks over small finite models.

Three kinds of check live here:

* :func:`check_equiv` compares two team formulas on every model of a
  signature up to a size bound and every team over their free variables;
* :func:`check_sentence_translation` compares a second-order sentence with a
  team-semantic translation evaluated at ``{∅}`` (or at ``∅``);
* :func:`run_law_suite` runs one of the semantic law suites over seeded
  formula generators and returns a :class:`LawReport`.

Models are visited by increasing size in the order of
:func:`~tlk.finite_model.enumerate_models`, teams by increasing bitmask, so the
first counterexample is stable.  With ``jobs > 1`` the per-model work fans out
to a process pool, and results are reduced in that same order.
"""
from __future__ import annotations

import enum
import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from .finite_model import DEFAULT_MODEL_BUDGET, BudgetExceeded, Model, Team, enumerate_models
from .formula_parser import parse_formula, render
from .generators import GenConfig, FormulaGenerator
from .logic_ast import (
    And, Bot, Dep, Fragment, Impl, LImpl, Neg, NDep, Signature, Tensor, free_vars,
    signature_of,
)
from .so_eval import DEFAULT_TABLE_BUDGET, so_sentence_true
from .team_eval import DEFAULT_BUDGET, EvalBudget, MaximalEvaluator, evaluator, team_from_mask
from .translator import expand_dep_atom, literal_to_id


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    BUDGET = "BUDGET"


@dataclass(frozen=True)
class Counterexample:
    model: Model
    team: Team | None
    left: bool
    right: bool

    def to_json(self) -> dict:
        return {"model": self.model.to_json(),
                "team": None if self.team is None else self.team.to_json(),
                "left": self.left, "right": self.right}

    def to_text(self) -> str:
        team = "" if self.team is None else f" team={self.team.to_text()}"
        return f"model={self.model.to_text()}{team} left={self.left} right={self.right}"


@dataclass(frozen=True)
class EquivVerdict:
    status: Status
    models_checked: int
    teams_checked: int
    counterexample: Counterexample | None = None
    message: str = ""

    def __post_init__(self):
        if (self.status is Status.FAIL) != (self.counterexample is not None):
            raise ValueError("a FAIL verdict carries a counterexample and nothing else does")

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def to_json(self) -> dict:
        return {"status": self.status.value, "models_checked": self.models_checked,
                "teams_checked": self.teams_checked, "message": self.message,
                "counterexample": None if self.counterexample is None else self.counterexample.to_json()}

    def to_text(self) -> str:
        line = f"{self.status.value} models={self.models_checked} teams={self.teams_checked}"
        if self.message:
            line += f" ({self.message})"
        if self.counterexample is not None:
            line += "\ncounterexample: " + self.counterexample.to_text()
        return line


@dataclass(frozen=True)
class CheckConfig:
    """Search bounds shared by every exhaustive check."""

    max_size: int = 3
    min_size: int = 1
    engine: str = "maximal"
    budget: EvalBudget = DEFAULT_BUDGET
    max_models: int = DEFAULT_MODEL_BUDGET       # per domain size
    so_budget: int = DEFAULT_TABLE_BUDGET        # function tables per second-order quantifier
    jobs: int = 1

    def __post_init__(self):
        if self.min_size < 1 or self.max_size < self.min_size:
            raise ValueError("need 1 <= min_size <= max_size")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")


def _config(config: CheckConfig | None, overrides: dict) -> CheckConfig:
    config = config or CheckConfig()
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **overrides) if overrides else config


def _models(sig: Signature, cfg: CheckConfig):
    for n in range(cfg.min_size, cfg.max_size + 1):
        yield from enumerate_models(sig, n, cfg.max_models)


def _space_rows(M: Model, vars: tuple) -> list:
    return list(itertools.product(M.domain, repeat=len(vars)))


# --------------------------------------------------------------------------
# per-model workers; module level so a process pool can pickle them


def _equiv_on_model(task):
    M, phi, psi, dom, cfg = task
    ev = evaluator(M, cfg.budget, cfg.engine)
    left = ev.satisfaction_table(phi, dom)
    right = ev.satisfaction_table(psi, dom)
    for X, (a, b) in enumerate(zip(left, right)):
        if a != b:
            return X + 1, Counterexample(M, team_from_mask(dom, _space_rows(M, dom), X), a, b)
    return len(left), None


def _translation_on_model(task):
    M, so, phi, at, cfg = task
    team = Team.unit() if at == "unit" else Team.empty()
    a = so_sentence_true(M, so, cfg.so_budget)
    b = evaluator(M, cfg.budget, cfg.engine).satisfies(team, phi)
    return 1, None if a == b else Counterexample(M, team, a, b)


def _run(worker: Callable, tasks: Iterable, cfg: CheckConfig) -> EquivVerdict:
    models = teams = 0
    deadline = None if cfg.budget.timeout_s is None else time.monotonic() + cfg.budget.timeout_s
    pool = ProcessPoolExecutor(cfg.jobs) if cfg.jobs > 1 else None
    try:
        results = pool.map(worker, tasks, chunksize=4) if pool else map(worker, tasks)
        for checked, cex in results:
            models += 1
            teams += checked
            if cex is not None:
                return EquivVerdict(Status.FAIL, models, teams, cex)
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceeded("check timed out")
    except BudgetExceeded as exc:
        return EquivVerdict(Status.BUDGET, models, teams, message=str(exc))
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)
    return EquivVerdict(Status.PASS, models, teams)


# --------------------------------------------------------------------------
# public checks


def check_equiv(phi, psi, sig: Signature | None = None, max_size: int | None = None,
                budget: EvalBudget | None = None, engine: str | None = None, jobs: int | None = None,
                *, config: CheckConfig | None = None, min_size: int | None = None) -> EquivVerdict:
    """Compare ``phi`` and ``psi`` on every model up to ``max_size`` and every team
    over ``Fv(phi) ∪ Fv(psi)``.
    """
    cfg = _config(config, dict(max_size=max_size, budget=budget, engine=engine, jobs=jobs,
                               min_size=min_size))
    sig = (sig or Signature()).merge(signature_of(phi)).merge(signature_of(psi))
    dom = tuple(sorted(free_vars(phi) | free_vars(psi)))
    tasks = ((M, phi, psi, dom, cfg) for M in _models(sig, cfg))
    try:
        return _run(_equiv_on_model, tasks, cfg)
    except BudgetExceeded as exc:     # raised while enumerating models
        return EquivVerdict(Status.BUDGET, 0, 0, message=str(exc))


def check_sentence_translation(so_phi, team_phi, at: str = "unit", sig: Signature | None = None,
                               max_size: int | None = None, budget: EvalBudget | None = None,
                               engine: str | None = None, jobs: int | None = None, *,
                               config: CheckConfig | None = None,
                               min_size: int | None = None) -> EquivVerdict:
    """``M ⊨ so_phi`` against ``M ⊨_T team_phi`` with ``T = {∅}`` (``at="unit"``)
    or ``T = ∅`` (``at="empty"``), on every model up to ``max_size``.
    """
    if at not in ("unit", "empty"):
        raise ValueError("at must be 'unit' or 'empty'")
    for name, f in (("second-order", so_phi), ("team", team_phi)):
        if free_vars(f):
            raise ValueError(f"the {name} formula is not a sentence: free {sorted(free_vars(f))}")
    cfg = _config(config, dict(max_size=max_size, budget=budget, engine=engine, jobs=jobs,
                               min_size=min_size))
    sig = (sig or Signature()).merge(signature_of(so_phi)).merge(signature_of(team_phi))
    tasks = ((M, so_phi, team_phi, at, cfg) for M in _models(sig, cfg))
    try:
        return _run(_translation_on_model, tasks, cfg)
    except BudgetExceeded as exc:
        return EquivVerdict(Status.BUDGET, 0, 0, message=str(exc))


def recheck(verdict: EquivVerdict, phi, psi, engine: str = "clauses",
            budget: EvalBudget | None = None) -> bool:
    """Re-evaluate an equivalence counterexample standalone; True if it still disagrees."""
    cex = verdict.counterexample
    if cex is None:
        raise ValueError("verdict has no counterexample")
    ev = evaluator(cex.model, budget, engine)
    return ev.satisfies(cex.team, phi) != ev.satisfies(cex.team, psi)


# --------------------------------------------------------------------------
# law suites

# random teams per model when the extended team space is too large to enumerate
LOCALITY_SAMPLES = 48

SUITES = ("downward", "flat", "empty", "eqbid", "adjoint", "negation", "locality")

# fixed (phi, psi, chi) triples for the adjointness suite, ahead of the generated ones
ADJOINT_CORPUS = tuple(tuple(parse_formula(t) for t in triple) for triple in (
    ("dep(x)", "dep(y)", "dep(x,y)"),
    ("x=y", "dep(x)", "dep(y)"),
    ("dep(x,y)", "~(x=y)", "bot"),
    ("dep(x)", "x=x", "dep(x)"),
    ("(x=y | ~(x=y))", "dep(y,x)", "(dep(x) || dep(y))"),
    ("E z. (dep(z) & x=z)", "y=x", "dep(y)"),
))


@dataclass(frozen=True)
class LawFailure:
    item: tuple          # rendered formulas of the instance
    model: Model
    team: Team | None
    detail: str

    def to_json(self) -> dict:
        return {"item": list(self.item), "model": self.model.to_json(),
                "team": None if self.team is None else self.team.to_json(), "detail": self.detail}

    def to_text(self) -> str:
        team = "" if self.team is None else f" team={self.team.to_text()}"
        return f"{' | '.join(self.item)} :: {self.detail} :: model={self.model.to_text()}{team}"


@dataclass
class LawReport:
    suite: str
    signature: Signature
    max_size: int
    seed: int
    count: int
    engine: str
    params: dict
    items: int = 0
    instances: int = 0
    failed_items: int = 0
    failures: list = field(default_factory=list)   # first few, in deterministic order
    budget_errors: list = field(default_factory=list)

    @property
    def status(self) -> Status:
        if self.failed_items:
            return Status.FAIL
        return Status.BUDGET if self.budget_errors else Status.PASS

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def to_json(self) -> dict:
        return {"suite": self.suite, "status": self.status.value,
                "signature": self.signature.to_json(), "max_size": self.max_size,
                "seed": self.seed, "count": self.count, "engine": self.engine,
                "params": self.params, "items": self.items, "instances": self.instances,
                "failed_items": self.failed_items,
                "failures": [f.to_json() for f in self.failures],
                "budget_errors": self.budget_errors}

    def to_text(self) -> str:
        lines = [f"suite {self.suite}: {self.status.value}",
                 f"  items={self.items} instances={self.instances} failed={self.failed_items}"
                 f" budget_errors={len(self.budget_errors)}",
                 f"  seed={self.seed} max_size={self.max_size} engine={self.engine}"
                 f" signature={json.dumps(self.signature.to_json(), sort_keys=True)}"]
        for f in self.failures:
            lines.append("  FAIL " + f.to_text())
        for msg in self.budget_errors[:5]:
            lines.append("  BUDGET " + msg)
        return "\n".join(lines)

    def render(self) -> str:
        """Text summary followed by the JSON section."""
        return self.to_text() + "\n--- json ---\n" + json.dumps(self.to_json(), sort_keys=True, indent=1)


def _items(suite: str, gen: FormulaGenerator, count: int) -> list:
    """The generated instances of ``suite``; each is a tuple of formulas."""
    out = []
    for i in range(count):
        if suite in ("downward", "locality"):
            out.append((gen.formula(Fragment.BID),))
        elif suite == "flat":
            out.append((gen.formula(Fragment.FO),))
        elif suite == "empty":
            out.append((gen.formula(Fragment.D if i % 2 == 0 else Fragment.ID),))
        elif suite == "negation":
            out.append((gen.sentence(Fragment.BID),))
        elif suite == "adjoint":
            out.append(tuple(gen.formula(Fragment.BID, depth=2) for _ in range(3)))
        elif suite == "eqbid":
            out.append(_eqbid_item(gen, i % 4))
        else:
            raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return out


def _eqbid_item(gen: FormulaGenerator, law: int) -> tuple:
    scope = list(gen.config.free)
    if law == 0:
        terms = tuple(gen.term(scope) for _ in range(gen.rng.randint(2, 3)))
        return (Dep(terms), expand_dep_atom(Dep(terms)))
    if law == 1:
        a = gen.atom(scope)
        if gen.rng.random() < 0.3:
            lit = NDep(tuple(gen.term(scope) for _ in range(gen.rng.randint(1, 3))))
        else:
            lit = Neg(a)
        return (lit, literal_to_id(lit))
    if law == 2:
        phi = gen.formula(Fragment.FO, depth=2)
        return (Impl(Impl(phi, Bot()), Bot()), phi)
    phi = gen.formula(Fragment.FO, depth=2)
    psi = gen.formula(Fragment.FO, depth=2)
    return (Tensor(phi, psi), Impl(Impl(phi, Bot()), psi))


def _mask_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _SuiteRunner:
    """Checks one instance of a suite on one model; returns ``(instances, failure)``."""

    def __init__(self, suite: str, cfg: CheckConfig, seed: int):
        self.suite = suite
        self.cfg = cfg
        self.seed = seed

    def table(self, ev, phi, dom):
        return ev.satisfaction_table(phi, dom)

    def run(self, item: tuple, M: Model, salt: int):
        ev = evaluator(M, self.cfg.budget, self.cfg.engine)
        check = getattr(self, "_" + self.suite)
        return check(item, M, ev, salt)

    def _fail(self, item, M, team, detail):
        return LawFailure(tuple(render(f) for f in item), M, team, detail)

    @staticmethod
    def _dom(*formulas) -> tuple:
        return tuple(sorted(set().union(*(free_vars(f) for f in formulas))))

    def _downward(self, item, M, ev, salt):
        (phi,) = item
        dom = self._dom(phi)
        T = self.table(ev, phi, dom)
        for X, ok in enumerate(T):
            if ok:
                for b in _mask_bits(X):
                    if not T[X ^ (1 << b)]:
                        rows = _space_rows(M, dom)
                        return len(T), self._fail(item, M, team_from_mask(dom, rows, X),
                                                  f"fails on the subteam without row {rows[b]}")
        return len(T), None

    def _flat(self, item, M, ev, salt):
        (phi,) = item
        dom = self._dom(phi)
        T = self.table(ev, phi, dom)
        for X, ok in enumerate(T):
            if ok != all(T[1 << b] for b in _mask_bits(X)):
                return len(T), self._fail(item, M, team_from_mask(dom, _space_rows(M, dom), X),
                                          f"team gives {ok}, its singletons give {not ok}")
        return len(T), None

    def _empty(self, item, M, ev, salt):
        (phi,) = item
        dom = self._dom(phi)
        if ev.satisfies(Team.empty(dom), phi):
            return 1, None
        return 1, self._fail(item, M, Team.empty(dom), "the empty team does not satisfy it")

    def _negation(self, item, M, ev, salt):
        (phi,) = item
        a = ev.satisfies(Team.unit(), phi)
        b = ev.satisfies(Team.unit(), Impl(phi, Bot()))
        if a != b:
            return 1, None
        return 1, self._fail(item, M, Team.unit(), f"sentence is {a} and so is its negation")

    def _eqbid(self, item, M, ev, salt):
        left, right = item
        dom = self._dom(left, right)
        L = self.table(ev, left, dom)
        R = self.table(ev, right, dom)
        for X, (a, b) in enumerate(zip(L, R)):
            if a != b:
                return len(L), self._fail(item, M, team_from_mask(dom, _space_rows(M, dom), X),
                                          f"left {a}, right {b}")
        return len(L), None

    def _adjoint(self, item, M, ev, salt):
        phi, psi, chi = item
        dom = self._dom(phi, psi, chi)
        out = 0
        for conj, impl, label in ((And, Impl, "and/->"), (Tensor, LImpl, "tensor/-*")):
            lhs = self.table(ev, conj(phi, psi), dom)
            rhs = self.table(ev, impl(psi, chi), dom)
            c = self.table(ev, chi, dom)
            p = self.table(ev, phi, dom)
            first = all(c[X] for X, ok in enumerate(lhs) if ok)
            second = all(rhs[X] for X, ok in enumerate(p) if ok)
            out += len(lhs)
            if first != second:
                return out, self._fail(item, M, None,
                                       f"{label}: first entailment {first}, second {second}")
        return out, None

    def _locality(self, item, M, ev, salt):
        # satisfaction over a domain extended by a variable outside Fv must agree
        # with satisfaction of the projection; the extended side is evaluated
        # without any locality projection
        (phi,) = item
        dom = self._dom(phi)
        extra = next(v for v in ("z", "w", "v0") if v not in dom)
        big = tuple(sorted(dom + (extra,)))
        base = self.table(ev, phi, dom)
        if self.cfg.engine == "clauses":
            wide = ev
        else:
            wide = MaximalEvaluator(M, self.cfg.budget, project=False)
        big_rows = _space_rows(M, big)
        pos = [big.index(v) for v in dom]
        image = []
        for row in big_rows:
            j = 0
            for p in pos:
                j = j * M.size + row[p]
            image.append(j)
        if len(big_rows) <= 8:
            teams = range(1 << len(big_rows))
        else:
            rng = random.Random(f"{self.seed}:{salt}")
            teams = [0, (1 << len(big_rows)) - 1]
            for _ in range(LOCALITY_SAMPLES):
                density = rng.choice((0.05, 0.15, 0.3, 0.5, 0.8))
                teams.append(sum(1 << i for i in range(len(big_rows)) if rng.random() < density))
        got = wide.satisfaction_table(phi, big, teams)
        for k, (Y, ok) in enumerate(zip(teams, got)):
            X = 0
            for i in _mask_bits(Y):
                X |= 1 << image[i]
            if ok != base[X]:
                return k + 1, self._fail(item, M, team_from_mask(big, big_rows, Y),
                                         f"extended team gives {ok}, its projection gives {base[X]}")
        return len(teams), None


_WORKER: dict = {}


def _init_worker(suite, cfg, seed, sizes, sig):
    _WORKER["runner"] = _SuiteRunner(suite, cfg, seed)
    _WORKER["models"] = [M for n in sizes for M in enumerate_models(sig, n, cfg.max_models)]


def _suite_item(task):
    index, item = task
    runner: _SuiteRunner = _WORKER["runner"]
    instances = 0
    for k, M in enumerate(_WORKER["models"]):
        try:
            checked, failure = runner.run(item, M, f"{index}:{k}")
        except BudgetExceeded as exc:
            return instances, None, f"item {index} on model {M.to_text()}: {exc}"
        instances += checked
        if failure is not None:
            return instances, failure, None
    return instances, None, None


def run_law_suite(suite: str, sig: Signature | None = None, max_size: int | None = None, seed: int = 0,
                  count: int = 500, formulas: Sequence = (), *, config: CheckConfig | None = None,
                  engine: str | None = None, budget: EvalBudget | None = None,
                  jobs: int | None = None, depth: int = 3, free: tuple = ("x", "y"),
                  max_failures: int = 10) -> LawReport:
    """Run ``suite`` on ``count`` generated instances plus ``formulas``.

    Extra ``formulas`` are single formulas, except for ``eqbid`` (pairs that
    should be equivalent) and ``adjoint`` (triples).  Every instance is checked on
    every model of ``sig`` with ``1 <= size <= max_size``.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    cfg = _config(config, dict(max_size=max_size, engine=engine, budget=budget, jobs=jobs))
    sig = sig or Signature()
    gen = FormulaGenerator(random.Random(seed), sig, GenConfig(depth=depth, free=free))
    items = _items(suite, gen, count)
    if suite == "adjoint":
        items = list(ADJOINT_CORPUS) + items
    for f in formulas:
        items.append(tuple(f) if isinstance(f, (tuple, list)) else (f,))
    for item in items:
        for f in item:
            sig = sig.merge(signature_of(f))
    report = LawReport(suite, sig, cfg.max_size, seed, count, cfg.engine,
                       {"depth": depth, "free": list(free), "extra": len(formulas),
                        "min_size": cfg.min_size})
    sizes = range(cfg.min_size, cfg.max_size + 1)
    init = (suite, cfg, seed, sizes, sig)
    tasks = list(enumerate(items))
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs, initializer=_init_worker, initargs=init) as pool:
            results = list(pool.map(_suite_item, tasks, chunksize=8))
    else:
        _init_worker(*init)
        results = [_suite_item(t) for t in tasks]
    for instances, failure, budget_msg in results:
        report.items += 1
        report.instances += instances
        if failure is not None:
            report.failed_items += 1
            if len(report.failures) < max_failures:
                report.failures.append(failure)
        if budget_msg is not None:
            report.budget_errors.append(budget_msg)
    return report


__all__ = [
    "Status", "Counterexample", "EquivVerdict", "CheckConfig", "check_equiv",
    "check_sentence_translation", "recheck", "SUITES", "LawFailure", "LawReport", "run_law_suite",
]
