"""Derivation traces for formula rewrites.

Every rewrite rule is a deterministic function of the formula it is applied
to and is registered in :data:`RULES` under its name, so a recorded trace can
be replayed step by step and checked.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .formula_parser import render


@dataclass(frozen=True)
class Rule:
    name: str
    citation: str
    apply: Callable


RULES: dict[str, Rule] = {}


def rule(name: str, citation: str):
    """Register ``fn`` as the rewrite rule ``name``."""

    def wrap(fn):
        if name in RULES:
            raise ValueError(f"duplicate rule {name}")
        RULES[name] = Rule(name, citation, fn)
        return fn

    return wrap


@dataclass(frozen=True)
class TraceStep:
    rule: str
    citation: str
    before: object
    after: object

    def render(self) -> str:
        return f"RULE {self.rule} [{self.citation}] : {render(self.before)} ==> {render(self.after)}"


@dataclass
class TranslationTrace:
    steps: list = field(default_factory=list)

    def apply(self, name: str, phi):
        """Run rule ``name`` on ``phi``; record a step when it changes something."""
        r = RULES[name]
        out = r.apply(phi)
        if out != phi:
            self.steps.append(TraceStep(r.name, r.citation, phi, out))
        return out

    def record(self, name: str, before, after):
        if before != after:
            self.steps.append(TraceStep(name, RULES[name].citation, before, after))

    def extend(self, other: "TranslationTrace"):
        self.steps.extend(other.steps)

    def render(self) -> str:
        return "\n".join(s.render() for s in self.steps)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


class ReplayError(AssertionError):
    pass


def replay(trace: TranslationTrace, start, end=None):
    """Re-apply every step from ``start``; returns the final formula."""
    cur = start
    for i, step in enumerate(trace.steps):
        if step.before != cur:
            raise ReplayError(f"step {i} ({step.rule}) does not continue the chain")
        out = RULES[step.rule].apply(cur)
        if out != step.after:
            raise ReplayError(f"step {i} ({step.rule}) does not reproduce its recorded output")
        cur = out
    if end is not None and cur != end:
        raise ReplayError("trace does not end at the reported output")
    return cur
