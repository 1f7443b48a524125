"""Concrete ASCII syntax for BID and second-order formulas.

Precedence, loosest first::

    ->  -*        right associative
    |   ||        left associative, same level
    &             left associative
    ~             atoms only in BID input
    A x.  E x.  Af f:q.  Ef f:q.   extend as far right as possible

``render`` prints every binary node in parentheses, so
``parse(render(phi)) == phi`` holds structurally.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .logic_ast import (
    And, App, Bot, Const, Dep, Eq, Exists, ExistsFn, Forall, ForallFn, Implies,
    Impl, IVee, LImpl, NDep, Neg, Not, Or, Rel, Signature, Tensor, Var,
)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start after end")


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan, text: str = ""):
        self.message = message
        self.span = span
        self.text = text
        super().__init__(f"{message} at {span.start}..{span.end}")

    def pretty(self) -> str:
        if not self.text:
            return str(self)
        caret = " " * self.span.start + "^" * max(1, self.span.end - self.span.start)
        return f"{self.message}\n  {self.text}\n  {caret}"


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op>->|-\*|\|\||[|&~()=,.:])
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

KEYWORDS = {"A", "E", "Af", "Ef", "bot", "dep", "ndep"}


@dataclass(frozen=True)
class Token:
    kind: str  # 'op', 'int', 'name', 'eof'
    text: str
    start: int
    end: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.start, self.end)


def tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(pos, pos + 1), text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), m.start(), m.end()))
        pos = m.end()
    out.append(Token("eof", "", len(text), len(text)))
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature | None, so: bool):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.sig = sig
        self.so = so
        self.bound_fns: list = []  # stack of (name, arity)
        self.seen_rel: dict = {}
        self.seen_fn: dict = {}

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.take()

    def fail(self, msg: str, start: int | None = None, end: int | None = None):
        tok = self.tok
        s = tok.start if start is None else start
        e = max(s, tok.end if end is None else end)
        raise ParseError(msg, SourceSpan(s, e), self.text)

    def name(self) -> Token:
        if self.tok.kind != "name" or self.tok.text in KEYWORDS:
            self.fail(f"expected identifier, found {self.tok.text or 'end of input'!r}")
        return self.take()

    # grammar

    def parse(self):
        phi = self.formula()
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}")
        return phi

    def formula(self):
        left = self.disjunction()
        if self.at("->") or self.at("-*"):
            op = self.take()
            right = self.formula()
            if op.text == "->":
                return Implies(left, right) if self.so else Impl(left, right)
            if self.so:
                self.fail("'-*' is not second-order syntax", op.start, op.end)
            return LImpl(left, right)
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.at("|") or self.at("||"):
            op = self.take()
            right = self.conjunction()
            if op.text == "|":
                left = Or(left, right) if self.so else Tensor(left, right)
            else:
                if self.so:
                    self.fail("'||' is not second-order syntax", op.start, op.end)
                left = IVee(left, right)
        return left

    def conjunction(self):
        left = self.unary()
        while self.at("&"):
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        t = self.tok
        if self.at("~"):
            self.take()
            if self.so:
                return Not(self.unary())
            inner = self.unary()
            if not isinstance(inner, (Eq, Rel)):
                if isinstance(inner, Dep):
                    self.fail("negated dependence atom is spelled ndep(...)", t.start, self.tokens[self.i - 1].end)
                self.fail("negation on non-atom (BID input must be in negation normal form)",
                          t.start, self.tokens[self.i - 1].end)
            return Neg(inner)
        if self.at("A") or self.at("E"):
            q = self.take()
            var = self.name()
            self.expect(".")
            body = self.formula()
            return (Forall if q.text == "A" else Exists)(var.text, body)
        if self.at("Af") or self.at("Ef"):
            q = self.take()
            if not self.so:
                self.fail("function quantifiers are second-order syntax", q.start, q.end)
            fname = self.name()
            self.expect(":")
            if self.tok.kind != "int":
                self.fail("expected arity")
            arity = int(self.take().text)
            if arity < 1:
                self.fail("function variables need arity >= 1", q.start, self.tokens[self.i - 1].end)
            self.expect(".")
            self.bound_fns.append((fname.text, arity))
            try:
                body = self.formula()
            finally:
                self.bound_fns.pop()
            return (ForallFn if q.text == "Af" else ExistsFn)(fname.text, arity, body)
        return self.primary()

    def primary(self):
        t = self.tok
        if self.at("("):
            self.take()
            phi = self.formula()
            self.expect(")")
            return phi
        if self.at("bot"):
            self.take()
            if self.so:
                self.fail("bot is not a second-order node", t.start, t.end)
            return Bot()
        if self.at("dep") or self.at("ndep"):
            self.take()
            if self.so:
                self.fail(f"{t.text} is not a second-order node", t.start, t.end)
            self.expect("(")
            terms = self.term_list()
            self.expect(")")
            return Dep(terms) if t.text == "dep" else NDep(terms)
        if self.tok.kind != "name" or self.tok.text in KEYWORDS:
            self.fail(f"expected formula, found {self.tok.text or 'end of input'!r}")
        # relation atom or the left side of an equation
        name = self.take()
        if self.at("(") and not self._continues_to_eq():
            self.take()
            args = self.term_list()
            self.expect(")")
            self.check_relation(name, len(args))
            return Rel(name.text, args)
        self.i -= 1
        left = self.term()
        if not self.at("="):
            self.fail("expected '=' after term")
        self.take()
        right = self.term()
        return Eq(left, right)

    def _continues_to_eq(self) -> bool:
        """After ``name(`` decide whether the balanced call is followed by '='."""
        depth = 0
        j = self.i
        while self.tokens[j].kind != "eof":
            tx = self.tokens[j].text
            if tx == "(":
                depth += 1
            elif tx == ")":
                depth -= 1
                if depth == 0:
                    return self.tokens[j + 1].text == "=" and self.tokens[j + 1].kind == "op"
            j += 1
        return False

    def term_list(self) -> tuple:
        terms = [self.term()]
        while self.at(","):
            self.take()
            terms.append(self.term())
        return tuple(terms)

    def term(self):
        name = self.name()
        if self.at("("):
            self.take()
            args = self.term_list()
            self.expect(")")
            self.check_function(name, len(args))
            return App(name.text, args)
        if self.sig is not None and name.text in self.sig.constants:
            return Const(name.text)
        if self.sig is not None and (name.text in self.sig.functions or name.text in self.sig.relations):
            self.fail(f"{name.text} is not a variable or constant", name.start, name.end)
        if any(name.text == b for b, _ in self.bound_fns):
            self.fail(f"function variable {name.text} used without arguments", name.start, name.end)
        return Var(name.text)

    # symbol checks

    def check_function(self, name: Token, arity: int):
        for bname, barity in reversed(self.bound_fns):
            if bname == name.text:
                if barity != arity:
                    self.fail(f"{name.text} bound with arity {barity}, applied to {arity} arguments",
                              name.start, self.tokens[self.i - 1].end)
                return
        if self.sig is not None:
            if name.text not in self.sig.functions:
                self.fail(f"unknown function symbol {name.text}", name.start, name.end)
            if self.sig.functions[name.text] != arity:
                self.fail(f"{name.text} has arity {self.sig.functions[name.text]}, got {arity}",
                          name.start, self.tokens[self.i - 1].end)
            return
        if name.text in self.seen_rel:
            self.fail(f"{name.text} used both as relation and function", name.start, name.end)
        if self.seen_fn.setdefault(name.text, arity) != arity:
            self.fail(f"{name.text} used with arities {self.seen_fn[name.text]} and {arity}",
                      name.start, self.tokens[self.i - 1].end)

    def check_relation(self, name: Token, arity: int):
        if any(name.text == b for b, _ in self.bound_fns):
            self.fail("relation variables are unsupported; only function variables may be quantified",
                      name.start, name.end)
        if self.sig is not None:
            if name.text not in self.sig.relations:
                self.fail(f"unknown relation symbol {name.text}", name.start, name.end)
            if self.sig.relations[name.text] != arity:
                self.fail(f"{name.text} has arity {self.sig.relations[name.text]}, got {arity}",
                          name.start, self.tokens[self.i - 1].end)
            return
        if name.text in self.seen_fn:
            self.fail(f"{name.text} used both as relation and function", name.start, name.end)
        if self.seen_rel.setdefault(name.text, arity) != arity:
            self.fail(f"{name.text} used with arities {self.seen_rel[name.text]} and {arity}",
                      name.start, self.tokens[self.i - 1].end)


def parse_formula(text: str, sig: Signature | None = None):
    """Parse BID syntax.  With ``sig=None`` the vocabulary is inferred from usage."""
    return _Parser(text, sig, so=False).parse()


def parse_so(text: str, sig: Signature | None = None):
    """Parse second-order syntax (classical connectives, function quantifiers)."""
    return _Parser(text, sig, so=True).parse()


# --------------------------------------------------------------------------
# rendering


def render_term(t) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    return f"{t.fn}({','.join(render_term(a) for a in t.args)})"


def _open_ended(phi) -> bool:
    if isinstance(phi, (Forall, Exists, ForallFn, ExistsFn)):
        return True
    if isinstance(phi, Not):
        return _open_ended(phi.body)
    return False


_OPS = {And: "&", Tensor: "|", Or: "|", IVee: "||", Impl: "->", Implies: "->", LImpl: "-*"}


def render(phi) -> str:
    """Fully parenthesised canonical text."""
    if isinstance(phi, Eq):
        return f"{render_term(phi.left)}={render_term(phi.right)}"
    if isinstance(phi, Rel):
        return f"{phi.name}({','.join(render_term(a) for a in phi.args)})"
    if isinstance(phi, (Neg, Not)):
        inner = phi.atom if isinstance(phi, Neg) else phi.body
        if isinstance(inner, Eq):
            return f"~({render(inner)})"
        return "~" + render(inner)
    if isinstance(phi, Dep):
        return f"dep({','.join(render_term(t) for t in phi.terms)})"
    if isinstance(phi, NDep):
        return f"ndep({','.join(render_term(t) for t in phi.terms)})"
    if isinstance(phi, Bot):
        return "bot"
    if type(phi) in _OPS:
        left = render(phi.left)
        if _open_ended(phi.left):
            left = f"({left})"
        return f"({left} {_OPS[type(phi)]} {render(phi.right)})"
    if isinstance(phi, Forall):
        return f"A {phi.var}. {render(phi.body)}"
    if isinstance(phi, Exists):
        return f"E {phi.var}. {render(phi.body)}"
    if isinstance(phi, ForallFn):
        return f"Af {phi.name}:{phi.arity}. {render(phi.body)}"
    if isinstance(phi, ExistsFn):
        return f"Ef {phi.name}:{phi.arity}. {render(phi.body)}"
    raise TypeError(f"cannot render {type(phi).__name__}")


def load_signature(text: str) -> Signature:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"signature file is not JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ValueError("signature file must hold a JSON object")
    unknown = set(data) - {"relations", "functions", "constants"}
    if unknown:
        raise ValueError(f"unknown signature keys: {sorted(unknown)}")
    return Signature.from_json(data)
