"""Biasing (weight) functions and their textual specification.

Grammar:
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' signed-number)?
    atom   := number | 'x' | '(' expr ')'

Named families are also accepted: identity, linear(c0, c1), quad(c0, c2),
betainv(b1, b2).
"""

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np


class WeightSyntaxError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class WeightEvalError(ValueError):
    """Raised when evaluation hits division by zero or 0^negative."""


@dataclass(frozen=True)
class WeightFunction:
    evaluator: Callable
    description: str

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        out = np.asarray(self.evaluator(y), dtype=float)
        return np.broadcast_to(out, y.shape).copy() if y.ndim else float(out)


# ---------------------------------------------------------------- expression tree

class Node:
    def evaluate(self, x):
        raise NotImplementedError

    def unparse(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Node):
    value: float

    def evaluate(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.value)

    def unparse(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var(Node):
    def evaluate(self, x):
        return np.asarray(x, dtype=float)

    def unparse(self):
        return "x"


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    def evaluate(self, x):
        a, b = self.left.evaluate(x), self.right.evaluate(x)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        bad = np.atleast_1d(b == 0.0)
        if bad.any():
            x_bad = np.atleast_1d(np.asarray(x, dtype=float))[: bad.size][bad][0]
            raise WeightEvalError(f"division by zero at x = {x_bad}")
        return a / b

    def unparse(self):
        return f"({self.left.unparse()} {self.op} {self.right.unparse()})"


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: float

    def evaluate(self, x):
        a = np.asarray(self.base.evaluate(x), dtype=float)
        if self.exponent < 0:
            bad = np.atleast_1d(a == 0.0)
            if bad.any():
                x_bad = np.atleast_1d(np.asarray(x, dtype=float))[: bad.size][bad][0]
                raise WeightEvalError(f"0^negative at x = {x_bad}")
        with np.errstate(invalid="ignore"):
            return np.power(a, self.exponent)

    def unparse(self):
        return f"({self.base.unparse()} ^ {self.exponent!r})"


_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_SIGNED = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        node = self.expr()
        self._skip_ws()
        if self.pos != len(self.text):
            raise WeightSyntaxError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return node

    def expr(self):
        node = self.term()
        while self._peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self._peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        node = self.atom()
        if self._peek() == "^":
            self.pos += 1
            self._skip_ws()
            m = _SIGNED.match(self.text, self.pos)
            if not m:
                raise WeightSyntaxError("expected signed number after '^'", self.pos)
            self.pos = m.end()
            node = Pow(node, float(m.group(0)))
        return node

    def atom(self):
        c = self._peek()
        if c == "(":
            self.pos += 1
            node = self.expr()
            if self._peek() != ")":
                raise WeightSyntaxError("expected ')'", self.pos)
            self.pos += 1
            return node
        if c == "x":
            self.pos += 1
            return Var()
        m = _NUMBER.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return Num(float(m.group(0)))
        raise WeightSyntaxError("expected number, 'x' or '('", self.pos)


_FAMILY = re.compile(r"^\s*(identity|linear|quad|betainv)\s*(\(([^)]*)\))?\s*$")


@dataclass(frozen=True)
class WeightSpec:
    source: str
    tree: Node

    def __call__(self, y):
        return self.tree.evaluate(y)

    def unparse(self) -> str:
        return self.tree.unparse()


def _num(c):
    # the grammar has no unary minus; negatives print as (0.0 - c)
    return Num(c) if c >= 0 else BinOp("-", Num(0.0), Num(-c))


def _family_tree(name, args):
    if name == "identity":
        return Var()
    if name == "linear":
        c0, c1 = args
        return BinOp("+", _num(c0), BinOp("*", _num(c1), Var()))
    if name == "quad":
        c0, c2 = args
        return BinOp("+", _num(c0), BinOp("*", _num(c2), Pow(Var(), 2.0)))
    if name == "betainv":
        b1, b2 = args
        left = Pow(Var(), -(b1 - 1.0))
        right = Pow(BinOp("-", Num(1.0), Var()), -(b2 - 1.0))
        return BinOp("*", left, right)
    raise AssertionError(name)


def parse_weight(text: str) -> WeightSpec:
    """Parse a weight specification into an expression tree."""
    if not text or not text.strip():
        raise WeightSyntaxError("empty weight specification", 0)
    m = _FAMILY.match(text)
    if m:
        name = m.group(1)
        raw = m.group(3)
        args = [float(a) for a in raw.split(",")] if raw and raw.strip() else []
        expected = 0 if name == "identity" else 2
        if len(args) != expected:
            raise WeightSyntaxError(f"family {name!r} takes {expected} arguments", 0)
        return WeightSpec(source=text, tree=_family_tree(name, args))
    tree = _Parser(text).parse()
    return WeightSpec(source=text, tree=tree)


def weight_from_spec(text: str) -> WeightFunction:
    spec = parse_weight(text)
    return WeightFunction(evaluator=spec.tree.evaluate, description=text)


def weight_from_callable(fn, description="<callable>") -> WeightFunction:
    return WeightFunction(evaluator=fn, description=description)
