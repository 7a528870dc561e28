"""Analytic expression trees with rational exponents.

Expressions are built from variables, exact rational constants, sums,
products and powers with rational exponents (quotients are powers with
exponent -1).  Every constructor normalizes: sums and products are
flattened, constants folded, like terms collected and powers of a
common base merged.  Normalization is *not* a canonical form for
rational functions; :func:`canonical` expands the polynomial fragment
when an exact zero test is needed.

Numerical evaluation uses the principal branch for fractional powers and
refuses to evaluate within ``BRANCH_GUARD`` of the cut or of a pole.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .poly import Polynomial

BRANCH_GUARD = 1e-9


class ExprError(Exception):
    pass


class ParseError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UndeclaredVariable(ParseError):
    pass


class EvaluationError(ExprError):
    pass


class BranchCutError(EvaluationError):
    pass


class PoleError(EvaluationError, ZeroDivisionError):
    pass


class OverflowEvaluation(EvaluationError):
    pass


class NotPolynomialError(ExprError):
    def __init__(self, node: "Expr"):
        super().__init__(f"not a polynomial: offending node {node}")
        self.node = node


# ---------------------------------------------------------------------------
# node types


class Expr:
    __slots__ = ("_key", "_free")

    # structural identity is the canonical printed form
    @property
    def key(self) -> str:
        k = self._key
        if k is None:
            k = self._key = _print(self)
        return k

    def __eq__(self, other):
        if not isinstance(other, Expr):
            return NotImplemented
        return self is other or self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        return self.key

    def __repr__(self):
        return f"Expr({self.key!r})"

    @property
    def free_vars(self) -> frozenset:
        f = self._free
        if f is None:
            f = self._free = frozenset(self._compute_free())
        return f

    def _compute_free(self):
        return ()

    # operator sugar ------------------------------------------------------
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, mul(MINUS_ONE, as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), mul(MINUS_ONE, self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return mul(self, power(as_expr(other), -1))

    def __rtruediv__(self, other):
        return mul(as_expr(other), power(self, -1))

    def __neg__(self):
        return mul(MINUS_ONE, self)

    def __pow__(self, e):
        return power(self, e)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)
        self._key = None
        self._free = None


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._key = None
        self._free = None

    def _compute_free(self):
        return (self.name,)


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: Tuple[Expr, ...]):
        self.terms = terms
        self._key = None
        self._free = None

    def _compute_free(self):
        return frozenset().union(*(t.free_vars for t in self.terms))


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors: Tuple[Expr, ...]):
        self.factors = factors
        self._key = None
        self._free = None

    def _compute_free(self):
        return frozenset().union(*(t.free_vars for t in self.factors))


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp: Fraction):
        self.base = base
        self.exp = Fraction(exp)
        self._key = None
        self._free = None

    def _compute_free(self):
        return self.base.free_vars


ZERO = Const(0)
ONE = Const(1)
MINUS_ONE = Const(-1)


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(x)
    if isinstance(x, str):
        return Var(x)
    raise TypeError(f"cannot convert {x!r} to Expr")


def const(v) -> Const:
    return Const(v)


def var(name: str) -> Var:
    return Var(name)


# ---------------------------------------------------------------------------
# normalizing constructors


def _split_coeff(t: Expr) -> Tuple[Fraction, Expr]:
    if isinstance(t, Mul) and isinstance(t.factors[0], Const):
        rest = t.factors[1:]
        return t.factors[0].value, rest[0] if len(rest) == 1 else Mul(rest)
    return Fraction(1), t


def _with_coeff(c: Fraction, rest: Expr) -> Expr:
    if c == 1:
        return rest
    if isinstance(rest, Mul):
        return Mul((Const(c),) + rest.factors)
    return Mul((Const(c), rest))


def add(*terms) -> Expr:
    coef = Fraction(0)
    collected: Dict[str, List] = {}
    stack = [as_expr(t) for t in reversed(terms)]
    while stack:
        t = stack.pop()
        if isinstance(t, Add):
            stack.extend(reversed(t.terms))
            continue
        if isinstance(t, Const):
            coef += t.value
            continue
        c, rest = _split_coeff(t)
        slot = collected.get(rest.key)
        if slot is None:
            collected[rest.key] = [rest, c]
        else:
            slot[1] += c
    out = [_with_coeff(c, rest) for k, (rest, c) in sorted(collected.items()) if c]
    if coef:
        out.append(Const(coef))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return Add(tuple(out))


def mul(*factors) -> Expr:
    coef = Fraction(1)
    bases: Dict[str, List] = {}
    stack = [as_expr(f) for f in reversed(factors)]
    while stack:
        f = stack.pop()
        if isinstance(f, Mul):
            stack.extend(reversed(f.factors))
            continue
        if isinstance(f, Const):
            coef *= f.value
            continue
        if isinstance(f, Pow):
            b, e = f.base, f.exp
        else:
            b, e = f, Fraction(1)
        slot = bases.get(b.key)
        if slot is None:
            bases[b.key] = [b, e]
        else:
            slot[1] += e
    if coef == 0:
        return ZERO
    parts = []
    renormalize = False
    for k, (b, e) in sorted(bases.items()):
        if e == 0:
            continue
        p = power(b, e)
        if isinstance(p, (Mul, Const)):
            renormalize = True
        parts.append(p)
    if renormalize:
        return mul(Const(coef), *parts)
    parts.sort(key=lambda p: p.key)
    if not parts:
        return Const(coef)
    if coef == 1 and len(parts) == 1:
        return parts[0]
    if coef != 1:
        parts.insert(0, Const(coef))
    return Mul(tuple(parts))


def _exact_root(v: Fraction, q: int):
    """Exact positive q-th root of a positive rational, or None."""

    def iroot(n: int):
        r = round(n ** (1.0 / q))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** q == n:
                return c
        return None

    a, b = iroot(v.numerator), iroot(v.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def power(base, e) -> Expr:
    base = as_expr(base)
    e = Fraction(e)
    if e == 0:
        return ONE
    if e == 1:
        return base
    integral = e.denominator == 1
    if isinstance(base, Const):
        v = base.value
        if v == 0:
            if e < 0:
                raise PoleError("zero constant raised to a negative power")
            return ZERO
        if integral:
            return Const(v ** int(e))
        if v > 0:
            r = _exact_root(v, e.denominator)
            if r is not None:
                return Const(r ** e.numerator)
        return Pow(base, e)
    if isinstance(base, Pow) and integral:
        return power(base.base, base.exp * e)
    if isinstance(base, Mul) and integral:
        return mul(*(power(f, e) for f in base.factors))
    return Pow(base, e)


def sub(a, b) -> Expr:
    return add(a, mul(MINUS_ONE, b))


def div(a, b) -> Expr:
    return mul(a, power(b, -1))


def is_zero(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 0


# ---------------------------------------------------------------------------
# printing


def _fmt_const(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _print_factor(f: Expr) -> str:
    if isinstance(f, Add):
        return f"({f.key})"
    return f.key


def _print(e: Expr) -> str:
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Pow):
        b = e.base
        if isinstance(b, Var) or (isinstance(b, Const) and b.value >= 0 and b.value.denominator == 1):
            bs = b.key
        else:
            bs = f"({b.key})"
        x = e.exp
        xs = str(x.numerator) if (x.denominator == 1 and x >= 0) else f"({_fmt_const(x)})"
        return f"{bs}^{xs}"
    if isinstance(e, Mul):
        fs = e.factors
        head = ""
        if isinstance(fs[0], Const):
            c = fs[0].value
            fs = fs[1:]
            if c == -1:
                head = "-"
            else:
                head = _fmt_const(c) + "*"
        return head + "*".join(_print_factor(f) for f in fs)
    if isinstance(e, Add):
        out = e.terms[0].key
        for t in e.terms[1:]:
            if isinstance(t, Const):
                out += (" - " if t.value < 0 else " + ") + _fmt_const(abs(t.value))
                continue
            c, rest = _split_coeff(t)
            if c < 0:
                out += " - " + _with_coeff(-c, rest).key
            else:
                out += " + " + t.key
        return out
    raise TypeError(type(e))


def to_string(e: Expr) -> str:
    return e.key


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.)")


def _tokenize(text: str):
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            toks.append(("id", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            toks.append(("op", ch, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, variables: Iterable[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = set(variables)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}", t[2])

    def parse(self) -> Expr:
        e = self.sum()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected token {t[1]!r}", t[2])
        return e

    def sum(self):
        e = self.product()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            r = self.product()
            e = add(e, r) if op == "+" else sub(e, r)
        return e

    def product(self):
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            r = self.unary()
            if op == "*":
                e = mul(e, r)
            else:
                if is_zero(r):
                    raise ParseError("division by zero", pos)
                e = div(e, r)
        return e

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] == "-":
            self.take()
            return mul(MINUS_ONE, self.unary())
        if t[0] == "op" and t[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            pos = self.peek()[2]
            ex = self.unary()
            if not isinstance(ex, Const):
                raise ParseError("exponent must be a rational constant", pos)
            try:
                return power(base, ex.value)
            except PoleError:
                raise ParseError("zero raised to a negative power", pos) from None
        return base

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return Const(int(val))
        if kind == "id":
            if val not in self.vars:
                raise UndeclaredVariable(f"undeclared variable {val!r}", pos)
            return Var(val)
        if kind == "op" and val == "(":
            e = self.sum()
            self.expect(")")
            return e
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {val!r}", pos)


def parse(text: str, variables: Iterable[str]) -> Expr:
    """Parse ``text`` into a normalized expression over ``variables``."""
    return _Parser(text, variables).parse()


# ---------------------------------------------------------------------------
# calculus


def diff(e: Expr, name: str) -> Expr:
    if name not in e.free_vars:
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Add):
        return add(*(diff(t, name) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        out = []
        for i, f in enumerate(fs):
            df = diff(f, name)
            if not is_zero(df):
                out.append(mul(*fs[:i], df, *fs[i + 1:]))
        return add(*out)
    if isinstance(e, Pow):
        return mul(Const(e.exp), power(e.base, e.exp - 1), diff(e.base, name))
    return ZERO


def gradient(e: Expr, variables: Sequence[str]) -> List[Expr]:
    return [diff(e, v) for v in variables]


def jacobian(components: Sequence[Expr], variables: Sequence[str]) -> List[List[Expr]]:
    return [[diff(c, v) for v in variables] for c in components]


# ---------------------------------------------------------------------------
# polynomial bridge


def to_polynomial(e: Expr, variables: Sequence[str]) -> Polynomial:
    variables = tuple(variables)
    if isinstance(e, Const):
        return Polynomial.constant(variables, e.value)
    if isinstance(e, Var):
        if e.name not in variables:
            raise NotPolynomialError(e)
        return Polynomial.variable(variables, e.name)
    if isinstance(e, Add):
        p = Polynomial.zero(variables)
        for t in e.terms:
            p = p + to_polynomial(t, variables)
        return p
    if isinstance(e, Mul):
        p = Polynomial.one(variables)
        for f in e.factors:
            p = p * to_polynomial(f, variables)
        return p
    if isinstance(e, Pow):
        if e.exp.denominator == 1 and e.exp > 0:
            return to_polynomial(e.base, variables) ** int(e.exp)
        raise NotPolynomialError(e)
    raise NotPolynomialError(e)


def is_polynomial(e: Expr) -> bool:
    if isinstance(e, (Const, Var)):
        return True
    if isinstance(e, Pow):
        return e.exp.denominator == 1 and e.exp > 0 and is_polynomial(e.base)
    if isinstance(e, Add):
        return all(is_polynomial(t) for t in e.terms)
    if isinstance(e, Mul):
        return all(is_polynomial(t) for t in e.factors)
    return False


def from_polynomial(p: Polynomial) -> Expr:
    terms = []
    for m, c in p.sorted_terms():
        fs = [power(Var(v), k) for v, k in zip(p.variables, m) if k]
        terms.append(mul(Const(c), *fs))
    return add(*terms)


def canonical(e: Expr) -> Expr:
    """Expand the polynomial fragment into a canonical form; other input is returned as is."""
    if is_polynomial(e):
        vs = sorted(e.free_vars)
        return from_polynomial(to_polynomial(e, vs))
    return e


def is_identically_zero(e: Expr) -> bool:
    """Symbolic zero test: structural, with exact expansion on the polynomial fragment."""
    return is_zero(e) or is_zero(canonical(e))


def evaluate_exact(e: Expr, assignment: Mapping[str, object]) -> Fraction:
    """Exact rational value; integer exponents only."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return Fraction(assignment[e.name])
    if isinstance(e, Add):
        return sum((evaluate_exact(t, assignment) for t in e.terms), Fraction(0))
    if isinstance(e, Mul):
        out = Fraction(1)
        for f in e.factors:
            out *= evaluate_exact(f, assignment)
        return out
    if isinstance(e, Pow):
        if e.exp.denominator != 1:
            raise NotPolynomialError(e)
        b = evaluate_exact(e.base, assignment)
        if b == 0 and e.exp < 0:
            raise PoleError("division by zero")
        return b ** int(e.exp)
    raise TypeError(type(e))


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Const):
        return e
    if isinstance(e, Add):
        return add(*(substitute(t, mapping) for t in e.terms))
    if isinstance(e, Mul):
        return mul(*(substitute(t, mapping) for t in e.factors))
    if isinstance(e, Pow):
        return power(substitute(e.base, mapping), e.exp)
    raise TypeError(type(e))


# ---------------------------------------------------------------------------
# numerical evaluation


class Evaluator:
    """Compiled, vectorized evaluator for a batch of expressions.

    Shared subexpressions (structurally equal nodes) are evaluated once per
    call.  Inputs may be scalars or numpy arrays of a common shape.
    """

    def __init__(self, exprs: Sequence[Expr], variables: Sequence[str], guard: float = BRANCH_GUARD):
        self.variables = tuple(variables)
        self.guard = guard
        self.ops: List[tuple] = []
        self._slots: Dict[str, int] = {}
        self.outputs = [self._compile(e) for e in exprs]

    def _compile(self, e: Expr) -> int:
        k = e.key
        slot = self._slots.get(k)
        if slot is not None:
            return slot
        if isinstance(e, Const):
            op = ("const", complex(e.value))
        elif isinstance(e, Var):
            if e.name not in self.variables:
                raise EvaluationError(f"variable {e.name!r} not assigned")
            op = ("var", self.variables.index(e.name))
        elif isinstance(e, Add):
            op = ("add", [self._compile(t) for t in e.terms])
        elif isinstance(e, Mul):
            op = ("mul", [self._compile(t) for t in e.factors])
        elif isinstance(e, Pow):
            op = ("pow", self._compile(e.base), e.exp, e)
        else:
            raise TypeError(type(e))
        self.ops.append(op)
        slot = self._slots[k] = len(self.ops) - 1
        return slot

    def __call__(self, values) -> List:
        if isinstance(values, Mapping):
            values = [values[v] for v in self.variables]
        values = [np.asarray(v, dtype=complex) for v in values]
        shape = np.broadcast_shapes(*(v.shape for v in values)) if values else ()
        reg: List = [None] * len(self.ops)
        g = self.guard
        with np.errstate(all="ignore"):
            for i, op in enumerate(self.ops):
                kind = op[0]
                if kind == "const":
                    reg[i] = np.full(shape, op[1], dtype=complex)
                elif kind == "var":
                    reg[i] = np.broadcast_to(values[op[1]], shape)
                elif kind == "add":
                    acc = reg[op[1][0]]
                    for j in op[1][1:]:
                        acc = acc + reg[j]
                    reg[i] = acc
                elif kind == "mul":
                    acc = reg[op[1][0]]
                    for j in op[1][1:]:
                        acc = acc * reg[j]
                    reg[i] = acc
                else:
                    b = reg[op[1]]
                    x = op[2]
                    mod = np.abs(b)
                    if x.denominator == 1:
                        k = int(x)
                        if k < 0:
                            if np.any(mod < g):
                                raise PoleError(f"division by zero in {op[3]}")
                            reg[i] = 1.0 / _ipow(b, -k)
                        else:
                            reg[i] = _ipow(b, k)
                    else:
                        near_cut = (mod <= g) | ((b.real <= 0) & (np.abs(b.imag) <= g))
                        if np.any(near_cut):
                            raise BranchCutError(f"base within {g:g} of the branch cut in {op[3]}")
                        reg[i] = np.exp(float(x) * np.log(b))
        outs = [reg[j] for j in self.outputs]
        for o in outs:
            if not np.all(np.isfinite(o)):
                raise OverflowEvaluation("non-finite value during evaluation")
        return outs


def _ipow(b, k: int):
    if k == 1:
        return b
    if k == 2:
        return b * b
    return b ** k


def evaluate(e: Expr, point: Mapping[str, complex], guard: float = BRANCH_GUARD) -> complex:
    """Value of ``e`` at ``point`` (principal branch)."""
    names = sorted(e.free_vars)
    missing = [n for n in names if n not in point]
    if missing:
        raise EvaluationError(f"unassigned variables {missing}")
    (out,) = Evaluator([e], names, guard)({n: point[n] for n in names})
    return complex(out)


def evaluate_many(exprs: Sequence[Expr], variables: Sequence[str], values, guard: float = BRANCH_GUARD):
    return Evaluator(exprs, variables, guard)(values)


__all__ = [
    "Expr", "Const", "Var", "Add", "Mul", "Pow", "ZERO", "ONE",
    "parse", "add", "mul", "power", "sub", "div", "diff", "jacobian", "gradient",
    "evaluate", "evaluate_many", "Evaluator", "evaluate_exact",
    "to_polynomial", "from_polynomial", "is_polynomial", "canonical", "is_identically_zero",
    "substitute", "to_string",
    "ExprError", "ParseError", "UndeclaredVariable", "EvaluationError", "BranchCutError",
    "PoleError", "OverflowEvaluation", "NotPolynomialError", "BRANCH_GUARD",
]
