"""Text format for kernel expressions.

parse() reads the format against a declared symbol table; emit() writes
it back.  emit is deterministic (terms in graded-lexicographic order,
factors sorted), and parse(emit(e)) == e for every kernel value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .expr import (Atom, Add, Expr, KernelError, Mul, Pow, Rat, Sym,
                   radd, rat, rmul, rpow)


class ParseError(KernelError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownSymbolError(ParseError):
    pass


@dataclass(frozen=True)
class SymbolContext:
    """Declared names: base variables, parameters, jet dependents, and
    scalar functions (each of one base variable)."""

    bases: frozenset = frozenset({"t", "x", "y"})
    params: frozenset = frozenset({"alpha", "beta", "c"})
    jets: frozenset = frozenset({"u"})
    funcs: frozenset = frozenset({"a", "b"})

    def describe(self) -> str:
        return (f"bases={sorted(self.bases)} params={sorted(self.params)}"
                f" jets={sorted(self.jets)} funcs={sorted(self.funcs)}")


DEFAULT_CONTEXT = SymbolContext()


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list:
    toks = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(_Tok("num", src[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(_Tok("name", src[i:j], i))
            i = j
            continue
        if ch in "+-*/^()[],'":
            toks.append(_Tok(ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    def __init__(self, src: str, ctx: SymbolContext) -> None:
        self.toks = _tokenize(src)
        self.pos = 0
        self.ctx = ctx

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str) -> _Tok:
        t = self.next()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, got {t.text!r}", t.pos)
        return t

    # expr := term (('+'|'-') term)*
    def expr(self) -> Expr:
        out = self.term()
        while self.peek().kind in "+-":
            op = self.next().kind
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    # term := unary (('*'|'/') unary)*
    def term(self) -> Expr:
        out = self.unary()
        while self.peek().kind in "*/":
            op = self.next().kind
            rhs = self.unary()
            out = out * rhs if op == "*" else out / rhs
        return out

    # unary := '-' unary | power
    def unary(self) -> Expr:
        if self.peek().kind == "-":
            self.next()
            return -self.unary()
        return self.power()

    # power := primary ('^' exponent)?
    def power(self) -> Expr:
        b = self.primary()
        if self.peek().kind == "^":
            self.next()
            e = self.exponent()
            try:
                return rpow(b, e)
            except KernelError as exc:
                raise ParseError(str(exc), self.peek().pos) from exc
        return b

    # exponent := INT | '(' '-'? INT ('/' INT)? ')'
    def exponent(self) -> Fraction:
        t = self.peek()
        if t.kind == "num":
            self.next()
            return Fraction(int(t.text))
        if t.kind != "(":
            raise ParseError("exponent must be an integer or a "
                             "parenthesized rational", t.pos)
        self.next()
        sign = 1
        if self.peek().kind == "-":
            self.next()
            sign = -1
        p = int(self.expect("num").text)
        q = 1
        if self.peek().kind == "/":
            self.next()
            q = int(self.expect("num").text)
            if q == 0:
                raise ParseError("zero denominator in exponent", t.pos)
        self.expect(")")
        return Fraction(sign * p, q)

    # primary := NUM | '(' expr ')' | NAME jets/funcs/plain
    def primary(self) -> Expr:
        t = self.next()
        if t.kind == "num":
            return rat(int(t.text))
        if t.kind == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind != "name":
            raise ParseError(f"unexpected token {t.text!r}", t.pos)
        name = t.text
        nxt = self.peek()
        if nxt.kind == "[":
            if name not in self.ctx.jets:
                raise UnknownSymbolError(
                    f"{name!r} is not a declared jet dependent; "
                    f"{self.ctx.describe()}", t.pos)
            self.next()
            index = []
            while self.peek().kind != "]":
                v = self.expect("name")
                if v.text not in self.ctx.bases:
                    raise UnknownSymbolError(
                        f"jet index {v.text!r} is not a declared base; "
                        f"{self.ctx.describe()}", v.pos)
                index.append(v.text)
                if self.peek().kind == ",":
                    self.next()
                elif self.peek().kind != "]":
                    raise ParseError("expected ',' or ']' in jet index",
                                     self.peek().pos)
            self.next()
            return Sym(Atom("jet", name, tuple(index)))
        if nxt.kind == "'" or (nxt.kind == "(" and name in self.ctx.funcs):
            if name not in self.ctx.funcs:
                raise UnknownSymbolError(
                    f"{name!r} is not a declared function; "
                    f"{self.ctx.describe()}", t.pos)
            order = 0
            while self.peek().kind == "'":
                self.next()
                order += 1
            self.expect("(")
            arg = self.expect("name")
            if arg.text not in self.ctx.bases:
                raise UnknownSymbolError(
                    f"function argument {arg.text!r} is not a declared "
                    f"base; {self.ctx.describe()}", arg.pos)
            self.expect(")")
            return Sym(Atom("func", name, order=order, arg=arg.text))
        if name in self.ctx.bases:
            return Sym(Atom("base", name))
        if name in self.ctx.params:
            return Sym(Atom("param", name))
        raise UnknownSymbolError(
            f"unknown symbol {name!r}; {self.ctx.describe()}", t.pos)


def parse(src: str, ctx: SymbolContext = DEFAULT_CONTEXT) -> Expr:
    p = _Parser(src, ctx)
    out = p.expr()
    tail = p.peek()
    if tail.kind != "end":
        raise ParseError(f"trailing input {tail.text!r}", tail.pos)
    return out


# ------------------------------------------------------------------ emit

def _emit_atom(a: Atom) -> str:
    if a.kind == "jet":
        return f"{a.name}[{','.join(a.index)}]"
    if a.kind == "func":
        return f"{a.name}{chr(39) * a.order}({a.arg})"
    return a.name


def _emit_exp(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    if e.denominator == 1:
        return f"({e.numerator})"
    return f"({e.numerator}/{e.denominator})"


def _emit_factor(f: Expr) -> str:
    if isinstance(f, Sym):
        return _emit_atom(f.atom)
    if isinstance(f, Add):
        return f"({_emit_add(f)})"
    if isinstance(f, Pow):
        b = (_emit_atom(f.base.atom) if isinstance(f.base, Sym)
             else f"({_emit_add(f.base)})")
        return f"{b}^{_emit_exp(f.exp)}"
    raise KernelError(f"unexpected factor node {type(f).__name__}")


def _emit_frac(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _emit_term_body(t: Expr) -> str:
    """The term with any sign stripped; caller prints the sign."""
    if isinstance(t, Rat):
        return _emit_frac(abs(t.value))
    if isinstance(t, Mul):
        c = abs(t.coeff)
        parts = [_emit_factor(f) for f in t.factors]
        if c != 1:
            parts.insert(0, _emit_frac(c))
        return "*".join(parts)
    return _emit_factor(t)


def _term_sign(t: Expr) -> int:
    if isinstance(t, Rat):
        return -1 if t.value < 0 else 1
    if isinstance(t, Mul):
        return -1 if t.coeff < 0 else 1
    return 1


def _emit_add(e: Add) -> str:
    parts = []
    for i, t in enumerate(e.terms):
        sign = _term_sign(t)
        body = _emit_term_body(t)
        if i == 0:
            parts.append(body if sign > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if sign > 0 else f" - {body}")
    return "".join(parts)


def emit(e: Expr) -> str:
    if isinstance(e, Add):
        return _emit_add(e)
    if isinstance(e, Rat):
        return _emit_frac(e.value)
    sign = _term_sign(e)
    body = _emit_term_body(e)
    return body if sign > 0 else f"-{body}"
