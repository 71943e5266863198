"""Immutable exact-arithmetic expression trees.

Nodes: rational constants, atoms, sums, products, powers.  Powers carry
rational exponents and are restricted to atom or sum bases; products of
powers distribute on construction.  All constructors normalize, so two
structurally equal values compare and hash equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

DEFAULT_DERIVATIVE_CAP = 8

Rational = Union[int, Fraction]
ExprLike = Union["Expr", int, Fraction]


class KernelError(Exception):
    """Base class for kernel errors."""


class DerivativeCapError(KernelError):
    """A derivative would exceed the configured order cap."""


class UnboundAtomError(KernelError):
    """eval_numeric met an atom without a binding."""


class NonRationalPowerError(KernelError):
    """A constant power has no exact rational value."""


class ZeroDenominatorError(KernelError):
    """Division by an expression that is identically zero."""


_KIND_RANK = {"base": 0, "param": 1, "func": 2, "jet": 3}


@dataclass(frozen=True)
class Atom:
    """A symbolic indeterminate.

    kind   : "base" (independent variable), "param" (constant),
             "jet" (dependent variable with a derivative multiset), or
             "func" (scalar function of one base variable, with a
             derivative order).
    index  : sorted multiset of base-variable names; jets only.
    order  : derivative order; funcs only.
    arg    : argument variable name; funcs only.
    """

    kind: str
    name: str
    index: tuple = ()
    order: int = 0
    arg: str = ""

    def __post_init__(self) -> None:
        if self.kind not in _KIND_RANK:
            raise KernelError(f"unknown atom kind {self.kind!r}")
        if self.kind == "jet":
            object.__setattr__(self, "index", tuple(sorted(self.index)))
        elif self.index:
            raise KernelError("only jet atoms carry a derivative index")
        if self.kind != "func" and (self.order or self.arg):
            raise KernelError("only func atoms carry order/arg")

    def sort_key(self) -> tuple:
        return (_KIND_RANK[self.kind], self.name, len(self.index),
                self.index, self.order, self.arg)


def base(name: str) -> "Sym":
    return Sym(Atom("base", name))


def param(name: str) -> "Sym":
    return Sym(Atom("param", name))


def jet(name: str, *index: str) -> "Sym":
    return Sym(Atom("jet", name, tuple(index)))


def func(name: str, order: int = 0, arg: str = "t") -> "Sym":
    return Sym(Atom("func", name, order=order, arg=arg))


class Expr:
    """Common base; concrete nodes are Rat, Sym, Add, Mul, Pow."""

    __slots__ = ("_key", "_hash")

    def _init_key(self, key: tuple) -> None:
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("Expr values are immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Expr) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return self._key

    # -- operator sugar ------------------------------------------------
    def __add__(self, other: ExprLike) -> "Expr":
        return radd(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other: ExprLike) -> "Expr":
        return radd(self, rmul(rat(-1), _coerce(other)))

    def __rsub__(self, other: ExprLike) -> "Expr":
        return radd(_coerce(other), rmul(rat(-1), self))

    def __mul__(self, other: ExprLike) -> "Expr":
        return rmul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other: ExprLike) -> "Expr":
        return rmul(self, rpow(_coerce(other), Fraction(-1)))

    def __rtruediv__(self, other: ExprLike) -> "Expr":
        return rmul(_coerce(other), rpow(self, Fraction(-1)))

    def __pow__(self, e: Rational) -> "Expr":
        return rpow(self, Fraction(e))

    def __neg__(self) -> "Expr":
        return rmul(rat(-1), self)

    def __repr__(self) -> str:
        from .parse import emit
        return f"<{type(self).__name__} {emit(self)}>"


def _coerce(v: ExprLike) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return rat(v)
    raise KernelError(f"cannot coerce {v!r} to Expr")


class Rat(Expr):
    __slots__ = ("value",)

    def __init__(self, value: Fraction) -> None:
        object.__setattr__(self, "value", value)
        self._init_key((0, value.numerator, value.denominator))


class Sym(Expr):
    __slots__ = ("atom",)

    def __init__(self, atom: Atom) -> None:
        object.__setattr__(self, "atom", atom)
        self._init_key((1,) + atom.sort_key())


class Pow(Expr):
    """base ^ exp with exp rational, never 0 or 1; base is Sym or Add."""

    __slots__ = ("base", "exp")

    def __init__(self, b: Expr, e: Fraction) -> None:
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "exp", e)
        self._init_key((2, b._key, e.numerator, e.denominator))


class Mul(Expr):
    """coeff * f1 * ... * fn; factors are Sym/Add/Pow with distinct
    bases, sorted; coeff nonzero; trivial products never constructed."""

    __slots__ = ("coeff", "factors")

    def __init__(self, coeff: Fraction, factors: tuple) -> None:
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "factors", factors)
        self._init_key((3, coeff.numerator, coeff.denominator)
                       + tuple(f._key for f in factors))


class Add(Expr):
    """t1 + ... + tn, n >= 2, like monomials merged, sorted."""

    __slots__ = ("terms",)

    def __init__(self, terms: tuple) -> None:
        object.__setattr__(self, "terms", terms)
        self._init_key((4,) + tuple(t._key for t in terms))


ZERO_KEY = (0, 0, 1)


def rat(p: Rational, q: int = 1) -> Rat:
    return Rat(Fraction(p, q))


ZERO = rat(0)
ONE = rat(1)


# ---------------------------------------------------------------- helpers

def _base_exp(f: Expr) -> tuple:
    """Decompose a non-numeric factor into (base, exponent)."""
    if isinstance(f, Pow):
        return f.base, f.exp
    return f, Fraction(1)


def _coeff_monomial(t: Expr) -> tuple:
    """Decompose a term into (Fraction coefficient, factor tuple)."""
    if isinstance(t, Rat):
        return t.value, ()
    if isinstance(t, Mul):
        return t.coeff, t.factors
    return Fraction(1), (t,)


def _monomial_degree(factors: tuple) -> Fraction:
    d = Fraction(0)
    for f in factors:
        d += _base_exp(f)[1]
    return d


def _term_order_key(t: Expr) -> tuple:
    """Graded-lexicographic ordering key for display and storage."""
    coeff, factors = _coeff_monomial(t)
    lex = tuple(sorted((b.sort_key(), -e) for b, e in map(_base_exp,
                                                          factors)))
    return (-_monomial_degree(factors), lex, coeff)


def radd(*terms: Expr) -> Expr:
    """Normalized sum: flatten, merge like monomials, sort."""
    acc: dict = {}
    order: list = []

    def take(t: Expr) -> None:
        if isinstance(t, Add):
            for s in t.terms:
                take(s)
            return
        coeff, factors = _coeff_monomial(t)
        if coeff == 0:
            return
        key = tuple(f._key for f in factors)
        if key in acc:
            acc[key] = (acc[key][0] + coeff, factors)
        else:
            acc[key] = (coeff, factors)
            order.append(key)

    for t in terms:
        take(t)
    out = []
    for key in order:
        coeff, factors = acc[key]
        if coeff == 0:
            continue
        if not factors:
            out.append(Rat(coeff))
        elif coeff == 1 and len(factors) == 1:
            out.append(factors[0])
        else:
            out.append(Mul(coeff, factors))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    out.sort(key=_term_order_key)
    return Add(tuple(out))


def rmul(*factors: Expr) -> Expr:
    """Normalized product: flatten, merge powers of equal bases, sort."""
    coeff = Fraction(1)
    powers: dict = {}
    order: list = []

    def take(f: Expr) -> None:
        nonlocal coeff
        if isinstance(f, Rat):
            coeff *= f.value
            return
        if isinstance(f, Mul):
            coeff *= f.coeff
            for g in f.factors:
                take(g)
            return
        b, e = _base_exp(f)
        key = b._key
        if key in powers:
            powers[key] = (b, powers[key][1] + e)
        else:
            powers[key] = (b, e)
            order.append(key)

    for f in factors:
        take(f)
    if coeff == 0:
        return ZERO
    built = []
    for key in order:
        b, e = powers[key]
        if e == 0:
            continue
        p = rpow(b, e)
        if isinstance(p, Rat):
            coeff *= p.value
            continue
        built.append(p)
    if coeff == 0:
        return ZERO
    if not built:
        return Rat(coeff)
    if coeff == 1 and len(built) == 1:
        return built[0]
    built.sort(key=lambda f: _base_exp(f)[0].sort_key())
    return Mul(coeff, tuple(built))


def _int_nth_root(n: int, k: int):
    """Exact k-th root of a nonnegative integer, or None."""
    if n == 0:
        return 0
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == n:
            return c
    return None


def rpow(b: Expr, e: Rational) -> Expr:
    """Normalized power."""
    e = Fraction(e)
    if e == 0:
        return ONE
    if e == 1:
        return b
    if isinstance(b, Rat):
        v = b.value
        if v == 0:
            if e > 0:
                return ZERO
            raise ZeroDenominatorError("0 raised to a nonpositive power")
        if e.denominator == 1:
            return Rat(v ** e.numerator)
        if v < 0:
            raise NonRationalPowerError(
                f"negative constant {v} under fractional exponent {e}")
        rp = _int_nth_root(v.numerator, e.denominator)
        rq = _int_nth_root(v.denominator, e.denominator)
        if rp is None or rq is None:
            raise NonRationalPowerError(
                f"{v}^({e}) has no exact rational value")
        return rpow(Rat(Fraction(rp, rq)), Fraction(e.numerator))
    if isinstance(b, Pow):
        return rpow(b.base, b.exp * e)
    if isinstance(b, Mul):
        parts = [rpow(Rat(b.coeff), e)]
        parts.extend(rpow(f, e) for f in b.factors)
        return rmul(*parts)
    return Pow(b, e)


def rdiv(a: Expr, b: Expr) -> Expr:
    return rmul(a, rpow(b, Fraction(-1)))


# ------------------------------------------------------------ inspection

def atoms_of(e: Expr) -> frozenset:
    """All atoms appearing in e."""
    out = set()

    def walk(v: Expr) -> None:
        if isinstance(v, Sym):
            out.add(v.atom)
        elif isinstance(v, Pow):
            walk(v.base)
        elif isinstance(v, Mul):
            for f in v.factors:
                walk(f)
        elif isinstance(v, Add):
            for t in v.terms:
                walk(t)

    walk(e)
    return frozenset(out)


def jet_atoms_of(e: Expr, dep: str) -> frozenset:
    return frozenset(a for a in atoms_of(e)
                     if a.kind == "jet" and a.name == dep)


def max_jet_order(e: Expr, dep: str) -> int:
    orders = [len(a.index) for a in jet_atoms_of(e, dep)]
    return max(orders, default=-1)


def terms_of(e: Expr) -> tuple:
    return e.terms if isinstance(e, Add) else (e,)


# ---------------------------------------------------------- substitution

def substitute(e: Expr, bindings: Mapping[Atom, Expr]) -> Expr:
    """Simultaneous replacement of bound atoms."""
    if not bindings:
        return e

    def walk(v: Expr) -> Expr:
        if isinstance(v, Rat):
            return v
        if isinstance(v, Sym):
            return bindings.get(v.atom, v)
        if isinstance(v, Pow):
            return rpow(walk(v.base), v.exp)
        if isinstance(v, Mul):
            return rmul(Rat(v.coeff), *[walk(f) for f in v.factors])
        return radd(*[walk(t) for t in v.terms])

    return walk(e)


# ---------------------------------------------------------- derivatives

def total_derivative(e: Expr, v: str, chain: Mapping[str, Expr]
                     | None = None, chain_deps: frozenset = frozenset(),
                     cap: int = DEFAULT_DERIVATIVE_CAP) -> Expr:
    """Total derivative along the base variable v.

    chain maps new-variable names z to expressions for D_v(z); jets of a
    dependent listed in chain_deps differentiate through the chain:
    D_v(w:S) = sum_z chain[z] * w:(S u {z}).  Outside a chain, jets pick
    up the index v, funcs of v bump their order, the base v itself gives
    one, and everything else is constant.
    """

    def datum(a: Atom) -> Expr:
        if a.kind == "base":
            if chain and a.name in chain:
                return chain[a.name]
            return ONE if a.name == v else ZERO
        if a.kind == "param":
            return ZERO
        if a.kind == "func":
            if a.arg == v:
                if a.order + 1 > cap:
                    raise DerivativeCapError(
                        f"function order {a.order + 1} exceeds cap {cap}")
                return Sym(Atom("func", a.name, order=a.order + 1,
                                arg=a.arg))
            return ZERO
        # jet
        if a.name in chain_deps and chain:
            parts = []
            for z, dz in chain.items():
                if len(a.index) + 1 > cap:
                    raise DerivativeCapError(
                        f"jet order {len(a.index) + 1} exceeds cap {cap}")
                parts.append(rmul(dz, Sym(Atom("jet", a.name,
                                               a.index + (z,)))))
            return radd(*parts)
        if len(a.index) + 1 > cap:
            raise DerivativeCapError(
                f"jet order {len(a.index) + 1} exceeds cap {cap}")
        return Sym(Atom("jet", a.name, a.index + (v,)))

    def walk(x: Expr) -> Expr:
        if isinstance(x, Rat):
            return ZERO
        if isinstance(x, Sym):
            return datum(x.atom)
        if isinstance(x, Pow):
            db = walk(x.base)
            if db is ZERO or db == ZERO:
                return ZERO
            return rmul(Rat(x.exp), rpow(x.base, x.exp - 1), db)
        if isinstance(x, Mul):
            parts = []
            for i, f in enumerate(x.factors):
                df = walk(f)
                if df == ZERO:
                    continue
                rest = x.factors[:i] + x.factors[i + 1:]
                parts.append(rmul(Rat(x.coeff), df, *rest))
            return radd(*parts)
        return radd(*[walk(t) for t in x.terms])

    return walk(e)


def partial_derivative(e: Expr, a: Atom) -> Expr:
    """Formal partial with respect to the single atom a."""

    def walk(x: Expr) -> Expr:
        if isinstance(x, Rat):
            return ZERO
        if isinstance(x, Sym):
            return ONE if x.atom == a else ZERO
        if isinstance(x, Pow):
            db = walk(x.base)
            if db == ZERO:
                return ZERO
            return rmul(Rat(x.exp), rpow(x.base, x.exp - 1), db)
        if isinstance(x, Mul):
            parts = []
            for i, f in enumerate(x.factors):
                df = walk(f)
                if df == ZERO:
                    continue
                rest = x.factors[:i] + x.factors[i + 1:]
                parts.append(rmul(Rat(x.coeff), df, *rest))
            return radd(*parts)
        return radd(*[walk(t) for t in x.terms])

    return walk(e)


# -------------------------------------------------------------- expand

def expand(e: Expr) -> Expr:
    """Distribute products over sums and positive integer powers of
    sums; negative and fractional powers are left in place."""

    def walk(x: Expr) -> Expr:
        if isinstance(x, (Rat, Sym)):
            return x
        if isinstance(x, Add):
            return radd(*[walk(t) for t in x.terms])
        if isinstance(x, Pow):
            b = walk(x.base)
            if isinstance(b, Add) and x.exp.denominator == 1 \
                    and x.exp > 1:
                out = b
                for _ in range(int(x.exp) - 1):
                    out = _mul_expand(out, b)
                return out
            return rpow(b, x.exp)
        # Mul
        out: Expr = Rat(x.coeff)
        for f in x.factors:
            out = _mul_expand(out, walk(f))
        return out

    def _mul_expand(a: Expr, b: Expr) -> Expr:
        ta = terms_of(a) if isinstance(a, Add) else (a,)
        tb = terms_of(b) if isinstance(b, Add) else (b,)
        return radd(*[rmul(u, w) for u in ta for w in tb])

    return walk(e)


# -------------------------------------------------------- numeric eval

def eval_numeric(e: Expr, bindings: Mapping[Atom, float]) -> float:
    """IEEE-double evaluation; exact subtrees stay rational until they
    combine with a bound atom."""

    def walk(x: Expr):
        if isinstance(x, Rat):
            return x.value
        if isinstance(x, Sym):
            try:
                return float(bindings[x.atom])
            except KeyError:
                raise UnboundAtomError(f"unbound atom {x.atom}") from None
        if isinstance(x, Pow):
            b = walk(x.base)
            if isinstance(b, Fraction) and x.exp.denominator == 1:
                if b == 0 and x.exp < 0:
                    raise ZeroDenominatorError("0 to a negative power")
                return b ** x.exp.numerator
            bf = float(b)
            if x.exp.denominator == 1:
                if bf == 0.0 and x.exp < 0:
                    raise ZeroDenominatorError("0 to a negative power")
                return bf ** int(x.exp)
            if bf < 0:
                raise KernelError(
                    f"negative base {bf} under fractional exponent {x.exp}")
            return bf ** float(x.exp)
        if isinstance(x, Mul):
            vals = [walk(f) for f in x.factors]
            if all(isinstance(v, Fraction) for v in vals):
                out = x.coeff
                for v in vals:
                    out *= v
                return out
            out = float(x.coeff)
            for v in vals:
                out *= float(v)
            return out
        vals = [walk(t) for t in x.terms]
        if all(isinstance(v, Fraction) for v in vals):
            return sum(vals, Fraction(0))
        return sum(float(v) for v in vals)

    return float(walk(e))


def compile_numeric(e: Expr, order: Iterable[Atom]) -> Callable:
    """Compile e into a positional-float Python function over the given
    atom order.  Used on hot numeric paths; eval_numeric is the
    reference semantics."""
    names = {a: f"_a{i}" for i, a in enumerate(order)}

    def gen(x: Expr) -> str:
        if isinstance(x, Rat):
            if x.value.denominator == 1:
                return f"({x.value.numerator})"
            return f"({x.value.numerator}/{x.value.denominator})"
        if isinstance(x, Sym):
            if x.atom not in names:
                raise UnboundAtomError(f"unbound atom {x.atom}")
            return names[x.atom]
        if isinstance(x, Pow):
            if x.exp.denominator == 1:
                return f"({gen(x.base)})**({x.exp.numerator})"
            return (f"({gen(x.base)})**"
                    f"({x.exp.numerator}/{x.exp.denominator})")
        if isinstance(x, Mul):
            parts = [gen(f) for f in x.factors]
            if x.coeff != 1:
                parts.insert(0, gen(Rat(x.coeff)))
            return "(" + "*".join(parts) + ")"
        return "(" + "+".join(gen(t) for t in x.terms) + ")"

    src = f"lambda {', '.join(names[a] for a in names)}: {gen(e)}"
    return eval(src, {"__builtins__": {}})
