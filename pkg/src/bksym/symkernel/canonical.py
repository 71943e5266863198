"""Canonical rational form and exact zero testing.

canonicalize() rewrites an expression as num/den with both sides
polynomial over the expression's atoms.  Fractional powers are handled
by adjoining a radical generator per atom (atom = rho^q with q the lcm
of exponent denominators), with atoms treated as positive reals, so the
rewrite is exact.  The stored form is normalized (den's leading
coefficient is 1, gcd cancelled), making equality a tuple comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import sympy as sp

from .expr import (Add, Atom, Expr, KernelError, Mul, Pow, Rat, Sym,
                   ZeroDenominatorError, atoms_of, eval_numeric, radd,
                   rat, rmul, rpow)

# monomial: tuple of (Atom, Fraction exponent), sorted by atom key;
# term list: tuple of (monomial, Fraction coefficient), sorted.
Monomial = tuple
Terms = tuple


@dataclass(frozen=True)
class CanonicalForm:
    num_terms: Terms
    den_terms: Terms
    atoms: tuple

    @property
    def is_zero(self) -> bool:
        return not self.num_terms

    def num_expr(self) -> Expr:
        return _terms_to_expr(self.num_terms)

    def den_expr(self) -> Expr:
        return _terms_to_expr(self.den_terms)

    def to_expr(self) -> Expr:
        return rmul(self.num_expr(), rpow(self.den_expr(), Fraction(-1)))

    def term_strings(self) -> tuple:
        """One emitted string per numerator term, for residual reports."""
        from .parse import emit
        return tuple(emit(_terms_to_expr((t,))) for t in self.num_terms)

    def eval_numeric(self, bindings: Mapping[Atom, float]) -> float:
        num = eval_numeric(self.num_expr(), bindings)
        den = eval_numeric(self.den_expr(), bindings)
        return num / den

    def __eq__(self, other) -> bool:
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return (self.num_terms == other.num_terms
                and self.den_terms == other.den_terms)

    def __hash__(self) -> int:
        return hash((self.num_terms, self.den_terms))


def _terms_to_expr(terms: Terms) -> Expr:
    if not terms:
        return rat(0)
    out = []
    for mono, coeff in terms:
        factors = [rpow(Sym(a), e) for a, e in mono]
        out.append(rmul(rat(coeff.numerator, coeff.denominator),
                        *factors))
    return radd(*out)


def _radical_denominators(e: Expr, table: dict) -> None:
    """Per-atom lcm of fractional-exponent denominators."""
    if isinstance(e, Pow):
        if isinstance(e.base, Sym):
            a = e.base.atom
            q = e.exp.denominator
            if q > 1:
                cur = table.get(a, 1)
                table[a] = cur * q // _gcd(cur, q)
            _radical_denominators(e.base, table)
        else:
            if e.exp.denominator != 1:
                raise KernelError(
                    "fractional power of a composite base cannot be "
                    "canonicalized; substitute an auxiliary atom first")
            _radical_denominators(e.base, table)
    elif isinstance(e, Mul):
        for f in e.factors:
            _radical_denominators(f, table)
    elif isinstance(e, Add):
        for t in e.terms:
            _radical_denominators(t, table)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def canonicalize(e: Expr) -> CanonicalForm:
    if isinstance(e, Rat):
        num = () if e.value == 0 else (((), e.value),)
        return CanonicalForm(num, (((), Fraction(1)),), ())

    atoms = sorted(atoms_of(e), key=lambda a: a.sort_key())
    rad: dict = {}
    _radical_denominators(e, rad)
    syms = {a: sp.Symbol(f"g{i}", positive=True)
            for i, a in enumerate(atoms)}

    def conv(v: Expr):
        if isinstance(v, Rat):
            return sp.Rational(v.value.numerator, v.value.denominator)
        if isinstance(v, Sym):
            q = rad.get(v.atom, 1)
            return syms[v.atom] ** q
        if isinstance(v, Pow):
            if isinstance(v.base, Sym):
                q = rad.get(v.base.atom, 1)
                k = v.exp * q
                return syms[v.base.atom] ** int(k)
            return conv(v.base) ** int(v.exp)
        if isinstance(v, Mul):
            out = sp.Rational(v.coeff.numerator, v.coeff.denominator)
            for f in v.factors:
                out *= conv(f)
            return out
        return sp.Add(*[conv(t) for t in v.terms])

    num, den = sp.fraction(sp.cancel(sp.together(conv(e))))
    if den == 0 or num.has(sp.zoo, sp.nan) or den.has(sp.zoo, sp.nan):
        raise ZeroDenominatorError(
            "expression has an identically zero denominator")

    gens = [syms[a] for a in atoms]
    inv = {syms[a]: a for a in atoms}

    def to_terms(p) -> Terms:
        if p == 0:
            return ()
        poly = sp.Poly(p, *gens, domain="QQ")
        out = []
        for expvec, coeff in poly.terms():
            mono = []
            for g, k in zip(gens, expvec):
                if k:
                    a = inv[g]
                    mono.append((a, Fraction(int(k), rad.get(a, 1))))
            out.append((tuple(sorted(mono,
                                     key=lambda p_: p_[0].sort_key())),
                        Fraction(int(coeff.p), int(coeff.q))))
        out.sort(key=lambda term: _mono_key(term[0]))
        return tuple(out)

    num_terms = to_terms(num)
    den_terms = to_terms(den)
    if not den_terms:
        raise ZeroDenominatorError(
            "expression has an identically zero denominator")
    lead = den_terms[0][1]
    if lead != 1:
        den_terms = tuple((m, c / lead) for m, c in den_terms)
        num_terms = tuple((m, c / lead) for m, c in num_terms)
    return CanonicalForm(num_terms, den_terms, tuple(atoms))


def _mono_key(mono: Monomial) -> tuple:
    deg = sum((e for _, e in mono), Fraction(0))
    return (-deg, tuple((a.sort_key(), -e) for a, e in mono))


def is_zero(e: Expr) -> bool:
    return canonicalize(e).is_zero


def canonical_equal(a: Expr, b: Expr) -> bool:
    return is_zero(a - b)


def constant_ratio(a: Expr, b: Expr):
    """If a == k*b for a rational constant k, return k as a Fraction;
    else None.  b must not be identically zero.  Both canonical forms
    are normalized and coprime, so a constant ratio forces equal
    denominators and proportional numerators."""
    ca = canonicalize(a)
    cb = canonicalize(b)
    if cb.is_zero:
        raise ZeroDenominatorError("reference expression is zero")
    if ca.is_zero:
        return Fraction(0)
    if ca.den_terms != cb.den_terms:
        return None
    if len(ca.num_terms) != len(cb.num_terms):
        return None
    if any(ma != mb for (ma, _), (mb, _) in zip(ca.num_terms,
                                                cb.num_terms)):
        return None
    k = ca.num_terms[0][1] / cb.num_terms[0][1]
    for (_, va), (_, vb) in zip(ca.num_terms, cb.num_terms):
        if va != k * vb:
            return None
    return k
