"""Shared hypothesis strategies for kernel expressions."""

from fractions import Fraction

from hypothesis import strategies as st

from bksym.symkernel import (Add, Atom, Expr, Mul, Pow, Rat, Sym, radd,
                             rat, rmul, rpow, SymbolContext)

ATOM_POOL = (
    Atom("base", "t"), Atom("base", "x"), Atom("base", "y"),
    Atom("param", "alpha"), Atom("param", "beta"), Atom("param", "c"),
    Atom("jet", "u"), Atom("jet", "u", ("x",)), Atom("jet", "u", ("y",)),
    Atom("jet", "u", ("t", "x")), Atom("jet", "u", ("x", "x")),
    Atom("func", "a", order=0, arg="t"), Atom("func", "b", order=1,
                                              arg="t"),
)

POOL_CONTEXT = SymbolContext()

rationals = st.builds(Fraction,
                      st.integers(min_value=-12, max_value=12),
                      st.integers(min_value=1, max_value=7))

atom_exprs = st.sampled_from([Sym(a) for a in ATOM_POOL])

int_exps = st.sampled_from([Fraction(k) for k in (-3, -2, -1, 2, 3)])
frac_exps = st.sampled_from([Fraction(1, 2), Fraction(1, 3),
                             Fraction(-1, 2), Fraction(2, 3),
                             Fraction(-5, 3)])


def _pow(children):
    return st.builds(
        lambda b, e: rpow(b, e),
        atom_exprs, st.one_of(int_exps, frac_exps))


def _sum_pow(children):
    # integer powers of composite bases
    return st.builds(
        lambda b, e: rpow(b, e) if not isinstance(b, Rat) else b,
        children, int_exps)


def expressions(max_leaves: int = 10):
    base = st.one_of(st.builds(lambda q: rat(q.numerator, q.denominator),
                               rationals),
                     atom_exprs, _pow(None))
    return st.recursive(
        base,
        lambda children: st.one_of(
            st.builds(lambda a, b: radd(a, b), children, children),
            st.builds(lambda a, b: rmul(a, b), children, children),
            st.builds(lambda q, a: rmul(rat(q.numerator, q.denominator),
                                        a), rationals, children),
            _sum_pow(children),
        ),
        max_leaves=max_leaves)


def polynomial_expressions(max_leaves: int = 10):
    """No fractional powers, no negative powers: safe for expand and
    unrestricted evaluation."""
    pos_exps = st.sampled_from([Fraction(2), Fraction(3)])
    base = st.one_of(st.builds(lambda q: rat(q.numerator, q.denominator),
                               rationals),
                     atom_exprs,
                     st.builds(lambda b, e: rpow(b, e), atom_exprs,
                               pos_exps))
    return st.recursive(
        base,
        lambda children: st.one_of(
            st.builds(lambda a, b: radd(a, b), children, children),
            st.builds(lambda a, b: rmul(a, b), children, children),
        ),
        max_leaves=max_leaves)


def check_invariants(e: Expr) -> None:
    """Structural invariants every kernel value must satisfy."""
    if isinstance(e, Rat):
        return
    if isinstance(e, Sym):
        assert e.atom.index == tuple(sorted(e.atom.index))
        return
    if isinstance(e, Pow):
        assert isinstance(e.base, (Sym, Add)), "Pow base must be Sym|Add"
        assert e.exp not in (0, 1), "Pow exponent must not be 0 or 1"
        check_invariants(e.base)
        return
    if isinstance(e, Mul):
        assert e.coeff != 0, "Mul coefficient must be nonzero"
        assert len(e.factors) + (e.coeff != 1) >= 2, "trivial Mul"
        bases = []
        for f in e.factors:
            assert not isinstance(f, (Rat, Mul)), "flat Mul"
            b = f.base if isinstance(f, Pow) else f
            bases.append(b.sort_key())
            check_invariants(f)
        assert bases == sorted(bases), "Mul factors sorted"
        assert len(set(map(tuple, bases))) == len(bases), \
            "Mul factors have distinct bases"
        return
    if isinstance(e, Add):
        assert len(e.terms) >= 2, "Add needs two or more terms"
        rats = [t for t in e.terms if isinstance(t, Rat)]
        assert len(rats) <= 1, "at most one constant term"
        for t in e.terms:
            assert not isinstance(t, Add), "flat Add"
            check_invariants(t)
        return
    raise AssertionError(f"unknown node {type(e).__name__}")
