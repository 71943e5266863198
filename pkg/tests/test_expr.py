"""Expression-tree construction, derivatives, substitution, numeric
evaluation."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bksym.symkernel import (Atom, DerivativeCapError, KernelError,
                             NonRationalPowerError, Pow, Rat, Sym,
                             UnboundAtomError, ZeroDenominatorError,
                             atoms_of, base, compile_numeric,
                             eval_numeric, expand, func, is_zero, jet,
                             jet_atoms_of, max_jet_order, param,
                             partial_derivative, radd, rat, rmul, rpow,
                             substitute, terms_of, total_derivative)

from strategies import (ATOM_POOL, check_invariants, expressions,
                        polynomial_expressions)

t, x, y = base("t"), base("x"), base("y")
alpha, beta = param("alpha"), param("beta")
u = jet("u")
ux, uy, uxx = jet("u", "x"), jet("u", "y"), jet("u", "x", "x")


class TestConstruction:
    def test_rational_lowest_terms(self):
        assert rat(3, 6) == rat(1, 2)
        assert rat(-4, -8) == rat(1, 2)
        assert rat(4, -8).value == Fraction(-1, 2)

    def test_jet_index_is_a_sorted_multiset(self):
        assert jet("u", "t", "x") == jet("u", "x", "t")
        assert jet("u", "x", "x", "y").atom.index == ("x", "x", "y")

    def test_like_factors_merge(self):
        assert rmul(ux, ux) == rpow(ux, 2)
        assert rmul(ux, rpow(ux, -1)) == rat(1)
        assert rpow(rpow(ux, 2), 3) == rpow(ux, 6)

    def test_like_terms_merge(self):
        assert radd(ux, ux) == rmul(rat(2), ux)
        assert radd(ux, rmul(rat(-1), ux)) == rat(0)
        assert radd(rat(2), rat(3)) == rat(5)

    def test_zero_annihilates_products(self):
        assert rmul(rat(0), ux, t) == rat(0)

    def test_power_of_constants_is_exact(self):
        assert rpow(rat(8), Fraction(1, 3)) == rat(2)
        assert rpow(rat(4, 9), Fraction(1, 2)) == rat(2, 3)
        assert rpow(rat(2), -2) == rat(1, 4)

    def test_inexact_constant_roots_raise(self):
        with pytest.raises(NonRationalPowerError):
            rpow(rat(2), Fraction(1, 2))
        with pytest.raises(NonRationalPowerError):
            rpow(rat(-8), Fraction(1, 3))

    def test_zero_to_nonpositive_power_raises(self):
        with pytest.raises(ZeroDenominatorError):
            rpow(rat(0), -1)

    def test_product_base_distributes_under_power(self):
        e = rpow(rmul(rat(4), t, ux), Fraction(1, 2))
        assert e == rmul(rat(2), rpow(t, Fraction(1, 2)),
                         rpow(ux, Fraction(1, 2)))

    def test_immutable(self):
        with pytest.raises(AttributeError):
            ux.atom = None

    def test_operator_sugar(self):
        assert (ux + ux) == 2 * ux
        assert (ux - ux) == rat(0)
        assert (ux / ux) == rat(1)
        assert (6 * alpha * ux * uxx) == rmul(rat(6), alpha, ux, uxx)
        assert ux ** 2 == rpow(ux, 2)
        assert 1 / t == rpow(t, -1)

    @given(expressions())
    @settings(max_examples=120)
    def test_structural_invariants(self, e):
        check_invariants(e)

    @given(expressions(), expressions())
    @settings(max_examples=80)
    def test_equal_values_hash_equal(self, a, b):
        s = a + b
        s2 = b + a
        assert s == s2 and hash(s) == hash(s2)


class TestDerivatives:
    def test_jet_total_derivative_appends_index(self):
        assert total_derivative(ux, "x") == uxx
        assert total_derivative(u, "t") == jet("u", "t")

    def test_function_orders_bump_along_its_argument(self):
        assert total_derivative(func("b"), "t") == func("b", 1)
        assert total_derivative(func("b", 1), "t") == func("b", 2)
        assert total_derivative(func("b"), "x") == rat(0)

    def test_bases_and_params_differentiate_plainly(self):
        assert total_derivative(t, "t") == rat(1)
        assert total_derivative(x, "t") == rat(0)
        assert total_derivative(alpha, "t") == rat(0)

    def test_product_and_power_rules(self):
        assert total_derivative(ux * uy, "x") == uxx * uy + \
            ux * jet("u", "x", "y")
        assert total_derivative(ux ** 3, "x") == 3 * ux ** 2 * uxx
        assert total_derivative(1 / t, "t") == -(t ** -2)

    def test_cap_is_enforced_and_configurable(self):
        e = u
        for _ in range(8):
            e = total_derivative(e, "x")
        with pytest.raises(DerivativeCapError):
            total_derivative(e, "x")
        with pytest.raises(DerivativeCapError):
            total_derivative(uxx * ux, "x", cap=2)
        assert total_derivative(func("b", 7, "t"), "t") == func("b", 8)
        with pytest.raises(DerivativeCapError):
            total_derivative(func("b", 8, "t"), "t")

    def test_chain_rewrites_base_and_listed_jets(self):
        # moving frame s = x - c t: D_x -> d/ds, D_t -> -c d/ds
        w, ws = jet("w"), jet("w", "s")
        ch = {"s": rat(-3)}
        got = total_derivative(w, "t", chain=ch,
                               chain_deps=frozenset({"w"}))
        assert got == -3 * ws
        # product rule through the chain
        got2 = total_derivative(w * ws, "t", chain=ch,
                                chain_deps=frozenset({"w"}))
        assert got2 == -3 * ws ** 2 - 3 * w * jet("w", "s", "s")
        # dependents not listed differentiate plainly
        assert total_derivative(jet("v"), "t", chain=ch,
                                chain_deps=frozenset({"w"})) == \
            jet("v", "t")

    def test_partial_is_formal_per_atom(self):
        assert partial_derivative(uxx, ux.atom) == rat(0)
        assert partial_derivative(ux ** 3, ux.atom) == 3 * ux ** 2
        assert partial_derivative(6 * alpha * ux * uxx, uxx.atom) == \
            6 * alpha * ux

    @given(expressions(max_leaves=7), expressions(max_leaves=7),
           st.sampled_from(["t", "x", "y"]))
    @settings(max_examples=60, deadline=None)
    def test_total_derivative_is_linear(self, e1, e2, v):
        try:
            lhs = total_derivative(3 * e1 - 2 * e2, v)
            rhs = 3 * total_derivative(e1, v) - \
                2 * total_derivative(e2, v)
        except DerivativeCapError:
            return
        assert lhs == rhs or is_zero(lhs - rhs)

    @given(expressions(max_leaves=7), st.sampled_from(["t", "x", "y"]),
           st.sampled_from(["t", "x", "y"]))
    @settings(max_examples=60, deadline=None)
    def test_total_derivatives_commute(self, e, v, w):
        try:
            ab = total_derivative(total_derivative(e, v), w)
            ba = total_derivative(total_derivative(e, w), v)
        except DerivativeCapError:
            return
        assert ab == ba or is_zero(ab - ba)

    @given(polynomial_expressions(max_leaves=7))
    @settings(max_examples=40, deadline=None)
    def test_chain_rule_against_explicit_substitution(self, e):
        """Substituting an explicit solution surface commutes with the
        total derivative."""
        # u = t*x^2 + y^3, so every jet of u is an explicit polynomial
        surf = {}
        P = t * x * x + y * y * y
        stack = [((), P)]
        while stack:
            idx, val = stack.pop()
            surf[Atom("jet", "u", idx)] = val
            if len(idx) < 6:
                for v in ("t", "x", "y"):
                    stack.append((tuple(sorted(idx + (v,))),
                                  total_derivative(val, v)))
        try:
            lhs = substitute(total_derivative(e, "x"), surf)
            rhs = total_derivative(substitute(e, surf), "x")
        except DerivativeCapError:
            return
        assert is_zero(lhs - rhs)


class TestSubstituteAndEval:
    def test_substitute_is_simultaneous(self):
        e = ux + uy
        got = substitute(e, {ux.atom: uy, uy.atom: ux})
        assert got == e

    def test_substitute_rebuilds_powers(self):
        e = ux ** 2
        assert substitute(e, {ux.atom: rat(3)}) == rat(9)

    def test_eval_numeric_basics(self):
        b = {t.atom: 8.0, ux.atom: 3.0}
        got = eval_numeric(rpow(t, Fraction(1, 3)) + ux ** 2, b)
        assert math.isclose(got, 11.0, rel_tol=1e-12)

    def test_eval_numeric_exact_rational_path(self):
        # (1/3)*3 must be exactly 1.0, not 0.9999...
        assert eval_numeric(rat(1, 3) * t, {t.atom: 3.0}) == 1.0

    def test_eval_unbound_raises(self):
        with pytest.raises(UnboundAtomError):
            eval_numeric(ux + t, {t.atom: 1.0})

    def test_eval_negative_base_fractional_power_raises(self):
        with pytest.raises(KernelError):
            eval_numeric(rpow(t, Fraction(1, 2)), {t.atom: -4.0})

    @given(expressions(max_leaves=8), st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=60, deadline=None)
    def test_compile_matches_eval(self, e, seed):
        rng = random.Random(seed)
        order = sorted(atoms_of(e), key=lambda a: a.sort_key())
        binds = {a: rng.uniform(0.5, 2.0) for a in order}
        fn = compile_numeric(e, order)
        try:
            want = eval_numeric(e, binds)
        except ZeroDenominatorError:
            return
        got = fn(*[binds[a] for a in order])
        assert math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-12)

    @given(expressions(max_leaves=7),
           st.sampled_from([a for a in ATOM_POOL if a.kind != "base"]),
           st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=60, deadline=None)
    def test_partial_derivative_matches_finite_differences(self, e, a,
                                                           seed):
        rng = random.Random(seed)
        binds = {q: rng.uniform(0.7, 1.8) for q in
                 atoms_of(e) | {a}}
        de = partial_derivative(e, a)
        h = 1e-6
        up = dict(binds)
        dn = dict(binds)
        up[a] = binds[a] + h
        dn[a] = binds[a] - h
        try:
            fd = (eval_numeric(e, up) - eval_numeric(e, dn)) / (2 * h)
            want = eval_numeric(de, binds)
        except ZeroDenominatorError:
            return
        assert math.isclose(fd, want, rel_tol=1e-6, abs_tol=1e-6)


class TestExpandAndInspection:
    def test_expand_square(self):
        e = expand((u + 1) ** 2)
        assert e == u ** 2 + 2 * u + 1

    def test_expand_keeps_negative_powers_opaque(self):
        e = (u + 1) ** -1
        assert expand(e) == e

    @given(polynomial_expressions(max_leaves=8))
    @settings(max_examples=40, deadline=None)
    def test_expand_preserves_value(self, e):
        assert is_zero(expand(e) - e)

    def test_inspection_helpers(self):
        e = 6 * alpha * ux * uxx + jet("v", "y")
        assert jet_atoms_of(e, "u") == frozenset({ux.atom, uxx.atom})
        assert max_jet_order(e, "u") == 2
        assert max_jet_order(e, "w") == -1
        assert terms_of(rat(5)) == (rat(5),)
