"""Text format: parsing, emission, round-trips, error reporting."""

import pytest
from hypothesis import given, settings

from bksym.symkernel import (ParseError, Rat, SymbolContext,
                             UnknownSymbolError, emit, jet, parse, rat,
                             rpow)
from fractions import Fraction

from strategies import expressions


class TestParseBasics:
    def test_integer_division_is_exact(self):
        e = parse("3/6")
        assert isinstance(e, Rat) and e.value == Fraction(1, 2)

    def test_jet_index_order_is_immaterial(self):
        assert parse("u[t,x]") == parse("u[x,t]")

    def test_bare_dependent(self):
        assert parse("u[]") == jet("u")

    def test_functions_with_primes(self):
        e = parse("b''(t)")
        a = e.atom
        assert a.kind == "func" and a.order == 2 and a.arg == "t"
        assert parse("a(t)").atom.order == 0

    def test_precedence(self):
        assert parse("1 + 2*3") == rat(7)
        assert parse("6/2/3") == rat(1)
        assert parse("2^3") == rat(8)
        assert parse("-u[x]^2") == -(parse("u[x]") ** 2)
        assert parse("2 - -3") == rat(5)

    def test_exponent_grammar(self):
        assert parse("t^(1/3)") == rpow(parse("t"), Fraction(1, 3))
        assert parse("t^(-2)") == rpow(parse("t"), -2)
        assert parse("t^(-5/3)") == rpow(parse("t"), Fraction(-5, 3))
        with pytest.raises(ParseError):
            parse("t^-2")
        with pytest.raises(ParseError):
            parse("t^x")
        with pytest.raises(ParseError):
            parse("t^(1/3)^2")

    def test_no_implicit_multiplication(self):
        with pytest.raises(ParseError):
            parse("2 u[x]")
        with pytest.raises(ParseError):
            parse("u[x]u[y]")

    def test_whitespace_is_free(self):
        assert parse("  6*alpha * u[x] *u[x,x] ") == \
            parse("6*alpha*u[x]*u[x,x]")


class TestErrors:
    def test_unknown_symbol_lists_table(self):
        with pytest.raises(UnknownSymbolError) as ei:
            parse("gamma + t")
        msg = str(ei.value)
        assert "gamma" in msg and "alpha" in msg and "bases" in msg

    def test_unknown_jet_dependent(self):
        with pytest.raises(UnknownSymbolError):
            parse("w[x]")

    def test_unknown_jet_index_base(self):
        with pytest.raises(UnknownSymbolError):
            parse("u[q]")

    def test_error_offsets(self):
        with pytest.raises(ParseError) as ei:
            parse("t + ?")
        assert ei.value.offset == 4

    def test_trailing_input(self):
        with pytest.raises(ParseError):
            parse("t )")

    def test_custom_context(self):
        ctx = SymbolContext(bases=frozenset({"s"}),
                            params=frozenset({"c"}),
                            jets=frozenset({"w"}),
                            funcs=frozenset())
        assert parse("w[s,s] - c*w[s]", ctx) == \
            jet("w", "s", "s") - parse("c", ctx) * jet("w", "s")
        with pytest.raises(UnknownSymbolError):
            parse("u[x]", ctx)


class TestEmit:
    def test_reference_spellings(self):
        assert emit(parse("2*alpha")) == "2*alpha"
        assert emit(parse("u[x,x]")) == "u[x,x]"
        assert emit(parse("t^(1/3)")) == "t^(1/3)"
        assert emit(parse("b''(t)")) == "b''(t)"
        assert emit(rat(0)) == "0"
        assert emit(rat(-1, 2)) == "-1/2"

    def test_sum_layout_signs(self):
        e = parse("u[x] - 2*u[y] + 1/2")
        assert emit(e) == "u[x] - 2*u[y] + 1/2"
        assert emit(parse("-u[x] - 1")) == "-u[x] - 1"

    def test_graded_ordering_puts_higher_degree_first(self):
        e = parse("1 + u[x] + u[x]^2")
        assert emit(e) == "u[x]^2 + u[x] + 1"

    def test_composite_power_base_parenthesized(self):
        e = rpow(parse("u[] + 1"), Fraction(-1))
        assert emit(e) == "(u[] + 1)^(-1)"

    @given(expressions())
    @settings(max_examples=150, deadline=None)
    def test_round_trip(self, e):
        assert parse(emit(e)) == e
