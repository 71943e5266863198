"""Exact symbolic kernel: expression trees, text format, canonical
rational forms, derivatives, substitution, numeric evaluation."""

from .expr import (Add, Atom, DEFAULT_DERIVATIVE_CAP, DerivativeCapError,
                   Expr, KernelError, Mul, NonRationalPowerError, Pow,
                   Rat, Sym, UnboundAtomError, ZeroDenominatorError,
                   atoms_of, base, compile_numeric, eval_numeric, expand,
                   func, jet, jet_atoms_of, max_jet_order,
                   partial_derivative, param, radd, rat, rdiv, rmul,
                   rpow, substitute, terms_of, total_derivative)
from .parse import (DEFAULT_CONTEXT, ParseError, SymbolContext,
                    UnknownSymbolError, emit, parse)
from .canonical import (CanonicalForm, canonical_equal, canonicalize,
                        constant_ratio, is_zero)

__all__ = [
    "Add", "Atom", "CanonicalForm", "DEFAULT_CONTEXT",
    "DEFAULT_DERIVATIVE_CAP", "DerivativeCapError", "Expr",
    "KernelError", "Mul", "NonRationalPowerError", "ParseError", "Pow",
    "Rat", "Sym", "SymbolContext", "UnboundAtomError",
    "UnknownSymbolError", "ZeroDenominatorError", "atoms_of", "base",
    "canonical_equal", "canonicalize", "compile_numeric",
    "constant_ratio", "emit", "eval_numeric", "expand", "func",
    "is_zero", "jet", "jet_atoms_of", "max_jet_order", "parse", "param",
    "partial_derivative", "radd", "rat", "rdiv", "rmul", "rpow",
    "substitute", "terms_of", "total_derivative",
]
