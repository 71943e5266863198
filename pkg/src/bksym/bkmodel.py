"""The fourth-order dispersive wave model and its claim catalogs.

The equation under study, for u(t, x, y) with constant parameters
alpha and beta:

    u[t,x] + alpha*u[x,x,x,x] + beta*u[x,x,x,y]
           + 6*alpha*u[x]*u[x,x] + 4*beta*u[x]*u[x,y]
           + 4*beta*u[y]*u[x,x]  =  0

This module bundles the claim catalogs shipped with the toolkit (point
symmetries, conservation-law triples, an adjoint-equation display),
each tagged with its provenance ("paper" for claims transcribed from
the source catalog, "derived" for claims produced by this toolkit),
plus the machinery to audit them: adjoint by definition, nonlinear
self-adjointness, and conservation-law construction from symmetries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .prolong import (COORDS, DeterminingSystem, LinearSolution,
                      PreconditionError, SymmetryVerdict, VectorField,
                      check_symmetry, corrected_generator,
                      determining_system, reduce_on_shell,
                      solve_determining, solve_for_leading)
from .symkernel import (Atom, Expr, SymbolContext, atoms_of, canonicalize,
                        emit, is_zero, jet_atoms_of, parse,
                        partial_derivative, rat, rmul, rpow, substitute,
                        terms_of, total_derivative)

MODEL_CONTEXT = SymbolContext(
    bases=frozenset({"t", "x", "y"}),
    params=frozenset({"alpha", "beta", "c", "phi"}),
    jets=frozenset({"u", "v"}),
    funcs=frozenset({"a", "b"}))


def p(src: str) -> Expr:
    """Parse in the model's symbol table."""
    return parse(src, MODEL_CONTEXT)


def equation() -> Expr:
    return p("u[t,x] + alpha*u[x,x,x,x] + beta*u[x,x,x,y]"
             " + 6*alpha*u[x]*u[x,x] + 4*beta*u[x]*u[x,y]"
             " + 4*beta*u[y]*u[x,x]")


LEAD = Atom("jet", "u", ("t", "x"))


# ------------------------------------------------------- symmetry claims

@dataclass(frozen=True)
class SymmetryClaim:
    name: str
    source: str           # "paper" | "derived"
    vf: VectorField
    corrects: str = ""    # name of the stated claim this one repairs
    note: str = ""


def _vf(xis: Mapping[str, str], eta: str, name: str) -> VectorField:
    return VectorField.make({v: p(s) for v, s in xis.items()},
                            p(eta), "u", name)


def symmetry_claims() -> tuple:
    """The point-symmetry claim catalog.

    Stated generators are transcribed verbatim; derived entries are
    this toolkit's own (scaling field, corrected coefficient variants,
    and instances of the function-parametrized family)."""
    g2a_eta = ("5*y^2*alpha/(16*t*beta^2) - x*y/(4*t*beta)")
    g3a_eta = ("u[] + 5*y^2*alpha/(8*t*beta^2) - x*y/(2*t*beta)")
    return (
        SymmetryClaim("G1a", "paper", _vf({"t": "1"}, "0", "G1a")),
        SymmetryClaim("G2a", "paper",
                      _vf({"t": "t", "x": "y*alpha/beta"}, g2a_eta,
                          "G2a")),
        SymmetryClaim("G2a-corrected", "derived",
                      _vf({"t": "t", "x": "x/3", "y": "y/3"}, "-u[]/3",
                          "G2a-corrected"),
                      corrects="G2a",
                      note="produced by the determining-system solver "
                           "pinned to the stated xi_t"),
        SymmetryClaim("G3a", "paper",
                      _vf({"t": "-t", "x": "-x + 2*y*alpha/beta",
                           "y": "-y"}, g3a_eta, "G3a")),
        SymmetryClaim("G3a-corrected", "derived",
                      _vf({"t": "-t", "x": "-x/3", "y": "-y/3"},
                          "u[]/3", "G3a-corrected"),
                      corrects="G3a",
                      note="produced by the determining-system solver "
                           "pinned to the stated xi_t"),
        SymmetryClaim("G4a", "paper",
                      _vf({"y": "4*t*beta"}, "x - 3*y*alpha/(2*beta)",
                          "G4a")),
        SymmetryClaim("G5a", "paper", _vf({"y": "1"}, "0", "G5a")),
        SymmetryClaim("G6a", "paper",
                      _vf({"x": "b(t)"}, "a(t) + y*b'(t)/beta", "G6a"),
                      note="function-parametrized family as stated"),
        SymmetryClaim("G6a-corrected", "derived",
                      _vf({"x": "b(t)"}, "a(t) + y*b'(t)/(4*beta)",
                          "G6a-corrected"),
                      corrects="G6a",
                      note="same xi structure; the shear coefficient "
                           "is 1/(4*beta) rather than 1/beta"),
        SymmetryClaim("G6a-b1", "paper",
                      _vf({"x": "1"}, "0", "G6a-b1"),
                      note="family instance b=1, a=0"),
        SymmetryClaim("G6a-a1", "paper", _vf({}, "1", "G6a-a1"),
                      note="family instance b=0, a=1"),
        SymmetryClaim("G6a-bt", "paper",
                      _vf({"x": "t"}, "y/beta", "G6a-bt"),
                      note="family instance b=t as stated"),
        SymmetryClaim("G6a-bt-corrected", "derived",
                      _vf({"x": "t"}, "y/(4*beta)", "G6a-bt-corrected"),
                      corrects="G6a-bt"),
        SymmetryClaim("S", "derived",
                      _vf({"t": "3*t", "x": "x", "y": "y"}, "-u[]",
                          "S"),
                      note="anisotropic scaling found by the "
                           "determining-system solver"),
        SymmetryClaim("G7a", "derived",
                      _vf({"t": "-3*t/2", "x": "-x/2", "y": "-y/2"},
                          "u[]/2", "G7a"),
                      note="candidate scaling; equals -1/2 times S"),
    )


def claim_by_name(name: str) -> SymmetryClaim:
    for cl in symmetry_claims():
        if cl.name == name:
            return cl
    raise KeyError(name)


def check_claim(cl: SymmetryClaim) -> SymmetryVerdict:
    return check_symmetry(equation(), cl.vf, LEAD)


# ----------------------------------------------- determining systems

PARAM_ALPHA = Atom("param", "alpha")
PARAM_BETA = Atom("param", "beta")


def bind_params(e: Expr, alpha: Fraction, beta: Fraction) -> Expr:
    return substitute(e, {PARAM_ALPHA: rat(Fraction(alpha)),
                          PARAM_BETA: rat(Fraction(beta))})


def bind_field(vf: VectorField, alpha: Fraction,
               beta: Fraction) -> VectorField:
    return VectorField(tuple((v, bind_params(e, alpha, beta))
                             for v, e in vf.xis),
                       bind_params(vf.eta, alpha, beta), vf.dep,
                       vf.name)


def constants_ansatz_basis() -> tuple:
    return (p("1"),)


def polynomial_ansatz_basis() -> tuple:
    """Degree <= 2 monomials in (t, x, y, u) plus the 1/t-weighted
    functions needed by the stated generators."""
    core = ("1", "t", "x", "y", "u[]",
            "t^2", "t*x", "t*y", "t*u[]",
            "x^2", "x*y", "x*u[]",
            "y^2", "y*u[]", "u[]^2")
    weighted = ("x/t", "y/t", "y^2/t", "x*y/t")
    return tuple(p(s) for s in core + weighted)


def symmetry_determining_system(alpha: Fraction, beta: Fraction,
                                basis: Sequence[Expr] = (),
                                slot_basis=None) -> DeterminingSystem:
    """Determining system for the model at bound rational parameters."""
    if not basis and slot_basis is None:
        basis = polynomial_ansatz_basis()
    eq = bind_params(equation(), alpha, beta)
    return determining_system(eq, LEAD, basis, slot_basis=slot_basis)


def _signed_monomial(num_mono: tuple, den_mono: tuple) -> tuple:
    exps: dict = {}
    for a, e in num_mono:
        exps[a] = exps.get(a, 0) + e
    for a, e in den_mono:
        exps[a] = exps.get(a, 0) - e
    return tuple(sorted(((a.sort_key(), e) for a, e in exps.items()
                         if e)))


def stated_pins(vf: VectorField, system: DeterminingSystem) -> dict:
    """Decompose a stated generator's coefficients over the system's
    basis functions: {(slot, emitted basis fn): coefficient}.  Terms
    outside the basis span are skipped (they cannot be pinned)."""
    fn_key: dict = {}
    for slot, fn in system.unknowns:
        cf = canonicalize(fn)
        if len(cf.num_terms) != 1 or len(cf.den_terms) != 1 \
                or cf.num_terms[0][1] != 1:
            raise PreconditionError(
                "pinning requires pure monomial basis functions")
        key = _signed_monomial(cf.num_terms[0][0], cf.den_terms[0][0])
        fn_key[(slot, key)] = (slot, emit(fn))
    pins: dict = {}
    slot_exprs = [(f"xi_{v}", vf.xi(v)) for v in system.coords]
    slot_exprs.append(("eta", vf.eta))
    for slot, e in slot_exprs:
        cf = canonicalize(e)
        if cf.is_zero:
            continue
        if len(cf.den_terms) != 1:
            raise PreconditionError("stated coefficient has a "
                                    "non-monomial denominator")
        den = cf.den_terms[0][0]
        for mono, coeff in cf.num_terms:
            key = _signed_monomial(mono, den)
            label = fn_key.get((slot, key))
            if label is not None:
                pins[label] = pins.get(label, Fraction(0)) + coeff
    return pins


def corrected_from_determining(claim_name: str, alpha: Fraction,
                               beta: Fraction) -> VectorField | None:
    """Repair a failed stated generator: solve the determining system
    at bound parameters, then greedily pin the solution to the stated
    coefficients (leading slot first), dropping inconsistent pins."""
    cl = claim_by_name(claim_name)
    stated = bind_field(cl.vf, alpha, beta)
    system = symmetry_determining_system(alpha, beta)
    sol, _ = solve_determining(system)
    pins = stated_pins(stated, system)
    return corrected_generator(system, sol, pins, system.labels())


# ------------------------------------------------ variational / adjoint

def variational_derivative(lagrangian: Expr, dep: str = "u",
                           coords: Sequence[str] = COORDS) -> Expr:
    """Euler operator: sum_S (-1)^|S| D_S dL/du_S over derivative
    multisets S."""
    out = rat(0)
    for a in jet_atoms_of(lagrangian, dep):
        part = partial_derivative(lagrangian, a)
        if part == rat(0):
            continue
        for v in a.index:
            part = total_derivative(part, v)
        sign = -1 if len(a.index) % 2 else 1
        out = out + rat(sign) * part
    return out


def computed_adjoint() -> Expr:
    """Adjoint of the model equation, by definition: the variational
    derivative with respect to u of v[] times the equation."""
    return variational_derivative(rmul(p("v[]"), equation()), "u")


def claimed_adjoint() -> Expr:
    """The adjoint display as stated in the bundled catalog, transcribed
    verbatim (one malformed subscript token read as u[x,x])."""
    return p("6*alpha*u[x]*v[x,x] + 4*beta*u[y]*v[x,x]"
             " + 6*alpha*u[x,x]*v[x] + 4*beta*u[y,y] + v[t,x]"
             " + 4*beta*u[x]*v[x,y] + 4*beta*v[x]*u[x,y]"
             " + alpha*v[x,x,x,x] + beta*v[x,x,x,y]")


def adjoint_difference() -> tuple:
    """Emitted terms of computed minus stated adjoint."""
    return canonicalize(computed_adjoint() - claimed_adjoint()) \
        .term_strings()


def substitute_multiplier(e: Expr, phi: Expr, dep: str = "v") -> Expr:
    """Replace every jet of dep by the corresponding total derivative
    of phi (an expression in the base variables and u[])."""
    binds = {}
    for a in jet_atoms_of(e, dep):
        val = phi
        for v in a.index:
            val = total_derivative(val, v)
        binds[a] = val
    return substitute(e, binds)


def self_adjointness_check(phi: Expr) -> tuple:
    """Substitute v = phi(t, x, y, u[]) into the computed adjoint and
    split the result as lambda*E + remainder on shell.

    Returns (lambda, constraint term strings); empty constraints mean
    the substitution turns the adjoint into a multiple of the equation,
    i.e. the equation is nonlinearly self-adjoint with multiplier phi.
    """
    eq = equation()
    r = substitute_multiplier(computed_adjoint(), phi)
    lam = partial_derivative(r, LEAD)
    rest = reduce_on_shell(r - lam * eq, LEAD,
                           solve_for_leading(eq, LEAD)[0])
    return lam, canonicalize(rest).term_strings()


# ------------------------------------------------- conservation triples

@dataclass(frozen=True)
class ConservedTriple:
    names: tuple       # flux component labels, one per base variable
    components: tuple  # Expr per base variable, ordered like COORDS

    def component(self, v: str) -> Expr:
        return self.components[COORDS.index(v)]


@dataclass(frozen=True)
class FluxClaim:
    name: str
    symmetry: str
    source: str
    triple: ConservedTriple
    note: str = ""


@dataclass(frozen=True)
class FluxVerdict:
    passed: bool
    residual_terms: tuple


def divergence_on_shell(triple: ConservedTriple) -> Expr:
    div = rat(0)
    for v, comp in zip(COORDS, triple.components):
        div = div + total_derivative(comp, v)
    eq = equation()
    rhs, _ = solve_for_leading(eq, LEAD)
    return reduce_on_shell(div, LEAD, rhs)


def verify_conservation(triple: ConservedTriple) -> FluxVerdict:
    cf = canonicalize(divergence_on_shell(triple))
    return FluxVerdict(cf.is_zero, cf.term_strings())


def _triple(ct: str, cx: str, cy: str) -> ConservedTriple:
    return ConservedTriple(("ct", "cx", "cy"),
                           (p(ct), p(cx), p(cy)))


_E_SRC = ("(u[t,x] + alpha*u[x,x,x,x] + beta*u[x,x,x,y]"
          " + 6*alpha*u[x]*u[x,x] + 4*beta*u[x]*u[x,y]"
          " + 4*beta*u[y]*u[x,x])")
_GRAD = "(6*alpha*u[x] + 4*beta*u[y])"


def flux_claims() -> tuple:
    """The stated conservation-law triples, transcribed verbatim with a
    constant multiplier symbol phi.  The triple attached to the
    function-parametrized family uses the corrected 1/(4*beta) shear
    (the display itself carries the corrected coefficient)."""
    return (
        FluxClaim("G1a", "G1a", "paper", _triple(
            f"phi*{_E_SRC}",
            f"-phi*u[t,x]*{_GRAD}",
            "-4*beta*phi*u[t]*u[x,x]")),
        FluxClaim("G2a", "G2a", "paper", _triple(
            f"t*phi*{_E_SRC}",
            f"y*alpha/beta*phi*{_E_SRC}"
            f" - phi*(y/(4*t*beta) + t*u[t,x]"
            f" + y*alpha/beta*u[x,x])*{_GRAD}",
            "4*phi*beta*u[x,x]*(5*y^2*alpha/(16*t*beta^2)"
            " - x*y/(4*t*beta) - t*u[t] - y*alpha/beta*u[x])")),
        FluxClaim("G3a", "G3a", "paper", _triple(
            f"-t*phi*{_E_SRC}",
            f"(2*y*alpha/beta - x)*phi*{_E_SRC}"
            f" + (y*u[x,y] + t*u[t,x] + x*u[x,x] + 2*u[x]"
            f" - y/(2*t*beta))*phi*{_GRAD}",
            f"-y*phi*{_E_SRC}"
            " + 4*beta*phi*u[x,x]*(u[] + 5*y^2*alpha/(8*t*beta^2)"
            " - x*y/(2*t*beta) + t*u[t] + x*u[x]"
            " - 2*y*alpha/beta*u[x] + y*u[y])")),
        FluxClaim("G4a", "G4a", "paper", _triple(
            "0",
            f"phi*(1 - 4*t*beta*u[x,y])*{_GRAD}",
            f"4*t*beta*phi*{_E_SRC}"
            " + (x - 3*y*alpha/(2*beta) - 4*t*beta*u[y])"
            "*4*beta*phi*u[x,x]")),
        FluxClaim("G5a", "G5a", "paper", _triple(
            "0",
            f"-u[x,y]*phi*{_GRAD}",
            f"phi*{_E_SRC} - 4*beta*phi*u[y]*u[x,x]"),
            note="one malformed subscript token read as u[y]"),
        FluxClaim("G6a", "G6a-corrected", "paper", _triple(
            "0",
            f"b(t)*phi*{_E_SRC} - b(t)*phi*u[x,x]*{_GRAD}",
            "4*beta*phi*u[x,x]*(a(t) + y*b'(t)/(4*beta)"
            " - b(t)*u[x])"),
            note="the printed flux bracket carries the 1/(4*beta) shear"
                 " coefficient, matching the corrected generator rather"
                 " than the catalog's 1/beta form"),
        FluxClaim("G7a", "G7a", "paper", _triple(
            f"-3*t/2*phi*{_E_SRC}",
            f"-x/2*phi*{_E_SRC}"
            f" + (u[x] + x*u[x,x]/2 + y*u[x,y]/2"
            f" + 3*t*u[t,x]/2)*phi*{_GRAD}",
            f"-y/2*phi*{_E_SRC}"
            " + 4*beta*phi*u[x,x]*(u[]/2 + x*u[x]/2 + y*u[y]/2"
            " + 3*t*u[t]/2)")),
    )


# ------------------------------------- construction from a symmetry

def _tuple_partial(lagrangian: Expr, dep: str, idx: tuple) -> Expr:
    """Partial with respect to an ORDERED derivative tuple: the multiset
    partial divided by the number of distinct arrangements."""
    a = Atom("jet", dep, tuple(sorted(idx)))
    part = partial_derivative(lagrangian, a)
    if part == rat(0):
        return part
    arrangements = factorial(len(idx))
    for v in set(idx):
        arrangements //= factorial(idx.count(v))
    return rmul(rat(1, arrangements), part)


def ibragimov_fluxes(vf: VectorField, phi: Expr,
                     coords: Sequence[str] = COORDS) -> ConservedTriple:
    """Conservation-law triple built from a symmetry generator and a
    multiplier expression phi(t, x, y, u[]), using the formal
    second-dependent Lagrangian L = v[]*E truncated at fourth order:

        C^i = xi^i L
            + sum_m  D_{j1..jm}(W) * sum_k (-1)^k
                     D_{l1..lk} dL/du_(i j1..jm l1..lk)

    with W the characteristic, ordered-tuple partials, m + k <= 3.
    The formal dependent is substituted by phi afterwards.
    """
    lagr = rmul(p("v[]"), equation())
    w = vf.characteristic()
    dw_cache = {(): w}

    def dw(J: tuple) -> Expr:
        if J in dw_cache:
            return dw_cache[J]
        val = total_derivative(dw(J[:-1]), J[-1])
        return dw_cache.setdefault(J, val)

    def d_along(e: Expr, K: tuple) -> Expr:
        for v in K:
            e = total_derivative(e, v)
        return e

    comps = []
    for i in coords:
        comp = rmul(vf.xi(i), lagr)
        for m in range(4):
            for J in itertools.product(coords, repeat=m):
                inner = rat(0)
                for k in range(4 - m):
                    sign = rat(-1 if k % 2 else 1)
                    for K in itertools.product(coords, repeat=k):
                        tp = _tuple_partial(lagr, vf.dep,
                                            (i,) + J + K)
                        if tp == rat(0):
                            continue
                        inner = inner + sign * d_along(tp, K)
                if inner == rat(0):
                    continue
                comp = comp + rmul(dw(J), inner)
        comps.append(substitute_multiplier(comp, phi))
    return ConservedTriple(tuple(f"c{v}" for v in coords), tuple(comps))


def construction_targets() -> tuple:
    """Symmetry claims whose constructed triples the toolkit certifies:
    every verified generator from the symmetry catalog."""
    names = ("G1a", "G2a-corrected", "G3a-corrected", "G4a", "G5a",
             "G6a-corrected", "G6a-b1", "G6a-a1", "S", "G7a")
    table = {cl.name: cl for cl in symmetry_claims()}
    return tuple(table[n] for n in names)
