"""Point-symmetry machinery: prolongation of vector fields, on-shell
reduction, symmetry checking, and exact determining systems.

A vector field X = sum_i xi^i d/d(base_i) + eta d/du prolongs to jet
space by the recursion

    eta^{S+i} = D_i(eta^S) - sum_j D_i(xi^j) * u[S+j]

and acts on an equation E through its formal partials.  A symmetry
holds when X(E) vanishes on the solution manifold, i.e. after the
leading jet (and every jet containing it) is rewritten via the solved
form of E.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .symkernel import (Add, Atom, CanonicalForm, Expr, KernelError,
                        Mul, Pow, Rat, Sym, atoms_of, canonicalize,
                        emit, is_zero, jet_atoms_of, partial_derivative,
                        radd, rat, rmul, rpow, substitute,
                        total_derivative)

COORDS = ("t", "x", "y")


class PreconditionError(KernelError):
    """An engine precondition is violated."""


@dataclass(frozen=True)
class VectorField:
    """A point vector field on (bases..., dep)-space.

    Coefficients may depend on the base variables, parameters, scalar
    functions, and the undifferentiated dependent u[]; jets of order
    one or more are rejected.
    """

    xis: tuple            # tuple of (base name, Expr), sorted by name
    eta: Expr
    dep: str = "u"
    name: str = ""

    @staticmethod
    def make(xis: Mapping[str, Expr], eta: Expr, dep: str = "u",
             name: str = "") -> "VectorField":
        return VectorField(tuple(sorted(xis.items())), eta, dep, name)

    def __post_init__(self) -> None:
        for _, e in self.xis + (("eta", self.eta),):
            bad = [a for a in jet_atoms_of(e, self.dep) if a.index]
            if bad:
                raise PreconditionError(
                    f"point vector field coefficients must not contain "
                    f"jets of order >= 1; found {bad[0]}")

    def xi(self, v: str) -> Expr:
        for name, e in self.xis:
            if name == v:
                return e
        return rat(0)

    @property
    def coords(self) -> tuple:
        return tuple(name for name, _ in self.xis)

    def characteristic(self) -> Expr:
        """W = eta - sum_i xi^i u[i]."""
        out = self.eta
        for v, e in self.xis:
            out = out - e * Sym(Atom("jet", self.dep, (v,)))
        return out

    def scale(self, k) -> "VectorField":
        kk = rat(k) if isinstance(k, int) else k
        return VectorField(tuple((v, rmul(kk, e)) for v, e in self.xis),
                           rmul(kk, self.eta), self.dep, self.name)

    def plus(self, other: "VectorField") -> "VectorField":
        if other.dep != self.dep:
            raise PreconditionError("vector fields act on different "
                                    "dependents")
        names = sorted({v for v, _ in self.xis}
                       | {v for v, _ in other.xis})
        xis = tuple((v, self.xi(v) + other.xi(v)) for v in names)
        return VectorField(xis, self.eta + other.eta, self.dep)


def prolong(vf: VectorField, indices: Iterable[tuple],
            coords: Sequence[str] = COORDS) -> dict:
    """Prolonged coefficients eta^S for each requested multiset S
    (given as tuples of base names), plus all intermediate multisets.
    Key () holds eta itself."""
    cache: dict = {(): vf.eta}
    dxi = {(v, w): total_derivative(vf.xi(w), v) for v in coords
           for w in coords}

    def get(S: tuple) -> Expr:
        S = tuple(sorted(S))
        if S in cache:
            return cache[S]
        S_prev, i = S[:-1], S[-1]
        out = total_derivative(get(S_prev), i)
        for w in coords:
            dx = dxi[(i, w)]
            if dx != rat(0):
                out = out - dx * Sym(Atom("jet", vf.dep,
                                          tuple(sorted(S_prev + (w,)))))
        return cache.setdefault(S, out)

    for S in indices:
        get(tuple(sorted(S)))
    return cache


def apply_to(vf: VectorField, equation: Expr,
             coords: Sequence[str] = COORDS) -> Expr:
    """X(E): formal partials of E contracted with the prolonged field."""
    jets = sorted(jet_atoms_of(equation, vf.dep),
                  key=lambda a: a.sort_key())
    table = prolong(vf, [a.index for a in jets], coords)
    parts = []
    for v in coords:
        xiv = vf.xi(v)
        if xiv != rat(0):
            parts.append(xiv * partial_derivative(equation,
                                                  Atom("base", v)))
    for a in jets:
        co = partial_derivative(equation, a)
        if co != rat(0):
            parts.append(co * table[tuple(a.index)])
    return radd(*[p for p in parts])


def solve_for_leading(equation: Expr, lead: Atom) -> tuple:
    """Solve E = 0 for the leading jet.

    Precondition: E is affine in the leading jet and the leading
    coefficient is nonzero and free of jets (parameters and base
    variables only, so division is exact as a rational expression).
    Returns (rhs, coeff) with lead = rhs on the solution manifold and
    E = coeff*(lead - rhs).
    """
    co = partial_derivative(equation, lead)
    if co == rat(0):
        raise PreconditionError(f"equation does not contain {lead}")
    if not is_zero(partial_derivative(co, lead)):
        raise PreconditionError("equation is not affine in the leading "
                                "jet")
    if any(a.kind == "jet" for a in atoms_of(co)):
        raise PreconditionError("leading coefficient must not depend on "
                                "jets")
    rest = substitute(equation, {lead: rat(0)})
    rhs = rmul(rat(-1), rest, rpow(co, Fraction(-1)))
    return rhs, co


def reduce_on_shell(e: Expr, lead: Atom, rhs: Expr,
                    rounds: int = 20) -> Expr:
    """Rewrite every jet whose index contains the leading multiset via
    total derivatives of the solved form, to a fixed point."""
    lead_idx = tuple(sorted(lead.index))
    dep = lead.name
    deriv_cache: dict = {lead_idx: rhs}

    def rewrite_of(idx: tuple) -> Expr:
        idx = tuple(sorted(idx))
        if idx in deriv_cache:
            return deriv_cache[idx]
        extra = list(idx)
        for v in lead_idx:
            extra.remove(v)
        # build up from rhs by one derivative at a time, cached
        cur_idx = lead_idx
        cur = rhs
        for v in sorted(extra):
            nxt_idx = tuple(sorted(cur_idx + (v,)))
            if nxt_idx in deriv_cache:
                cur = deriv_cache[nxt_idx]
            else:
                cur = total_derivative(cur, v)
                deriv_cache[nxt_idx] = cur
            cur_idx = nxt_idx
        return cur

    def contains(idx: tuple) -> bool:
        pool = list(idx)
        for v in lead_idx:
            if v in pool:
                pool.remove(v)
            else:
                return False
        return True

    cur = e
    for _ in range(rounds):
        targets = [a for a in jet_atoms_of(cur, dep) if contains(a.index)]
        if not targets:
            return cur
        binds = {a: rewrite_of(a.index) for a in targets}
        cur = substitute(cur, binds)
    if any(contains(a.index) for a in jet_atoms_of(cur, dep)):
        raise KernelError("on-shell reduction did not reach a fixed "
                          f"point in {rounds} rounds")
    return cur


@dataclass(frozen=True)
class SymmetryVerdict:
    passed: bool
    residual: Expr
    residual_terms: tuple
    proportionality: str   # emitted X(E)/E ratio off shell, "" if none

    def __bool__(self) -> bool:
        return self.passed


def check_symmetry(equation: Expr, vf: VectorField, lead: Atom,
                   coords: Sequence[str] = COORDS,
                   rounds: int = 20) -> SymmetryVerdict:
    """Does the prolonged field annihilate the equation on shell?"""
    rhs, co = solve_for_leading(equation, lead)
    xe = apply_to(vf, equation, coords)
    resid = reduce_on_shell(xe, lead, rhs, rounds)
    cf = canonicalize(resid)
    passed = cf.is_zero
    prop = ""
    lam = rmul(partial_derivative(xe, lead), rpow(co, Fraction(-1)))
    if is_zero(xe - lam * equation):
        prop = emit(lam)
    return SymmetryVerdict(passed, cf.to_expr(), cf.term_strings(), prop)


# ---------------------------------------------------- determining systems

SLOTS = ("xi_t", "xi_x", "xi_y", "eta")


@dataclass(frozen=True)
class DeterminingSystem:
    """Exact linear system for symmetry-ansatz coefficients.

    Unknown j multiplies the basis function unknowns[j][1] (an Expr)
    inside slot unknowns[j][0]; each matrix row is one
    polynomial-coefficient equation."""

    unknowns: tuple          # tuple of (slot, basis Expr)
    rows: tuple              # tuple of row keys (opaque, for debugging)
    matrix: tuple            # tuple of tuples of Fraction
    coords: tuple
    dep: str

    def labels(self) -> tuple:
        return tuple((slot, emit(fn)) for slot, fn in self.unknowns)


def _column_residual(equation: Expr, lead: Atom, rhs: Expr,
                     slot: str, fn: Expr, coords: Sequence[str],
                     dep: str, clear: Expr | None = None) -> CanonicalForm:
    zero = rat(0)
    if slot == "eta":
        vf = VectorField(tuple((v, zero) for v in coords), fn, dep)
    else:
        v0 = slot[3:]
        vf = VectorField(tuple((v, fn if v == v0 else zero)
                               for v in coords), zero, dep)
    resid = reduce_on_shell(apply_to(vf, equation, coords), lead, rhs)
    if clear is not None:
        resid = rmul(resid, clear)
    return canonicalize(resid)


def determining_system(equation: Expr, lead: Atom,
                       basis: Sequence[Expr] = (),
                       coords: Sequence[str] = COORDS,
                       dep: str = "u",
                       slot_basis: Mapping[str, Sequence[Expr]]
                       | None = None,
                       clear: Expr | None = None) -> DeterminingSystem:
    """Assemble the exact determining system for the ansatz

        xi^v = sum_j c_{v,j} basis_j,   eta = sum_j c_{eta,j} basis_j.

    slot_basis overrides the shared basis per slot ("xi_t", "xi_x",
    "xi_y", "eta"); slots absent from it get no unknowns.  clear, when
    given, multiplies every prolonged residual before canonicalization;
    it is required for equations whose on-shell form carries a
    composite denominator, which would otherwise defeat the exact
    column rescaling.

    Preconditions: basis functions may involve only the base variables,
    the undifferentiated dependent, and rational powers thereof; the
    equation must be affine in its leading jet.  The system is linear
    by construction since prolongation and on-shell reduction are
    linear in the field's coefficient slots.
    """
    slots = tuple(f"xi_{v}" for v in coords) + ("eta",)
    if slot_basis is None:
        slot_basis = {slot: tuple(basis) for slot in slots}

    allowed_bases = set(coords)
    for fns in slot_basis.values():
        for fn in fns:
            for a in atoms_of(fn):
                if a.kind == "base" and a.name in allowed_bases:
                    continue
                if a.kind == "jet" and a.name == dep and not a.index:
                    continue
                raise PreconditionError(
                    f"ansatz basis function {emit(fn)} contains {a}, "
                    "outside the base variables and the bare dependent")

    rhs, _ = solve_for_leading(equation, lead)
    unknowns = []
    columns = []
    for slot in slots:
        for fn in slot_basis.get(slot, ()):
            unknowns.append((slot, fn))
            columns.append(_column_residual(equation, lead, rhs, slot,
                                            fn, coords, dep, clear))

    # clear denominators consistently: each canonical denominator must
    # be a single monomial so columns can be rescaled exactly
    den_monos = []
    for cf in columns:
        if len(cf.den_terms) != 1:
            raise PreconditionError(
                "ansatz produces a non-monomial denominator; widen the "
                "cleared-denominator handling")
        den_monos.append(cf.den_terms[0][0])
    lcm_exp: dict = {}
    for mono in den_monos:
        for a, e in mono:
            if e > lcm_exp.get(a, 0):
                lcm_exp[a] = e

    rows: dict = {}
    cells: dict = {}
    for j, cf in enumerate(columns):
        scale_mono = dict(lcm_exp)
        for a, e in cf.den_terms[0][0]:
            scale_mono[a] = scale_mono[a] - e
        for mono, coeff in cf.num_terms:
            md = dict(scale_mono)
            for a, e in mono:
                md[a] = md.get(a, 0) + e
            key = tuple(sorted(((a.sort_key(), e)
                                for a, e in md.items() if e)))
            if key not in rows:
                rows[key] = len(rows)
            cells[(rows[key], j)] = cells.get((rows[key], j),
                                              Fraction(0)) + coeff

    nrows, ncols = len(rows), len(columns)
    matrix = [[Fraction(0)] * ncols for _ in range(nrows)]
    for (i, j), v in cells.items():
        matrix[i][j] = v
    row_keys = [None] * nrows
    for key, i in rows.items():
        row_keys[i] = key
    return DeterminingSystem(tuple(unknowns), tuple(row_keys),
                             tuple(tuple(r) for r in matrix),
                             tuple(coords), dep)


@dataclass(frozen=True)
class LinearSolution:
    rank: int
    dimension: int
    vectors: tuple     # tuple of solution vectors (tuples of Fraction)


def solve_linear_exact(matrix: Sequence[Sequence[Fraction]],
                       ncols: int | None = None) -> LinearSolution:
    """Exact nullspace of a homogeneous system by Gauss-Jordan over the
    rationals.  ncols must be given when the matrix may have no rows
    (every unknown is then free)."""
    rows = [list(r) for r in matrix if any(v != 0 for v in r)]
    if ncols is None:
        if not matrix:
            raise PreconditionError("ncols required for an empty matrix")
        ncols = len(matrix[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    vectors = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -rows[ri][fc]
        vectors.append(tuple(vec))
    return LinearSolution(len(pivots), len(free), tuple(vectors))


def instantiate(system: DeterminingSystem,
                vector: Sequence[Fraction]) -> VectorField:
    """Turn a solution vector of a determining system back into a
    vector field."""
    slots = tuple(f"xi_{v}" for v in system.coords) + ("eta",)
    parts = {slot: rat(0) for slot in slots}
    for (slot, fn), coeff in zip(system.unknowns, vector):
        if coeff == 0:
            continue
        parts[slot] = parts[slot] + \
            rat(coeff.numerator, coeff.denominator) * fn
    xis = {v: parts[f"xi_{v}"] for v in system.coords}
    return VectorField.make(xis, parts["eta"], system.dep)


def solve_determining(system: DeterminingSystem) -> tuple:
    """Solve and instantiate: (LinearSolution, tuple of VectorFields)."""
    sol = solve_linear_exact(system.matrix, len(system.unknowns))
    fields = tuple(instantiate(system, vec) for vec in sol.vectors)
    return sol, fields


def corrected_generator(system: DeterminingSystem,
                        solution: LinearSolution,
                        pins: Mapping[tuple, Fraction],
                        pin_order: Sequence[tuple]) -> VectorField | None:
    """Deterministic repair of a failed stated generator.

    pins maps (slot, emitted basis function) to the stated coefficient;
    pin_order fixes the greedy order.  Working inside the solved
    nullspace, each pin is adopted when consistent with the pins taken
    so far and dropped otherwise; leftover freedom is zeroed.  Returns
    the resulting field, or None when the system had no solutions.
    """
    if not solution.vectors:
        return None
    labels = system.labels()
    nfree = len(solution.vectors)
    # rows of the pin system, in lambda space: row * lambda = value
    taken_rows: list = []
    taken_vals: list = []

    def solve_taken() -> list | None:
        # gaussian elimination with RHS; None when inconsistent
        rows = [list(r) + [v] for r, v in zip(taken_rows, taken_vals)]
        cols = nfree
        r = 0
        piv_cols = []
        for c in range(cols):
            piv = next((i for i in range(r, len(rows))
                        if rows[i][c] != 0), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            pv = rows[r][c]
            rows[r] = [v / pv for v in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in
                               zip(rows[i], rows[r])]
            piv_cols.append(c)
            r += 1
        for i in range(r, len(rows)):
            if rows[i][cols] != 0:
                return None
        lam = [Fraction(0)] * cols
        for i, c in enumerate(piv_cols):
            lam[c] = rows[i][cols]
        return lam

    for label in pin_order:
        j = labels.index(label)
        row = [vec[j] for vec in solution.vectors]
        val = pins.get(label, Fraction(0))
        taken_rows.append(row)
        taken_vals.append(val)
        if solve_taken() is None:
            taken_rows.pop()
            taken_vals.pop()
    lam = solve_taken()
    coeffs = [sum((l * vec[j] for l, vec in zip(lam, solution.vectors)),
                  Fraction(0)) for j in range(len(labels))]
    return instantiate(system, coeffs)
