"""Two follow-up oracle runs.

1. Dimension of the extended-ansatz determining system at the package
   default specialization alpha = beta = 1 (earlier runs used random
   rational values; the default must be confirmed separately).

2. Bounded polynomial-ansatz point-symmetry scans (degree <= 3 in the
   independent and dependent variable, 20 unknowns) for the three
   "no point symmetries" claims:
     - the second-order equation printed for the l/k reduction,
     - the computed third-order gauge quotient of the fourth-order ode,
     - the computed second-order gauge quotient of the m''' equation.
   The scan returns the solution-space dimension; 0 is consistent with
   the claims.

Run:  python3 scripts/oracle_scan_extras.py
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp

from jetkit import symmetry_residual

# ---------------------------------------------------------------- shared


def split_term(term, keep):
    """Split an expanded product into (Fraction coefficient, key); the
    key collects every non-numeric factor.  Factors must be integer
    powers of members of `keep`."""
    co = Fraction(1)
    key = []
    factors = term.args if term.is_Mul else (term,)
    for f in factors:
        if f.is_Rational:
            co *= Fraction(int(f.p), int(f.q))
            continue
        if f.is_Pow:
            b, e = f.args
            assert b in keep, f"unexpected base {b}"
            assert e.is_Integer, f"non-integer exponent {e} on {b}"
            key.append((sp.srepr(b), int(e)))
        elif f in keep:
            key.append((sp.srepr(f), 1))
        else:
            raise AssertionError(f"unexpected factor {f}")
    return co, tuple(sorted(key))


def rref_dimension(columns, keep, label):
    """columns[i] = polynomial residual of the i-th unit ansatz vector.
    Returns (dimension, nullspace basis as tuples of Fractions)."""
    rows: dict = {}
    for i, col in enumerate(columns):
        for term in sp.Add.make_args(sp.expand(col)):
            if term == 0:
                continue
            co, key = split_term(term, keep)
            rows.setdefault(key, [Fraction(0)] * len(columns))[i] += co
    mat = [r for r in rows.values() if any(v != 0 for v in r)]
    n = len(columns)
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -mat[ri][fc]
        basis.append(tuple(vec))
    print(f"  {label}: rows={len(mat)}, unknowns={n}, rank={len(pivots)}, "
          f"dimension={len(basis)}")
    return len(basis), basis


# ------------------------------------------------- part 1: PDE rank at (1,1)

print("=" * 72)
print("1. Extended-ansatz determining system at alpha = beta = 1")
print("=" * 72)

t, x, y = sp.symbols("t x y")
al, be = sp.symbols("alpha beta", nonzero=True)
U = sp.Function("U")(t, x, y)
ux, uy = sp.diff(U, x), sp.diff(U, y)
E12 = (sp.diff(U, x, t) + al * sp.diff(U, x, 4) + be * sp.diff(U, x, 3, y)
       + 6 * al * ux * sp.diff(U, x, 2) + 4 * be * ux * sp.diff(U, x, y)
       + 4 * be * uy * sp.diff(U, x, 2))
RHS = sp.solve(sp.Eq(E12, 0), sp.diff(U, x, t))[0]

deg2 = [sp.Integer(1), t, x, y, U, t**2, x**2, y**2, U**2,
        t * x, t * y, t * U, x * y, x * U, y * U]
invt = [x / t, y / t, y**2 / t, x * y / t]
EXTENDED = deg2 + invt

ONE = {al: sp.Integer(1), be: sp.Integer(1)}
cols = []
for si in range(4):
    for f in EXTENDED:
        gen = [sp.Integer(0)] * 4
        gen[si] = f
        r = symmetry_residual(E12.subs(ONE), U, (t, x, y),
                              {t: gen[0], x: gen[1], y: gen[2]}, gen[3],
                              (x, t), RHS.subs(ONE))
        cols.append(sp.expand(t**3 * r))

keep = {t, x, y, U} | set().union(*[c.atoms(sp.Derivative) for c in cols])
rref_dimension(cols, keep, "alpha=1, beta=1")

# --------------------------------------------- part 2: degree-3 ODE scans

MONS3 = [(i, d - i) for d in range(4) for i in range(d + 1)]


def ode_scan(name, x_, f, order, postmap=None):
    """Point-symmetry scan with xi, eta polynomial of degree <= 3 in
    (independent, dependent).  f = right-hand side solved for the
    leading derivative, written in x_ and Y(x_)."""
    Y = sp.Function("Y")(x_)
    E = sp.Derivative(Y, (x_, order)) - f
    lead = (x_,) * order
    cols = []
    for slot in range(2):
        for (i, j) in MONS3:
            b = x_**i * Y**j
            xi = {x_: b} if slot == 0 else {}
            eta = b if slot == 1 else sp.Integer(0)
            r = symmetry_residual(E, Y, (x_,), xi, eta, lead, f)
            cols.append(r)
    ms = sp.symbols(f"m0:{order}")
    jm = {sp.Derivative(Y, (x_, k)): ms[k] for k in range(order - 1, 0, -1)}
    cols = [c.subs(jm).subs(Y, ms[0]) for c in cols]
    if postmap is not None:
        cols = [postmap(c) for c in cols]
    numden = []
    L = sp.Integer(1)
    for c in cols:
        n_, d_ = sp.fraction(sp.together(sp.cancel(c)))
        numden.append((n_, d_))
        L = sp.lcm(L, d_)
    cleared = [sp.expand(n_ * sp.cancel(L / d_)) for n_, d_ in numden]
    keeps = set(ms) | set().union(*[c.free_symbols for c in cleared])
    dim, basis = rref_dimension(cleared, keeps, name)
    if dim:
        Ysym = sp.Symbol("Y")
        labels = ([f"xi*{x_**i * Ysym**j}" for (i, j) in MONS3]
                  + [f"eta*{x_**i * Ysym**j}" for (i, j) in MONS3])
        for v in basis:
            parts = [f"({co})*{labels[k]}" for k, co in enumerate(v)
                     if co != 0]
            print("      " + " + ".join(parts))
    return dim


print()
print("=" * 72)
print("2a. Printed l/k second-order equation (claim: no point symmetries)")
print("=" * 72)
lv = sp.Symbol("l")
for aval, bval in ((sp.Integer(1), sp.Integer(1)),
                   (sp.Rational(5, 3), sp.Rational(7, 4))):
    Yf = sp.Function("Y")(lv)
    kv, pv = Yf, sp.Derivative(Yf, lv)
    f312 = (3 * pv**2 / kv + 9 * kv * pv
            + (26 * aval + 26 * bval + 14 * lv) * kv**3 / (aval + bval)
            - (24 * aval * lv + 24 * bval * lv + 28 * lv**2) * kv**4
            / (aval + bval))
    ode_scan(f"printed l/k eq, alpha={aval}, beta={bval}", lv, f312, 2)

print()
print("=" * 72)
print("2b. Computed third-order gauge quotient (claim: zero symmetries)")
print("=" * 72)
rr = sp.Symbol("r", positive=True)
rho = sp.Symbol("rho", positive=True)


def rho_postmap(c):
    e2 = c.replace(lambda ex: ex.is_Pow and ex.base == rr,
                   lambda ex: rho**(3 * ex.exp)).subs(rr, rho**3)
    return sp.expand(sp.powsimp(e2, force=True))


for aval in (sp.Integer(1), sp.Rational(5, 3)):
    Yf = sp.Function("Y")(rr)
    m1s, m2s = sp.Derivative(Yf, rr), sp.Derivative(Yf, (rr, 2))
    f321 = (-4 * m2s / rr - 2 * Yf * m1s / rr**sp.Rational(2, 3)
            - 4 * Yf**2 / (3 * rr**sp.Rational(5, 3))
            - 5 * Yf / (81 * aval * rr**2) - 20 * m1s / (9 * rr**2)
            - 2 * m1s / (27 * aval * rr))
    ode_scan(f"computed gauge quotient (3rd order), alpha={aval}",
             rr, f321, 3, postmap=rho_postmap)

print()
print("=" * 72)
print("2c. Computed second-order gauge quotient (claim: no symmetries)")
print("=" * 72)
av = sp.Symbol("a")
Yf = sp.Function("Y")(av)
b0, b1 = Yf, sp.Derivative(Yf, av)
fpost = (-2 * av**3 * b1**2 + 10 * av**3 * b1 - 6 * av**3 * b0
         - av**2 * b0 * b1**2 + 25 * av**2 * b0 * b1 - 12 * av**2 * b0
         + 10 * av * b0**2 * b1 - 30 * av * b0**2 - 15 * b0**3) / \
    (av**2 * (2 * av + b0)**2)
ode_scan("computed post gauge quotient (2nd order)", av, fpost, 2)

print()
print("done.")
