"""Independent oracle for the change-of-variables records.

Everything here runs in the push-forward direction: the new dependent is a
sympy Function of the new independent(s), composite jets are expanded by the
chain rule, and the claimed target is tested for vanishing modulo the source
equation.  The package verifies the same records in the opposite (pullback)
direction with its own calculus, so agreement is a strong cross-check.

Run:  python3 scripts/oracle_reductions.py
"""

from __future__ import annotations

import sympy as sp

from jetkit import d_along, linearization_invariants, on_shell, vars_of

al, be, c = sp.symbols("alpha beta c", nonzero=True)
t, x, y = sp.symbols("t x y")


def zero(e: sp.Expr) -> bool:
    return sp.simplify(sp.cancel(sp.together(sp.expand(e)))) == 0


def verdict(label: str, ok: bool) -> None:
    print(f"  [{'OK' if ok else 'XX'}] {label}")


def pde_push(E: sp.Expr, U: sp.Expr, u_expr: sp.Expr, new_defs: dict) -> sp.Expr:
    """Rewrite E (in jets of U) on the ansatz U = u_expr, where u_expr may
    mention new indeterminates whose definitions in the old coordinates are
    given by new_defs."""

    def total(F, v):
        out = sp.diff(F, v)
        for s, d in new_defs.items():
            out += sp.diff(F, s) * sp.diff(d, v)
        return out

    cache = {(): u_expr}

    def jet(vs):
        vs = tuple(sorted(vs, key=sp.default_sort_key))
        if vs not in cache:
            cache[vs] = total(jet(vs[1:]), vs[0])
        return cache[vs]

    repl = {}
    for d in E.atoms(sp.Derivative):
        if d.expr == U:
            repl[d] = jet(vars_of(d))
    repl[U] = u_expr
    return E.xreplace(repl)


def term_power(term: sp.Expr, var: sp.Symbol):
    """Split a product into (var-power, var-free cofactor); None if var is
    buried inside a non-power factor."""
    k = sp.Integer(0)
    rest = []
    for f in sp.Mul.make_args(term):
        if f == var:
            k += 1
        elif f.is_Pow and f.base == var and not f.exp.has(var):
            k += f.exp
        elif f.has(var):
            return None
        else:
            rest.append(f)
    return k, sp.Mul(*rest)


def grade_by_power(expr: sp.Expr, var: sp.Symbol):
    """Group the expanded terms of expr by their var-power.  Returns a dict
    {power: coefficient} or None if some term is not c*var**k."""
    e = sp.cancel(sp.together(sp.expand(expr)))
    num, den = sp.fraction(e)
    dsplit = term_power(den, var)
    if dsplit is None:
        return None
    dk, dco = dsplit
    groups: dict = {}
    for term in sp.Add.make_args(sp.expand(num)):
        tsplit = term_power(term, var)
        if tsplit is None:
            return None
        k, co = tsplit
        groups[k - dk] = groups.get(k - dk, 0) + co / dco
    return {k: sp.cancel(v) for k, v in groups.items() if sp.cancel(v) != 0}


def strip_power(expr: sp.Expr, var: sp.Symbol):
    """Expect expr == C * var**k with C free of var; return (k, C)."""
    g = grade_by_power(expr, var)
    if g is None or len(g) != 1:
        return None
    k = next(iter(g))
    return k, g[k]


def push_dep(a_expr, b_expr, n_sym, jets, upto):
    """Values of the new dependent and its derivatives w.r.t. the new
    independent a, everything expressed in the source jet symbols."""
    vals = [b_expr]
    da = d_along(a_expr, n_sym, jets)
    for _ in range(upto):
        vals.append(sp.cancel(d_along(vals[-1], n_sym, jets) / da))
    return vals


BIND = {al: (7 - 4 * be) / 3}

# ---------------------------------------------------------------- sources
U = sp.Function("U")(t, x, y)
ux, uy = sp.diff(U, x), sp.diff(U, y)
E12 = (sp.diff(U, x, t) + al * sp.diff(U, x, 4) + be * sp.diff(U, x, 3, y)
       + 6 * al * ux * sp.diff(U, x, 2) + 4 * be * ux * sp.diff(U, x, y)
       + 4 * be * uy * sp.diff(U, x, 2))

s_ = sp.Symbol("s")
w = sp.Function("w")(s_)
W = [w] + [sp.diff(w, (s_, k)) for k in range(1, 5)]
E32 = (al + be) * W[4] + 8 * be * W[1] * W[2] + 6 * al * W[1] * W[2] - c * W[2]

print("=" * 72)
print("A. PDE-to-ODE and PDE-to-PDE records")
print("=" * 72)

# ---------------------------------------------------------------- 1.2 -> 3.2
p = pde_push(E12, U, w, {s_: x + y - c * t})
verdict("1.2->3.2 exact (factor 1)", zero(p - E32))

# --------------------------------------------------------------- 1.2 -> 3.14
dd = sp.Symbol("d_")
ee = sp.Symbol("e_", positive=True)
P = sp.Function("p")(dd, ee)
p = pde_push(E12, U, P / y, {dd: x / y, ee: y**3 / t})
p = p.subs({t: y**3 / ee, x: dd * y})
sp_ = strip_power(p, y)
assert sp_ is not None, "1.2->3.14: spectator y does not factor out"
k14, F314 = sp_
print(f"  1.2->3.14 spectator power: y^{k14}")
F314 = sp.expand(F314 * 12 * be / 4)  # cosmetic rescale, see below
# put it in the printed display's scale: match the p_dddd coefficient
lead_co = F314.coeff(sp.Derivative(P, (dd, 4)))
want_co = dd * be - al
F314 = sp.expand(F314 * want_co / lead_co)
chk = sp.cancel(F314.coeff(sp.Derivative(P, (dd, 4))) - want_co)
verdict("computed 3.14 rescaled so coeff(p_dddd) = d*beta - alpha", chk == 0)
print("  computed 3.14 (=0):")
print(f"    {F314}")

# printed 3.14 with unknown coefficient C on p_de
C = sp.Symbol("C")
Pd = lambda *vs: sp.Derivative(P, *vs)  # noqa: E731
printed314 = (dd * be * Pd((dd, 4)) - 3 * ee * be * Pd((dd, 3), ee)
              - al * Pd((dd, 4)) + 4 * be * Pd((dd, 3)) + C * Pd(dd, ee)
              + 4 * be * P * Pd((dd, 2)) - 12 * ee * be * Pd(ee) * Pd((dd, 2))
              - 2 * Pd(dd) * (6 * ee * be * Pd(dd, ee)
                              + (3 * al - 4 * dd * be) * Pd((dd, 2)))
              + 8 * be * Pd(dd)**2)
dif = sp.expand(F314 - printed314)
sol = sp.solve(sp.Eq(dif, 0), C)
if sol:
    print(f"  printed 3.14 matches computed iff its garbled p_de coefficient = {sol[0]}")
    F314 = sp.expand(printed314.subs(C, sol[0]).doit())
    print("  computed 3.14, clean display scale (=0):")
    print(f"    {F314}")
else:
    print("  printed 3.14 differs from computed beyond the p_de coefficient:")
    print(f"    diff = {dif}")

# --------------------------------------------------------------- 1.2 -> 3.18
d2 = sp.Symbol("d2")
e2 = sp.Symbol("e2", positive=True)
P2 = sp.Function("p")(d2, e2)
p = pde_push(E12, U, P2 + (x * y - 3 * al * y**2 / (4 * be)) / (4 * t * be),
             {d2: x, e2: t})
p = p.subs({x: d2, t: e2})
P2d = lambda *vs: sp.Derivative(P2, *vs)  # noqa: E731
E318 = (al * P2d((d2, 4)) + 6 * al * P2d(d2) * P2d((d2, 2)) + P2d(d2) / e2
        + P2d(d2, e2) + d2 * P2d((d2, 2)) / e2)
verdict("1.2->3.18: spectator y vanishes and result matches printed 3.18",
        zero(p - E318))

# -------------------------------------------------------------- 3.18 -> 3.20
rr = sp.Symbol("r_", positive=True)
v = sp.Function("v")(rr)
p = pde_push(E318, P2, v / d2, {rr: d2**3 / e2})
p = p.subs(e2, d2**3 / rr)
sp_ = strip_power(p, d2)
assert sp_ is not None, "3.18->3.20: spectator d does not factor out"
k20, F320 = sp_
print(f"  3.18->3.20 spectator power: d^{k20}")
Vd = lambda k: sp.Derivative(v, (rr, k))  # noqa: E731
lead_co = sp.cancel(F320.coeff(Vd(4)))
F320 = sp.expand(sp.cancel(F320 * 27 * rr**2 * al / lead_co))
verdict("computed 3.20 rescaled so coeff(v'''') = 27 r^2 alpha",
        zero(F320.coeff(Vd(4)) - 27 * rr**2 * al))
print("  computed 3.20 (=0):")
print(f"    {F320}")

printed320 = sp.expand(
    9 * rr * al * (3 * rr * Vd(4) + 8 * Vd(3) - 54 * rr**2 * al * Vd(2))
    + rr * (Vd(1) * (rr - 24 * al + 162 * rr**2 * al * Vd(2)))
    + 3 * rr * (2 * (rr + 12 * al) * Vd(2) - 12 * al * v**2)
    + v * (rr + 24 * al + 36 * rr * al * Vd(1)))
verdict("printed 3.20 == computed 3.20", zero(printed320 - F320))
if not zero(printed320 - F320):
    print(f"    printed - computed = {sp.expand(printed320 - F320)}")

# -------------------------------------------------------------- 3.18 -> 3.22
r3 = sp.Symbol("r3")
v3 = sp.Function("v")(r3)
p = pde_push(E318, P2, v3 - d2**2 / (12 * e2 * al), {r3: d2})
p = p.subs(d2, r3)
E322 = al * sp.diff(v3, (r3, 4)) + 6 * al * sp.diff(v3, r3) * sp.diff(v3, (r3, 2))
verdict("3.18->3.22: spectator e vanishes and result matches printed 3.22",
        zero(p - E322))

# -------------------------------------------------------------- 3.14 -> 3.16
r4 = sp.Symbol("r4", positive=True)
v4 = sp.Function("v")(r4)
ansatz = dd * ee * v4.subs(r4, ee) / (12 * be)
repl = {}
for dv in F314.atoms(sp.Derivative):
    if dv.expr == P:
        repl[dv] = sp.diff(ansatz, *[q for q in vars_of(dv)])
repl[P] = ansatz
p = F314.xreplace(repl).subs(ee, r4)
g = grade_by_power(p, dd)
print(f"  3.14->3.16 d-powers present: {sorted(g) if g else 'mixed/none'}")
if g is not None and len(g) == 1:
    F316 = sp.cancel(next(iter(g.values())))
    F316 = sp.expand(sp.cancel(F316))
    print("  computed 3.16 (=0, up to overall factor):")
    print(f"    {F316}")
    lead316 = F316.coeff(v4 * sp.Derivative(v4, r4))
    F316n = sp.expand(sp.cancel(3 * r4 * F316 / lead316))
    print(f"  computed 3.16, cleared: {F316n} = 0")
    V4d = sp.Derivative(v4, r4)
    printed316 = (r4 * be**3 * v4 * V4d - r4 * be * V4d - be * v4
                  + be**3 * v4**2 / 3)
    rat = sp.cancel(F316 / printed316)
    constant = rat.free_symbols <= {al, be, c}
    verdict("printed 3.16 == computed up to constant factor", constant)
    if not constant:
        # term comparison after normalizing the v*v' coefficient
        f_n = sp.expand(sp.cancel(F316 / F316.coeff(V4d) * (r4 * be**3 * v4
                                                            - r4 * be)))
        print(f"    computed, v'-coefficient normalized to printed:\n      {f_n}")
        print(f"    printed - normalized = {sp.expand(printed316 - f_n)}")

print()
print("=" * 72)
print("B. ODE chain records")
print("=" * 72)

# jet-symbol forms of the sources
W_ = sp.symbols("W0:5")
E32s = (al + be) * W_[4] + (6 * al + 8 * be) * W_[1] * W_[2] - c * W_[2]
W4_solved = sp.solve(sp.Eq(E32s, 0), W_[4])[0]

# -------------------------------------------------------------- 3.2 -> 3.4
V0, V1, V2, V3 = sp.symbols("V0:4")
T34 = (V3 - 10 * V1 * V2 / V0 - 15 * V1**3 / V0**2
       - (c * V0**2 / (al + be) - 14 * V0 / (al + be)) * V1)
# NB the printed 3.4 has "-15 v'^3 / v^2" on the right; moving to the left
# flips it: T = v''' - 10 v'v''/v + 15 v'^3/v^2 - (...)v'.  Use the printed
# right-hand side verbatim:
T34 = (V3 - (10 * V1 * V2 / V0 - 15 * V1**3 / V0**2
             + (c * V0**2 / (al + be) - 14 * V0 / (al + be)) * V1))
vals = push_dep(W_[0], 1 / W_[1], s_, list(W_), 3)
pushed = T34.subs({V0: vals[0], V1: vals[1], V2: vals[2], V3: vals[3]},
                  simultaneous=True)
res_sym = sp.cancel(sp.together(pushed.subs(W_[4], W4_solved)))
verdict("3.2->3.4 vanishes with symbolic alpha,beta", zero(res_sym))
verdict("3.2->3.4 vanishes at binding 3a+4b=7", zero(res_sym.subs(BIND)))

# -------------------------------------------------------------- 3.4 -> 3.7
# source: printed 3.4 in jet symbols (independent r does not appear)
E34s = (V3 - 10 * V1 * V2 / V0 + 15 * V1**3 / V0**2
        - (c * V0**2 - 14 * V0) / (al + be) * V1)
V3_solved = sp.solve(sp.Eq(E34s, 0), V3)[0]
G0, G1, G2 = sp.symbols("G0:3")
H = sp.Symbol("H")
T37 = (G2 - 3 * G1**2 / G0 - 10 * G1 / H
       - (14 * H - H**2 * c) * G0**3 / (al + be) - 15 * G0 / H**2)
rdum = sp.Symbol("rdum")
vals = push_dep(V0, 1 / V1, rdum, [V0, V1, V2, V3], 2)
pushed = T37.subs({H: V0, G0: vals[0], G1: vals[1], G2: vals[2]},
                  simultaneous=True)
verdict("3.4->3.7 vanishes with symbolic alpha,beta (reading g = 1/v')",
        zero(pushed.subs(V3, V3_solved)))

# -------------------------------------------------------------- 3.2 -> 3.9
M0, M1, M2, M3 = sp.symbols("M0:4")
T39 = M3 - M1 * (-14 * M0 / (al + be) + c / (al + be))
vals = push_dep(s_, W_[1], s_, list(W_), 3)
pushed = T39.subs({M0: vals[0], M1: vals[1], M2: vals[2], M3: vals[3]},
                  simultaneous=True)
res_sym = sp.cancel(pushed.subs(W_[4], W4_solved))
verdict("3.2->3.9 vanishes with symbolic alpha,beta", zero(res_sym))
verdict("3.2->3.9 vanishes at binding 3a+4b=7", zero(res_sym.subs(BIND)))

# -------------------------------------------------------------- 3.9 -> 3.11
E39s = M3 - M1 * (-14 * M0 + c) / (al + be)
M3_solved = sp.solve(sp.Eq(E39s, 0), M3)[0]
P0, P1, P2 = sp.symbols("P0:3")
J = sp.Symbol("J")
T311 = P2 - 3 * P1**2 / P0 + (c - 14 * J) * P0**3 / (al + be)
n_ = sp.Symbol("n_", positive=True)
vals = push_dep(M0, 1 / M1, n_, [M0, M1, M2, M3], 2)
pushed = T311.subs({J: M0, P0: vals[0], P1: vals[1], P2: vals[2]},
                   simultaneous=True)
verdict("3.9->3.11 vanishes with symbolic alpha,beta (reading q -> j)",
        zero(pushed.subs(M3, M3_solved)))

# -------------------------------------------------------------- 3.9 -> 3.12
K0, K1, K2 = sp.symbols("K0:3")
L = sp.Symbol("L")
T312 = (K2 - 3 * K1**2 / K0 - 9 * K0 * K1
        - (26 * al + 26 * be + 14 * L) * K0**3 / (al + be)
        + (24 * al * L + 24 * be * L + 28 * L**2) * K0**4 / (al + be))
l_expr = (14 * M0 - c) * n_**2 / 14
readings = {
    "D: k = 7/(n^2*(7*n*m' - c + 14*m))": 7 / (n_**2 * (7 * n_ * M1 - c + 14 * M0)),
    "B: k = 7/(7*n^3*m' - c + 14*m)": 7 / (7 * n_**3 * M1 - c + 14 * M0),
}
good_reading = None
for name, k_expr in readings.items():
    dl = d_along(l_expr, n_, [M0, M1, M2, M3])
    k1 = sp.cancel(d_along(k_expr, n_, [M0, M1, M2, M3]) / dl)
    k2 = sp.cancel(d_along(k1, n_, [M0, M1, M2, M3]) / dl)
    pushed = T312.subs({L: l_expr, K0: k_expr, K1: k1, K2: k2},
                       simultaneous=True)
    res = sp.cancel(sp.together(pushed.subs(M3, M3_solved)))
    ok = zero(res)
    verdict(f"3.9->3.12 vanishes, reading {name}", ok)
    if not ok:
        okb = zero(res.subs(BIND))
        verdict(f"3.9->3.12 vanishes at binding, reading {name}", okb)
        ok = okb
    if ok and good_reading is None:
        good_reading = (name, k_expr)

if good_reading is None:
    # derive the corrected target by eliminating n on reading D
    name, k_expr = list(readings.items())[0]
    dl = d_along(l_expr, n_, [M0, M1, M2, M3])
    k1 = sp.cancel(d_along(k_expr, n_, [M0, M1, M2, M3]) / dl)
    k2 = sp.cancel(d_along(k1, n_, [M0, M1, M2, M3]) / dl)
    k2 = sp.cancel(k2.subs(M3, M3_solved))
    lsym, ksym, k1sym = sp.symbols("lv kv k1v")
    sol = sp.solve([sp.Eq(l_expr, lsym), sp.Eq(k_expr, ksym),
                    sp.Eq(k1, k1sym)], [M0, M1, M2], dict=True)
    print(f"  elimination branches: {len(sol)}")
    for so in sol:
        target = sp.cancel(sp.together(k2.subs(so)))
        target = sp.cancel(sp.expand(target))
        nfree = not target.has(n_)
        verdict("corrected 3.12: n eliminated (reading D)", nfree)
        if nfree:
            print(f"  computed 3.12:  k'' = {sp.expand(target)}")
            computed312 = target
            break

# -------------------------------------------------------------- 3.22 -> 3.24
V_ = sp.symbols("Va0:5")
E322s = al * (V_[4] + 6 * V_[1] * V_[2])
V4a_solved = sp.solve(sp.Eq(E322s, 0), V_[4])[0]
T324 = (M3 + 6 * M1 * M0 - 10 * M1 * M2 / M0 + 15 * M1**3 / M0**2)
vals = push_dep(V_[0], 1 / V_[1], rdum, list(V_), 3)
pushed = T324.subs({M0: vals[0], M1: vals[1], M2: vals[2], M3: vals[3]},
                   simultaneous=True)
verdict("3.22->3.24 vanishes (n = v, m = 1/v', full printed tail)",
        zero(pushed.subs(V_[4], V4a_solved)))

# -------------------------------------------------------------- 3.22 -> 3.27
T327 = M3 + 6 * M1 * M0
vals = push_dep(rdum, V_[1], rdum, list(V_), 3)
pushed = T327.subs({M0: vals[0], M1: vals[1], M2: vals[2], M3: vals[3]},
                   simultaneous=True)
verdict("3.22->3.27 vanishes (n = r, m = v')",
        zero(pushed.subs(V_[4], V4a_solved)))

# -------------------------------------------------------------- 3.24 -> 3.25
E324s = M3 + 6 * M1 * M0 - 10 * M1 * M2 / M0 + 15 * M1**3 / M0**2
M3a_solved = sp.solve(sp.Eq(E324s, 0), M3)[0]
B0, B1, B2 = sp.symbols("B0:3")
A = sp.Symbol("A")
T325_printed = B2 + 3 * B1**2 / B0 + 10 * B1 / A + 15 * B0 / A**2
T325_computed = (B2 - 3 * B1**2 / B0 - 10 * B1 / A - 15 * B0 / A**2
                 - 6 * A * B0**3)
vals = push_dep(M0, 1 / M1, n_, [M0, M1, M2, M3], 2)
sub = {A: M0, B0: vals[0], B1: vals[1], B2: vals[2]}
verdict("3.24->3.25 printed vanishes (a = m, b = 1/m')",
        zero(T325_printed.subs(sub, simultaneous=True).subs(M3, M3a_solved)))
verdict("3.24->3.25 computed (+6ab^3, plus signs) vanishes",
        zero(T325_computed.subs(sub, simultaneous=True).subs(M3, M3a_solved)))

# ----------------------------------------------------- 3.24 -> post-3.25
Tpost_printed = (B2 - 3 * B1**2 / B0 - (10 / A - 11 * B0) * B1
                 - 15 * B0 / A**2 + 40 * B0**2 / A
                 - (6 * A**3 + 46 * A**2) * B0**3 / A**2
                 + (12 * A**4 + 24 * A**3) * B0**4 / A**2)
cands = {
    "a = m n^2, b = m' n^3": (M0 * n_**2, M1 * n_**3),
    "a = m n^2, b = 1/(m' n^3)": (M0 * n_**2, 1 / (M1 * n_**3)),
}
for name, (a_e, b_e) in cands.items():
    vals = push_dep(a_e, b_e, n_, [M0, M1, M2, M3], 2)
    pushed = Tpost_printed.subs({A: a_e, B0: vals[0], B1: vals[1],
                                 B2: vals[2]}, simultaneous=True)
    verdict(f"3.24->post-3.25 printed vanishes, {name}",
            zero(sp.cancel(pushed.subs(M3, M3a_solved))))

# corrected target via the section n = 1 for each candidate
for name, (a_e, b_e) in cands.items():
    vals = push_dep(a_e, b_e, n_, [M0, M1, M2, M3], 2)
    v0, v1, v2 = [sp.cancel(q.subs(M3, M3a_solved)) for q in vals]
    sec = {n_: 1}
    As, Bs, B1s = sp.symbols("As Bs B1s")
    sol = sp.solve([sp.Eq(a_e.subs(sec), As), sp.Eq(v0.subs(sec), Bs),
                    sp.Eq(v1.subs(sec), B1s)], [M0, M1, M2], dict=True)
    if not sol:
        print(f"  post-3.25 section solve failed for {name}")
        continue
    target = sp.cancel(sp.together(v2.subs(sec).subs(sol[0])))
    target = sp.cancel(sp.expand(target))
    print(f"  computed post-3.25 target, {name}:")
    print(f"    b'' = {target}")
    if name.endswith("m' n^3"):
        post325_computed = target.subs({As: A, Bs: B0, B1s: B1})

# -------------------------------------------------------------- 3.27 -> 3.28
E327s = M3 + 6 * M1 * M0
M3b_solved = sp.solve(sp.Eq(E327s, 0), M3)[0]
T328_verbatim = B0 + 3 * B1**2 / B0
T328_bpp = B2 + 3 * B1**2 / B0
T328_computed = B2 - 3 * B1**2 / B0 - 6 * A * B0**3
vals = push_dep(M0, 1 / M1, n_, [M0, M1, M2, M3], 2)
sub = {A: M0, B0: vals[0], B1: vals[1], B2: vals[2]}
for nm, T in [("verbatim (b + 3b'^2/b)", T328_verbatim),
              ("b'' reading (b'' + 3b'^2/b)", T328_bpp),
              ("computed (b'' - 3b'^2/b - 6ab^3)", T328_computed)]:
    verdict(f"3.27->3.28 {nm} vanishes",
            zero(T.subs(sub, simultaneous=True).subs(M3, M3b_solved)))

# -------------------------------------------------------------- 3.20 -> 3.21
V4_320 = sp.solve(sp.Eq(F320, 0), Vd(4))[0]
Vs = sp.symbols("Vb0:5")
F320s = F320.xreplace({sp.Derivative(v, (rr, k)): Vs[k] for k in range(4, 0, -1)})
F320s = F320s.xreplace({v: Vs[0]})
V4s_320 = sp.solve(sp.Eq(F320s, 0), Vs[4])[0]
m_e = Vs[1] * rr**sp.Rational(-1, 3) - Vs[0] * rr**sp.Rational(-4, 3) / 3
mvals = push_dep(rr, m_e, rr, list(Vs), 3)
T321 = (M3 + 4 * M2 / n_
        + (2 * M0 / n_**sp.Rational(2, 3)
           + (6 * n_**sp.Rational(8, 3) + 180 * n_**sp.Rational(5, 3) * al)
           / (n_**sp.Rational(11, 3) * al)) * M1
        + 4 * M0**2 / (3 * n_**sp.Rational(5, 3))
        + 5 * M0 / (81 * n_**2 * al))
pushed = T321.subs({n_: rr, M0: mvals[0], M1: mvals[1], M2: mvals[2],
                    M3: mvals[3]}, simultaneous=True)
res321 = sp.cancel(sp.together(pushed.subs(Vs[4], V4s_320)))
ok321 = zero(res321)
verdict("3.20(computed)->3.21 printed vanishes (m = (v r^{-1/3})')", ok321)
if not ok321:
    # corrected target via the section v = 0 (gauge along r^{1/3} d_v)
    m_on = [sp.cancel(q.subs(Vs[4], V4s_320)) for q in mvals]
    sec = {Vs[0]: 0}
    M0s, M1s, M2s = sp.symbols("M0s M1s M2s")
    sol = sp.solve([sp.Eq(m_on[0].subs(sec), M0s),
                    sp.Eq(m_on[1].subs(sec), M1s),
                    sp.Eq(m_on[2].subs(sec), M2s)], [Vs[1], Vs[2], Vs[3]],
                   dict=True)
    target = sp.cancel(sp.together(m_on[3].subs(sec).subs(sol[0])))
    target = sp.radsimp(sp.cancel(sp.expand(target)))
    print("  computed 3.21 target:")
    print(f"    m''' = {sp.expand(target)}")
    t321_computed = target
    # cross-check: the computed target must itself vanish under the push
    chk = (M3 - target.subs({M0s: M0, M1s: M1, M2s: M2, rr: n_}))
    chk = chk.subs({n_: rr, M0: mvals[0], M1: mvals[1], M2: mvals[2],
                    M3: mvals[3]}, simultaneous=True)
    verdict("computed 3.21 target vanishes under the push",
            zero(sp.cancel(sp.together(chk.subs(Vs[4], V4s_320)))))

print()
print("=" * 72)
print("C. The Gamma_3b dead end: the reduction does not close")
print("=" * 72)
# Invariants of d_s + (cs/7 - w) d_w need e^s; write Es for e^{-s}.
# z = (w - cs/7 + c/7) e^s, q(z) = (w' - c/7) e^s, dz/ds = q + z.
z0, q0, q1, q2, q3 = sp.symbols("z0 q0:4")
Es = sp.Symbol("Es", positive=True)


def Dz(F):
    return sp.diff(F, z0) + q1 * sp.diff(F, q0) + q2 * sp.diff(F, q1) \
        + q3 * sp.diff(F, q2)


A1 = q1 * (q0 + z0) - q0            # w'' = Es * A1
A2 = (q0 + z0) * Dz(A1) - A1        # w''' = Es * A2
A3 = (q0 + z0) * Dz(A2) - A2        # w'''' = Es * A3
g1 = sp.expand((al + be) * A3 + (c * (6 * al + 8 * be) / 7 - c) * A1)
g2 = sp.expand((6 * al + 8 * be) * q0 * A1)
print("  pushed 3.2 = Es*P1 + Es^2*P2 with")
print(f"    P1 = {g1}")
print(f"    P2 = {g2}")
verdict("grading splits (P2 not identically zero): no closed reduction",
        not zero(g2))
verdict("P2 nonzero even at the binding 3a+4b=7", not zero(g2.subs(BIND)))

print()
print("=" * 72)
print("D. Symmetry checks on computed targets")
print("=" * 72)
from jetkit import symmetry_residual  # noqa: E402

# 3.15 catalog against computed 3.14; lead = p_ddde
lead314 = (dd, dd, dd, ee)
co = F314.coeff(sp.Derivative(P, (dd, 3), ee))
rhs314 = sp.solve(sp.Eq(F314, 0), sp.Derivative(P, (dd, 3), ee))[0]
print(f"  computed 3.14 leading coefficient on p_ddde: {co}")
for nm, xi, eta in [
    ("G1d = e^{1/3} d_p", {dd: 0, ee: 0}, ee**sp.Rational(1, 3)),
    ("G2d = e^{-1/3} d_d + e^{2/3}/(12 beta) d_p",
     {dd: ee**sp.Rational(-1, 3), ee: 0}, ee**sp.Rational(2, 3) / (12 * be)),
]:
    r = symmetry_residual(F314, P, (dd, ee), xi, eta, lead314, rhs314)
    verdict(f"{nm} on computed 3.14", zero(r))

# sole symmetry of computed 3.20: r^{1/3} d_v
from jetkit import frechet  # noqa: E402
r320 = frechet(F320, v, rr**sp.Rational(1, 3))
r320 = on_shell(r320, v, (rr, rr, rr, rr), V4_320)
verdict("r^{1/3} d_v on computed 3.20", zero(sp.cancel(sp.together(r320))))

print()
print("=" * 72)
print("E. Linearization battery (I1 = f_pppp, I2 = Tresse second invariant)")
print("=" * 72)
X_, Y_, Pp = sp.symbols("X Y P")


def lin(nm, f, expect):
    I1, I2 = linearization_invariants(f, X_, Y_, Pp)
    ok = (zero(I1) and zero(I2)) == expect
    verdict(f"{nm}: linearizable={zero(I1) and zero(I2)} (expected {expect})"
            + ("" if ok else "  <-- SURPRISE"), ok)
    if not (zero(I1) and zero(I2)):
        print(f"      I1 = {sp.simplify(I1)}")
        print(f"      I2 = {sp.factor(sp.simplify(I2))}")


lin("w'' = 0", sp.Integer(0), True)
lin("y'' = -p^2/y", -Pp**2 / Y_, True)
lin("y'' = y p^3", Y_ * Pp**3, True)
lin("y'' = y^2", Y_**2, False)
lin("y'' = 6y^2 + x", 6 * Y_**2 + X_, False)
lin("y'' = y p", Y_ * Pp, False)

lin("3.25 printed  b'' = -3p^2/b - 10p/a - 15b/a^2",
    -3 * Pp**2 / Y_ - 10 * Pp / X_ - 15 * Y_ / X_**2, True)
lin("3.25 computed b'' = 3p^2/b + 10p/a + 15b/a^2 + 6ab^3",
    3 * Pp**2 / Y_ + 10 * Pp / X_ + 15 * Y_ / X_**2 + 6 * X_ * Y_**3, True)
lin("3.7 printed", 3 * Pp**2 / Y_ + 10 * Pp / X_
    + (14 * X_ - X_**2 * c) * Y_**3 / (al + be) + 15 * Y_ / X_**2, True)
lin("3.11 printed (q -> j)", 3 * Pp**2 / Y_
    - (c - 14 * X_) * Y_**3 / (al + be), True)
lin("3.28 computed b'' = 3p^2/b + 6ab^3",
    3 * Pp**2 / Y_ + 6 * X_ * Y_**3, True)
lin("3.12 printed", 3 * Pp**2 / Y_ + 9 * Y_ * Pp
    + (26 * al + 26 * be + 14 * X_) * Y_**3 / (al + be)
    - (24 * al * X_ + 24 * be * X_ + 28 * X_**2) * Y_**4 / (al + be), False)
fpost = (3 * Pp**2 / Y_ + (10 / X_ - 11 * Y_) * Pp + 15 * Y_ / X_**2
         - 40 * Y_**2 / X_ + (6 * X_**3 + 46 * X_**2) * Y_**3 / X_**2
         - (12 * X_**4 + 24 * X_**3) * Y_**4 / X_**2)
lin("post-3.25 display, prime-squared reading", fpost, False)
fpost2 = sp.cancel((fpost - 3 * Pp**2 / Y_) * Y_ / (Y_ - 3))
lin("post-3.25 display, double-prime reading", fpost2, False)
try:
    fpc = post325_computed.subs({A: X_, B0: Y_, B1: Pp}, simultaneous=True)
    lin("post-3.25 computed (a = mn^2, b = m'n^3)", fpc, False)
except NameError:
    pass
try:
    f312c = sp.expand(computed312.subs({lsym: X_, ksym: Y_, k1sym: Pp}))
    lin("3.12 computed", f312c, False)
except NameError:
    pass

print()
print("done.")
