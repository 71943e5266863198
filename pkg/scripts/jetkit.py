"""Jet-calculus helpers built directly on sympy Function/Derivative objects.

Used by the oracle scripts to cross-check every value that the test suite
freezes.  Deliberately shares no code with the installed package: everything
here goes through sympy's own chain rule on explicit Function objects, so a
bug in the package kernel cannot hide behind the same bug here.
"""

from __future__ import annotations

import itertools
import math

import sympy as sp


def jet_map(expr: sp.Expr, u: sp.Expr) -> dict:
    """Map each derivative-of-u atom (and u itself) to a fresh Dummy."""
    m = {}
    for d in expr.atoms(sp.Derivative):
        if d.expr == u:
            m[d] = sp.Dummy()
    if expr.has(u):
        m[u] = sp.Dummy()
    return m


def partial_wrt(expr: sp.Expr, atom: sp.Expr, u: sp.Expr) -> sp.Expr:
    """Formal partial derivative of expr with respect to a single jet atom."""
    m = jet_map(expr, u)
    if atom not in m:
        return sp.S.Zero
    back = {v: k for k, v in m.items()}
    return expr.xreplace(m).diff(m[atom]).xreplace(back)


def vars_of(d: sp.Derivative) -> tuple:
    """Flatten a Derivative's variable_count into an ordered tuple."""
    out = []
    for v, k in d.variable_count:
        out.extend([v] * int(k))
    return tuple(out)


def frechet(expr: sp.Expr, u: sp.Expr, direction: sp.Expr) -> sp.Expr:
    """Directional derivative of expr along a variation of u."""
    out = sp.S.Zero
    for d in expr.atoms(sp.Derivative):
        if d.expr == u:
            out += partial_wrt(expr, d, u) * sp.diff(direction, *vars_of(d))
    if expr.has(u):
        out += partial_wrt(expr, u, u) * direction
    return out


def on_shell(expr: sp.Expr, u: sp.Expr, lead: tuple, rhs: sp.Expr,
             rounds: int = 20) -> sp.Expr:
    """Rewrite every derivative of u whose multi-index contains the lead
    multi-index by the matching derivative of rhs, to a fixed point."""
    lead_counts: dict = {}
    for v in lead:
        lead_counts[v] = lead_counts.get(v, 0) + 1
    expr = sp.expand(expr)
    for _ in range(rounds):
        repl = {}
        for d in expr.atoms(sp.Derivative):
            if d.expr != u:
                continue
            cnt = {v: int(k) for v, k in d.variable_count}
            if all(cnt.get(v, 0) >= k for v, k in lead_counts.items()):
                extra = []
                for v, k in cnt.items():
                    extra.extend([v] * (k - lead_counts.get(v, 0)))
                repl[d] = sp.diff(rhs, *extra) if extra else rhs
        if not repl:
            return expr
        expr = sp.expand(expr.xreplace(repl))
    raise RuntimeError("on-shell rewriting did not reach a fixed point")


def tidy(expr: sp.Expr) -> sp.Expr:
    """Expanded-numerator-over-denominator normal form; zero iff zero."""
    e = sp.cancel(sp.together(sp.expand(expr)))
    n, d = sp.fraction(e)
    return sp.expand(n) / d


def symmetry_residual(E: sp.Expr, u: sp.Expr, coords: tuple, xi: dict,
                      eta: sp.Expr, lead: tuple, rhs: sp.Expr) -> sp.Expr:
    """On-shell residual of the prolonged action of a point field on E."""
    Q = eta - sum(xi.get(v, sp.S.Zero) * u.diff(v) for v in coords)
    act = frechet(E, u, Q)
    for v in coords:
        g = xi.get(v, sp.S.Zero)
        if g != 0:
            act += g * sp.diff(E, v)
    return tidy(on_shell(act, u, lead, rhs))


def prolonged_action(E: sp.Expr, u: sp.Expr, coords: tuple, xi: dict,
                     eta: sp.Expr) -> sp.Expr:
    """Off-shell prolonged action (no on-shell rewriting)."""
    Q = eta - sum(xi.get(v, sp.S.Zero) * u.diff(v) for v in coords)
    act = frechet(E, u, Q)
    for v in coords:
        g = xi.get(v, sp.S.Zero)
        if g != 0:
            act += g * sp.diff(E, v)
    return tidy(act)


def euler(L: sp.Expr, u: sp.Expr) -> sp.Expr:
    """Variational derivative of L with respect to u."""
    out = partial_wrt(L, u, u)
    for d in L.atoms(sp.Derivative):
        if d.expr == u:
            vs = vars_of(d)
            out += (-1) ** len(vs) * sp.diff(partial_wrt(L, d, u), *vs)
    return sp.expand(out)


def multiplicity(t: tuple) -> int:
    """Number of distinct orderings of the multiset t."""
    c: dict = {}
    for v in t:
        c[v] = c.get(v, 0) + 1
    m = math.factorial(len(t))
    for k in c.values():
        m //= math.factorial(k)
    return m


def tuple_partial(L: sp.Expr, u: sp.Expr, t: tuple) -> sp.Expr:
    """Per-ordered-tuple partial: the multiset partial split evenly over
    the orderings of the tuple."""
    atom = u.diff(*t)
    return partial_wrt(L, atom, u) / multiplicity(t)


def conserved_currents(L: sp.Expr, u: sp.Expr, coords: tuple, xi: dict,
                       eta: sp.Expr, order: int = 4) -> dict:
    """Current construction from a point field and a first-order-in-v
    Lagrangian of jet order <= order (bracket series truncated there)."""
    W = eta - sum(xi.get(v, sp.S.Zero) * u.diff(v) for v in coords)
    C = {}
    for i in coords:
        ci = xi.get(i, sp.S.Zero) * L
        for k in range(order):
            for js in itertools.product(coords, repeat=k):
                dw = sp.diff(W, *js) if js else W
                if dw == 0:
                    continue
                br = sp.S.Zero
                for r in range(order - k):
                    for ls in itertools.product(coords, repeat=r):
                        p = tuple_partial(L, u, (i,) + js + ls)
                        if p != 0:
                            q = sp.diff(p, *ls) if ls else p
                            br += (-1) ** r * q
                ci += dw * br
        C[i] = sp.expand(ci)
    return C


def divergence(C: dict, coords: tuple) -> sp.Expr:
    return sp.expand(sum(sp.diff(C[v], v) for v in coords))


def dep_jets(name: str, order: int) -> list:
    """Plain symbols standing for jet values of a one-variable dependent."""
    return [sp.Symbol(f"{name}{k}") for k in range(order + 1)]


def d_along(expr: sp.Expr, var: sp.Symbol, jets: list) -> sp.Expr:
    """Total derivative of an expression in (var, jet-value symbols), the
    k-th jet symbol differentiating to the (k+1)-th."""
    out = sp.diff(expr, var)
    for k in range(len(jets) - 1):
        out += sp.diff(expr, jets[k]) * jets[k + 1]
    return out


def linearization_invariants(f: sp.Expr, x: sp.Symbol, y: sp.Symbol,
                             p: sp.Symbol) -> tuple:
    """The two classical relative invariants of y'' = f(x, y, p): the
    equation is point-linearizable iff both vanish identically."""
    def Dx(g):
        return sp.diff(g, x) + p * sp.diff(g, y) + f * sp.diff(g, p)

    I1 = sp.diff(f, p, 4)
    fp = sp.diff(f, p)
    fpp = sp.diff(f, p, 2)
    fpy = sp.diff(sp.diff(f, p), y)
    I2 = (Dx(Dx(fpp)) - 4 * Dx(fpy) - fp * Dx(fpp) + 4 * fp * fpy
          - 3 * sp.diff(f, y) * fpp + 6 * sp.diff(f, y, 2))
    return sp.simplify(I1), sp.simplify(sp.cancel(sp.together(I2)))
