"""Numeric lane: closed-form travelling pulse, adaptive Runge-Kutta
integration of the reduced equations, lifts back to the 2+1 frame, and
pointwise residual / flux-divergence spot checks.

Everything here works in plain floats; the symbolic kernel is used only
to prepare compiled right-hand sides and divergence expressions, so the
numeric lane exercises the same equation objects the symbolic lane
certifies.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from . import bkmodel
from .prolong import PreconditionError, solve_for_leading
from .reduce import catalog_equations
from .symkernel import (Atom, Expr, KernelError, SymbolContext,
                        atoms_of, compile_numeric, jet_atoms_of, parse,
                        total_derivative)


class IntegrationError(KernelError):
    """The stepper could not continue (singularity, blow-up)."""


class LiftError(KernelError):
    """A lifted solution was asked for something it cannot supply."""


# ------------------------------------------------------------ problems

@dataclass(frozen=True)
class OdeProblem:
    """One reduced equation prepared for integration.

    equation holds the highest derivative solved for in terms of the
    lower-order jets; the state vector is (w, w', ..., w^(order-1)).
    """

    equation: Expr
    order: int
    coord: str
    dep: str
    initial_point: float
    initial_values: tuple
    parameter_bindings: tuple    # sorted (name, float) pairs

    def __post_init__(self) -> None:
        if len(self.initial_values) != self.order:
            raise PreconditionError(
                f"need {self.order} initial values, got "
                f"{len(self.initial_values)}")
        if any(len(a.index) >= self.order
               for a in jet_atoms_of(self.equation, self.dep)):
            raise PreconditionError(
                "the solved form must only involve jets below the"
                " stated order")
        bound = {name for name, _ in self.parameter_bindings}
        loose = sorted(a.name for a in atoms_of(self.equation)
                       if a.kind == "param" and a.name not in bound)
        if loose:
            raise PreconditionError(
                "unbound parameters: " + ", ".join(loose))

    def rhs_callable(self) -> Callable:
        """(s, state) -> d(state)/ds as a tuple."""
        slots = [Atom("base", self.coord)]
        slots += [Atom("jet", self.dep, (self.coord,) * k)
                  for k in range(self.order)]
        params = sorted({a for a in atoms_of(self.equation)
                         if a.kind == "param"},
                        key=lambda a: a.sort_key())
        fn = compile_numeric(self.equation, tuple(slots) + tuple(params))
        table = dict(self.parameter_bindings)
        tail = tuple(table[a.name] for a in params)

        def f(s: float, y: Sequence[float]) -> tuple:
            top = fn(s, *y, *tail)
            return tuple(y[1:]) + (top,)

        return f


def ode_problem(eqid: str, initial_point: float,
                initial_values: Sequence[float],
                parameter_bindings: Mapping[str, float]
                | None = None) -> OdeProblem:
    """Build an OdeProblem from a catalog equation id."""
    eq = catalog_equations()[eqid]
    if len(eq.coords) != 1:
        raise PreconditionError(
            f"{eqid} has {len(eq.coords)} base variables; integration"
            " needs one")
    rhs, _ = solve_for_leading(eq.expr(), eq.lead)
    return OdeProblem(rhs, len(eq.lead.index), eq.coords[0], eq.dep,
                      float(initial_point),
                      tuple(float(v) for v in initial_values),
                      tuple(sorted((parameter_bindings or {}).items())))


_WAVE_CTX = SymbolContext(bases=frozenset({"s"}),
                          params=frozenset({"alpha", "beta", "c",
                                            "kconst"}),
                          jets=frozenset({"W"}), funcs=frozenset())


def travelling_wave_problem(alpha: float, beta: float, c: float,
                            initial_point: float,
                            initial_values: Sequence[float],
                            K: float = 0.0) -> OdeProblem:
    """Second-order problem for the once-integrated wave profile:

        (alpha+beta) W'' + (3 alpha + 4 beta) W^2 - c W = K

    with the integration constant K exposed (default 0)."""
    if alpha + beta == 0:
        raise PreconditionError("alpha + beta must be nonzero")
    rhs = parse("(c*W[] - (3*alpha + 4*beta)*W[]^2 + kconst)"
                "/(alpha + beta)", _WAVE_CTX)
    return OdeProblem(rhs, 2, "s", "W", float(initial_point),
                      tuple(float(v) for v in initial_values),
                      (("alpha", float(alpha)), ("beta", float(beta)),
                       ("c", float(c)), ("kconst", float(K))))


# ----------------------------------------------------------- stepping

# Fehlberg embedded 4(5) pair
_A = (
    (),
    (0.25,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40),
)
_C = (0.0, 0.25, 0.375, 12 / 13, 1.0, 0.5)
_B4 = (25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -0.2, 0.0)
_B5 = (16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55)


def _rk_step(f: Callable, s: float, y: tuple, h: float) -> tuple:
    """(4th-order step, local error estimate, stage-1 slope)."""
    k = [f(s, y)]
    for i in range(1, 6):
        yi = tuple(v + h * sum(a * k[j][m] for j, a in enumerate(_A[i]))
                   for m, v in enumerate(y))
        k.append(f(s + _C[i] * h, yi))
    y4 = tuple(v + h * sum(b * k[j][m] for j, b in enumerate(_B4))
               for m, v in enumerate(y))
    y5 = tuple(v + h * sum(b * k[j][m] for j, b in enumerate(_B5))
               for m, v in enumerate(y))
    err = max(abs(a - b) for a, b in zip(y4, y5))
    return y4, err, k[0]


def _finite(y: Sequence[float]) -> bool:
    return all(math.isfinite(v) for v in y)


@dataclass(frozen=True)
class NumericSolution:
    grid: tuple
    values: tuple          # state vector per grid point
    error_estimate: tuple  # accepted local error per grid point
    method_order: int
    slopes: tuple          # state derivative per grid point

    def __post_init__(self) -> None:
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise PreconditionError("grid must be strictly increasing")
        if not all(math.isfinite(e) for e in self.error_estimate):
            raise PreconditionError("error estimates must be finite")

    @property
    def span(self) -> tuple:
        return (self.grid[0], self.grid[-1])


def integrate_ode(problem: OdeProblem, span: tuple,
                  tolerance: float = 1e-10) -> NumericSolution:
    """Adaptive embedded-pair integration over span = (a, b).

    The accepted local error of every step is at most tolerance; the
    4th-order solution is propagated and per-point slopes are kept for
    cubic Hermite dense output."""
    a, b = float(span[0]), float(span[1])
    if not a < b:
        raise PreconditionError("span must satisfy a < b")
    if abs(problem.initial_point - a) > 1e-12 * max(1.0, abs(a)):
        raise PreconditionError(
            "integration starts at the problem's initial point")
    f = problem.rhs_callable()
    s, y = a, tuple(problem.initial_values)
    try:
        start_slope = f(s, y)
    except (ZeroDivisionError, OverflowError, ValueError):
        start_slope = (math.nan,)
    if not _finite(start_slope):
        raise PreconditionError(
            "right-hand side is not finite at the initial point;"
            " exclude singular points from the span")

    grid, values, errs, slopes = [s], [y], [0.0], [start_slope]
    h = (b - a) / 64.0
    h_min = 1e-13 * (b - a)
    for _ in range(400000):
        if s >= b:
            break
        h = min(h, b - s)
        try:
            y4, err, _ = _rk_step(f, s, y, h)
        except (ZeroDivisionError, OverflowError, ValueError):
            raise IntegrationError(
                f"right-hand side blew up near {problem.coord} ="
                f" {s:.6g}")
        if not _finite(y4) or not math.isfinite(err):
            raise IntegrationError(
                f"non-finite state near {problem.coord} = {s + h:.6g}")
        if err <= tolerance:
            s, y = s + h, y4
            grid.append(s)
            values.append(y)
            errs.append(err)
            slopes.append(f(s, y))
            if not _finite(slopes[-1]):
                raise IntegrationError(
                    f"non-finite slope at {problem.coord} = {s:.6g}")
        factor = 5.0 if err == 0.0 else 0.9 * (tolerance / err) ** 0.2
        h *= min(5.0, max(0.2, factor))
        if h < h_min:
            raise IntegrationError(
                f"step underflow near {problem.coord} = {s:.6g}"
                " (singular point inside the span?)")
    else:
        raise IntegrationError("step budget exhausted")
    return NumericSolution(tuple(grid), tuple(values), tuple(errs), 4,
                           tuple(slopes))


def integrate_ode_fixed(problem: OdeProblem, span: tuple,
                        step: float) -> NumericSolution:
    """Fixed-step variant used for convergence-order measurements."""
    a, b = float(span[0]), float(span[1])
    n = max(1, round((b - a) / step))
    h = (b - a) / n
    f = problem.rhs_callable()
    s, y = a, tuple(problem.initial_values)
    grid, values, errs, slopes = [s], [y], [0.0], [f(s, y)]
    for i in range(n):
        try:
            y, err, _ = _rk_step(f, s, y, h)
        except (ZeroDivisionError, OverflowError, ValueError):
            raise IntegrationError(
                f"right-hand side blew up near {problem.coord} ="
                f" {s:.6g}")
        if not _finite(y):
            raise IntegrationError(
                f"non-finite state near {problem.coord} = {s:.6g}")
        s = a + (i + 1) * h
        grid.append(s)
        values.append(y)
        errs.append(err)
        slopes.append(f(s, y))
    return NumericSolution(tuple(grid), tuple(values), tuple(errs), 4,
                           tuple(slopes))


def _bracket(sol: NumericSolution, s: float) -> int:
    lo, hi = sol.span
    if s < lo or s > hi:
        raise LiftError(
            f"{s:.6g} lies outside the solved span [{lo:.6g},"
            f" {hi:.6g}]")
    import bisect
    i = bisect.bisect_right(sol.grid, s) - 1
    return min(max(i, 0), len(sol.grid) - 2)


def _hermite(y0: float, y1: float, d0: float, d1: float, h: float,
             u: float, deriv: int = 0) -> float:
    """Cubic Hermite on [0,1] (u normalized), scaled derivatives."""
    c0 = y0
    c1 = h * d0
    c2 = 3 * (y1 - y0) - h * (2 * d0 + d1)
    c3 = 2 * (y0 - y1) + h * (d0 + d1)
    if deriv == 0:
        return c0 + u * (c1 + u * (c2 + u * c3))
    if deriv == 1:
        return (c1 + u * (2 * c2 + 3 * u * c3)) / h
    if deriv == 2:
        return (2 * c2 + 6 * u * c3) / h ** 2
    raise LiftError("cubic dense output has no third derivative")


def evaluate(sol: NumericSolution, s: float,
             component: int = 0, deriv: int = 0) -> float:
    """Dense output: cubic Hermite interpolation of one state
    component, with optional spline differentiation (approximate)."""
    i = _bracket(sol, s)
    h = sol.grid[i + 1] - sol.grid[i]
    u = (s - sol.grid[i]) / h
    return _hermite(sol.values[i][component],
                    sol.values[i + 1][component],
                    sol.slopes[i][component],
                    sol.slopes[i + 1][component], h, u, deriv)


# ------------------------------------------------------ travelling wave

@dataclass(frozen=True)
class TravellingWave:
    """Closed-form pulse W(s) = amplitude * sech(width*s)^2 solving the
    once-integrated travelling-wave equation with zero constants:

        (alpha+beta) W'' + (3 alpha + 4 beta) W^2 - c W = 0
    """

    amplitude: float
    width: float
    speed: float
    alpha: float
    beta: float

    def profile(self, s: float, order: int = 0) -> float:
        """W and its first four derivatives, in closed form."""
        A, B = self.amplitude, self.width
        t = math.tanh(B * s)
        q = 1.0 - t * t    # sech^2
        if order == 0:
            return A * q
        if order == 1:
            return -2 * A * B * q * t
        if order == 2:
            return -2 * A * B ** 2 * q * (3 * q - 2)
        if order == 3:
            return -8 * A * B ** 3 * q * t * (1 - 3 * q)
        if order == 4:
            return 8 * A * B ** 4 * q * (15 * q * q - 15 * q + 2)
        raise LiftError("closed-form profile stops at order 4")

    def antiderivative(self, s: float) -> float:
        """w with w' = W and w(0) = 0."""
        if self.amplitude == 0.0:
            return 0.0
        return self.amplitude / self.width * math.tanh(self.width * s)

    def first_integral_residual(self, s: float, K: float = 0.0) -> float:
        lhs = ((self.alpha + self.beta) * self.profile(s, 2)
               + (3 * self.alpha + 4 * self.beta) * self.profile(s) ** 2
               - self.speed * self.profile(s))
        return lhs - K


def soliton(alpha: float, beta: float, c: float) -> TravellingWave:
    """Closed-form pulse for the given parameters.

    Preconditions: c/(alpha+beta) > 0 so the width is real, and
    3*alpha + 4*beta nonzero so the amplitude is finite."""
    if alpha + beta == 0 or c / (alpha + beta) <= 0:
        raise PreconditionError(
            "need c/(alpha + beta) > 0 for a real pulse width")
    if 3 * alpha + 4 * beta == 0:
        raise PreconditionError(
            "3*alpha + 4*beta = 0 makes the amplitude singular")
    return TravellingWave(amplitude=3 * c / (2 * (3 * alpha + 4 * beta)),
                          width=math.sqrt(c / (alpha + beta)) / 2,
                          speed=c, alpha=alpha, beta=beta)


# ----------------------------------------------------------------- lift

@dataclass(frozen=True)
class LiftedSolution:
    """u(t, x, y) = w(x + y - c t) sampled through a wave profile.

    exact lifts carry closed-form derivatives to jet order 5; lifts
    built on a NumericSolution differentiate splines instead, are
    flagged approximate, and stop at jet order 4."""

    speed: float
    alpha: float
    beta: float
    exact: bool
    max_jet_order: int
    span: tuple
    x_shift: float = 0.0
    wave: Callable = field(repr=False, default=None)

    def wave_derivative(self, s: float, k: int) -> float:
        lo, hi = self.span
        if not lo <= s <= hi:
            raise LiftError(
                f"wave coordinate {s:.6g} lies outside the solved span"
                f" [{lo:.6g}, {hi:.6g}]")
        if k > self.max_jet_order:
            kind = ("closed-form" if self.exact
                    else "approximate spline")
            raise LiftError(
                f"{kind} lift supplies derivatives up to order"
                f" {self.max_jet_order}, order {k} requested")
        return self.wave(s, k)

    def jet(self, t: float, x: float, y: float, index: tuple) -> float:
        s = (x + self.x_shift) + y - self.speed * t
        sign = (-self.speed) ** sum(1 for v in index if v == "t")
        return sign * self.wave_derivative(s, len(index))

    def value(self, t: float, x: float, y: float) -> float:
        return self.jet(t, x, y, ())

    def shifted(self, dx: float) -> "LiftedSolution":
        return replace(self, x_shift=self.x_shift + dx)


def lift(source, alpha: float | None = None,
         beta: float | None = None, speed: float | None = None,
         span: tuple = (-math.inf, math.inf)) -> LiftedSolution:
    """Lift a wave profile to the 2+1 frame.

    TravellingWave sources are closed-form; NumericSolution sources
    (state component 0 holding W = w') interpolate with cubic Hermite
    splines, recover w by exact piecewise quadrature of the
    interpolant, and refuse jet order 5."""
    if isinstance(source, TravellingWave):
        def wave(s: float, k: int) -> float:
            if k == 0:
                return source.antiderivative(s)
            return source.profile(s, k - 1)

        return LiftedSolution(source.speed, source.alpha, source.beta,
                              True, 5, span, 0.0, wave)

    if isinstance(source, NumericSolution):
        if alpha is None or beta is None or speed is None:
            raise PreconditionError(
                "a numeric lift needs alpha, beta, and the wave speed")
        order = len(source.values[0])
        cumulative = [0.0]
        for i in range(len(source.grid) - 1):
            h = source.grid[i + 1] - source.grid[i]
            w0, w1 = source.values[i][0], source.values[i + 1][0]
            d0, d1 = source.slopes[i][0], source.slopes[i + 1][0]
            # exact integral of the cubic Hermite piece
            cumulative.append(cumulative[-1] + h * (w0 + w1) / 2
                              + h * h * (d0 - d1) / 12)

        def wave(s: float, k: int) -> float:
            if k == 0:
                i = _bracket(source, s)
                h = source.grid[i + 1] - source.grid[i]
                u = (s - source.grid[i]) / h
                w0 = source.values[i][0]
                w1 = source.values[i + 1][0]
                d0 = source.slopes[i][0]
                d1 = source.slopes[i + 1][0]
                # antiderivative of the Hermite cubic on the piece
                c1 = h * d0
                c2 = 3 * (w1 - w0) - h * (2 * d0 + d1)
                c3 = 2 * (w0 - w1) + h * (d0 + d1)
                return (cumulative[i]
                        + h * u * (w0 + u * (c1 / 2
                                             + u * (c2 / 3
                                                    + u * c3 / 4))))
            if k - 1 < order:
                return evaluate(source, s, component=k - 1)
            return evaluate(source, s, component=order - 1,
                            deriv=k - order)

        return LiftedSolution(float(speed), float(alpha), float(beta),
                              False, 4,
                              (source.grid[0], source.grid[-1]), 0.0,
                              wave)

    raise PreconditionError(
        "lift sources are TravellingWave or NumericSolution")


def linear_wave_lift(speed: float = 1.0, alpha: float = 1.0,
                     beta: float = 1.0) -> LiftedSolution:
    """Trivial exact control: w(s) = s, so every second derivative of
    the lifted u vanishes."""
    def wave(s: float, k: int) -> float:
        return s if k == 0 else (1.0 if k == 1 else 0.0)

    return LiftedSolution(speed, alpha, beta, True, 5,
                          (-math.inf, math.inf), 0.0, wave)


# ----------------------------------------------------- residual checks

@dataclass(frozen=True)
class SpotCheck:
    max_abs: float
    mean_abs: float
    points: int


def _sample_points(lifted: LiftedSolution, points: int, seed,
                   box: float, s_cap: float) -> list:
    rng = random.Random(f"spot:{seed}")
    out = []
    guard = 0
    while len(out) < points:
        guard += 1
        if guard > 1000 * points:
            raise PreconditionError(
                "sampling region rejects nearly all points; widen the"
                " wave-coordinate cap")
        t = rng.uniform(-box, box)
        x = rng.uniform(-box, box)
        y = rng.uniform(-box, box)
        s = (x + lifted.x_shift) + y - lifted.speed * t
        lo, hi = lifted.span
        if abs(s) <= s_cap and lo <= s <= hi:
            out.append((t, x, y))
    return out


def pde_residual(lifted: LiftedSolution, points: int = 1000,
                 seed=0, box: float = 5.0,
                 s_cap: float = 10.0) -> SpotCheck:
    """Max and mean absolute value of the 2+1 equation on the lift at
    seeded random points with the wave coordinate capped."""
    eq = bkmodel.equation()
    jets = sorted(jet_atoms_of(eq, "u"), key=lambda a: a.sort_key())
    fn = compile_numeric(eq, tuple(jets)
                         + (Atom("param", "alpha"),
                            Atom("param", "beta")))
    worst = total = 0.0
    pts = _sample_points(lifted, points, seed, box, s_cap)
    for (t, x, y) in pts:
        vals = [lifted.jet(t, x, y, a.index) for a in jets]
        r = abs(fn(*vals, lifted.alpha, lifted.beta))
        worst = max(worst, r)
        total += r
    return SpotCheck(worst, total / points, points)


def numeric_divergence(triple: bkmodel.ConservedTriple,
                       lifted: LiftedSolution, points: int = 1000,
                       seed=0, phi: float = 1.0, box: float = 5.0,
                       s_cap: float = 10.0) -> SpotCheck:
    """Pointwise total divergence of a flux triple on an exact lift.

    The divergence is differentiated symbolically and evaluated on
    closed-form jets, which reach order 5; approximate lifts are
    refused.  The multiplier slot is bound to the constant phi."""
    if not lifted.exact:
        raise LiftError(
            "divergence needs fifth-order jets; spline lifts stop at"
            " order 4")
    div = None
    for v, comp in zip(("t", "x", "y"), triple.components):
        term = total_derivative(comp, v)
        div = term if div is None else div + term
    funcs = sorted({a.name for a in atoms_of(div)
                    if a.kind == "func"})
    if funcs:
        raise PreconditionError(
            "bind function slots to concrete instances first: "
            + ", ".join(funcs))
    jets = sorted(jet_atoms_of(div, "u"), key=lambda a: a.sort_key())
    bases = (Atom("base", "t"), Atom("base", "x"), Atom("base", "y"))
    params = sorted({a for a in atoms_of(div) if a.kind == "param"},
                    key=lambda a: a.sort_key())
    fn = compile_numeric(div, tuple(jets) + bases + tuple(params))
    bound = {"alpha": lifted.alpha, "beta": lifted.beta, "phi": phi}
    tail = []
    for a in params:
        if a.name not in bound:
            raise PreconditionError(f"no value for parameter {a.name}")
        tail.append(bound[a.name])
    worst = total = 0.0
    pts = _sample_points(lifted, points, seed, box, s_cap)
    for (t, x, y) in pts:
        vals = [lifted.jet(t, x, y, a.index) for a in jets]
        r = abs(fn(*vals, t, x, y, *tail))
        worst = max(worst, r)
        total += r
    return SpotCheck(worst, total / points, points)


def quadrature_consistency(lifted: LiftedSolution,
                           samples: Sequence[float]) -> float:
    """Max gap between the derivative of the recovered w and W at the
    given wave coordinates, via symmetric differencing."""
    worst = 0.0
    lo, hi = lifted.span
    for s in samples:
        d = 1e-6 * max(1.0, abs(s))
        if not (lo <= s - d and s + d <= hi):
            continue
        slope = (lifted.wave_derivative(s + d, 0)
                 - lifted.wave_derivative(s - d, 0)) / (2 * d)
        worst = max(worst, abs(slope - lifted.wave_derivative(s, 1)))
    return worst


def convergence_ratio(problem: OdeProblem, span: tuple, step: float,
                      reference: Callable) -> float:
    """Error-reduction factor when the fixed step is halved, measured
    against a reference callable s -> exact first component."""
    def max_err(h: float) -> float:
        sol = integrate_ode_fixed(problem, span, h)
        return max(abs(v[0] - reference(s))
                   for s, v in zip(sol.grid, sol.values))

    return max_err(step) / max_err(step / 2)
