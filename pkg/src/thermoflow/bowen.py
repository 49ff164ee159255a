"""Root of ``t -> P(delta - t * roof)``.

The map is strictly decreasing with slope between ``-max roof`` and
``-min roof``, so the root is unique.  Solving is bracketed bisection; an
optional Newton step uses the derivative ``-integral(roof, mu_t)`` at the
equilibrium state ``mu_t`` and is discarded whenever it leaves the bracket.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import BracketFailure
from .potential import LcPotential, Roof, combine, common_depth
from .pressure import equilibrium, integrate, pressure, topological_entropy

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
TARGET_TOL = 1e-12
MAX_ITER = 400
MAX_EXPAND = 200


@dataclass(frozen=True, eq=False)
class BowenProblem:
    delta: LcPotential
    roof: Roof

    def __post_init__(self):
        delta, roof = common_depth(self.delta, self.roof)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "roof", Roof.of(roof))

    @classmethod
    def entropy_of(cls, roof: Roof) -> "BowenProblem":
        return cls(LcPotential.zero(roof.sft), roof)


@dataclass(frozen=True)
class BowenSolution:
    t_star: float
    bracket: tuple[float, float]
    residual: float
    iterations: int


def pressure_at(problem: BowenProblem, t: float) -> float:
    return pressure(combine(problem.delta, problem.roof, 1.0, -t)).value


def initial_bracket(problem: BowenProblem) -> tuple[float, float]:
    """Bracket from ``h + min d - t max r <= P(d - t r) <= h + max d - t min r``.

    Those bounds hold for ``t >= 0``; for ``t < 0`` the roles of ``min r`` and
    ``max r`` swap, so the bracket spans the roots of all four lines.
    """
    h = topological_entropy(problem.delta.sft)
    d, r = problem.delta, problem.roof
    roots = [(h + dv) / rv for dv in (d.min(), d.max()) for rv in (r.min(), r.max())]
    lo, hi = min(roots), max(roots)
    slack = 1e-6 + 1e-3 * (hi - lo)
    return lo - slack, hi + slack


def _value_and_slope(problem: BowenProblem, t: float, want_slope: bool):
    pot = combine(problem.delta, problem.roof, 1.0, -t)
    res = pressure(pot)
    if not want_slope:
        return res.value, None
    mu = equilibrium(pot, res)
    return res.value, -integrate(problem.roof, mu)


def solve(problem: BowenProblem, tol: float = TARGET_TOL, newton: bool = True) -> BowenSolution:
    """Unique ``t`` with ``P(delta - t * roof) = 0``.

    Iterates until ``|P| <= tol``.  If the bracket collapses to rounding
    level first, the midpoint is accepted provided ``|P| <= 1e-10``.
    """
    lo, hi = initial_bracket(problem)
    f_lo, _ = _value_and_slope(problem, lo, False)
    f_hi, _ = _value_and_slope(problem, hi, False)
    width = max(hi - lo, 1e-3)
    for _ in range(MAX_EXPAND):
        if f_lo >= 0:
            break
        lo -= width
        width *= 2
        f_lo, _ = _value_and_slope(problem, lo, False)
    for _ in range(MAX_EXPAND):
        if f_hi <= 0:
            break
        hi += width
        width *= 2
        f_hi, _ = _value_and_slope(problem, hi, False)
    if not (f_lo >= 0 >= f_hi):
        raise BracketFailure(f"no sign change on [{lo!r}, {hi!r}]")
    if f_lo == 0:
        return BowenSolution(lo, (lo, lo), 0.0, 0)
    if f_hi == 0:
        return BowenSolution(hi, (hi, hi), 0.0, 0)

    t = 0.5 * (lo + hi)
    for it in range(1, MAX_ITER + 1):
        f, slope = _value_and_slope(problem, t, newton)
        if abs(f) <= tol:
            return BowenSolution(t, (lo, hi), abs(f), it)
        if f > 0:
            lo = t
        else:
            hi = t
        if hi - lo <= 4e-16 * max(1.0, abs(t)):
            if abs(f) <= RESIDUAL_TOL:
                return BowenSolution(t, (lo, hi), abs(f), it)
            raise BracketFailure(f"bracket collapsed at t={t!r} with residual {f!r}")
        t_next = 0.5 * (lo + hi)
        if newton and slope is not None and slope < 0:
            cand = t - f / slope
            if lo < cand < hi:
                t_next = cand
        log.debug("bowen it=%d t=%r f=%r bracket=(%r, %r)", it, t, f, lo, hi)
        t = t_next
    raise BracketFailure(f"no root within {MAX_ITER} iterations")
