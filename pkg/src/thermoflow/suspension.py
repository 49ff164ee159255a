"""Suspension semi-flows over a shift with a locally constant roof.

Flow-invariant measures are stored through the base measure they come from
(``FlowMeasure``); observables on the suspension space are polynomials in the
fibre time on each base cylinder (``FiberPotential``), so their fibre
integrals are computed in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from numpy.polynomial import polynomial as P

from .bowen import BowenProblem, BowenSolution, solve
from .errors import MismatchedSft, ValidationError, VerificationError
from .potential import LcPotential, Roof, common_depth
from .pressure import MarkovMeasure, entropy, equilibrium, integrate
from .sft import Sft, Word

MAX_DEGREE = 8
MME_TOL = 1e-8


class FiberPotential:
    """``g(x, t) = sum_d coeffs[w][d] * t**d`` where ``w`` is the depth-k prefix of x."""

    def __init__(self, sft: Sft, depth: int, coeffs, max_degree: int = MAX_DEGREE):
        coeffs = np.array(coeffs, dtype=np.float64)
        shape = (sft.n,) * depth
        if coeffs.ndim != depth + 1 or coeffs.shape[:-1] != shape:
            raise ValidationError(f"coefficients must have shape {shape} + (degree+1,)")
        if coeffs.shape[-1] - 1 > max_degree:
            raise ValidationError(f"degree {coeffs.shape[-1] - 1} exceeds the cap {max_degree}")
        mask = sft.mask(depth)
        if not np.all(np.isfinite(coeffs[mask])):
            raise ValidationError("coefficients must be finite")
        coeffs[~mask] = 0.0
        coeffs.flags.writeable = False
        self.sft = sft
        self.depth = depth
        self.coeffs = coeffs

    @property
    def degree(self) -> int:
        return self.coeffs.shape[-1] - 1

    @classmethod
    def constant(cls, sft: Sft, c: float):
        return cls(sft, 1, np.full((sft.n, 1), float(c)))

    @classmethod
    def zero(cls, sft: Sft):
        return cls.constant(sft, 0.0)

    @classmethod
    def from_mapping(cls, sft: Sft, depth: int, mapping: Mapping[Word, list]):
        mask = sft.mask(depth)
        deg = max((len(c) for c in mapping.values()), default=1) - 1
        coeffs = np.zeros((sft.n,) * depth + (deg + 1,))
        for word, cs in mapping.items():
            word = tuple(word)
            if len(word) != depth or not mask[word]:
                raise ValidationError(f"word {word} is not an admissible word of length {depth}")
            coeffs[word][: len(cs)] = cs
        if len(mapping) != int(mask.sum()):
            raise ValidationError("every admissible word needs coefficients")
        return cls(sft, depth, coeffs)

    def __eq__(self, other):
        if not isinstance(other, FiberPotential):
            return NotImplemented
        return (
            self.sft == other.sft
            and self.depth == other.depth
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None

    def __repr__(self):
        return f"FiberPotential(depth={self.depth}, degree={self.degree})"

    def items(self):
        for w in self.sft.word_array(self.depth):
            w = tuple(int(s) for s in w)
            yield w, self.coeffs[w]

    def refine(self, depth: int) -> "FiberPotential":
        if depth < self.depth:
            raise ValueError("cannot lower the depth")
        if depth == self.depth:
            return self
        n, extra = self.sft.n, depth - self.depth
        c = self.coeffs
        c = c.reshape(c.shape[:-1] + (1,) * extra + c.shape[-1:])
        return FiberPotential(self.sft, depth, np.broadcast_to(c, (n,) * depth + (self.degree + 1,)))

    def pad(self, degree: int) -> "FiberPotential":
        if degree <= self.degree:
            return self
        extra = np.zeros(self.coeffs.shape[:-1] + (degree - self.degree,))
        return FiberPotential(self.sft, self.depth, np.concatenate([self.coeffs, extra], axis=-1))

    def eval(self, word, t) -> float | np.ndarray:
        word = tuple(word)[: self.depth]
        return P.polyval(t, self.coeffs[word])

    def combine(self, other: "FiberPotential | float", alpha: float, beta: float) -> "FiberPotential":
        """``alpha*self + beta*other``; a number is read as a constant fibre function."""
        if not isinstance(other, FiberPotential):
            other = FiberPotential.constant(self.sft, float(other))
        a, b = align_fibers(self, other)
        return FiberPotential(self.sft, a.depth, alpha * a.coeffs + beta * b.coeffs)


def align_fibers(f: FiberPotential, g: FiberPotential) -> tuple[FiberPotential, FiberPotential]:
    if f.sft != g.sft:
        raise MismatchedSft("fibre potentials live on different shifts")
    k, d = max(f.depth, g.depth), max(f.degree, g.degree)
    return f.refine(k).pad(d), g.refine(k).pad(d)


def _fiber_and_roof(g: FiberPotential, roof: Roof) -> tuple[FiberPotential, Roof]:
    if g.sft != roof.sft:
        raise MismatchedSft("fibre potential and roof live on different shifts")
    k = max(g.depth, roof.depth)
    return g.refine(k), roof.refine(k)


def antiderivative_at(coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    """``sum_d c_d t^(d+1) / (d+1)`` for coefficient arrays with a trailing degree axis."""
    out = np.zeros(np.shape(t))
    for d in range(coeffs.shape[-1] - 1, -1, -1):
        out = (out + coeffs[..., d] / (d + 1)) * t
    return out


def delta_transform(g: FiberPotential, roof: Roof) -> LcPotential:
    """Fibre integral ``x -> integral_0^roof(x) g(x, t) dt`` as a potential."""
    g, roof = _fiber_and_roof(g, roof)
    return LcPotential(g.sft, g.depth, antiderivative_at(g.coeffs, roof.values))


def poly_range(coeffs, a: float, b: float) -> tuple[float, float]:
    """Exact min and max of a polynomial on ``[a, b]`` via its critical points."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=np.float64), "b")
    if len(coeffs) <= 1:
        c = float(coeffs[0]) if len(coeffs) else 0.0
        return c, c
    pts = [a, b]
    crit = P.polyroots(P.polyder(coeffs)) if len(coeffs) > 2 else np.array([])
    for r in np.atleast_1d(crit):
        if abs(r.imag) <= 1e-12 * max(1.0, abs(r.real)) and a < r.real < b:
            pts.append(float(r.real))
    vals = P.polyval(np.array(pts), coeffs)
    return float(vals.min()), float(vals.max())


def fiber_range(g: FiberPotential, roof: Roof) -> tuple[float, float]:
    """Min and max of ``g`` over the whole suspension space."""
    g, roof = _fiber_and_roof(g, roof)
    lo, hi = np.inf, -np.inf
    for w, cs in g.items():
        a, b = poly_range(cs, 0.0, float(roof.values[w]))
        lo, hi = min(lo, a), max(hi, b)
    return lo, hi


@dataclass(frozen=True, eq=False)
class FlowMeasure:
    base: MarkovMeasure
    roof: Roof
    normalizer: float


def lift(mu: MarkovMeasure, roof: Roof) -> FlowMeasure:
    """Normalized product of ``mu`` with Lebesgue measure along the fibres."""
    if mu.base != roof.sft:
        raise MismatchedSft("measure and roof live on different shifts")
    return FlowMeasure(mu, roof, integrate(roof, mu))


def abramov_entropy(nu: FlowMeasure) -> float:
    return entropy(nu.base) / nu.normalizer


def kac_integral(g: FiberPotential, nu: FlowMeasure) -> float:
    if g.sft != nu.roof.sft:
        raise MismatchedSft("observable and flow measure live on different shifts")
    return integrate(delta_transform(g, nu.roof), nu.base) / nu.normalizer


def flow_pressure(g: FiberPotential, roof: Roof, **kw) -> BowenSolution:
    return solve(BowenProblem(delta_transform(g, roof), roof), **kw)


def flow_entropy(roof: Roof, **kw) -> BowenSolution:
    return flow_pressure(FiberPotential.zero(roof.sft), roof, **kw)


def flow_mme(roof: Roof) -> FlowMeasure:
    """The measure of maximal entropy of the suspension flow."""
    h = flow_entropy(roof).t_star
    nu = lift(equilibrium(-h * roof), roof)
    if abs(abramov_entropy(nu) - h) > MME_TOL:
        raise VerificationError(f"Abramov entropy {abramov_entropy(nu)!r} differs from {h!r}")
    return nu


def reparam_distance(roof1: Roof, roof2: Roof) -> tuple[float, float]:
    """``(|roof1 - roof2|_0, |roof2/roof1 - 1|_0)`` at the common depth."""
    r1, r2 = common_depth(roof1, roof2)
    mask = r1.sft.mask(r1.depth)
    a, b = r1.values[mask], r2.values[mask]
    return float(np.abs(a - b).max()), float(np.abs(b / a - 1.0).max())
