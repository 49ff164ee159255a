"""Entropy- and pressure-preserving perturbations of roofs and flow observables.

The constructions here are finite-depth stages of approximation arguments:
the caller supplies the approximating potentials, and every routine checks
the algebraic identities that make the construction work.  Identities that
hold by pure algebra are checked in exact rational arithmetic on the float
inputs; identities that go through a pressure computation are checked to a
numerical tolerance.

Every locally constant potential has a unique equilibrium state, so nothing
here produces (or claims) non-uniqueness of equilibrium states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    CannotSeparate,
    DegenerateDelta,
    NotInL,
    NotPositive,
    NotZeroPressure,
    VerificationError,
)
from .potential import LcPotential, Roof, combine, common_depth
from .pressure import MarkovMeasure, entropy, equilibrium, integrate, pressure
from .rng import make_rng
from .suspension import (
    FiberPotential,
    delta_transform,
    fiber_range,
    flow_entropy,
    flow_pressure,
    poly_range,
)

ZERO_PRESSURE_TOL = 1e-10
PRESERVE_TOL = 1e-8
L_MARGIN = 1e-12
A_MARGIN = 1e-12
DISTINCT_TOL = 1e-6


@dataclass(frozen=True)
class LCertificate:
    member: bool
    sup: float
    pressure: float
    min: float

    def __bool__(self):
        return self.member


@dataclass(eq=False)
class PerturbationReport:
    """Output of a perturbation plus the evidence that it did what it claims.

    ``residuals`` maps each verified identity to ``(achieved, tolerance)``.
    """

    output: object
    preserved_name: str
    before: float
    after: float
    distance: float
    residuals: dict[str, tuple[float, float]] = field(default_factory=dict)
    info: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(a <= tol for a, tol in self.residuals.values())


def in_L(p: LcPotential) -> LCertificate:
    """Is ``sup p < P(p)`` and ``p > 0``?"""
    sup, low = p.max(), p.min()
    pr = pressure(p).value
    return LCertificate(sup < pr - L_MARGIN and low > 0, sup, pr, low)


def zero_pressure_roof(p: LcPotential) -> Roof:
    """The roof ``P(p) - p``, whose flow has entropy exactly 1."""
    cert = in_L(p)
    if not cert:
        raise NotInL(f"sup={cert.sup!r}, P={cert.pressure!r}, min={cert.min!r}")
    roof = Roof.of(combine(cert.pressure, p, 1.0, -1.0))
    resid = pressure(-roof).value
    if abs(resid) > ZERO_PRESSURE_TOL:
        raise VerificationError(f"P(-roof) = {resid!r}")
    h = flow_entropy(roof).t_star
    if abs(h - 1.0) > PRESERVE_TOL:
        raise VerificationError(f"flow entropy {h!r} != 1")
    return roof


def normalize_lemma1(f: LcPotential) -> LcPotential:
    """``P(f) - f``, a potential whose negative has zero pressure."""
    phi = combine(pressure(f).value, f, 1.0, -1.0)
    resid = pressure(-phi).value
    if abs(resid) > ZERO_PRESSURE_TOL:
        raise VerificationError(f"P(-phi) = {resid!r}")
    return phi


def _check_zero_pressure(phi: LcPotential) -> float:
    resid = pressure(-phi).value
    if abs(resid) > ZERO_PRESSURE_TOL:
        raise NotZeroPressure(f"P(-phi) = {resid!r}, expected 0")
    return abs(resid)


def _exact(values) -> list[Fraction]:
    return [Fraction(float(v)) for v in values]


def perturb_roof(roof: Roof, phi: LcPotential) -> PerturbationReport:
    """Move ``roof`` to ``roof + (phi - h*roof)/h`` with ``h`` the flow entropy.

    The new roof equals ``phi/h`` up to rounding, hence has the same flow
    entropy as ``roof`` whenever ``P(-phi) = 0``.  ``h*roof`` means the
    rounded product as stored; the new roof is the correctly rounded value of
    the exact rational result.
    """
    pressure_resid = _check_zero_pressure(phi)
    if phi.min() <= 0:
        raise NotPositive(f"phi must be positive; min is {phi.min()!r}")
    h = flow_entropy(roof).t_star
    roof_k, phi_k = common_depth(roof, phi)
    sft, k = roof_k.sft, roof_k.depth
    mask = sft.mask(k)
    tau = roof_k.values[mask]
    h_tau = h * tau
    phi_v = phi_k.values[mask]

    hq = Fraction(h)
    tau_q, htau_q, phi_q = _exact(tau), _exact(h_tau), _exact(phi_v)
    dev_q = [p - ht for p, ht in zip(phi_q, htau_q)]
    new_q = [t + d / hq for t, d in zip(tau_q, dev_q)]
    step_q = max(abs(n - t) for n, t in zip(new_q, tau_q))
    dev_norm_q = max(abs(d) for d in dev_q)
    exact_gap = abs(step_q * hq - dev_norm_q)

    vals = np.zeros((sft.n,) * k)
    vals[mask] = [float(v) for v in new_q]
    new_roof = Roof(sft, k, vals)

    dev_norm = float(dev_norm_q)
    float_gap = abs(float(np.abs(vals[mask] - tau).max()) * h - float(np.abs(phi_v - h_tau).max()))
    simplified = float(np.abs(vals[mask] - phi_v / h).max())
    h_new = flow_entropy(new_roof).t_star

    scale = max(1.0, float(np.abs(phi_v / h).max()))
    # the float subtraction new - tau rounds at the scale of h*|tau|
    gap_tol = 16 * np.finfo(float).eps * (dev_norm + h * max(float(np.abs(tau).max()), float(np.abs(vals[mask]).max())))
    return PerturbationReport(
        output=new_roof,
        preserved_name="flow_entropy",
        before=h,
        after=h_new,
        distance=float(step_q),
        residuals={
            "input_zero_pressure": (pressure_resid, ZERO_PRESSURE_TOL),
            "flow_entropy_preserved": (abs(h_new - h), PRESERVE_TOL),
            "distance_identity_exact": (float(exact_gap), 0.0),
            "distance_identity_float": (float_gap, float(gap_tol)),
            "simplified_form": (simplified, float(16 * np.finfo(float).eps * scale)),
        },
        info={"h": h, "deviation_norm": dev_norm},
    )


def fiber_target(g: FiberPotential, roof: Roof) -> tuple[LcPotential, float, float]:
    """``P_flow(g0) * roof - Delta(g0)`` for the shifted observable ``g0 = g + C``.

    This is the potential the zero-pressure input of :func:`perturb_fiber`
    should approximate.  Returns ``(target, C, P_flow(g0))``.
    """
    lo, _ = fiber_range(g, roof)
    shift = max(0.0, 1.0 - lo)
    g0 = g.combine(shift, 1.0, 1.0)
    p0 = flow_pressure(g0, roof).t_star
    return combine(roof, delta_transform(g0, roof), p0, -1.0), shift, p0


def _delta_exact(coeffs: list[Fraction], tau: Fraction) -> Fraction:
    return sum((c * tau ** (d + 1) / (d + 1) for d, c in enumerate(coeffs)), Fraction(0))


def perturb_fiber(
    g: FiberPotential, roof: Roof, phi: LcPotential, epsilon: float
) -> PerturbationReport:
    """Rescale ``g`` fibrewise so its fibre integral becomes ``P_flow(g0)*roof - phi``.

    With ``g0 = g + C >= 1`` and ``F = Delta(g0) + (target - phi)``, the new
    observable is ``g + (F/Delta(g0) - 1) * g0``; its fibre integral is ``F - C*roof``
    and its flow pressure equals that of ``g`` whenever ``P(-phi) = 0``.
    ``target`` is :func:`fiber_target`, so passing ``phi = target`` returns
    ``g`` unchanged.
    """
    pressure_resid = _check_zero_pressure(phi)
    target, shift, p0 = fiber_target(g, roof)
    k = max(g.depth, roof.depth, phi.depth)
    sft = roof.sft
    g_k, roof_k = g.refine(k), roof.refine(k)
    target_k, phi_k = target.refine(k), phi.refine(k)
    mask = sft.mask(k)
    words = sft.word_array(k)

    cq = Fraction(shift)
    out = np.zeros(g_k.coeffs.shape)
    gn_out = np.zeros(g_k.coeffs.shape)
    delta_gap = Fraction(0)
    dev_norm = 0.0
    inf_delta0 = np.inf
    sup_g0 = -np.inf
    distance = 0.0
    for w in words:
        w = tuple(int(s) for s in w)
        tau_q = Fraction(float(roof_k.values[w]))
        g_q = _exact(g_k.coeffs[w])
        g0_q = [g_q[0] + cq] + g_q[1:]
        delta0_q = _delta_exact(g0_q, tau_q)
        if delta0_q <= 0:
            raise DegenerateDelta(f"fibre integral {float(delta0_q)!r} <= 0 on word {w}")
        dev_q = Fraction(float(target_k.values[w])) - Fraction(float(phi_k.values[w]))
        f_q = delta0_q + dev_q
        ratio_q = dev_q / delta0_q
        gn_q = [c * (1 + ratio_q) for c in g0_q]
        delta_gap = max(delta_gap, abs(_delta_exact(gn_q, tau_q) - f_q))
        out[w] = [float(c + ratio_q * c0) for c, c0 in zip(g_q, g0_q)]
        gn_out[w] = [float(c) for c in gn_q]

        g0_float = np.array([float(c) for c in g0_q])
        _, g0_max = poly_range(g0_float, 0.0, float(tau_q))
        inf_delta0 = min(inf_delta0, float(delta0_q))
        sup_g0 = max(sup_g0, g0_max)
        dev_norm = max(dev_norm, abs(float(dev_q)))
        distance = max(distance, abs(float(ratio_q)) * g0_max)

    h_new = FiberPotential(sft, k, out)
    g_n = FiberPotential(sft, k, gn_out)
    p_before = flow_pressure(g, roof).t_star
    p_after = flow_pressure(h_new, roof).t_star
    p_gn = flow_pressure(g_n, roof).t_star
    bound = dev_norm * sup_g0 / inf_delta0
    threshold = epsilon * inf_delta0 / sup_g0
    residuals = {
        "input_zero_pressure": (pressure_resid, ZERO_PRESSURE_TOL),
        "delta_equals_F_exact": (float(delta_gap), 0.0),
        "flow_pressure_preserved": (abs(p_gn - p0), PRESERVE_TOL),
        "output_flow_pressure": (abs(p_after - p_before), PRESERVE_TOL),
        "sup_bound": (max(0.0, distance - bound), 1e-12 * max(1.0, bound)),
    }
    if dev_norm < threshold:
        residuals["epsilon_bound"] = (0.0 if distance < epsilon else distance - epsilon, 0.0)
    return PerturbationReport(
        output=h_new,
        preserved_name="flow_pressure",
        before=p_before,
        after=p_after,
        distance=distance,
        residuals=residuals,
        info={
            "shift": shift,
            "flow_pressure_g0": p0,
            "inf_delta_g0": inf_delta0,
            "sup_g0": sup_g0,
            "deviation_norm": dev_norm,
            "threshold": threshold,
        },
    )


def a_margin(p: LcPotential, mu: MarkovMeasure, epsilon: float, p_value: float | None = None) -> float:
    """``h(mu) + integral(p, mu) - (P(p) - epsilon)``; positive iff mu is in A(p, epsilon)."""
    if p_value is None:
        p_value = pressure(p).value
    return entropy(mu) + integrate(p, mu) - (p_value - epsilon)


def _fully_supported(mu: MarkovMeasure) -> bool:
    return bool(np.all((mu.trans > 0) == (mu.chain_sft.a == 1)))


def almost_equilibria(
    p: LcPotential, epsilon: float, count: int, seed: int, max_candidates: int | None = None
) -> list[MarkovMeasure]:
    """``count`` distinct ergodic Markov measures with ``h + integral(p) > P(p) - epsilon``.

    The first is the equilibrium state of ``p``; the rest are equilibrium
    states of ``p + delta*q`` for random depth-2 ``q`` with entries in
    [-1, 1], starting at ``delta = epsilon/4`` and halving until the
    inequality holds with margin ``1e-12``.
    """
    if epsilon <= 0 or count < 1:
        raise ValueError("need epsilon > 0 and count >= 1")
    p_value = pressure(p).value
    depth = max(p.depth, 2)
    base = equilibrium(p)
    found = [base]
    max_candidates = max_candidates or 20 * count
    sft = p.sft
    for i in range(1, max_candidates + 1):
        if len(found) >= count:
            break
        rng = make_rng(seed, i)
        q = LcPotential(sft, 2, rng.uniform(-1.0, 1.0, size=(sft.n, sft.n)))
        delta = epsilon / 4
        for _ in range(60):
            mu = equilibrium(combine(p, q, 1.0, delta).refine(depth))
            if a_margin(p, mu, epsilon, p_value) >= A_MARGIN:
                break
            delta /= 2
        else:
            continue
        if not _fully_supported(mu):
            continue
        if all(np.abs(mu.trans - nu.trans).max() >= DISTINCT_TOL for nu in found):
            found.append(mu)
    if len(found) < count:
        raise CannotSeparate(
            f"found {len(found)} of {count} separated measures for epsilon={epsilon!r}",
            achieved=len(found),
        )
    return found[:count]
