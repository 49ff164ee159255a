"""The invariant suite run by ``thermoflow verify``.

Each check draws from its own seeded stream (``make_rng(seed, index)``), so
adding or reordering checks never perturbs the others.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bowen, model, perturbation, pressure as pr, sft as sftm, suspension as sus
from .potential import LcPotential, Roof, combine, sup_dist, variation
from .rng import make_rng

LIMITATION = (
    "Not reproducible here: flows with uncountably many ergodic measures of maximal "
    "entropy. Every finite-depth potential in this package has a unique equilibrium "
    "state, so the suite certifies only the constructive steps (zero-pressure roofs, "
    "entropy-preserving roof perturbations, pressure-preserving observable "
    "perturbations, almost-equilibrium witnesses) and asserts no non-uniqueness."
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def standard_shifts() -> list[sftm.Sft]:
    return [sftm.full_shift(2), sftm.golden_mean(), sftm.validate([[1, 1, 0], [0, 1, 1], [1, 1, 1]])]


def random_potential(sft, depth, rng, scale=1.0) -> LcPotential:
    return LcPotential(sft, depth, rng.uniform(-scale, scale, size=(sft.n,) * depth))


def random_roof(sft, depth, rng, lo=0.5, hi=2.0) -> Roof:
    return Roof(sft, depth, rng.uniform(lo, hi, size=(sft.n,) * depth))


def random_fiber(sft, depth, degree, rng) -> sus.FiberPotential:
    return sus.FiberPotential(sft, depth, rng.uniform(-1, 1, size=(sft.n,) * depth + (degree + 1,)))


def random_word(sft, length, rng) -> tuple[int, ...]:
    w = [int(rng.integers(sft.n))]
    while len(w) < length:
        w.append(int(rng.choice(np.flatnonzero(sft.a[w[-1]]))))
    return tuple(w)


def _fmt(x: float) -> str:
    return f"{x:.3e}"


# --- sft -------------------------------------------------------------------

def check_word_counts(rng):
    worst = 0
    for s in standard_shifts():
        for k in range(1, 7):
            listed = sftm.words(s, k)
            dfs = list(sftm.enumerate_words_dfs(s, k))
            ok = (
                len(listed) == len(dfs) == sftm.word_count(s, k)
                and listed == sorted(set(listed))
                and all(s.admissible(w) for w in listed)
                and set(listed) == set(dfs)
            )
            worst += not ok
    return worst == 0, f"mismatches={worst}"


def check_periodic_points(rng):
    bad = 0
    for s in standard_shifts():
        m = s.primitivity_exponent
        for p in range(1, m + 11):
            c = sftm.periodic_point_count(s, p)
            if p >= m and c < 1:
                bad += 1
            if p <= 8 and c != sftm.brute_periodic_points(s, p):
                bad += 1
    return bad == 0, f"failures={bad}"


# --- potential -------------------------------------------------------------

def check_refine_eval(rng):
    bad = 0
    for s in standard_shifts():
        p = random_potential(s, 2, rng)
        q = p.refine(4)
        for _ in range(3334):
            w = random_word(s, 5, rng)
            bad += p.eval(w) != q.eval(w)
    return bad == 0, f"disagreements={bad}"


def check_metric(rng):
    worst = 0.0
    for s in standard_shifts():
        for _ in range(50):
            p, q, r = (random_potential(s, int(rng.integers(1, 4)), rng) for _ in range(3))
            worst = max(worst, abs(sup_dist(p, q) - sup_dist(q, p)))
            worst = max(worst, sup_dist(p, r) - sup_dist(p, q) - sup_dist(q, r))
            worst = max(worst, sup_dist(p, p))
    return worst <= 1e-12, f"worst={_fmt(worst)}"


def check_variation(rng):
    ok = True
    for s in standard_shifts():
        for depth in (1, 2, 3, 4):
            p = random_potential(s, depth, rng)
            v = [variation(p, j) for j in range(1, depth + 2)]
            ok &= all(a >= b for a, b in zip(v, v[1:])) and v[depth - 1] == 0.0
    return ok, "non-increasing, zero at depth"


# --- pressure --------------------------------------------------------------

def check_variational_dominance(rng):
    worst = -np.inf
    shifts = standard_shifts()
    for i in range(10):
        s = shifts[i % 3]
        p = random_potential(s, 1 + i % 3, rng)
        val = pr.pressure(p).value
        block = max(p.depth, 2) - 1
        for _ in range(100):
            mu = pr.random_markov_measure(s, block, rng)
            worst = max(worst, pr.entropy(mu) + pr.integrate(p, mu) - val)
    return worst <= 1e-10, f"max excess={_fmt(worst)}"


def check_equilibrium_identity(rng):
    worst = 0.0
    for s in standard_shifts():
        for depth in (1, 2, 3):
            p = random_potential(s, depth, rng)
            res = pr.pressure(p)
            mu = pr.equilibrium(p, res)
            worst = max(worst, abs(pr.entropy(mu) + pr.integrate(p, mu) - res.value))
    return worst <= 1e-10, f"worst={_fmt(worst)}"


def check_recoding(rng):
    worst = 0.0
    for s in standard_shifts():
        for depth in (1, 2, 3, 4):
            p = random_potential(s, depth, rng)
            rec = pr.recode_two_block(p)
            worst = max(worst, abs(pr.pressure(p).value - pr.pressure(rec.potential).value))
    return worst <= 1e-12, f"worst={_fmt(worst)}"


def check_constant_shift(rng):
    worst = 0.0
    for s in standard_shifts():
        p = random_potential(s, 2, rng)
        c = float(rng.uniform(-3, 3))
        worst = max(worst, abs(pr.pressure(p + c).value - pr.pressure(p).value - c))
    return worst <= 1e-12, f"worst={_fmt(worst)}"


def check_orbit_oracle(rng):
    ok = True
    details = []
    for s in standard_shifts():
        p = random_potential(s, 2, rng)
        val = pr.pressure(p).value
        est = dict(pr.pressure_oracle_orbits(p, 12))
        c = max(q * abs(est[q] - val) for q in (4, 5))
        later = max(q * abs(est[q] - val) for q in range(6, 13))
        ok &= later <= c + 1e-9
        details.append(f"C={c:.3f}")
    return ok, " ".join(details)


def check_monotonicity(rng):
    ok = True
    for s in standard_shifts():
        p = random_potential(s, 2, rng)
        q = LcPotential(s, 2, p.values + rng.uniform(0, 0.5, size=p.values.shape))
        ok &= pr.pressure(p).value <= pr.pressure(q).value
    return ok, "P(p) <= P(q) when p <= q"


# --- bowen -----------------------------------------------------------------

def check_bowen_slopes(rng):
    worst = -np.inf
    for s in standard_shifts():
        prob = bowen.BowenProblem(random_potential(s, 2, rng), random_roof(s, 2, rng))
        for _ in range(5):
            t1, t2 = np.sort(rng.uniform(-2, 3, size=2))
            drop = bowen.pressure_at(prob, t1) - bowen.pressure_at(prob, t2)
            worst = max(worst, prob.roof.min() * (t2 - t1) - drop, drop - prob.roof.max() * (t2 - t1))
    return worst <= 1e-10, f"worst violation={_fmt(worst)}"


def check_bowen_convexity(rng):
    worst = -np.inf
    for s in standard_shifts():
        prob = bowen.BowenProblem(random_potential(s, 2, rng), random_roof(s, 2, rng))
        for _ in range(5):
            a, b = rng.uniform(-2, 3, size=2)
            mid = bowen.pressure_at(prob, 0.5 * (a + b))
            avg = 0.5 * (bowen.pressure_at(prob, a) + bowen.pressure_at(prob, b))
            worst = max(worst, mid - avg)
    return worst <= 1e-10, f"worst={_fmt(worst)}"


def check_abramov_bound(rng):
    worst = -np.inf
    for s in standard_shifts():
        roof = random_roof(s, 2, rng)
        t = sus.flow_entropy(roof).t_star
        for _ in range(334):
            mu = pr.random_markov_measure(s, 1, rng)
            worst = max(worst, pr.entropy(mu) / pr.integrate(roof, mu) - t)
    return worst <= 1e-8, f"max excess={_fmt(worst)}"


# --- suspension --------------------------------------------------------------

def check_mme_consistency(rng):
    worst = 0.0
    for s in standard_shifts():
        for i in range(7):
            roof = random_roof(s, 1 + i % 3, rng)
            t = sus.flow_entropy(roof).t_star
            worst = max(worst, abs(sus.abramov_entropy(sus.flow_mme(roof)) - t))
    return worst <= 1e-8, f"worst={_fmt(worst)}"


def check_kac_linearity(rng):
    worst = 0.0
    for s in standard_shifts():
        roof = random_roof(s, 2, rng)
        nu = sus.lift(pr.random_markov_measure(s, 1, rng), roof)
        g, h = random_fiber(s, 1, 2, rng), random_fiber(s, 2, 3, rng)
        a, b = rng.uniform(-2, 2, size=2)
        lhs = sus.kac_integral(g.combine(h, a, b), nu)
        rhs = a * sus.kac_integral(g, nu) + b * sus.kac_integral(h, nu)
        worst = max(worst, abs(lhs - rhs))
    return worst <= 1e-12, f"worst={_fmt(worst)}"


def check_delta_transform(rng):
    ok = True
    worst = 0.0
    for s in standard_shifts():
        roof = random_roof(s, 2, rng)
        ok &= sus.delta_transform(sus.FiberPotential.constant(s, 1.0), roof) == roof.refine(2)
        g, h = random_fiber(s, 2, 2, rng), random_fiber(s, 1, 4, rng)
        lhs = sus.delta_transform(g.combine(h, 2.0, -0.5), roof)
        rhs = combine(sus.delta_transform(g, roof), sus.delta_transform(h, roof), 2.0, -0.5)
        worst = max(worst, sup_dist(lhs, rhs))
    return ok and worst <= 1e-12, f"exact unit roof={ok} linearity={_fmt(worst)}"


def check_flow_variational(rng):
    worst = -np.inf
    for s in standard_shifts():
        roof = random_roof(s, 1, rng)
        t = sus.flow_entropy(roof).t_star
        for _ in range(334):
            mu = pr.random_markov_measure(s, 2, rng)
            worst = max(worst, sus.abramov_entropy(sus.lift(mu, roof)) - t)
    return worst <= 1e-8, f"max excess={_fmt(worst)}"


def check_flow_pressure_shift(rng):
    worst = 0.0
    for s in standard_shifts():
        roof = random_roof(s, 1, rng)
        g = random_fiber(s, 1, 2, rng)
        c = float(rng.uniform(-2, 2))
        a = sus.flow_pressure(g, roof).t_star
        b = sus.flow_pressure(g.combine(c, 1.0, 1.0), roof).t_star
        worst = max(worst, abs(b - a - c))
    return worst <= 1e-10, f"worst={_fmt(worst)}"


# --- perturbation ------------------------------------------------------------

def check_zero_pressure_roof(rng):
    worst_p, worst_h = 0.0, 0.0
    count = 0
    for i in range(20):
        s = standard_shifts()[i % 3]
        h = pr.topological_entropy(s)
        # positive potentials with oscillation below h are in L
        base = rng.uniform(0.1, 1.0)
        p = LcPotential(s, 1 + i % 3, base + rng.uniform(0, 0.9 * h, size=(s.n,) * (1 + i % 3)))
        if not perturbation.in_L(p):
            continue
        roof = perturbation.zero_pressure_roof(p)
        worst_p = max(worst_p, abs(pr.pressure(-roof).value))
        worst_h = max(worst_h, abs(sus.flow_entropy(roof).t_star - 1.0))
        count += 1
    ok = count == 20 and worst_p <= 1e-10 and worst_h <= 1e-8
    return ok, f"n={count} P(-roof)={_fmt(worst_p)} entropy-1={_fmt(worst_h)}"


def check_normalize_constants(rng):
    worst = 0.0
    for s in standard_shifts():
        f = random_potential(s, 2, rng)
        c = float(rng.uniform(-3, 3))
        worst = max(worst, sup_dist(perturbation.normalize_lemma1(f + c), perturbation.normalize_lemma1(f)))
    return worst <= 1e-12, f"worst={_fmt(worst)}"


def check_perturb_roof(rng):
    ok = True
    worst = 0.0
    for i in range(6):
        s = standard_shifts()[i % 3]
        roof = random_roof(s, 1 + i % 2, rng)
        h = sus.flow_entropy(roof).t_star
        f = combine(-h * roof, random_potential(s, 2, rng, 0.05), 1.0, 1.0)
        rep = perturbation.perturb_roof(roof, perturbation.normalize_lemma1(f))
        ok &= rep.ok
        worst = max(worst, abs(rep.after - rep.before))
    return ok, f"entropy drift={_fmt(worst)}"


def check_perturb_fiber(rng):
    ok = True
    for s in standard_shifts():
        roof = random_roof(s, 1, rng)
        g = random_fiber(s, 1, 2, rng)
        target, _, _ = perturbation.fiber_target(g, roof)
        phi = perturbation.normalize_lemma1(-(target + random_potential(s, 2, rng, 0.01)))
        rep = perturbation.perturb_fiber(g, roof, phi, 0.1)
        ok &= rep.ok
        ident = perturbation.perturb_fiber(g, roof, target, 0.1)
        ok &= ident.distance == 0.0 and ident.output == g.refine(ident.output.depth)
    return ok, "Delta(g_n) = F exact; pressure preserved; identity case fixed"


def check_almost_equilibria(rng):
    s = sftm.full_shift(2)
    p = LcPotential.zero(s)
    mus = perturbation.almost_equilibria(p, 0.01, 5, int(rng.integers(2**32)))
    margins = [perturbation.a_margin(p, mu, 0.01) for mu in mus]
    distinct = all(
        np.abs(a.trans - b.trans).max() >= 1e-6 for i, a in enumerate(mus) for b in mus[i + 1 :]
    )
    return min(margins) >= 1e-12 and distinct and len(mus) == 5, f"min margin={_fmt(min(margins))}"


# --- cli -------------------------------------------------------------------

def check_model_roundtrip(rng):
    ok = True
    for s in standard_shifts():
        m = model.ModelFile(
            s,
            potentials={"phi": random_potential(s, 2, rng)},
            roofs={"tau": random_roof(s, 3, rng)},
            fibers={"g": random_fiber(s, 1, 3, rng)},
        )
        text = m.to_text()
        again = model.parse(text)
        ok &= again == m and again.to_text() == text
    return ok, "print(parse(text)) == text"


CHECKS: list[tuple[str, Callable]] = [
    ("sft.word_counts", check_word_counts),
    ("sft.periodic_points", check_periodic_points),
    ("potential.refine_eval", check_refine_eval),
    ("potential.sup_dist_metric", check_metric),
    ("potential.variation", check_variation),
    ("pressure.variational_dominance", check_variational_dominance),
    ("pressure.equilibrium_identity", check_equilibrium_identity),
    ("pressure.recoding_invariance", check_recoding),
    ("pressure.constant_shift", check_constant_shift),
    ("pressure.orbit_oracle", check_orbit_oracle),
    ("pressure.monotonicity", check_monotonicity),
    ("bowen.slopes", check_bowen_slopes),
    ("bowen.convexity", check_bowen_convexity),
    ("bowen.abramov_bound", check_abramov_bound),
    ("suspension.mme_consistency", check_mme_consistency),
    ("suspension.flow_variational", check_flow_variational),
    ("suspension.kac_linearity", check_kac_linearity),
    ("suspension.delta_transform", check_delta_transform),
    ("suspension.flow_pressure_shift", check_flow_pressure_shift),
    ("perturbation.zero_pressure_roof", check_zero_pressure_roof),
    ("perturbation.normalize_constants", check_normalize_constants),
    ("perturbation.perturb_roof", check_perturb_roof),
    ("perturbation.perturb_fiber", check_perturb_fiber),
    ("perturbation.almost_equilibria", check_almost_equilibria),
    ("cli.model_roundtrip", check_model_roundtrip),
]


def run_suite(seed: int = 0) -> list[CheckResult]:
    out = []
    for i, (name, fn) in enumerate(CHECKS):
        try:
            passed, detail = fn(make_rng(seed, i))
        except Exception as exc:  # a crash is a failed check, not a failed run
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(passed), detail))
    return out
