"""Pressure, entropy and equilibrium measures of locally constant potentials.

For a potential of depth ``k`` the pressure is ``log`` of the Perron
eigenvalue of the edge-weighted matrix on the ``(k-1)``-block presentation,
``M[u, v] = a'[u, v] * exp(p(u + v[-1]))``.  Shift-invariant measures are
represented by stationary Markov chains on m-blocks (:class:`MarkovMeasure`).
Two brute-force oracles, one over periodic orbits and one over random Markov
measures, check the eigenvalue route independently.
"""

from __future__ import annotations

import math
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import entr, logsumexp

from .errors import MismatchedSft, NoConvergence, TooLarge, ValidationError
from .potential import LcPotential
from .rng import make_rng
from .sft import Sft, higher_block, periodic_point_count, word_index

log = logging.getLogger(__name__)

EIG_TOL = 1e-14
RESIDUAL_TOL = 1e-12
MAX_ITER = 20_000
MEASURE_TOL = 1e-12
ORBIT_LIMIT = 10**7


class Recoding(NamedTuple):
    sft: Sft
    potential: LcPotential
    states: np.ndarray


def recode_two_block(p: LcPotential) -> Recoding:
    """Rewrite ``p`` as a depth-2 potential on the ``(k-1)``-block shift.

    ``states[i]`` is the base word standing for recoded symbol ``i``.
    Potentials of depth 1 or 2 are returned on the original shift, refined to
    depth 2.
    """
    k = p.depth
    if k <= 2:
        return Recoding(p.sft, p.refine(2), p.sft.word_array(1))
    sft2, states = higher_block(p.sft, k - 1)
    index = word_index(p.sft, k - 1)
    ext = p.sft.word_array(k)
    vals = np.zeros((sft2.n, sft2.n))
    vals[index[tuple(ext[:, :-1].T)], index[tuple(ext[:, 1:].T)]] = p.values[tuple(ext.T)]
    return Recoding(sft2, LcPotential(sft2, 2, vals), states)


def perron(m: np.ndarray, tol: float = EIG_TOL, max_iter: int = MAX_ITER):
    """Perron eigenvalue and right eigenvector of a primitive nonnegative matrix.

    Power iteration from the all-ones vector.  Stops once two successive
    eigenvalue estimates agree to ``tol`` (relative) and the residual
    ``|M r - lam r|_inf <= RESIDUAL_TOL * lam`` with ``|r|_inf = 1``.  When a
    second eigenvalue sits close to the spectral circle the iteration crawls;
    after ``max_iter`` steps a dense eigensolve takes over, held to the same
    residual bound.

    Returns ``(lam, r, iterations, residual)``.
    """
    n = m.shape[0]
    x = np.full(n, 1.0 / n)
    lam_prev = np.nan
    for it in range(1, max_iter + 1):
        y = m @ x
        lam = y.sum()
        y /= lam
        if abs(lam - lam_prev) <= tol * lam:
            r = y / y.max()
            residual = np.abs(m @ r - lam * r).max()
            if residual <= RESIDUAL_TOL * lam:
                return lam, r, it, residual / lam
        x = y
        lam_prev = lam
    log.info("power iteration stalled after %d steps; using a dense eigensolve", max_iter)
    w, v = np.linalg.eig(m)
    i = int(np.argmax(w.real))
    lam = float(w[i].real)
    r = np.abs(v[:, i].real)
    r /= r.max()
    residual = np.abs(m @ r - lam * r).max()
    if not (lam > 0 and residual <= RESIDUAL_TOL * lam):
        raise NoConvergence(f"no Perron pair to tolerance: lam={lam!r}, residual={residual!r}")
    return lam, r, max_iter, residual / lam


@dataclass(frozen=True, eq=False)
class PressureResult:
    """Perron data of the weighted transition matrix of a potential.

    ``matrix`` is the weighted matrix divided by ``exp(shift)`` to keep its
    entries in range; ``scaled_lambda`` is its Perron eigenvalue and
    ``lam = exp(value)`` that of the unscaled matrix (``inf`` on overflow).
    """

    value: float
    lam: float
    left: np.ndarray
    right: np.ndarray
    recoded_depth: int
    recoding: Recoding = field(repr=False)
    matrix: np.ndarray = field(repr=False)
    scaled_lambda: float = 0.0
    shift: float = 0.0
    iterations: int = 0
    residual: float = 0.0


def weighted_matrix(rec: Recoding) -> tuple[np.ndarray, float]:
    vals = rec.potential.values
    a = rec.sft.a.astype(bool)
    shift = float(vals[a].max())
    m = np.where(a, np.exp(np.where(a, vals - shift, 0.0)), 0.0)
    return m, shift


def pressure(p: LcPotential) -> PressureResult:
    """Topological pressure of ``p`` in nats."""
    rec = recode_two_block(p)
    m, shift = weighted_matrix(rec)
    lam, right, it_r, res = perron(m)
    lam_l, left, it_l, _ = perron(m.T)
    left = left / (left @ right)
    value = float(np.log(lam) + shift)
    log.debug("pressure: n'=%d lam=%r iterations=%d/%d", m.shape[0], lam, it_r, it_l)
    return PressureResult(
        value=value,
        lam=math.exp(value) if value < 709.0 else math.inf,
        left=left,
        right=right,
        recoded_depth=max(p.depth, 2),
        recoding=rec,
        matrix=m,
        scaled_lambda=float(lam),
        shift=shift,
        iterations=it_r + it_l,
        residual=float(res),
    )


def topological_entropy(sft: Sft) -> float:
    return pressure(LcPotential.zero(sft)).value


class MarkovMeasure:
    """Stationary Markov chain on the m-block presentation of ``base``.

    ``block == 1`` is an ordinary 1-step chain on symbols; the equilibrium
    state of a depth-k potential lives on ``block = max(k, 2) - 1``.
    """

    def __init__(self, base: Sft, block: int, pi, trans, check: bool = True):
        self.base = base
        self.block = int(block)
        self.chain_sft, self.states = higher_block(base, self.block)
        pi = np.array(pi, dtype=np.float64)
        trans = np.array(trans, dtype=np.float64)
        size = self.chain_sft.n
        if pi.shape != (size,) or trans.shape != (size, size):
            raise ValidationError(f"expected {size} states, got pi {pi.shape}, trans {trans.shape}")
        if check:
            _check_chain(self.chain_sft, pi, trans)
        pi.flags.writeable = False
        trans.flags.writeable = False
        self.pi = pi
        self.trans = trans

    def __repr__(self):
        return f"MarkovMeasure(block={self.block}, pi={self.pi.tolist()})"


def _check_chain(chain: Sft, pi: np.ndarray, trans: np.ndarray) -> None:
    if np.any(pi < 0) or abs(pi.sum() - 1.0) > MEASURE_TOL:
        raise ValidationError("pi must be a probability vector")
    if np.any(trans < 0):
        raise ValidationError("transition probabilities must be nonnegative")
    if np.any((trans > 0) & (chain.a == 0)):
        raise ValidationError("transition matrix charges a forbidden transition")
    if np.abs(trans.sum(axis=1) - 1.0).max() > MEASURE_TOL:
        raise ValidationError("transition rows must sum to 1")
    if np.abs(pi @ trans - pi).max() > MEASURE_TOL:
        raise ValidationError("pi is not stationary for trans")


def equilibrium(p: LcPotential, result: PressureResult | None = None) -> MarkovMeasure:
    """The unique equilibrium state of ``p`` as a Markov chain."""
    res = result if result is not None else pressure(p)
    m, lam, left, right = res.matrix, res.scaled_lambda, res.left, res.right
    trans = m * right[None, :] / (lam * right[:, None])
    trans /= trans.sum(axis=1, keepdims=True)
    pi = left * right
    pi /= pi.sum()
    return MarkovMeasure(p.sft, res.recoded_depth - 1, pi, trans)


def entropy(mu: MarkovMeasure) -> float:
    return float(mu.pi @ entr(mu.trans).sum(axis=1))


def extend(mu: MarkovMeasure, block: int) -> MarkovMeasure:
    """Re-express ``mu`` as a chain on longer blocks (same measure)."""
    m = mu.block
    if block < m:
        raise ValueError("cannot shorten the block length")
    if block == m:
        return mu
    sft = mu.base
    idx_m = word_index(sft, m)
    idx_b = word_index(sft, block)
    states = sft.word_array(block)
    pi = mu.pi[idx_m[tuple(states[:, :m].T)]].copy()
    for i in range(block - m):
        u = idx_m[tuple(states[:, i : i + m].T)]
        v = idx_m[tuple(states[:, i + 1 : i + 1 + m].T)]
        pi *= mu.trans[u, v]
    ext = sft.word_array(block + 1)
    size = len(states)
    trans = np.zeros((size, size))
    u = idx_m[tuple(ext[:, block - m : block].T)]
    v = idx_m[tuple(ext[:, block - m + 1 :].T)]
    trans[idx_b[tuple(ext[:, :-1].T)], idx_b[tuple(ext[:, 1:].T)]] = mu.trans[u, v]
    return MarkovMeasure(sft, block, pi, trans, check=False)


def integrate(p: LcPotential, mu: MarkovMeasure) -> float:
    """Integral of ``p`` against ``mu``."""
    if p.sft != mu.base:
        raise MismatchedSft("potential and measure live on different shifts")
    if p.depth > mu.block + 1:
        mu = extend(mu, p.depth - 1)
    m = mu.block
    q = p.refine(m + 1)
    ext = mu.base.word_array(m + 1)
    idx = word_index(mu.base, m)
    u = idx[tuple(ext[:, :-1].T)]
    v = idx[tuple(ext[:, 1:].T)]
    return float(np.sum(mu.pi[u] * mu.trans[u, v] * q.values[tuple(ext.T)]))


def cylinder(mu: MarkovMeasure, word) -> float:
    """Measure of the cylinder set of points starting with ``word``."""
    word = tuple(word)
    m = mu.block
    idx = word_index(mu.base, m)
    if len(word) <= m:
        hit = np.all(mu.states[:, : len(word)] == np.array(word), axis=1)
        return float(mu.pi[hit].sum())
    if not mu.base.admissible(word):
        return 0.0
    value = mu.pi[idx[word[:m]]]
    for i in range(len(word) - m):
        value *= mu.trans[idx[word[i : i + m]], idx[word[i + 1 : i + 1 + m]]]
    return float(value)


def symbol_marginal(mu: MarkovMeasure) -> np.ndarray:
    """Distribution of the first symbol."""
    return np.array([cylinder(mu, (s,)) for s in range(mu.base.n)])


def stationary(trans: np.ndarray) -> np.ndarray:
    """Stationary vector of an irreducible stochastic matrix by a direct solve."""
    n = trans.shape[0]
    lhs = trans.T - np.eye(n)
    lhs[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    pi = np.linalg.solve(lhs, rhs)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def random_markov_measure(sft: Sft, block: int, rng: np.random.Generator) -> MarkovMeasure:
    """Random Markov measure: each row drawn from the flat simplex on allowed successors."""
    chain, _ = higher_block(sft, block)
    trans = np.zeros((chain.n, chain.n))
    for i in range(chain.n):
        allowed = np.flatnonzero(chain.a[i])
        trans[i, allowed] = rng.dirichlet(np.ones(len(allowed)))
    return MarkovMeasure(sft, block, stationary(trans), trans)


def pressure_oracle_orbits(p: LcPotential, pmax: int) -> list[tuple[int, float]]:
    """Periodic-orbit partition sums ``(1/q) log sum exp(S_q p(x))`` for q = 1..pmax.

    The sum runs over every x with ``sigma^q x = x``, enumerated explicitly as
    cyclic admissible words.
    """
    sft = p.sft
    total = sum(periodic_point_count(sft, q) for q in range(1, pmax + 1))
    if total > ORBIT_LIMIT:
        raise TooLarge(f"{total} periodic points exceed the limit {ORBIT_LIMIT}")
    a = sft.a.astype(bool)
    out = []
    paths = np.arange(sft.n)[:, None]
    for q in range(1, pmax + 1):
        if q > 1:
            last = paths[:, -1]
            rows, succ = np.nonzero(a[last])
            if len(rows) > ORBIT_LIMIT:
                raise TooLarge(f"{len(rows)} words of length {q} exceed the limit")
            paths = np.column_stack([paths[rows], succ])
        cyc = paths[a[paths[:, -1], paths[:, 0]]]
        k = p.depth
        window = (np.arange(q)[:, None] + np.arange(k)[None, :]) % q
        pts = cyc[:, window]
        sums = p.values[tuple(pts[..., j] for j in range(k))].sum(axis=1)
        out.append((q, float(logsumexp(sums) / q)))
    return out


def pressure_oracle_variational(p: LcPotential, trials: int, seed: int) -> float:
    """Best ``entropy + integral`` over ``trials`` random Markov measures."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    block = max(p.depth, 2) - 1
    rng = make_rng(seed)
    best = -np.inf
    for _ in range(trials):
        mu = random_markov_measure(p.sft, block, rng)
        best = max(best, entropy(mu) + integrate(p, mu))
    return float(best)
