"""Classical information theory: entropies, mutual information, the
Blahut-Arimoto capacity solver, and closed forms for binary and weakly
symmetric channels.

Everything is in bits (base-2 logarithms). Transition matrices are
column-stochastic: entry (m, n) is the probability of output m given
input n.
"""

import math

import numpy as np
from dataclasses import dataclass
from typing import NamedTuple


def check_prob_vector(p, tol: float = 1e-10) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValueError("probability vector must be one-dimensional")
    if p.min() < -tol:
        raise ValueError(f"negative probability {p.min()}")
    if abs(p.sum() - 1.0) > max(tol, 1e-12 * p.size):
        raise ValueError(f"probabilities sum to {p.sum()}, expected 1")
    return np.clip(p, 0.0, 1.0)


def check_transition_matrix(t, tol: float = 1e-9) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if t.ndim != 2:
        raise ValueError("transition matrix must be two-dimensional")
    if t.min() < -tol or t.max() > 1.0 + tol:
        raise ValueError("transition probabilities must lie in [0, 1]")
    colsums = t.sum(axis=0)
    if np.max(np.abs(colsums - 1.0)) > tol:
        raise ValueError(f"columns must sum to 1; worst deviation {np.max(np.abs(colsums - 1.0)):.3e}")
    return np.clip(t, 0.0, 1.0)


def binary_entropy(x):
    """H(x) = -x log2 x - (1-x) log2(1-x), elementwise, with 0 log 0 = 0."""
    x = np.asarray(x, dtype=float)
    if x.min() < -1e-9 or x.max() > 1.0 + 1e-9:
        raise ValueError(f"binary entropy argument outside [0, 1]: {x}")
    x = np.clip(x, 0.0, 1.0)
    out = np.zeros_like(x)
    inner = (x > 0.0) & (x < 1.0)
    xi = x[inner]
    out[inner] = -xi * np.log2(xi) - (1.0 - xi) * np.log2(1.0 - xi)
    if np.ndim(out) == 0:
        return float(out)
    return out


def shannon_entropy(p) -> float:
    """Shannon entropy in bits of a probability vector."""
    p = check_prob_vector(p)
    nz = p[p > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def mutual_information(prior, transition) -> float:
    """I(X;Y) in bits for input prior p_x and column-stochastic p(y|x)."""
    p = check_prob_vector(prior)
    t = check_transition_matrix(transition)
    if t.shape[1] != p.size:
        raise ValueError(f"prior has {p.size} entries but transition has {t.shape[1]} inputs")
    q = t @ p
    logt = np.zeros_like(t)
    np.log2(t, out=logt, where=t > 0.0)
    logq = np.zeros_like(q)
    np.log2(q, out=logq, where=q > 0.0)
    per_input = (t * (logt - logq[:, None])).sum(axis=0)
    return max(float(p @ per_input), 0.0)


@dataclass
class BAResult:
    capacity_bits: float
    optimal_prior: np.ndarray
    iterations: int
    gap_bits: float
    converged: bool
    lower_bounds: list | None = None


def blahut_arimoto(
    transition,
    tol_bits: float = 1e-9,
    max_iter: int = 100_000,
    initial_prior=None,
    track_history: bool = False,
) -> BAResult:
    """Channel capacity of a discrete memoryless channel by alternating
    maximization.

    Each round computes c_n = 2^D(p(.|n) || q) against the current output
    distribution q, reweights the prior by c_n, and brackets the capacity
    between log2(sum_n p_n c_n) (lower) and log2(max_n c_n) (upper);
    iteration stops once the bracket width reaches ``tol_bits``. The
    returned ``capacity_bits`` is the final lower bound; if ``max_iter`` is
    exhausted first the best-so-far result is returned with
    ``converged=False``.
    """
    t = check_transition_matrix(transition)
    n_in = t.shape[1]
    if tol_bits <= 0.0:
        raise ValueError("tol_bits must be positive")
    if initial_prior is None:
        p = np.full(n_in, 1.0 / n_in)
    else:
        p = check_prob_vector(initial_prior)
        if p.size != n_in:
            raise ValueError("initial prior size does not match the number of inputs")
        if p.min() <= 0.0:
            raise ValueError("initial prior must be strictly positive")
    # outputs that never occur contribute nothing; dropping them keeps the
    # output distribution strictly positive, so the logs need no masking
    t = t[t.sum(axis=1) > 0.0]
    if t.shape == (2, 2):
        # binary channels dominate the sweeps; scalar arithmetic skips the
        # numpy dispatch overhead that would dwarf the 2x2 linear algebra
        return _blahut_arimoto_2x2(t, p, tol_bits, max_iter, track_history)
    mask = t > 0.0
    t_log_t = np.zeros_like(t)
    t_log_t[mask] = t[mask] * np.log2(t[mask])
    kl_const = t_log_t.sum(axis=0)
    t_tr = np.ascontiguousarray(t.T)

    history = [] if track_history else None
    q = np.empty(t.shape[0])
    kl = np.empty(n_in)
    weighted = np.empty(n_in)
    lower = 0.0
    gap = np.inf
    iteration = 0
    for iteration in range(1, max_iter + 1):
        np.dot(t, p, out=q)
        np.log2(q, out=q)
        np.dot(t_tr, q, out=kl)
        np.subtract(kl_const, kl, out=kl)  # log2 c_n = D(p(.|n) || q) in bits
        np.exp2(kl, out=weighted)
        np.multiply(weighted, p, out=weighted)
        total = weighted.sum()
        lower = float(np.log2(total))
        gap = float(kl.max() - lower)
        if track_history:
            history.append(lower)
        p = weighted / total
        if gap <= tol_bits:
            return BAResult(lower, p, iteration, gap, True, history)
    return BAResult(lower, p, iteration, gap, False, history)


def _blahut_arimoto_2x2(t, p, tol_bits, max_iter, track_history):
    """Same recursion and stopping rule as the generic solver, on floats."""
    log2 = math.log2
    t00, t01 = float(t[0, 0]), float(t[0, 1])
    t10, t11 = float(t[1, 0]), float(t[1, 1])
    c0 = (t00 * log2(t00) if t00 > 0.0 else 0.0) + (t10 * log2(t10) if t10 > 0.0 else 0.0)
    c1 = (t01 * log2(t01) if t01 > 0.0 else 0.0) + (t11 * log2(t11) if t11 > 0.0 else 0.0)
    p0, p1 = float(p[0]), float(p[1])
    history = [] if track_history else None
    lower = 0.0
    gap = np.inf
    iteration = 0
    for iteration in range(1, max_iter + 1):
        lq0 = log2(t00 * p0 + t01 * p1)
        lq1 = log2(t10 * p0 + t11 * p1)
        kl0 = c0 - t00 * lq0 - t10 * lq1
        kl1 = c1 - t01 * lq0 - t11 * lq1
        w0 = p0 * 2.0**kl0
        w1 = p1 * 2.0**kl1
        total = w0 + w1
        lower = log2(total)
        gap = (kl0 if kl0 > kl1 else kl1) - lower
        if track_history:
            history.append(lower)
        p0 = w0 / total
        p1 = w1 / total
        if gap <= tol_bits:
            return BAResult(lower, np.array([p0, p1]), iteration, gap, True, history)
    return BAResult(lower, np.array([p0, p1]), iteration, float(gap), False, history)


def blahut_arimoto_batch(transitions, tol_bits: float = 1e-9, max_iter: int = 100_000):
    """Blahut-Arimoto over a stack of transition matrices (g, outputs, inputs).

    Vectorized counterpart of :func:`blahut_arimoto` with uniform initial
    priors, used for dense parameter sweeps. Returns arrays
    (capacities, priors, iterations, gaps); entries are frozen as soon as
    their bracket reaches ``tol_bits``.
    """
    t = np.asarray(transitions, dtype=float)
    if t.ndim != 3:
        raise ValueError("expected a stack of transition matrices")
    g, _, n_in = t.shape
    mask = t > 0.0
    t_log_t = np.zeros_like(t)
    t_log_t[mask] = t[mask] * np.log2(t[mask])
    kl_const = t_log_t.sum(axis=1)  # (g, n_in)

    priors = np.full((g, n_in), 1.0 / n_in)
    capacities = np.zeros(g)
    gaps = np.full(g, np.inf)
    iterations = np.zeros(g, dtype=int)
    active = np.arange(g)
    for it in range(1, max_iter + 1):
        ta = t[active]
        pa = priors[active]
        q = np.einsum("gmn,gn->gm", ta, pa)
        logq = np.zeros_like(q)
        np.log2(q, out=logq, where=q > 0.0)
        kl = kl_const[active] - np.einsum("gmn,gm->gn", ta, logq)
        weighted = pa * np.exp2(kl)
        total = weighted.sum(axis=1)
        lower = np.log2(total)
        gap = kl.max(axis=1) - lower
        capacities[active] = lower
        gaps[active] = gap
        iterations[active] = it
        priors[active] = weighted / total[:, None]
        done = gap <= tol_bits
        if done.any():
            active = active[~done]
            if active.size == 0:
                break
    return capacities, priors, iterations, gaps


class BinaryCapacity(NamedTuple):
    capacity_bits: float
    optimal_p0: float


def binary_capacity(eps0: float, eps1: float) -> BinaryCapacity:
    """Capacity and optimal prior of the binary asymmetric channel with
    error probabilities eps0 (input 0 received as 1) and eps1 (input 1
    received as 0).

    Labels are first canonicalized (flip outputs if eps0 + eps1 > 1, swap
    inputs if eps0 > eps1); the returned prior refers to the original
    input 0. The degenerate line eps0 + eps1 = 1 carries no information.
    """
    for name, v in (("eps0", eps0), ("eps1", eps1)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} = {v} outside [0, 1]")
    e0, e1 = float(eps0), float(eps1)
    if e0 + e1 > 1.0:
        e0, e1 = 1.0 - e0, 1.0 - e1
    swapped = e0 > e1
    if swapped:
        e0, e1 = e1, e0
    span = 1.0 - e0 - e1
    if span < 1e-12:
        return BinaryCapacity(0.0, 0.5)
    h0 = binary_entropy(e0)
    h1 = binary_entropy(e1)
    z = 2.0 ** ((h0 - h1) / span)
    p0 = (1.0 - e1 * (1.0 + z)) / (span * (1.0 + z))
    cap = float(np.log2(1.0 + z) + (e0 * h1 - (1.0 - e1) * h0) / span)
    cap = max(cap, 0.0)
    p0 = min(max(p0, 0.0), 1.0)
    if swapped:
        p0 = 1.0 - p0
    return BinaryCapacity(cap, p0)


class WeaklySymmetric(NamedTuple):
    capacity_bits: float
    note: str


def weakly_symmetric_capacity(transition, tol: float = 1e-10) -> WeaklySymmetric | None:
    """Closed-form capacity when every column is a permutation of every
    other and all row sums are equal: log2(outputs) - H(column), achieved
    by the uniform prior. Returns None when the structure is absent."""
    t = check_transition_matrix(transition)
    sorted_cols = np.sort(t, axis=0)
    if np.max(np.abs(sorted_cols - sorted_cols[:, [0]])) > tol:
        return None
    row_sums = t.sum(axis=1)
    if row_sums.max() - row_sums.min() > tol:
        return None
    cap = float(np.log2(t.shape[0]) - shannon_entropy(t[:, 0]))
    return WeaklySymmetric(max(cap, 0.0), "weakly symmetric: uniform prior is optimal")
