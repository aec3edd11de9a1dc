"""Shared test helpers: an independent capacity oracle (dense simplex grid
search with local refinement) and random samplers for channels."""

import itertools

import numpy as np

from capdetect import AffineQubitChannel


def _compositions(total: int, parts: int):
    """All integer vectors of length `parts` summing to `total` (stars and bars)."""
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        comp = []
        for c in cuts:
            comp.append(c - prev - 1)
            prev = c
        comp.append(total + parts - 2 - prev)
        yield comp


def simplex_grid_search_capacity(transition, coarse: int = 50, final_step: float = 2.5e-4) -> float:
    """Capacity by brute force over the input simplex, independent of the
    library: I(p) = sum_n p_n sum_m T log2 T + H(Tp), maximized on a dense
    coarse grid and then hill-climbed with a shrinking step."""
    t = np.asarray(transition, dtype=float)
    k = t.shape[1]
    mask = t > 0
    tlogt = np.zeros_like(t)
    tlogt[mask] = t[mask] * np.log2(t[mask])
    c0 = tlogt.sum(axis=0)

    def value(priors):
        q = priors @ t.T
        logq = np.zeros_like(q)
        nz = q > 0
        logq[nz] = np.log2(q[nz])
        return priors @ c0 - (q * logq).sum(axis=1)

    grid = np.array(list(_compositions(coarse, k)), dtype=float) / coarse
    vals = value(grid)
    best = grid[np.argmax(vals)]
    best_val = vals.max()

    deltas = []
    for head in itertools.product(range(-4, 5), repeat=k - 1):
        tail = -sum(head)
        if abs(tail) <= 4:
            deltas.append(list(head) + [tail])
    deltas = np.array(deltas, dtype=float)

    step = 1.0 / coarse
    while step > final_step / 4:
        step /= 4.0
        while True:
            cand = best + step * deltas
            cand = cand[np.all(cand >= 0.0, axis=1)]
            vals = value(cand)
            i = int(np.argmax(vals))
            if vals[i] > best_val + 1e-15:
                best, best_val = cand[i], vals[i]
            else:
                break
    return float(best_val)


def random_cp_affine(rng: np.random.Generator) -> AffineQubitChannel:
    """Uniform rejection sample from the completely positive canonical region."""
    while True:
        l1, l2, l3, t3 = rng.uniform(-1.0, 1.0, 4)
        try:
            return AffineQubitChannel(l1, l2, l3, t3)
        except ValueError:
            continue


def random_transition(rng: np.random.Generator, n_out: int, n_in: int) -> np.ndarray:
    """Random column-stochastic matrix, columns uniform on the simplex."""
    return rng.dirichlet(np.ones(n_out), size=n_in).T
