"""Discrete ancestor distribution on the sampling grid and alias tables.

The ancestor PMF is the band-limited density evaluated at K equally spaced
grid points and scaled by 2/K; because the grid resolves every frequency
term (K >= 2N+1) the values sum to exactly 1.  Alias tables give O(1)
draws after O(K) setup.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import EvalCounter, FourierDensity


@dataclass(frozen=True)
class AncestorPmf:
    """PMF p[k] on the grid x_k = -1 + 2k/K, k = 0..K-1."""

    probs: np.ndarray

    def __post_init__(self):
        self.probs.setflags(write=False)

    @property
    def size(self) -> int:
        return self.probs.size

    def grid(self) -> np.ndarray:
        return -1.0 + 2.0 * np.arange(self.size) / self.size


@dataclass(frozen=True)
class AliasTable:
    """Walker/Vose alias table: cell k keeps prob[k], else aliases."""

    prob: np.ndarray
    alias: np.ndarray

    def __post_init__(self):
        self.prob.setflags(write=False)
        self.alias.setflags(write=False)

    @property
    def size(self) -> int:
        return self.prob.size


def build_ancestor(model: FourierDensity, K: int,
                   counter: EvalCounter | None = None) -> AncestorPmf:
    """Discretize the density: probs[k] = (2/K) * p(x_k).  Bills K evals."""
    vals = model.pdf_grid(K, counter)
    return AncestorPmf(probs=(2.0 / K) * vals)


def build_alias(pmf: AncestorPmf) -> AliasTable:
    """Vose's stable O(K) construction.

    Scaled probabilities exactly equal to 1 go to the large worklist; zero
    cells are permitted and become pure-alias cells.
    """
    probs = np.asarray(pmf.probs, dtype=float)
    k = probs.size
    scaled = probs * (k / probs.sum())
    prob = np.ones(k)
    alias = np.arange(k)
    small = [i for i, w in enumerate(scaled) if w < 1.0]
    large = [i for i, w in enumerate(scaled) if w >= 1.0]
    scaled = scaled.copy()
    while small and large:
        s = small.pop()
        g = large.pop()
        prob[s] = scaled[s]
        alias[s] = g
        scaled[g] -= 1.0 - scaled[s]
        if scaled[g] >= 1.0:
            large.append(g)
        else:
            small.append(g)
    # Leftovers are 1 up to rounding.
    for i in small + large:
        prob[i] = 1.0
        alias[i] = i
    return AliasTable(prob=prob, alias=alias)


def reconstruct_pmf(table: AliasTable) -> np.ndarray:
    """Invert the table: cell k contributes prob[k]/K to k, rest to alias[k]."""
    k = table.size
    out = table.prob / k
    np.add.at(out, table.alias, (1.0 - table.prob) / k)
    return out


def alias_select(table: AliasTable, idx, u):
    """Deterministic core of a draw: cell idx with uniform u in [0, 1)."""
    idx = np.asarray(idx)
    take = np.asarray(u) < table.prob[idx]
    return np.where(take, idx, table.alias[idx])


def sample_ancestor(table: AliasTable, rng) -> int:
    """One draw: one uniform index plus one uniform real; O(1) time."""
    rng = np.random.default_rng(rng)
    idx = int(rng.integers(table.size))
    u = rng.random()
    return int(alias_select(table, idx, u))


def sample_ancestors(table: AliasTable, size: int, rng) -> np.ndarray:
    """Vectorized draws; same per-draw contract as sample_ancestor."""
    rng = np.random.default_rng(rng)
    idx = rng.integers(table.size, size=size)
    u = rng.random(size)
    return alias_select(table, idx, u)
