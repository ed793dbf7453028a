"""Plain Monte Carlo volume estimates for B_1^n and its hyperplane sections.

Randomness comes from numpy's PCG64 generator.  The seed is expanded with a
``SeedSequence`` into one child stream per batch, so an estimate depends only
on (seed, samples, batch) and is reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .core import CrossPolytopeError, HyperplaneSpec, body_volume


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int

    def agrees(self, value: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - value) <= sigmas * self.stderr

    def z_score(self, value: float) -> float:
        if self.stderr == 0:
            return 0.0 if self.mean == value else math.inf
        return (self.mean - value) / self.stderr


def sample_cross_polytope(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points in B_1^n.

    With E_1..E_{n+1} i.i.d. standard exponentials and independent random
    signs, (±E_1, ..., ±E_n) / (E_1 + ... + E_{n+1}) is uniform on B_1^n.
    """
    e = rng.standard_exponential((size, n + 1))
    signs = rng.choice(np.array([-1.0, 1.0]), size=(size, n))
    return signs * e[:, :n] / e.sum(axis=1, keepdims=True)


def _batches(samples: int, batch: int):
    full, rest = divmod(samples, batch)
    return [batch] * full + ([rest] if rest else [])


def _estimate(hits: int, samples: int, scale: float, seed: int) -> McEstimate:
    p = hits / samples
    var = p * (1.0 - p) * samples / (samples - 1)
    return McEstimate(scale * p, scale * math.sqrt(var / samples), samples, seed)


def mc_body_fraction(
    predicate: Callable[[np.ndarray], np.ndarray],
    n: int,
    samples: int = 10**6,
    seed: int = 0,
    batch: int = 1 << 17,
) -> McEstimate:
    """Estimate |{x in B_1^n : predicate(x)}|.

    ``predicate`` receives an (m, n) array of points and returns a boolean
    mask of length m.
    """
    if samples < 10**4:
        raise CrossPolytopeError("use at least 10^4 samples")
    sizes = _batches(samples, batch)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    hits = 0
    for size, child in zip(sizes, children):
        x = sample_cross_polytope(n, size, make_rng(child))
        hits += int(np.count_nonzero(predicate(x)))
    return _estimate(hits, samples, body_volume(n), seed)


def mc_chopped_volume(normal, t: float, samples: int = 10**6, seed: int = 0) -> McEstimate:
    a = np.asarray(normal, dtype=float)
    return mc_body_fraction(lambda x: x @ a >= t, a.size, samples, seed)


def mc_slab_volume(normal, t: float, samples: int = 10**6, seed: int = 0) -> McEstimate:
    a = np.asarray(normal, dtype=float)
    return mc_body_fraction(lambda x: np.abs(x @ a) <= t, a.size, samples, seed)


def ball_volume(dim: int, radius: float) -> float:
    return math.exp(0.5 * dim * math.log(math.pi) - gammaln(0.5 * dim + 1)) * radius**dim


def hyperplane_basis(normal: np.ndarray) -> np.ndarray:
    """Rows form an orthonormal basis of the orthogonal complement of ``normal``."""
    _, _, vt = np.linalg.svd(normal[None, :])
    return vt[1:]


def mc_hyperplane_section_volume(
    h: HyperplaneSpec, samples: int = 10**6, seed: int = 0, batch: int = 1 << 17
) -> McEstimate:
    """Estimate |B_1^n ∩ H| by sampling the (n-1)-ball of radius sqrt(1 - t^2) around t*a.

    B_1^n sits inside the Euclidean unit ball, so that disc covers the section.
    """
    n, t = h.dim, h.offset
    if t >= 1.0:
        return McEstimate(0.0, 0.0, samples, seed)
    m = n - 1
    radius = math.sqrt(1.0 - t * t)
    basis = hyperplane_basis(h.normal)
    foot = t * h.normal
    sizes = _batches(samples, batch)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    hits = 0
    for size, child in zip(sizes, children):
        rng = make_rng(child)
        g = rng.standard_normal((size, m))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        g *= radius * rng.random((size, 1)) ** (1.0 / m)
        x = foot + g @ basis
        hits += int(np.count_nonzero(np.abs(x).sum(axis=1) <= 1.0))
    return _estimate(hits, samples, ball_volume(m, radius), seed)
