"""Deterministic chunked draws of standard complex Gaussian points.

Each complex coordinate has density ``exp(-|z|^2)/pi`` (real and imaginary
parts N(0, 1/2)).  The index space is cut into fixed-size chunks; chunk
``c`` of seed ``s`` is a pure function of ``(s, c)``, so results do not
depend on how chunks are scheduled.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

CHUNK = 1 << 20
MIN_SAMPLES = 10_000
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Region:
    """Ball in C^n, given by its center and its radius in the Euclidean norm of R^{2n}."""

    center: tuple[complex, ...]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("region radius must be positive")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in self.center):
            raise ValueError("region center must be finite")

    @classmethod
    def parse(cls, text: str) -> Region:
        """``"c1,c2,...,r"`` where each ``c`` is a Python complex literal such as ``1+0.5j``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) < 2:
            raise ValueError("region needs at least one center coordinate and a radius")
        return cls(tuple(complex(p.replace("i", "j")) for p in parts[:-1]), float(parts[-1]))


@dataclass(frozen=True)
class SamplePlan:
    nsamples: int
    seed: int
    sampler: str = "pseudo"  # "pseudo" | "sobol"
    region: Region | None = None
    workers: int | None = None

    def __post_init__(self):
        if self.nsamples < MIN_SAMPLES:
            raise ValueError(f"nsamples must be >= {MIN_SAMPLES}")
        if self.sampler not in ("pseudo", "sobol"):
            raise ValueError(f"unknown sampler {self.sampler!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    def with_seed(self, seed: int) -> SamplePlan:
        return SamplePlan(self.nsamples, seed, self.sampler, self.region, self.workers)

    def to_json(self) -> dict:
        out = {"nsamples": self.nsamples, "seed": self.seed, "sampler": self.sampler}
        if self.region is not None:
            out["region"] = {
                "center": [[c.real, c.imag] for c in self.region.center],
                "radius": self.region.radius,
            }
        return out


def _chunks(n: int):
    return [(c, c * CHUNK, min(n, (c + 1) * CHUNK)) for c in range((n + CHUNK - 1) // CHUNK)]


def _uniforms(plan: SamplePlan, dim: int, chunk: int, start: int, stop: int) -> np.ndarray:
    m = stop - start
    if plan.sampler == "pseudo":
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([plan.seed, chunk])))
        return rng.random((m, dim))
    engine = qmc.Sobol(dim, scramble=True, seed=np.random.Generator(np.random.PCG64(plan.seed)))
    if start:
        engine.fast_forward(start)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # balance warning for non powers of two
        u = engine.random(m)
    # scrambled points are never exactly 0 in exact arithmetic; guard the float edge
    return np.clip(u, 1e-300, 1.0 - 2.0**-53)


def gaussian_block(plan: SamplePlan, nvars: int, chunk: int, start: int, stop: int):
    """Real/imag parts (each shape (m, nvars)) and per-point weights (None when uniform)."""
    if plan.region is None:
        u = _uniforms(plan, 2 * nvars, chunk, start, stop)
        g = ndtri(u) * _INV_SQRT2
        return g[:, :nvars], g[:, nvars:], None
    reg = plan.region
    if len(reg.center) != nvars:
        raise ValueError("region center dimension does not match the polynomial")
    d = 2 * nvars
    u = _uniforms(plan, d + 1, chunk, start, stop)
    direction = ndtri(u[:, :d])
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = reg.radius * u[:, d] ** (1.0 / d)
    pts = direction * radius[:, None]
    cre = np.array([c.real for c in reg.center])
    cim = np.array([c.imag for c in reg.center])
    re = pts[:, :nvars] + cre
    im = pts[:, nvars:] + cim
    # uniform proposal on the ball, target Gaussian restricted to the ball
    logw = -(np.sum(re * re, axis=1) + np.sum(im * im, axis=1))
    return re, im, logw


def map_chunks(plan: SamplePlan, nvars: int, fn: Callable, n: int | None = None) -> list:
    """Apply ``fn(re, im, logw)`` to every chunk; results returned in chunk order."""
    n = plan.nsamples if n is None else n
    jobs = _chunks(n)

    def run(job):
        c, a, b = job
        return fn(*gaussian_block(plan, nvars, c, a, b))

    workers = plan.workers or min(4, os.cpu_count() or 1)
    if workers <= 1 or len(jobs) == 1:
        return [run(j) for j in jobs]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(run, jobs))


def normalize_log_weights(logw_chunks: Sequence[np.ndarray]) -> tuple[np.ndarray, float]:
    """Normalized weights and the effective sample size ``(sum w)^2 / sum w^2``."""
    logw = np.concatenate(logw_chunks)
    w = np.exp(logw - logw.max())
    w /= math.fsum(w)
    return w, 1.0 / float(np.dot(w, w))
