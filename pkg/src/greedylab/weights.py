"""Continuous non-negative weight laws and reproducible i.i.d. weight assignment."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class WeightDistribution:
    family: str  # "uniform" | "exp" | "ueps"
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family == "uniform":
            a, b = self.params
            if not 0 <= a < b:
                raise ValueError("uniform needs 0 <= a < b")
        elif self.family == "exp":
            (rate,) = self.params
            if rate <= 0:
                raise ValueError("exp needs rate > 0")
        elif self.family == "ueps":
            (eps,) = self.params
            if not 0 < eps < 1:
                raise ValueError("ueps needs 0 < eps < 1")
        else:
            raise ValueError(f"unknown family {self.family!r}")

    @classmethod
    def uniform(cls, a: float = 0.0, b: float = 1.0) -> "WeightDistribution":
        return cls("uniform", (float(a), float(b)))

    @classmethod
    def exponential(cls, rate: float = 1.0) -> "WeightDistribution":
        return cls("exp", (float(rate),))

    @classmethod
    def uniform_epsilon(cls, eps: float) -> "WeightDistribution":
        return cls("ueps", (float(eps),))

    @classmethod
    def parse(cls, text: str) -> "WeightDistribution":
        """Parse CLI descriptors ``uniform:a,b``, ``exp:rate`` and ``ueps:eps``."""
        family, _, rest = text.partition(":")
        family = family.strip().lower()
        vals = tuple(float(x) for x in rest.split(",") if x.strip())
        if family in ("exponential",):
            family = "exp"
        if family == "uniform" and not vals:
            vals = (0.0, 1.0)
        if family == "exp" and not vals:
            vals = (1.0,)
        return cls(family, vals)

    def __str__(self) -> str:
        return f"{self.family}:" + ",".join(f"{p:g}" for p in self.params)

    @property
    def support(self) -> tuple[float, float]:
        if self.family == "uniform":
            return self.params
        if self.family == "ueps":
            eps = self.params[0]
            return (1 - eps, 1 + eps)
        return (0.0, math.inf)

    def _ab(self) -> tuple[float, float]:
        return self.support

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "exp":
            out = -np.expm1(-self.params[0] * np.maximum(x, 0.0))
        else:
            a, b = self._ab()
            out = np.clip((x - a) / (b - a), 0.0, 1.0)
        return out if out.ndim else float(out)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "exp":
            lam = self.params[0]
            out = np.where(x >= 0, lam * np.exp(-lam * np.maximum(x, 0.0)), 0.0)
        else:
            a, b = self._ab()
            out = np.where((x >= a) & (x <= b), 1.0 / (b - a), 0.0)
        return out if out.ndim else float(out)

    def ppf(self, u):
        """Inverse cdf on [0, 1]."""
        u = np.asarray(u, dtype=float)
        if self.family == "exp":
            out = -np.log1p(-u) / self.params[0]
        else:
            a, b = self._ab()
            out = a + (b - a) * u
        return out if out.ndim else float(out)

    def mean(self) -> float:
        if self.family == "exp":
            return 1.0 / self.params[0]
        a, b = self._ab()
        return (a + b) / 2

    def second_moment(self) -> float:
        if self.family == "exp":
            return 2.0 / self.params[0] ** 2
        a, b = self._ab()
        return (a * a + a * b + b * b) / 3

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.family == "exp":
            return rng.exponential(1.0 / self.params[0], size)
        a, b = self._ab()
        return rng.uniform(a, b, size)


UNIFORM01 = WeightDistribution.uniform(0.0, 1.0)


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit seed for stream ``index`` under ``master_seed``."""
    ss = np.random.SeedSequence([int(master_seed) & (2**64 - 1), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def draw_distinct(dist: WeightDistribution, size: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. draws; a value colliding with an earlier id is redrawn."""
    w = dist.sample(rng, size)
    while True:
        _, first = np.unique(w, return_index=True)
        if len(first) == size:
            return w
        dup = np.setdiff1d(np.arange(size), first)
        w[dup] = dist.sample(rng, len(dup))


def distinct_rows(dist: WeightDistribution, shape: tuple[int, int], rng: np.random.Generator) -> np.ndarray:
    """Batch version of :func:`draw_distinct`: every row has pairwise distinct entries."""
    w = dist.sample(rng, shape)
    while True:
        s = np.sort(w, axis=1)
        bad = np.flatnonzero((np.diff(s, axis=1) == 0).any(axis=1))
        if not len(bad):
            return w
        for i in bad:
            w[i] = draw_distinct(dist, shape[1], rng)


@dataclass(frozen=True, eq=False)
class WeightAssignment:
    target: str  # "nodes" | "edges"
    values: np.ndarray
    dist: WeightDistribution | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.target not in ("nodes", "edges"):
            raise ValueError(f"unknown target {self.target!r}")
        v = np.asarray(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> float:
        return float(self.values[k])

    def replaced(self, k: int, value: float) -> "WeightAssignment":
        v = self.values.copy()
        v[k] = value
        return WeightAssignment(self.target, v, self.dist, self.seed)


def assign_weights(g: Graph, target: str, dist: WeightDistribution, seed: int) -> WeightAssignment:
    size = g.n if target == "nodes" else g.m
    rng = np.random.default_rng(seed)
    return WeightAssignment(target, draw_distinct(dist, size, rng), dist, seed)
