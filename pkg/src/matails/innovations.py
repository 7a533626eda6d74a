"""Nonnegative Pareto-tailed innovation laws.

Two concrete families with survival index ``alpha`` are provided, both with
a closed-form tail quantile ``b``:

* standard Pareto:  P[Z > z] = (z/scale)^-alpha  for z >= scale,
* shifted Pareto:   P[Z > z] = (1 + z/scale)^-alpha  for z >= 0.

``b(t)`` is the tail inverse, i.e. the solution of P[Z > b(t)] = 1/t.  For
the standard family the scaling identity ``t * P[Z > b(t) z] = z^-alpha``
holds exactly whenever ``z >= t^(-1/alpha)``, which makes it the reference
law for calibration tests.

Sampling is inverse-transform on a counter-based Philox generator, so
identical ``(model, count, seed)`` reproduce the stream bit for bit.  The
sub-stream rule is fixed: block ``b`` of a partitioned run draws from
``Philox(SeedSequence(seed, spawn_key=(b,)))``; a plain ``sample`` call is
block 0 of its own run (no spawn key).  Workers never share a stream.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = ["ParetoFamily", "TailModel", "sample", "quantile_b", "block_generator"]


class ParetoFamily(str, enum.Enum):
    STANDARD = "standard_pareto"
    SHIFTED = "shifted_pareto"


@dataclass(frozen=True)
class TailModel:
    """Innovation law: family, tail index ``alpha`` and scale."""

    family: ParetoFamily
    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if self.scale <= 0:
            raise ParameterError(f"scale must be positive, got {self.scale}")

    @classmethod
    def standard_pareto(cls, alpha: float, scale: float = 1.0) -> "TailModel":
        return cls(ParetoFamily.STANDARD, alpha, scale)

    @classmethod
    def shifted_pareto(cls, alpha: float, scale: float = 1.0) -> "TailModel":
        return cls(ParetoFamily.SHIFTED, alpha, scale)

    def survival(self, z):
        """P[Z > z], vectorized over ``z``."""
        z = np.asarray(z, dtype=float)
        if self.family is ParetoFamily.STANDARD:
            out = np.where(z >= self.scale, (z / self.scale) ** -self.alpha, 1.0)
        else:
            out = np.where(z >= 0.0, (1.0 + z / self.scale) ** -self.alpha, 1.0)
        return out if out.shape else float(out)

    def inverse_survival(self, u):
        """Solve P[Z > z] = u for z, vectorized; u must lie in (0, 1]."""
        u = np.asarray(u, dtype=float)
        if self.family is ParetoFamily.STANDARD:
            out = self.scale * u ** (-1.0 / self.alpha)
        else:
            out = self.scale * (u ** (-1.0 / self.alpha) - 1.0)
        return out if out.shape else float(out)

    def quantile_b(self, t: float) -> float:
        """Tail quantile b(t) solving P[Z > b(t)] = 1/t, for t >= 1."""
        if t < 1.0:
            raise ParameterError(f"b(t) requires t >= 1, got {t}")
        if self.family is ParetoFamily.STANDARD:
            return self.scale * t ** (1.0 / self.alpha)
        return self.scale * (t ** (1.0 / self.alpha) - 1.0)


def block_generator(seed: int, block: int | None = None) -> np.random.Generator:
    """Philox generator for one sub-stream of a seeded run.

    ``block=None`` is the undivided stream; block ``b`` spawns the child
    ``SeedSequence(seed, spawn_key=(b,))``.  This rule is part of the
    reproducibility contract and must not change.
    """
    if block is None:
        ss = np.random.SeedSequence(seed)
    else:
        ss = np.random.SeedSequence(seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def _draw(model: TailModel, rng: np.random.Generator, shape) -> np.ndarray:
    # 1 - random() lies in (0, 1], keeping the inverse transform finite.
    u = 1.0 - rng.random(shape)
    return model.inverse_survival(u)


def sample(model: TailModel, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` i.i.d. innovations from ``model``, deterministically in ``seed``."""
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    return _draw(model, block_generator(seed), count)


def quantile_b(model: TailModel, t: float) -> float:
    """Scaling function b(t); see :meth:`TailModel.quantile_b`."""
    return model.quantile_b(t)
