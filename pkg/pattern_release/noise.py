"""Laplace noise, randomized thresholds and closed-form checks of the privacy ratio.

Every draw goes through the inverse CDF of the Laplace distribution,
one uniform per sample, so a seed fully determines the noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np
import numpy.typing as npt
import pandas as pd

from pattern_release.logger import pr_logger
from pattern_release.series import PrivacyBudget, Thresholds

pr_log = pr_logger(__name__)

# relative slack allowed when comparing a ratio against e^eps
RATIO_TOLERANCE = 1e-9

MAX_SEED = 2**64 - 1


class ScaleMode(str, Enum):
    """Scale of the noise added to the partitioning thresholds.

    - ``proof_alpha``: ``alpha / eps1``, the scale the privacy argument needs.
    - ``paper_unit``: ``1 / eps1``. Only private when ``alpha <= 1``; the
      privacy-ratio sweep shows where it breaks.
    """

    PROOF_ALPHA = "proof_alpha"
    PAPER_UNIT = "paper_unit"


@dataclass(frozen=True)
class LaplaceParams:
    """Zero-mean Laplace distribution of scale ``b``."""

    scale: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.scale) or self.scale <= 0:
            raise ValueError(f"Laplace scale must be a positive finite real, got {self.scale}.")


@dataclass(frozen=True)
class RandomizedThresholds:
    """Noisy thresholds drawn once per partitioning run, with the realized noise."""

    t_d_hat: float
    t_r_hat: float
    y: float
    y_prime: float


class SeededRng:
    """Deterministic pseudorandom stream.

    Wraps a numpy PCG64 generator, which yields the same stream for the
    same seed on every platform. Not meant to be shared between tasks.
    """

    def __init__(self, seed: int) -> None:
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise TypeError(f"Seed must be an integer, got {seed!r}.")
        if not 0 <= seed <= MAX_SEED:
            raise ValueError(f"Seed must be a 64-bit unsigned integer, got {seed}.")
        self.seed = int(seed)
        self.generator = np.random.Generator(np.random.PCG64(self.seed))

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed})"

    def uniform(self) -> float:
        """Draw one uniform on the open interval (0, 1)."""
        return float(self.uniforms(1)[0])

    def uniforms(self, size: int) -> npt.NDArray[np.float64]:
        """Draw ``size`` uniforms on the open interval (0, 1)."""
        u = self.generator.random(size)
        while (zeros := u == 0.0).any():
            u[zeros] = self.generator.random(int(zeros.sum()))
        return u


def laplace_inverse_cdf(
    u: float | npt.NDArray[np.float64], scale: float
) -> float | npt.NDArray[np.float64]:
    """Map uniforms on (0, 1) to Laplace(0, scale) samples."""
    return scale * np.sign(0.5 - u) * np.log(1 - 2 * np.abs(u - 0.5))


def sample_laplace(rng: SeededRng, params: LaplaceParams) -> float:
    return float(laplace_inverse_cdf(rng.uniform(), params.scale))


def sample_laplace_array(
    rng: SeededRng, params: LaplaceParams, size: int
) -> npt.NDArray[np.float64]:
    """Draw ``size`` samples; consumes the stream exactly like ``size`` calls of sample_laplace."""
    return np.asarray(laplace_inverse_cdf(rng.uniforms(size), params.scale))


def laplace_tail(u: float, params: LaplaceParams) -> float:
    """Return ``Pr(Y > u)`` for ``Y ~ Lap(scale)``."""
    b = params.scale
    if u >= 0:
        return 0.5 * math.exp(-u / b)
    return 1 - 0.5 * math.exp(u / b)


def laplace_cdf(u: float, params: LaplaceParams) -> float:
    return 1 - laplace_tail(u, params)


def laplace_pdf(u: float, params: LaplaceParams) -> float:
    b = params.scale
    return math.exp(-abs(u) / b) / (2 * b)


def threshold_noise_scale(budget: PrivacyBudget, scale_mode: ScaleMode | str) -> float:
    scale_mode = ScaleMode(scale_mode)
    if scale_mode is ScaleMode.PAPER_UNIT:
        return 1 / budget.eps1
    return budget.alpha / budget.eps1


def randomize_thresholds(
    rng: SeededRng,
    t: Thresholds,
    b: PrivacyBudget,
    scale_mode: ScaleMode | str = ScaleMode.PROOF_ALPHA,
    zero_noise: bool = False,
) -> RandomizedThresholds:
    """Draw the noisy spread and jump thresholds for one partitioning run.

    ``Y`` is drawn before ``Y'``. Both are charged once to ``eps1``.
    In zero-noise mode nothing is drawn and the thresholds are returned as is.
    """
    if zero_noise:
        return RandomizedThresholds(t_d_hat=t.t_d, t_r_hat=t.t_r, y=0.0, y_prime=0.0)

    params = LaplaceParams(scale=threshold_noise_scale(b, scale_mode))
    y = sample_laplace(rng, params)
    y_prime = sample_laplace(rng, params)
    realized = RandomizedThresholds(
        t_d_hat=t.t_d + y, t_r_hat=t.t_r + y_prime, y=y, y_prime=y_prime
    )
    pr_log.debug(
        f"Randomized thresholds: t_d_hat={realized.t_d_hat:.4f}, t_r_hat={realized.t_r_hat:.4f}"
    )
    if realized.t_d_hat < 0 or realized.t_r_hat < 0:
        pr_log.debug("Negative realized threshold: used as is.")
    return realized


def dp_ratio_bound_check(
    u: float, alpha: float, eps1: float, scale: float | None = None
) -> tuple[float, bool]:
    """Compare ``Pr(Y > u - alpha) / Pr(Y > u)`` against ``e^eps1``.

    This is the worst-case ratio of the probability that a bucket stays
    open when one bin of a neighboring database moves by ``alpha``.

    Parameters
    ----------
    u : float
        Distance between the threshold and the bucket spread.

    alpha : float
        Sensitivity of one bin.

    eps1 : float
        Partitioning budget.

    scale : float, optional
        Laplace scale of the threshold noise. Defaults to ``alpha / eps1``.

    Returns
    -------
    tuple[float, bool]
        The ratio and whether it is within ``e^eps1`` (relative slack 1e-9).
    """
    if alpha <= 0 or eps1 <= 0:
        raise ValueError(f"alpha and eps1 must be positive, got alpha={alpha}, eps1={eps1}.")
    params = LaplaceParams(scale=alpha / eps1 if scale is None else scale)
    denominator = laplace_tail(u, params)
    if denominator == 0.0:
        raise ValueError(f"Laplace tail underflow at u={u} (scale {params.scale}).")
    ratio = laplace_tail(u - alpha, params) / denominator
    return ratio, ratio <= math.exp(eps1) * (1 + RATIO_TOLERANCE)


def dp_ratio_grid(
    alpha: float,
    eps1_values: Iterable[float] = (0.1, 0.5, 1.0, 2.0),
    scale_mode: ScaleMode | str = ScaleMode.PROOF_ALPHA,
    span: int = 5,
    steps_per_alpha: int = 10,
) -> pd.DataFrame:
    """Evaluate the privacy ratio over ``u`` in ``[-span*alpha, span*alpha]``.

    Both neighbor directions are covered: the spread shrinking by ``alpha``
    (``ratio_decrease``) and growing by ``alpha`` (``ratio_increase``,
    never above 1).

    Returns
    -------
    pd.DataFrame
        One row per ``(eps1, u)`` with columns
        ``eps1, scale, u, ratio_decrease, ratio_increase, bound, bound_ok``.
    """
    scale_mode = ScaleMode(scale_mode)
    rows: dict[str, list[float | bool]] = {
        "eps1": [],
        "scale": [],
        "u": [],
        "ratio_decrease": [],
        "ratio_increase": [],
        "bound": [],
        "bound_ok": [],
    }
    for eps1 in eps1_values:
        scale = alpha / eps1 if scale_mode is ScaleMode.PROOF_ALPHA else 1 / eps1
        bound = math.exp(eps1)
        for k in range(-span * steps_per_alpha, span * steps_per_alpha + 1):
            u = k * alpha / steps_per_alpha
            decrease, decrease_ok = dp_ratio_bound_check(u, alpha, eps1, scale=scale)
            # a neighbor increasing the spread is the same check shifted by alpha
            increase, _ = dp_ratio_bound_check(u + alpha, alpha, eps1, scale=scale)
            increase = 1 / increase
            rows["eps1"].append(eps1)
            rows["scale"].append(scale)
            rows["u"].append(u)
            rows["ratio_decrease"].append(decrease)
            rows["ratio_increase"].append(increase)
            rows["bound"].append(bound)
            rows["bound_ok"].append(decrease_ok and increase <= bound * (1 + RATIO_TOLERANCE))
    return pd.DataFrame(rows)
