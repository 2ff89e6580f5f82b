"""Two-sided driving Levy noise: specification, moments and samplers.

The driver L is a centered, finite-second-moment Levy process with no
Brownian component (the Gaussian variant is flagged as living outside
that condition; it exists only for cross-checks against the Gaussian
theory).  Only increments over grid cells are ever consumed, so the
samplers produce i.i.d. increment arrays directly.

Tempered stable sampling: for alpha < 1 increments are drawn exactly by
acceptance-rejection from a positive stable proposal with exponential
tilting (difference of two tilted subordinators, centered).  For
alpha >= 1 the tilting ratio is unbounded and exact rejection is not
available; increments are generated by compound-Poisson sampling of the
jumps above an adaptive cutoff plus a Gaussian correction matching the
small-jump variance (Asmussen-Rosinski).  The second moment of the
approximation is exact by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .grids import SampleGrid
from .incgamma import upper_gamma as _upper_gamma

__all__ = [
    "JumpLaw", "UniformSymmetric", "GaussianJumps", "TwoPoint",
    "LevyDriverSpec", "CompoundPoisson", "TemperedStable", "GaussianValidation",
    "second_moment", "char_exponent", "sample_increments", "increments_matrix",
    "spec_to_config", "spec_from_config",
]


# ---------------------------------------------------------------------------
# jump laws for the compound Poisson driver

@dataclass(frozen=True)
class JumpLaw:
    def second_moment(self) -> float:
        raise NotImplementedError

    def char_fn(self, theta):
        """E[exp(i theta J)] (real by symmetry)."""
        raise NotImplementedError

    def sample(self, rng, n) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class UniformSymmetric(JumpLaw):
    a: float

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("UniformSymmetric: requires a > 0")

    def second_moment(self):
        return self.a ** 2 / 3.0

    def char_fn(self, theta):
        theta = np.asarray(theta, dtype=float)
        return np.where(theta == 0.0, 1.0,
                        np.sin(self.a * theta) / np.where(theta == 0.0, 1.0, self.a * theta))

    def sample(self, rng, n):
        return rng.uniform(-self.a, self.a, size=n)


@dataclass(frozen=True)
class GaussianJumps(JumpLaw):
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("GaussianJumps: requires sigma > 0")

    def second_moment(self):
        return self.sigma ** 2

    def char_fn(self, theta):
        theta = np.asarray(theta, dtype=float)
        return np.exp(-0.5 * (self.sigma * theta) ** 2)

    def sample(self, rng, n):
        return rng.normal(0.0, self.sigma, size=n)


@dataclass(frozen=True)
class TwoPoint(JumpLaw):
    """Jumps of size +-c with equal probability."""

    c: float

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("TwoPoint: requires c > 0")

    def second_moment(self):
        return self.c ** 2

    def char_fn(self, theta):
        return np.cos(self.c * np.asarray(theta, dtype=float))

    def sample(self, rng, n):
        return self.c * (2.0 * rng.integers(0, 2, size=n) - 1.0)


# ---------------------------------------------------------------------------
# driver variants

@dataclass(frozen=True)
class LevyDriverSpec:
    outside_condition_L = False


@dataclass(frozen=True)
class CompoundPoisson(LevyDriverSpec):
    intensity: float
    jump_law: JumpLaw

    def __post_init__(self):
        if self.intensity < 0:
            raise ValueError("CompoundPoisson: requires intensity >= 0")


@dataclass(frozen=True)
class TemperedStable(LevyDriverSpec):
    """Symmetric tempered stable: Levy density scale*exp(-lambda_noise*|x|)/|x|^(1+alpha)."""

    alpha: float
    lambda_noise: float
    scale: float = 1.0
    symmetric: bool = True

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValueError("TemperedStable: requires 0 < alpha < 2")
        if self.lambda_noise <= 0:
            raise ValueError("TemperedStable: requires lambda_noise > 0")
        if self.scale <= 0:
            raise ValueError("TemperedStable: requires scale > 0")
        if not self.symmetric:
            raise NotImplementedError("TemperedStable: only the symmetric driver is provided")


@dataclass(frozen=True)
class GaussianValidation(LevyDriverSpec):
    """Brownian driver, outside Condition L; cross-check against TFBM formulas only."""

    sigma: float
    outside_condition_L = True

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("GaussianValidation: requires sigma > 0")


# ---------------------------------------------------------------------------
# moments and characteristic exponent

def second_moment(spec) -> float:
    """E[L(1)^2] = int x^2 nu(dx), in closed form per variant."""
    if isinstance(spec, CompoundPoisson):
        return spec.intensity * spec.jump_law.second_moment()
    if isinstance(spec, TemperedStable):
        # 2 * scale * int_0^inf x^(1-alpha) e^(-lam x) dx
        return 2.0 * spec.scale * _sp.gamma(2.0 - spec.alpha) * spec.lambda_noise ** (spec.alpha - 2.0)
    if isinstance(spec, GaussianValidation):
        return spec.sigma ** 2
    raise TypeError(f"unknown driver spec {spec!r}")


def char_exponent(spec, theta):
    """Characteristic exponent psi(theta) = int (e^{i theta x} - 1 - i theta x) nu(dx).

    All supported variants are symmetric, so psi is real (returned as complex).
    """
    theta = np.asarray(theta, dtype=float)
    if isinstance(spec, CompoundPoisson):
        psi = spec.intensity * (spec.jump_law.char_fn(theta) - 1.0)
        return psi.astype(complex) if psi.ndim else complex(psi)
    if isinstance(spec, TemperedStable):
        a, lam, c = spec.alpha, spec.lambda_noise, spec.scale
        if a == 1.0:
            raise NotImplementedError("char_exponent: alpha = 1 closed form not provided")
        z = (lam + 1j * theta) ** a
        psi = c * _sp.gamma(-a) * (2.0 * z.real - 2.0 * lam ** a)
        return psi.astype(complex) if np.ndim(psi) else complex(psi)
    if isinstance(spec, GaussianValidation):
        psi = -0.5 * (spec.sigma * theta) ** 2
        return psi.astype(complex) if psi.ndim else complex(psi)
    raise TypeError(f"unknown driver spec {spec!r}")


# ---------------------------------------------------------------------------
# samplers

def _rng_for(seed, stream=0):
    """Counter-based generator; draws are a pure function of (seed, stream)."""
    return np.random.Generator(np.random.Philox(key=(np.uint64(seed) << np.uint64(32)) + np.uint64(stream)))


def _compound_poisson_increments(spec, dt, n, rng):
    counts = rng.poisson(spec.intensity * dt, size=n)
    total = int(counts.sum())
    out = np.zeros(n)
    if total == 0:
        return out
    jumps = spec.jump_law.sample(rng, total)
    idx = np.repeat(np.arange(n), counts)
    np.add.at(out, idx, jumps)
    return out


def _positive_stable(rng, alpha, n):
    """Standard positive stable: E exp(-u S) = exp(-u^alpha), 0 < alpha < 1.

    Zolotarev representation S = (A(U)/E)^((1-alpha)/alpha) with
    A(u) = sin(alpha u)^(alpha/(1-alpha)) sin((1-alpha)u) / sin(u)^(1/(1-alpha)).
    """
    u = rng.uniform(0.0, np.pi, size=n)
    e = rng.standard_exponential(size=n)
    return (np.sin(alpha * u)
            * (np.sin((1.0 - alpha) * u) / e) ** ((1.0 - alpha) / alpha)
            * np.sin(u) ** (-1.0 / alpha))


def _tilted_subordinator(rng, alpha, lam, c, dt, n):
    """Tempered stable subordinator increments over dt, Levy density c x^{-1-alpha} e^{-lam x}."""
    sigma = (c * dt * _sp.gamma(1.0 - alpha) / alpha) ** (1.0 / alpha)
    out = np.empty(n)
    todo = np.arange(n)
    while todo.size:
        cand = sigma * _positive_stable(rng, alpha, todo.size)
        acc = rng.random(todo.size) < np.exp(-lam * cand)
        out[todo[acc]] = cand[acc]
        todo = todo[~acc]
    return out


def _truncated_jump_sizes(rng, alpha, lam, eps, n):
    """Jump sizes with density prop. to x^{-1-alpha} e^{-lam x} on (eps, inf)."""
    out = np.empty(n)
    todo = np.arange(n)
    while todo.size:
        cand = eps * rng.random(todo.size) ** (-1.0 / alpha)
        acc = rng.random(todo.size) < np.exp(-lam * (cand - eps))
        out[todo[acc]] = cand[acc]
        todo = todo[~acc]
    return out


def _tempered_stable_increments(spec, dt, n, rng, jumps_per_cell=10.0):
    a, lam, c = spec.alpha, spec.lambda_noise, spec.scale
    if a < 1.0:
        pos = _tilted_subordinator(rng, a, lam, c, dt, n)
        neg = _tilted_subordinator(rng, a, lam, c, dt, n)
        return pos - neg  # means cancel exactly by symmetry of the construction
    # alpha >= 1: compound Poisson above cutoff + Gaussian small-jump correction
    eps = (2.0 * c * dt / (a * jumps_per_cell)) ** (1.0 / a)
    eps = min(eps, 1.0 / lam)
    # rate of jumps with |x| > eps: 2c int_eps^inf x^{-1-a} e^{-lam x} dx
    big_rate = 2.0 * c * lam ** a * float(_upper_gamma(-a, lam * eps))
    counts = rng.poisson(big_rate * dt, size=n)
    total = int(counts.sum())
    out = np.zeros(n)
    if total:
        sizes = _truncated_jump_sizes(rng, a, lam, eps, total)
        signs = 2.0 * rng.integers(0, 2, size=total) - 1.0
        idx = np.repeat(np.arange(n), counts)
        np.add.at(out, idx, signs * sizes)
    # variance of jumps below the cutoff (both sides)
    small_var = 2.0 * c * lam ** (a - 2.0) * float(_sp.gamma(2.0 - a) * _sp.gammainc(2.0 - a, lam * eps))
    out += rng.normal(0.0, np.sqrt(small_var * dt), size=n)
    return out


def sample_increments(spec, grid: SampleGrid, seed: int, stream: int = 0) -> np.ndarray:
    """I.i.d. increments dL_k = L(x_{k+1}) - L(x_k) over the grid cells.

    Deterministic for fixed (spec, grid, seed, stream); distinct streams
    give independent paths for ensemble generation.
    """
    rng = _rng_for(seed, stream)
    dt, n = grid.dx, grid.n_cells
    if isinstance(spec, CompoundPoisson):
        return _compound_poisson_increments(spec, dt, n, rng)
    if isinstance(spec, TemperedStable):
        return _tempered_stable_increments(spec, dt, n, rng)
    if isinstance(spec, GaussianValidation):
        return rng.normal(0.0, spec.sigma * np.sqrt(dt), size=n)
    raise TypeError(f"no sampler for driver spec {spec!r}")


def increments_matrix(spec, grid: SampleGrid, seed: int, n_paths: int) -> np.ndarray:
    """Increment arrays for n_paths independent paths, shape (n_paths, n_cells)."""
    return np.stack([sample_increments(spec, grid, seed, p) for p in range(n_paths)])


# ---------------------------------------------------------------------------
# flat key=value serialization (CLI config)

def spec_to_config(spec) -> dict:
    if isinstance(spec, CompoundPoisson):
        cfg = {"driver": "cpois", "intensity": spec.intensity}
        j = spec.jump_law
        if isinstance(j, UniformSymmetric):
            cfg.update(jumps="uniform", a=j.a)
        elif isinstance(j, GaussianJumps):
            cfg.update(jumps="gauss", jump_sigma=j.sigma)
        elif isinstance(j, TwoPoint):
            cfg.update(jumps="twopoint", c=j.c)
        return cfg
    if isinstance(spec, TemperedStable):
        return {"driver": "tstable", "alpha": spec.alpha,
                "lambda_noise": spec.lambda_noise, "scale": spec.scale}
    if isinstance(spec, GaussianValidation):
        return {"driver": "gauss", "sigma": spec.sigma}
    raise TypeError(f"unknown driver spec {spec!r}")


def spec_from_config(cfg: dict):
    kind = cfg.get("driver", "cpois")
    if kind == "cpois":
        jumps = cfg.get("jumps", "uniform")
        if jumps == "uniform":
            law = UniformSymmetric(float(cfg.get("a", 1.0)))
        elif jumps == "gauss":
            law = GaussianJumps(float(cfg.get("jump_sigma", 1.0)))
        elif jumps == "twopoint":
            law = TwoPoint(float(cfg.get("c", 1.0)))
        else:
            raise ValueError(f"unknown jump law {jumps!r}")
        return CompoundPoisson(float(cfg.get("intensity", 1.0)), law)
    if kind == "tstable":
        return TemperedStable(float(cfg.get("alpha", 1.65)),
                              float(cfg.get("lambda_noise", 0.01)),
                              float(cfg.get("scale", 1.0)))
    if kind == "gauss":
        return GaussianValidation(float(cfg.get("sigma", 1.0)))
    raise ValueError(f"unknown driver kind {kind!r}")
