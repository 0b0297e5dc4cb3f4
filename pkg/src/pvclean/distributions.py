"""Parametric distribution families for the monthly weather model.

Eight families are supported, with parameter orders matching the fitted
weather table shipped with the package:

* ``normal(mu, sigma)`` — mu + sigma * Z
* ``lognormal(loc, mu, sigma)`` — loc + exp(mu + sigma * Z)
* ``triangular(min, max, mode)`` — inverse CDF on one uniform
* ``weibull(loc, shape, scale)`` — loc + scale * (-ln U) ** (1/shape)
* ``gamma(loc, scale, shape)`` — loc + scale * G(shape), Marsaglia-Tsang
* ``beta(min, max, a, b)`` — min + (max-min) * B(a, b); Cheng BB when
  min(a, b) > 1, Johnk otherwise (fixed choice)
* ``johnsonsb(loc, range, d, x)`` — loc + range / (1 + exp(-(Z - d)/x))
* ``loglogistic(loc, shape, scale)`` — loc + scale * (U/(1-U)) ** (1/shape)

All normals come from the stream's inverse-CDF transform, so the inverse
transform families consume exactly one uniform per draw.  Gamma and beta
are rejection samplers and consume a variable (but deterministic, given the
stream state) number of uniforms; every weather variable owns its own
stream, so this never perturbs the other variables' draws.

Samples are clamped to the physical bounds carried by the spec.  Clamping
(rather than resampling) keeps stream alignment deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import RandomStream

__all__ = ["DistributionSpec", "ParameterError", "FAMILY_ARITY", "sample", "sample_many"]

FAMILY_ARITY = {
    "normal": 2,
    "lognormal": 3,
    "triangular": 3,
    "weibull": 3,
    "gamma": 3,
    "loglogistic": 3,
    "beta": 4,
    "johnsonsb": 4,
}

_LOG4 = math.log(4.0)
_TINY = 5e-324  # smallest positive subnormal; guards log(0)


class ParameterError(ValueError):
    """Invalid distribution parameters (raised at spec construction)."""


@dataclass(frozen=True)
class DistributionSpec:
    """One parametric family plus its physical clamp range.

    ``params`` is the ordered parameter tuple exactly as listed in the
    module docstring for the given family.
    """

    family: str
    params: tuple
    clamp_lo: float = -math.inf
    clamp_hi: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "family", self.family.lower())
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        self._validate()

    def _validate(self):
        fam, p = self.family, self.params
        if fam not in FAMILY_ARITY:
            raise ParameterError(f"unknown family {fam!r}")
        if len(p) != FAMILY_ARITY[fam]:
            raise ParameterError(
                f"{fam} takes {FAMILY_ARITY[fam]} parameters, got {len(p)}")
        if not all(math.isfinite(v) for v in p):
            raise ParameterError(f"{fam} parameters must be finite: {p}")
        if fam == "normal" and p[1] <= 0:
            raise ParameterError(f"normal sigma must be > 0, got {p[1]}")
        if fam == "lognormal" and p[2] <= 0:
            raise ParameterError(f"lognormal sigma must be > 0, got {p[2]}")
        if fam == "triangular":
            lo, hi, mode = p
            if not (lo < hi and lo <= mode <= hi):
                raise ParameterError(f"triangular needs min < max, min <= mode <= max: {p}")
        if fam == "weibull" and (p[1] <= 0 or p[2] <= 0):
            raise ParameterError(f"weibull shape and scale must be > 0: {p}")
        if fam == "gamma" and (p[1] <= 0 or p[2] <= 0):
            raise ParameterError(f"gamma scale and shape must be > 0: {p}")
        if fam == "loglogistic" and (p[1] <= 0 or p[2] <= 0):
            raise ParameterError(f"loglogistic shape and scale must be > 0: {p}")
        if fam == "beta":
            lo, hi, a, b = p
            if lo >= hi:
                raise ParameterError(f"beta needs min < max: {p}")
            if a <= 0 or b <= 0:
                raise ParameterError(f"beta shapes must be > 0: {p}")
        if fam == "johnsonsb" and (p[1] <= 0 or p[3] <= 0):
            raise ParameterError(f"johnsonsb range and shape-2 must be > 0: {p}")
        if not self.clamp_lo < self.clamp_hi:
            raise ParameterError(
                f"clamp_lo must be < clamp_hi: [{self.clamp_lo}, {self.clamp_hi}]")

    # Closed-form moments (before clamping), where available.  Used by the
    # statistical test oracles.

    def mean(self) -> float:
        fam, p = self.family, self.params
        if fam == "normal":
            return p[0]
        if fam == "lognormal":
            return p[0] + math.exp(p[1] + p[2] ** 2 / 2)
        if fam == "triangular":
            return (p[0] + p[1] + p[2]) / 3
        if fam == "weibull":
            return p[0] + p[2] * math.gamma(1 + 1 / p[1])
        if fam == "gamma":
            return p[0] + p[1] * p[2]
        if fam == "beta":
            lo, hi, a, b = p
            return lo + (hi - lo) * a / (a + b)
        raise ValueError(f"no closed-form mean for {fam}")

    def variance(self) -> float:
        fam, p = self.family, self.params
        if fam == "normal":
            return p[1] ** 2
        if fam == "lognormal":
            s2 = p[2] ** 2
            return (math.exp(s2) - 1) * math.exp(2 * p[1] + s2)
        if fam == "triangular":
            a, b, c = p
            return (a * a + b * b + c * c - a * b - a * c - b * c) / 18
        if fam == "weibull":
            g1 = math.gamma(1 + 1 / p[1])
            g2 = math.gamma(1 + 2 / p[1])
            return p[2] ** 2 * (g2 - g1 ** 2)
        if fam == "gamma":
            return p[1] ** 2 * p[2]
        if fam == "beta":
            lo, hi, a, b = p
            return (hi - lo) ** 2 * a * b / ((a + b) ** 2 * (a + b + 1))
        raise ValueError(f"no closed-form variance for {fam}")

    def cdf(self, x) -> np.ndarray:
        """Closed-form CDF for the inverse-transform families (test oracle)."""
        from scipy.special import ndtr

        fam, p = self.family, self.params
        x = np.asarray(x, dtype=float)
        if fam == "lognormal":
            loc, mu, sigma = p
            y = np.maximum(x - loc, 0.0)
            with np.errstate(divide="ignore"):
                return np.where(y > 0, ndtr((np.log(np.maximum(y, _TINY)) - mu) / sigma), 0.0)
        if fam == "loglogistic":
            loc, shape, scale = p
            y = np.maximum(x - loc, 0.0)
            with np.errstate(divide="ignore"):
                return np.where(y > 0, 1.0 / (1.0 + (y / scale) ** (-shape)), 0.0)
        if fam == "johnsonsb":
            loc, rng, d, xi = p
            y = (x - loc) / rng
            out = np.zeros_like(y)
            inside = (y > 0) & (y < 1)
            out[y >= 1] = 1.0
            yi = y[inside]
            out[inside] = ndtr(d + xi * np.log(yi / (1 - yi)))
            return out
        raise ValueError(
            f"cdf oracle only provided for lognormal/johnsonsb/loglogistic, not {fam}")


def _gamma_variate(shape: float, stream: RandomStream) -> float:
    """Standard gamma draw, Marsaglia-Tsang squeeze method."""
    if shape < 1.0:
        # Boost: G(a) = G(a+1) * U^(1/a)
        u = max(stream.uniform(), _TINY)
        return _gamma_variate(shape + 1.0, stream) * u ** (1.0 / shape)
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        z = stream.standard_normal()
        v = (1.0 + c * z) ** 3
        if v <= 0.0:
            continue
        u = max(stream.uniform(), _TINY)
        if u < 1.0 - 0.0331 * z ** 4:
            return d * v
        if math.log(u) < 0.5 * z * z + d * (1.0 - v + math.log(v)):
            return d * v


def _beta_variate(a: float, b: float, stream: RandomStream) -> float:
    """Standard beta draw: Cheng BB for min(a,b) > 1, Johnk otherwise."""
    if min(a, b) <= 1.0:
        # Johnk; acceptance is fine for small shapes.
        while True:
            u = max(stream.uniform(), _TINY)
            v = max(stream.uniform(), _TINY)
            x = u ** (1.0 / a)
            y = v ** (1.0 / b)
            if x + y <= 1.0:
                if x + y > 0.0:
                    return x / (x + y)
                # Underflow: fall back to log-scale comparison.
                lx = math.log(u) / a
                ly = math.log(v) / b
                m = max(lx, ly)
                return math.exp(lx - m) / (math.exp(lx - m) + math.exp(ly - m))
    a0, b0 = min(a, b), max(a, b)
    alpha = a0 + b0
    beta = math.sqrt((alpha - 2.0) / (2.0 * a0 * b0 - alpha))
    gamma = a0 + 1.0 / beta
    while True:
        u1 = stream.uniform()
        u2 = max(stream.uniform(), _TINY)
        if u1 <= 0.0 or u1 >= 1.0:
            continue
        v = beta * math.log(u1 / (1.0 - u1))
        w = a0 * math.exp(v)
        z = u1 * u1 * u2
        r = gamma * v - _LOG4
        s = a0 + r - w
        if s + 1.0 + math.log(5.0) >= 5.0 * z:
            break
        t = math.log(z)
        if s >= t:
            break
        if r + alpha * math.log(alpha / (b0 + w)) >= t:
            break
    return w / (b0 + w) if a == a0 else b0 / (b0 + w)


def _raw_samples(spec: DistributionSpec, stream: RandomStream, n: int) -> np.ndarray:
    fam, p = spec.family, spec.params
    if fam == "normal":
        mu, sigma = p
        return mu + sigma * stream.standard_normals(n)
    if fam == "lognormal":
        loc, mu, sigma = p
        return loc + np.exp(mu + sigma * stream.standard_normals(n))
    if fam == "triangular":
        lo, hi, mode = p
        u = stream.uniforms(n)
        c = (mode - lo) / (hi - lo)
        left = lo + np.sqrt(u * c) * (hi - lo)
        right = hi - np.sqrt((1.0 - u) * (1.0 - c)) * (hi - lo)
        return np.where(u < c, left, right)
    if fam == "weibull":
        loc, shape, scale = p
        u = np.maximum(stream.uniforms(n), _TINY)
        return loc + scale * (-np.log(u)) ** (1.0 / shape)
    if fam == "gamma":
        loc, scale, shape = p
        return loc + scale * np.array([_gamma_variate(shape, stream) for _ in range(n)])
    if fam == "beta":
        lo, hi, a, b = p
        return lo + (hi - lo) * np.array([_beta_variate(a, b, stream) for _ in range(n)])
    if fam == "johnsonsb":
        loc, rng, d, xi = p
        z = stream.standard_normals(n)
        return loc + rng / (1.0 + np.exp(-(z - d) / xi))
    if fam == "loglogistic":
        loc, shape, scale = p
        u = stream.uniforms(n)
        return loc + scale * (u / (1.0 - u)) ** (1.0 / shape)
    raise ParameterError(f"unknown family {fam!r}")  # pragma: no cover


def sample_many(spec: DistributionSpec, stream: RandomStream, n: int,
                clamp: bool = True) -> np.ndarray:
    """Draw ``n`` samples in sequence; identical to ``n`` sample() calls."""
    x = _raw_samples(spec, stream, int(n))
    if clamp:
        x = np.clip(x, spec.clamp_lo, spec.clamp_hi)
    return x


def sample(spec: DistributionSpec, stream: RandomStream, clamp: bool = True) -> float:
    """Draw one sample from ``spec``, clamped to [clamp_lo, clamp_hi]."""
    return float(sample_many(spec, stream, 1, clamp=clamp)[0])
