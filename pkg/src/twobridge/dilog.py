"""Bloch-Wigner dilogarithm, Lobachevsky function and the constant v3.

D is reduced to the region |z| <= 1, Re z <= 1/2 with the symmetries
D(1/z) = -D(z) and D(1 - z) = -D(z). There |log(1 - z)| <= pi/3, and Li2 is
summed as the Bernoulli series  Li2(z) = sum_n B_n u^(n+1) / (n+1)!  with
u = -log(1 - z), which converges like (|u| / 2 pi)^n.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np

_TABLE_SIZE = 80


@dataclass(frozen=True)
class DilogConfig:
    series_tol: float = 1e-15
    max_terms: int = 10**6

    def __post_init__(self) -> None:
        if not self.series_tol > 0:
            raise ValueError("series_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")


DEFAULT_CONFIG = DilogConfig()
_current = DEFAULT_CONFIG


def get_config() -> DilogConfig:
    return _current


def set_config(config: DilogConfig) -> DilogConfig:
    """Replace the process-wide default configuration; returns the previous one."""
    global _current
    previous, _current = _current, config
    return previous


# B_n / (n + 1)! for the Li2 series, and |B_2k| / (2 (2k)! k (2k + 1)) for Clausen
_LI2_COEFFS = [float(mpmath.bernoulli(n) / mpmath.factorial(n + 1)) for n in range(_TABLE_SIZE)]
_CL2_COEFFS = [
    float(abs(mpmath.bernoulli(2 * k)) / (2 * mpmath.factorial(2 * k) * k * (2 * k + 1)))
    for k in range(1, _TABLE_SIZE // 2)
]


def _li2_reduced(w: np.ndarray, config: DilogConfig) -> np.ndarray:
    u = -np.log1p(-w)
    total = np.zeros_like(w)
    power = u.copy()
    for n, c in enumerate(_LI2_COEFFS[: min(config.max_terms, _TABLE_SIZE)]):
        if c != 0.0:
            term = c * power
            total = total + term
            if n >= 2 and (term.size == 0 or np.max(np.abs(term)) < config.series_tol):
                break
        power = power * u
    return total


def bloch_wigner_array(zs, config: Optional[DilogConfig] = None) -> np.ndarray:
    """Vectorised D(z). Real inputs, 0, 1 and non-finite inputs (infinity) give exactly 0."""
    config = config or _current
    z = np.array(zs, dtype=complex, copy=True)
    out = np.zeros(z.shape, dtype=float)
    live = np.isfinite(z) & (z.imag != 0)
    if not live.any():
        return out
    w = z[live]
    sign = np.ones(w.shape)
    outside = np.abs(w) > 1.0
    w[outside] = 1.0 / w[outside]
    sign[outside] = -sign[outside]
    right = w.real > 0.5
    w[right] = 1.0 - w[right]
    sign[right] = -sign[right]
    li2 = _li2_reduced(w, config)
    out[live] = sign * (li2.imag + np.angle(1.0 - w) * np.log(np.abs(w)))
    return out


def bloch_wigner(z, config: Optional[DilogConfig] = None) -> float:
    """D(z), the signed volume of the ideal tetrahedron with vertices infinity, 0, 1, z.

    ``None`` and infinite values stand for the point at infinity.
    """
    if z is None:
        return 0.0
    return float(bloch_wigner_array(np.array([z], dtype=complex), config)[0])


@lru_cache(maxsize=None)
def _v3(config: DilogConfig) -> float:
    return bloch_wigner(cmath.exp(1j * math.pi / 3), config)


def v3(config: Optional[DilogConfig] = None) -> float:
    """Volume of the regular ideal tetrahedron, D(e^(i pi/3))."""
    return _v3(config or _current)


def clausen(phi: float, config: Optional[DilogConfig] = None) -> float:
    """Cl2(phi) = sum sin(n phi) / n^2 through its power series on (-pi, pi]."""
    config = config or _current
    phi = math.remainder(phi, 2 * math.pi)
    if phi == 0.0 or abs(phi) == math.pi:
        return 0.0
    total = phi - phi * math.log(abs(phi))
    phi2 = phi * phi
    power = phi * phi2
    for c in _CL2_COEFFS[: config.max_terms]:
        term = c * power
        total += term
        if abs(term) < config.series_tol:
            break
        power *= phi2
    return total


def lobachevsky(theta: float, config: Optional[DilogConfig] = None) -> float:
    """Lambda(theta) = Cl2(2 theta) / 2; odd and pi-periodic."""
    return 0.5 * clausen(2.0 * theta, config)


def lobachevsky_series(theta: float, n_terms: int = 10**6, chunk: int = 200_000) -> float:
    """Direct partial sum (1/2) sum_{n <= n_terms} sin(2 n theta) / n^2; slow, for cross-checks."""
    total = 0.0
    for start in range(1, n_terms + 1, chunk):
        n = np.arange(start, min(start + chunk, n_terms + 1), dtype=float)
        total += float(np.sum(np.sin(2.0 * n * theta) / (n * n)))
    return 0.5 * total
