"""All complex roots of an integer polynomial by Aberth-Ehrlich iteration.

Iteration and Newton polishing only need the Newton correction P/P'. For the
Riley polynomial that ratio is supplied by the convergent recurrence (see
:func:`twobridge.polyseq.recurrence_newton_ratio`), because the expanded
coefficients cancel catastrophically near the roots once p reaches a few dozen.
Residuals are always computed exactly from the integer coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from twobridge.polyseq import IntPoly

TOL_RESIDUAL = 1e-12
MAX_ITER = 500
POLISH_ITER = 50
CLUSTER_RADIUS = 1e-8
# golden-angle offset keeps the starting circle away from symmetric stalls
_START_ANGLE = math.pi * (3.0 - math.sqrt(5.0))

NewtonRatio = Callable[[np.ndarray], np.ndarray]


class NoConvergence(RuntimeError):
    def __init__(self, worst_residual: float, iterations: int):
        super().__init__(
            f"root iteration did not converge after {iterations} steps "
            f"(worst relative residual {worst_residual:.3e})"
        )
        self.worst_residual = worst_residual
        self.iterations = iterations


@dataclass(frozen=True)
class RootSet:
    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    poly_degree: int
    clusters: tuple[tuple[int, ...], ...]
    iterations: int = 0

    def representatives(self) -> list[complex]:
        """One root per cluster (the one with the smallest residual)."""
        return [self.roots[min(c, key=lambda i: self.residuals[i])] for c in self.clusters]

    @property
    def worst_residual(self) -> float:
        return max(self.residuals, default=0.0)


def fujiwara_bound(coeffs: np.ndarray) -> float:
    n = len(coeffs) - 1
    lead = abs(coeffs[-1])
    terms = [(abs(coeffs[n - k]) / lead) ** (1.0 / k) for k in range(1, n)]
    terms.append((abs(coeffs[0]) / (2 * lead)) ** (1.0 / n))
    return 2.0 * max(terms)


def initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Starting points on circles read off the Newton polygon of log|a_k|.

    Each edge of the upper convex hull from degree i to degree j contributes
    j - i points on the circle of radius (|a_i| / |a_j|)^(1 / (j - i)); every
    radius is capped at the Fujiwara bound.
    """
    n = len(coeffs) - 1
    cap = fujiwara_bound(coeffs)
    pts = [(k, math.log(abs(a))) for k, a in enumerate(coeffs) if a != 0]
    hull: list[tuple[int, float]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (pt[0] - x1) * (y2 - y1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    z = []
    for (i, yi), (j, yj) in zip(hull, hull[1:]):
        m = j - i
        radius = min(math.exp((yi - yj) / m), cap)
        offset = _START_ANGLE / n + 2 * math.pi * i / n
        z.extend(radius * np.exp(1j * (2 * np.pi * np.arange(m) / m + offset)))
    return np.array(z, dtype=complex)


def horner_newton_ratio(poly: IntPoly) -> NewtonRatio:
    c = [float(a) for a in poly.coeffs]

    def ratio(xs: np.ndarray) -> np.ndarray:
        p = np.zeros_like(xs)
        dp = np.zeros_like(xs)
        for a in reversed(c):
            dp = dp * xs + p
            p = p * xs + a
        with np.errstate(divide="ignore", invalid="ignore"):
            return p / dp

    return ratio


def exact_abs_value(poly: IntPoly, x: complex) -> float:
    """|P(x)| for the exact binary value of ``x``, using Gaussian-integer Horner."""
    if poly.is_zero():
        return 0.0
    nr, dr = float(x.real).as_integer_ratio()
    ni, di = float(x.imag).as_integer_ratio()
    s = max(dr, di)  # both are powers of two
    xr, xi = nr * (s // dr), ni * (s // di)
    c = poly.coeffs
    acc_re, acc_im, scale = c[-1], 0, 1
    for a in reversed(c[:-1]):
        scale *= s
        acc_re, acc_im = acc_re * xr - acc_im * xi + a * scale, acc_re * xi + acc_im * xr
    shift = scale.bit_length() - 1
    return math.hypot(_ldexp_int(acc_re, -shift), _ldexp_int(acc_im, -shift))


def _ldexp_int(m: int, e: int) -> float:
    """m * 2**e as a float without building a huge rational."""
    extra = max(m.bit_length() - 64, 0)
    try:
        return math.ldexp(float(m >> extra if m >= 0 else -((-m) >> extra)), e + extra)
    except OverflowError:
        return math.inf


def relative_residual(poly: IntPoly, x: complex) -> float:
    return exact_abs_value(poly, x) / max(abs(a) for a in poly.coeffs)


def _clusters(roots: np.ndarray, radius: float) -> tuple[tuple[int, ...], ...]:
    parent = list(range(len(roots)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= radius * max(1.0, abs(roots[i])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(roots)):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(g) for g in sorted(groups.values()))


def _aberth(z: np.ndarray, ratio: NewtonRatio, max_iter: int) -> tuple[np.ndarray, np.ndarray, int]:
    n = len(z)
    active = np.ones(n, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        idx = np.flatnonzero(active)
        r = ratio(z[idx])
        diff = z[idx, None] - z[None, :]
        diff[np.arange(len(idx)), idx] = 1.0
        inv = 1.0 / diff
        inv[np.arange(len(idx)), idx] = 0.0
        w = r / (1.0 - r * inv.sum(axis=1))
        w = np.where(np.isfinite(w), w, 0.0)
        z[idx] -= w
        done = np.abs(w) <= TOL_RESIDUAL * (1.0 + np.abs(z[idx]))
        active[idx[done]] = False
        if not active.any():
            break
    return z, active, it


def _polish(z: np.ndarray, ratio: NewtonRatio, max_iter: int) -> np.ndarray:
    for _ in range(max_iter):
        step = ratio(z)
        ok = np.isfinite(step) & (np.abs(step) < 1e-6 * (1.0 + np.abs(z)))
        step = np.where(ok, step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * (1.0 + np.abs(z))):
            break
    return z


def find_roots(
    poly: IntPoly,
    newton_ratio: Optional[NewtonRatio] = None,
    *,
    max_iter: int = MAX_ITER,
    polish_iter: int = POLISH_ITER,
) -> RootSet:
    """Simultaneous Aberth-Ehrlich solve followed by Newton polishing.

    ``newton_ratio`` maps an array of points to P/P' there; it defaults to
    Horner evaluation of the expanded coefficients.
    """
    n = poly.degree
    if n < 1:
        raise ValueError("polynomial must have degree >= 1")
    ratio = newton_ratio or horner_newton_ratio(poly)
    coeffs = np.array([float(a) for a in poly.coeffs])
    z, active, iterations = _aberth(initial_guesses(coeffs), ratio, max_iter)
    z = _polish(z, ratio, polish_iter)
    residuals = [relative_residual(poly, complex(x)) for x in z]
    if active.any():
        worst = max(residuals[i] for i in np.flatnonzero(active))
        if worst > TOL_RESIDUAL:
            raise NoConvergence(worst, iterations)
    return RootSet(
        roots=tuple(complex(x) for x in z),
        residuals=tuple(residuals),
        poly_degree=n,
        clusters=_clusters(z, CLUSTER_RADIUS),
        iterations=iterations,
    )
