"""Integer polynomials P_n, Q_n from the signed continued fraction e_1 x + 1/(e_2 x + ...).

The pair (P_n, Q_n) is the first column of the matrix product
M_1 M_2 ... M_n with M_k = [[e_k x, 1], [1, 0]], which gives the three-term
recurrence P_n = e_n x P_{n-1} + P_{n-2} (and likewise for Q) with seeds
P_0 = 1, P_{-1} = 0, Q_0 = 0, Q_{-1} = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import zip_longest
from typing import Callable, Sequence

import numpy as np

from twobridge.knotparams import BridgeParams


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with integer coefficients; ``coeffs[k]`` multiplies x^k."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(a) for a in c))

    @classmethod
    def constant(cls, a: int) -> "IntPoly":
        return cls((a,))

    @classmethod
    def x(cls) -> "IntPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(tuple(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0)))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly | int") -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(tuple(a * other for a in self.coeffs))
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "IntPoly":
        """Multiply by x^k."""
        return IntPoly((0,) * k + self.coeffs) if self.coeffs else self

    def __call__(self, x):
        return eval_complex(self, x)

    def __str__(self) -> str:
        return format_poly(self)


def format_poly(poly: IntPoly, var: str = "x") -> str:
    """Human readable form, highest degree first, e.g. ``x^6 + x^4 + 2x^2 + 1``."""
    if poly.is_zero():
        return "0"
    out = []
    for k in range(poly.degree, -1, -1):
        a = poly.coeffs[k]
        if a == 0:
            continue
        mag = abs(a)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}{mono}"
        if not out:
            out.append(("-" if a < 0 else "") + body)
        else:
            out.append(("- " if a < 0 else "+ ") + body)
    return " ".join(out)


def eval_complex(poly: IntPoly, x):
    """Horner evaluation; works for Python ints, complex scalars and numpy arrays."""
    acc = 0
    for a in reversed(poly.coeffs):
        acc = acc * x + a
    return acc


@dataclass(frozen=True)
class ConvergentPair:
    n: int
    P: IntPoly
    Q: IntPoly


def convergents(params: BridgeParams, n_max: int) -> list[ConvergentPair]:
    """Exact (P_n, Q_n) for n = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    x = IntPoly.x()
    p_prev, p_cur = IntPoly(), IntPoly.constant(1)
    q_prev, q_cur = IntPoly.constant(1), IntPoly()
    out = []
    for n in range(1, n_max + 1):
        ex = x * params.epsilon(n)
        p_prev, p_cur = p_cur, ex * p_cur + p_prev
        q_prev, q_cur = q_cur, ex * q_cur + q_prev
        out.append(ConvergentPair(n, p_cur, q_cur))
    return out


def riley_poly(params: BridgeParams) -> IntPoly:
    """P_{p-1}, whose roots parametrise the parabolic representations."""
    return convergents(params, params.p - 1)[-1].P


def convergent_values(signs: Sequence[int], x: complex) -> list[tuple[complex, complex]]:
    """Homogeneous (P_n(x), Q_n(x)) for n = 0..len(signs), each pair rescaled to unit norm.

    Runs the recurrence numerically instead of expanding the polynomials, which
    avoids the catastrophic cancellation of monomial Horner evaluation.
    ``signs[k]`` is e_{k+1}.
    """
    # columns of the running 2x2 product: (P_n, Q_n) and (P_{n-1}, Q_{n-1})
    a, b = complex(1), complex(0)
    c, d = complex(0), complex(1)
    out = [(a, b)]
    for e in signs:
        t = e * x
        a, b, c, d = t * a + c, t * b + d, a, b
        s = max(abs(a), abs(b), abs(c), abs(d))
        if s > 1e100 or s < 1e-100:
            a, b, c, d = a / s, b / s, c / s, d / s
        norm = (abs(a) ** 2 + abs(b) ** 2) ** 0.5
        out.append((a / norm, b / norm))
    return out


def recurrence_newton_ratio(params: BridgeParams) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorised x -> P_{p-1}(x) / P'_{p-1}(x) computed through the recurrence.

    The value and derivative are carried together and rescaled jointly, so the
    ratio stays accurate well past the degree where the expanded coefficients
    become useless in double precision.
    """
    signs = [params.epsilon(n) for n in range(1, params.p)]

    def ratio(xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=complex)
        p1 = np.ones_like(xs)
        p0 = np.zeros_like(xs)
        d1 = np.zeros_like(xs)
        d0 = np.zeros_like(xs)
        for e in signs:
            p1, p0, d1, d0 = e * xs * p1 + p0, p1, e * p1 + e * xs * d1 + d0, d1
            s = np.maximum.reduce([np.abs(p1), np.abs(p0), np.abs(d1), np.abs(d0)])
            big = s > 1e100
            if big.any():
                scale = np.where(big, s, 1.0)
                p1, p0, d1, d0 = p1 / scale, p0 / scale, d1 / scale, d0 / scale
        with np.errstate(divide="ignore", invalid="ignore"):
            return p1 / d1

    return ratio
