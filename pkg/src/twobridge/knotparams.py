"""Parameters of the two-bridge knot K(p, q) and quantities derived from them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator


class ParamError(ValueError):
    """Base class for rejected (p, q) pairs."""


class NotOdd(ParamError):
    pass


class OutOfRange(ParamError):
    pass


class NotCoprime(ParamError):
    pass


@dataclass(frozen=True)
class BridgeParams:
    p: int
    q: int
    ell: int

    @property
    def half(self) -> int:
        """Number of v-syllables in w, i.e. (p - 1) / 2."""
        return (self.p - 1) // 2

    @property
    def hyperbolic(self) -> bool:
        return self.q != 1

    def epsilon(self, n: int) -> int:
        return epsilon(self.p, self.q, n)

    def __str__(self) -> str:
        return f"K({self.p},{self.q})"


def _check_int(name: str, value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    return value


def make_params(p: int, q: int) -> BridgeParams:
    """Validate ``(p, q)`` and compute ``ell``, the odd representative of -1/q mod 2p."""
    p = _check_int("p", p)
    q = _check_int("q", q)
    if p % 2 == 0 or q % 2 == 0:
        raise NotOdd(f"p and q must both be odd, got p={p}, q={q}")
    if p <= 1 or not 0 < q < p:
        raise OutOfRange(f"need 0 < q < p with p > 1, got p={p}, q={q}")
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {gcd(p, q)}")
    ell = -pow(q, -1, 2 * p) % (2 * p)
    return BridgeParams(p, q, ell)


def epsilon(p: int, q: int, n: int) -> int:
    """(-1)^floor(n q / p), valid for any integer n (including 0 and negatives)."""
    return -1 if (n * q // p) % 2 else 1


@dataclass(frozen=True)
class SignSequence:
    """Signs epsilon_1 .. epsilon_n_max; indexing is 1-based."""

    signs: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= len(self.signs):
            raise IndexError(f"sign index {n} outside 1..{len(self.signs)}")
        return self.signs[n - 1]

    def __len__(self) -> int:
        return len(self.signs)

    def __iter__(self) -> Iterator[int]:
        return iter(self.signs)

    def __str__(self) -> str:
        return " ".join("+" if s > 0 else "-" for s in self.signs)


def epsilon_sequence(params: BridgeParams, n_max: int) -> SignSequence:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return SignSequence(tuple(params.epsilon(n) for n in range(1, n_max + 1)))


@dataclass(frozen=True)
class CFExpansion:
    terms: tuple[int, ...]
    value_num: int
    value_den: int

    def __len__(self) -> int:
        return len(self.terms)

    def evaluate(self) -> Fraction:
        """Fold a_1 + 1/(a_2 + ... + 1/a_n) back into an exact rational."""
        value = Fraction(self.terms[-1])
        for a in reversed(self.terms[:-1]):
            value = a + 1 / value
        return value


def cf_positive(p: int, q: int) -> CFExpansion:
    """Euclidean continued fraction of p/q; the last term is >= 2 unless there is only one."""
    if not 0 < q < p:
        raise OutOfRange(f"need 0 < q < p, got p={p}, q={q}")
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {gcd(p, q)}")
    terms = []
    a, b = p, q
    while b:
        terms.append(a // b)
        a, b = b, a % b
    return CFExpansion(tuple(terms), p, q)


def lackenby_bounds(cf: CFExpansion) -> tuple[float, float]:
    """Lower and upper volume bounds from the twist count of the alternating diagram."""
    from twobridge.dilog import v3

    n = len(cf.terms)
    c = v3()
    return c * (n - 2) / 2, 16 * c * (n - 1)


def equivalent_params(params: BridgeParams) -> set[tuple[int, int]]:
    """Pairs (p, q') describing the same knot up to orientation: q' = +-q^(+-1) mod p, q' odd."""
    p, q = params.p, params.q
    q_inv = pow(q, -1, p)
    residues = {q % p, -q % p, q_inv, -q_inv % p}
    return {(p, r) for r in residues if 0 < r < p and r % 2 == 1}
