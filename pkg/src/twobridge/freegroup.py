"""Exact word algebra on the free group F = <u, v> and its integral group ring.

Words are stored run-length encoded as syllables ``(generator, exponent)``.
Fox derivatives live in Z[F]; nothing here ever solves the word problem in
the knot group itself, so every identity is checked by free reduction alone.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from twobridge.knotparams import BridgeParams

GENERATORS = ("u", "v")

Syllable = tuple[str, int]


def reduce(raw: Iterable[Syllable]) -> "Word":
    """Freely reduce a sequence of ``(generator, exponent)`` pairs.

    Exponents may be any integer; zeros are dropped and neighbouring powers of
    the same generator are merged, cascading through cancellations.
    """
    stack: list[list] = []
    for gen, exp in raw:
        if gen not in GENERATORS:
            raise ValueError(f"unknown generator {gen!r}")
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, exp])
    return Word(tuple((g, e) for g, e in stack))


@dataclass(frozen=True)
class Word:
    """A freely reduced word; construct through :func:`reduce` or :func:`word`."""

    syllables: tuple[Syllable, ...] = ()

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if not self.syllables:
            return other
        if not other.syllables:
            return self
        if self.syllables[-1][0] != other.syllables[0][0]:
            return Word(self.syllables + other.syllables)
        return reduce(self.syllables + other.syllables)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(n)):
            out = out * base
        return out

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def star(self) -> "Word":
        return reverse_star(self)

    def __len__(self) -> int:
        """Letter length, i.e. the sum of absolute exponents."""
        return sum(abs(e) for _, e in self.syllables)

    def exponent_sum(self, gen: str) -> int:
        return sum(e for g, e in self.syllables if g == gen)

    def is_identity(self) -> bool:
        return not self.syllables

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.syllables)


IDENTITY = Word()
U = Word((("u", 1),))
V = Word((("v", 1),))


def word(*syllables: Syllable) -> Word:
    return reduce(syllables)


def reverse_star(x: Word) -> Word:
    """Write the letters of ``x`` in the opposite order, keeping exponents."""
    return Word(tuple(reversed(x.syllables)))


def commutator(a: Word, b: Word) -> Word:
    return a * b * a.inverse() * b.inverse()


def alternating_word(signs: Sequence[int], start: str = "u") -> Word:
    """u^s0 v^s1 u^s2 ... (or starting with v)."""
    other = "v" if start == "u" else "u"
    return reduce((start if i % 2 == 0 else other, s) for i, s in enumerate(signs))


def random_word(rng: random.Random, max_length: int) -> Word:
    letters = [
        (rng.choice(GENERATORS), rng.choice((-1, 1)))
        for _ in range(rng.randint(0, max_length))
    ]
    return reduce(letters)


@dataclass(frozen=True)
class PresentationWords:
    w: Word
    w_star: Word
    r: Word
    g: Word
    l: Word


def build_presentation(params: BridgeParams) -> PresentationWords:
    """Words of the one-relator presentation <u, v | wu = vw> of the knot group."""
    p, ell = params.p, params.ell
    w = alternating_word([params.epsilon(i) for i in range(1, p)])
    g = alternating_word([params.epsilon(i) for i in range(0, ell + 1)])
    w_star = reverse_star(w)
    r = w * U * w.inverse() * V.inverse()
    return PresentationWords(w=w, w_star=w_star, r=r, g=g, l=w_star * w)


def check_lemma_2_1(words: PresentationWords) -> bool:
    """u w* v^-1 (w*)^-1 equals the conjugate g r g^-1 in F."""
    lhs = U * words.w_star * V.inverse() * words.w_star.inverse()
    rhs = words.g * words.r * words.g.inverse()
    return lhs == rhs


def check_lemma_2_2(words: PresentationWords) -> bool:
    """[l, u] = [w*, r][r, g] in F, exhibiting [l, u] inside [F, R]."""
    lhs = commutator(words.l, U)
    rhs = commutator(words.w_star, words.r) * commutator(words.r, words.g)
    return lhs == rhs


@dataclass(frozen=True)
class GroupRingElement:
    """Finite Z-linear combination of reduced words; zero coefficients are never stored."""

    terms: Mapping[Word, int] = field(default_factory=dict)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Word, int]]) -> "GroupRingElement":
        acc: defaultdict[Word, int] = defaultdict(int)
        for w, c in terms:
            acc[w] += c
        return cls({w: c for w, c in acc.items() if c})

    @classmethod
    def of(cls, w: Word, coefficient: int = 1) -> "GroupRingElement":
        return cls({w: coefficient} if coefficient else {})

    @classmethod
    def one(cls) -> "GroupRingElement":
        return cls.of(IDENTITY)

    @classmethod
    def zero(cls) -> "GroupRingElement":
        return cls()

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        other = _as_element(other)
        return GroupRingElement.from_terms([*self.terms.items(), *other.terms.items()])

    __radd__ = __add__

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-_as_element(other))

    def __rsub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return _as_element(other) - self

    def __mul__(self, other: "GroupRingElement | Word | int") -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement.from_terms((w, c * other) for w, c in self.terms.items())
        other = _as_element(other)
        return GroupRingElement.from_terms(
            (a * b, ca * cb)
            for a, ca in self.terms.items()
            for b, cb in other.terms.items()
        )

    def __rmul__(self, other: "Word | int") -> "GroupRingElement":
        if isinstance(other, int):
            return self * other
        return _as_element(other) * self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Word, int)):
            other = _as_element(other)
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), str(t[0]))):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = str(w) if mag == 1 else (f"{mag}" if w.is_identity() else f"{mag}*{w}")
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _as_element(x: "GroupRingElement | Word | int") -> GroupRingElement:
    if isinstance(x, GroupRingElement):
        return x
    if isinstance(x, Word):
        return GroupRingElement.of(x)
    if isinstance(x, int):
        return GroupRingElement.of(IDENTITY, x)
    raise TypeError(f"cannot coerce {type(x).__name__} into Z[F]")


def fox_derivative(f: Word, generator: str) -> GroupRingElement:
    """Fox derivative of ``f`` with respect to ``generator``.

    For a syllable x^k the contribution is prefix * (1 + x + ... + x^(k-1)) when
    k > 0 and -prefix * (x^-1 + ... + x^k) when k < 0.
    """
    if generator not in GENERATORS:
        raise ValueError(f"unknown generator {generator!r}")
    terms: list[tuple[Word, int]] = []
    prefix: tuple[Syllable, ...] = ()
    for gen, exp in f.syllables:
        if gen == generator:
            if exp > 0:
                powers, coeff = range(0, exp), 1
            else:
                powers, coeff = range(-1, exp - 1, -1), -1
            for k in powers:
                # prefix never ends in `gen`, so appending a power of it stays reduced
                terms.append((Word(prefix + ((gen, k),)) if k else Word(prefix), coeff))
        prefix = prefix + ((gen, exp),)
    return GroupRingElement.from_terms(terms)


def check_fundamental_formula(f: Word) -> bool:
    """f - 1 == (df/du)(u - 1) + (df/dv)(v - 1) exactly in Z[F]."""
    one = GroupRingElement.one()
    u_minus_1 = GroupRingElement.of(U) - one
    v_minus_1 = GroupRingElement.of(V) - one
    rhs = fox_derivative(f, "u") * u_minus_1 + fox_derivative(f, "v") * v_minus_1
    return GroupRingElement.of(f) - one == rhs
