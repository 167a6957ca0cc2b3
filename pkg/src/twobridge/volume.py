"""Volume and pre-Bloch element of K(p, q) from the orbit of infinity.

For a root x of the Riley polynomial the meridians act on the projective line
as u = [[1, x], [0, 1]] and v = [[1, 0], [x, 1]]. The points
z_n = P_n(x) / Q_n(x) (with z_0 = infinity) are the images of infinity under
the prefixes of w, and the Bloch element is the sum over j = 1..(p-1)/2 of

    [v(z_{l-1}) : inf : z_{2j-2} : z_{2j}] + [inf : 0 : z_{2j-2} : z_{2j}]
    + [0 : z_{2p-2} : z_{2j-2} : z_{2j}] + [z_{2p-2} : z_{l-1} : z_{2j-2} : z_{2j}].

The volume is the largest value of D summed over that element, taken over all
roots. The same sum is also evaluated from the four explicit fractions A, B,
C, E in the z's; that second route uses :data:`THEOREM_ORIENTATION`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from twobridge.dilog import bloch_wigner, bloch_wigner_array
from twobridge.knotparams import BridgeParams, make_params
from twobridge.polyseq import convergent_values, recurrence_newton_ratio, riley_poly
from twobridge.roots import RootSet, find_roots

PROJ_TOL = 1e-9
INVALID_ROOT_TOL = 1e-6
TIE_TOL = 1e-12

# Signs applied to D(A), D(B), D(C), D(E) on the explicit-fraction route. B is
# taken as z_{2j-2}/z_{2j}, the reciprocal of the cross-ratio [inf : 0 : z_{2j-2} : z_{2j}],
# so it enters with -1. Frozen from calibrate_orientation().
THEOREM_ORIENTATION = (1, -1, 1, 1)

K73_VOLUME = 2.82812208833078


class InvalidRoot(ValueError):
    pass


@dataclass(frozen=True)
class ProjectivePoint:
    """Homogeneous pair (a : b); infinity is (1 : 0) and a finite z is (z : 1)."""

    a: complex
    b: complex

    def __post_init__(self) -> None:
        if self.a == 0 and self.b == 0:
            raise ValueError("(0, 0) is not a projective point")

    @classmethod
    def of(cls, z: Optional[complex]) -> "ProjectivePoint":
        if z is None or not np.isfinite(z):
            return INFINITY
        return cls(complex(z), 1 + 0j)

    def normalized(self) -> "ProjectivePoint":
        n = math.hypot(abs(self.a), abs(self.b))
        return ProjectivePoint(self.a / n, self.b / n)

    def distance(self, other: "ProjectivePoint") -> float:
        """Chordal distance, the sine of the angle between the two lines in C^2."""
        p, q = self.normalized(), other.normalized()
        return abs(p.a * q.b - q.a * p.b)

    def close_to(self, other: "ProjectivePoint", tol: float = PROJ_TOL) -> bool:
        return self.distance(other) <= tol

    @property
    def value(self) -> complex:
        """Affine coordinate; complex infinity for the point at infinity."""
        if self.b == 0:
            return complex(math.inf, 0)
        return self.a / self.b

    def __str__(self) -> str:
        p = self.normalized()
        if abs(p.b) <= PROJ_TOL:
            return "inf"
        z = p.a / p.b
        return f"{z.real:.15g}{z.imag:+.15g}j"


INFINITY = ProjectivePoint(1 + 0j, 0j)
ZERO = ProjectivePoint(0j, 1 + 0j)


@dataclass(frozen=True)
class MobiusMap:
    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def __post_init__(self) -> None:
        if self.det == 0:
            raise ValueError("singular matrix")

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def u(cls, x: complex, e: int = 1) -> "MobiusMap":
        return cls(1, e * x, 0, 1)

    @classmethod
    def v(cls, x: complex, e: int = 1) -> "MobiusMap":
        return cls(1, 0, e * x, 1)

    @property
    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def rescaled(self) -> "MobiusMap":
        s = max(abs(self.m11), abs(self.m12), abs(self.m21), abs(self.m22))
        return MobiusMap(self.m11 / s, self.m12 / s, self.m21 / s, self.m22 / s)

    def __call__(self, pt: ProjectivePoint) -> ProjectivePoint:
        return ProjectivePoint(
            self.m11 * pt.a + self.m12 * pt.b, self.m21 * pt.a + self.m22 * pt.b
        ).normalized()


@dataclass(frozen=True)
class ZSequence:
    root: complex
    points: tuple[ProjectivePoint, ...]

    def __getitem__(self, n: int) -> ProjectivePoint:
        return self.points[n]

    def __len__(self) -> int:
        return len(self.points)

    def homogeneous(self) -> np.ndarray:
        return np.array([[pt.a, pt.b] for pt in self.points], dtype=complex)


def z_sequence(params: BridgeParams, root: complex) -> ZSequence:
    """Points z_0 .. z_{2p-2} at ``root``, built projectively from the convergent recurrence."""
    signs = [params.epsilon(n) for n in range(1, 2 * params.p - 1)]
    points = tuple(ProjectivePoint(a, b) for a, b in convergent_values(signs, complex(root)))
    zs = ZSequence(complex(root), points)
    miss = zs[params.p - 1].distance(ZERO)
    if miss > INVALID_ROOT_TOL:
        raise InvalidRoot(f"{root} is not a root of P_{params.p - 1} (z_{params.p - 1} misses 0 by {miss:.2e})")
    return zs


def mobius_prefix_check(params: BridgeParams, root: complex) -> float:
    """Largest chordal distance between u^e1 v^e2 ... v^e2k (inf) and z_2k over k."""
    zs = z_sequence(params, root)
    m = MobiusMap.identity()
    worst = 0.0
    for n in range(1, 2 * params.p - 1):
        step = MobiusMap.u(root, params.epsilon(n)) if n % 2 else MobiusMap.v(root, params.epsilon(n))
        m = (m @ step).rescaled()
        if n % 2 == 0:
            worst = max(worst, m(INFINITY).distance(zs[n]))
    return worst


def _cross_ratio_rows(p0: np.ndarray, p1: np.ndarray, p2: np.ndarray, p3: np.ndarray):
    """Row-wise cross-ratios of unit-normalised homogeneous rows; NaN marks a repeated point."""
    pts = (p0, p1, p2, p3)

    def det(i: int, j: int) -> np.ndarray:
        return pts[i][:, 0] * pts[j][:, 1] - pts[j][:, 0] * pts[i][:, 1]

    d = {(i, j): det(i, j) for i in range(4) for j in range(i + 1, 4)}
    degenerate = np.zeros(len(p0), dtype=bool)
    for v in d.values():
        degenerate |= np.abs(v) <= PROJ_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        value = d[0, 2] * d[1, 3] / (d[0, 3] * d[1, 2])
    value[degenerate] = np.nan
    return value, degenerate


def _unit_rows(h: np.ndarray) -> np.ndarray:
    h = np.atleast_2d(np.asarray(h, dtype=complex))
    return h / np.linalg.norm(h, axis=1, keepdims=True)


def cross_ratio(
    p0: ProjectivePoint, p1: ProjectivePoint, p2: ProjectivePoint, p3: ProjectivePoint
) -> Optional[complex]:
    """[p0 : p1 : p2 : p3] = (p0 - p2)(p1 - p3) / ((p0 - p3)(p1 - p2)); None if two points coincide."""
    rows = [_unit_rows([pt.a, pt.b]) for pt in (p0, p1, p2, p3)]
    value, degenerate = _cross_ratio_rows(*rows)
    return None if degenerate[0] else complex(value[0])


@dataclass(frozen=True)
class BlochTerm:
    family: int
    j: int
    argument: Optional[complex]
    coefficient: int = 1

    @property
    def degenerate(self) -> bool:
        return self.argument is None


@dataclass(frozen=True)
class PreBlochElement:
    """Formal sum of cross-ratios; degenerate terms are kept for auditing but count as zero."""

    terms: tuple[BlochTerm, ...]

    def __len__(self) -> int:
        return len(self.terms)

    def nondegenerate(self) -> list[BlochTerm]:
        return [t for t in self.terms if not t.degenerate]

    def all_degenerate(self) -> bool:
        return all(t.degenerate for t in self.terms)

    def evaluate(self) -> float:
        live = self.nondegenerate()
        if not live:
            return 0.0
        values = bloch_wigner_array([t.argument for t in live])
        return float(sum(t.coefficient * v for t, v in zip(live, values)))


def _family_rows(params: BridgeParams, zs: ZSequence) -> tuple[np.ndarray, ...]:
    h = _unit_rows(zs.homogeneous())
    half = params.half
    z_prev = h[0 : 2 * half - 1 : 2]
    z_next = h[2 : 2 * half + 1 : 2]
    z_ell = h[params.ell - 1]
    z_end = h[2 * params.p - 2]
    return h, z_prev, z_next, z_ell, z_end


def bloch_element(params: BridgeParams, zs: ZSequence) -> PreBlochElement:
    """The four cross-ratio families for j = 1..(p-1)/2, in family-major order."""
    _, z_prev, z_next, z_ell, z_end = _family_rows(params, zs)
    half = params.half
    v_map = MobiusMap.v(zs.root)
    vz = v_map(ProjectivePoint(*z_ell))
    rep = lambda row: np.repeat(np.atleast_2d(row), half, axis=0)  # noqa: E731
    inf = rep([1, 0])
    zero = rep([0, 1])
    families = (
        (rep([vz.a, vz.b]), inf),
        (inf, zero),
        (zero, rep(z_end)),
        (rep(z_end), rep(z_ell)),
    )
    terms = []
    for f, (first, second) in enumerate(families, start=1):
        value, degenerate = _cross_ratio_rows(first, second, z_prev, z_next)
        for j in range(half):
            arg = None if degenerate[j] else complex(value[j])
            terms.append(BlochTerm(family=f, j=j + 1, argument=arg))
    return PreBlochElement(tuple(terms))


def theorem_fractions(params: BridgeParams, zs: ZSequence) -> np.ndarray:
    """Homogeneous (numerator, denominator) of A_j, B_j, C_j, E_j; shape (4, (p-1)/2, 2).

    The fractions are cleared of denominators so that z_0 = infinity is an
    ordinary input. A row whose two entries both vanish is an indeterminate 0/0
    and counts as a degenerate term.
    """
    _, c, d, ell, m = _family_rows(params, zs)
    ac, bc = c[:, 0], c[:, 1]
    ad, bd = d[:, 0], d[:, 1]
    al, bl = ell
    am, bm = m

    def det(a1, b1, a2, b2):
        return a1 * b2 - a2 * b1

    n_c = al * am * bc - ac * am * bl + ac * al * bm
    n_d = al * am * bd - ad * am * bl + ad * al * bm
    frac_a = (n_c * bd, n_d * bc)
    frac_b = (ac * bd, ad * bc)
    frac_c = (ac * det(am, bm, ad, bd), ad * det(am, bm, ac, bc))
    frac_e = (det(am, bm, ac, bc) * det(al, bl, ad, bd), det(am, bm, ad, bd) * det(al, bl, ac, bc))
    return np.array([np.stack(f, axis=-1) for f in (frac_a, frac_b, frac_c, frac_e)])


def _theorem_sum(params: BridgeParams, zs: ZSequence, orientation: Sequence[int]) -> float:
    frac = theorem_fractions(params, zs)
    num, den = frac[..., 0], frac[..., 1]
    indeterminate = (np.abs(num) <= PROJ_TOL) & (np.abs(den) <= PROJ_TOL)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / den
    ratio[indeterminate] = np.nan
    values = bloch_wigner_array(ratio)
    return float(np.sum(np.asarray(orientation)[:, None] * values))


@dataclass(frozen=True)
class RootVolume:
    root: complex
    v_cross: float
    v_theorem: float
    degenerate: bool = False


def volume_at_root(
    params: BridgeParams, zs: ZSequence, orientation: Sequence[int] = THEOREM_ORIENTATION
) -> RootVolume:
    """Sum of D over the Bloch element (cross-ratio route) and over the explicit fractions."""
    element = bloch_element(params, zs)
    v_cross = element.evaluate()
    v_theorem = _theorem_sum(params, zs, orientation)
    flagged = element.all_degenerate() and params.p > 3 and params.q > 1
    if flagged:
        v_cross = v_theorem = 0.0
    return RootVolume(zs.root, v_cross, v_theorem, flagged)


@dataclass(frozen=True)
class VolumeResult:
    params: BridgeParams
    per_root: tuple[RootVolume, ...]
    volume: float
    argmax_root: complex
    roots: RootSet

    def to_dict(self) -> dict:
        return {
            "p": self.params.p,
            "q": self.params.q,
            "volume": self.volume,
            "argmax_root": {"re": self.argmax_root.real, "im": self.argmax_root.imag},
            "per_root": [
                {
                    "root": {"re": r.root.real, "im": r.root.imag},
                    "v_cross": r.v_cross,
                    "v_theorem": r.v_theorem,
                    "degenerate": r.degenerate,
                }
                for r in self.per_root
            ],
        }


def riley_roots(params: BridgeParams) -> RootSet:
    return find_roots(riley_poly(params), recurrence_newton_ratio(params))


def volume(params: BridgeParams, orientation: Sequence[int] = THEOREM_ORIENTATION) -> VolumeResult:
    """Evaluate every root of P_{p-1} and keep the largest cross-ratio volume.

    Ties (within 1e-12) go to the root with the lexicographically largest (Re, Im).
    """
    roots = riley_roots(params)
    per_root = tuple(
        volume_at_root(params, z_sequence(params, x), orientation) for x in roots.representatives()
    )
    best = max(r.v_cross for r in per_root)
    winner = max(
        (r for r in per_root if r.v_cross >= best - TIE_TOL),
        key=lambda r: (r.root.real, r.root.imag),
    )
    return VolumeResult(params, per_root, best, winner.root, roots)


def calibrate_orientation() -> int:
    """Sign on D(B) that makes the explicit-fraction route reproduce K(7,3) and K(5,3).

    The cross-ratio route needs no calibration; this only fixes how the closed-form
    fraction z_{2j-2}/z_{2j} is oriented relative to it.
    """
    targets = {
        (7, 3): K73_VOLUME,
        (5, 3): 3 * bloch_wigner(complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))),
    }
    matches = []
    for sign in (1, -1):
        orientation = (1, sign, 1, 1)
        ok = True
        for (p, q), target in targets.items():
            params = make_params(p, q)
            roots = riley_roots(params)
            v = max(_theorem_sum(params, z_sequence(params, x), orientation) for x in roots.representatives())
            ok &= abs(v - target) <= 1e-9
        if ok:
            matches.append(sign)
    if len(matches) != 1:
        raise RuntimeError(f"orientation calibration is ambiguous: {matches}")
    return matches[0]
