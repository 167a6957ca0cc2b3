"""Exit criteria for the library, runnable from pytest and from ``twobridge selftest``.

Every check returns a :class:`CheckResult` carrying the measured error next to
the tolerance it was held to. The p < 50 census is computed once and shared.
"""

from __future__ import annotations

import cmath
import math
import random
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np

from twobridge import dilog
from twobridge.freegroup import (
    build_presentation,
    check_fundamental_formula,
    check_lemma_2_1,
    check_lemma_2_2,
    random_word,
)
from twobridge.knotparams import cf_positive, equivalent_params, lackenby_bounds, make_params
from twobridge.polyseq import convergents, riley_poly
from twobridge.scan import render_svg, scan_results, to_record, valid_pairs
from twobridge.volume import K73_VOLUME, ZERO, ProjectivePoint, volume, z_sequence

CENSUS_PMAX = 49


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.name}: {self.detail}"


@dataclass(frozen=True)
class Census:
    results: tuple
    seconds: float


@lru_cache(maxsize=None)
def _census(config: dilog.DilogConfig) -> Census:
    start = time.perf_counter()
    results = tuple(scan_results(CENSUS_PMAX))
    return Census(results, time.perf_counter() - start)


def census() -> Census:
    return _census(dilog.get_config())


def check_k73() -> CheckResult:
    params = make_params(7, 3)
    start = time.perf_counter()
    v = volume(params).volume
    elapsed = time.perf_counter() - start
    err = abs(v - K73_VOLUME)
    return CheckResult(
        1,
        "K(7,3) volume",
        err <= 1e-9 and elapsed < 0.1,
        f"V={v:.14f} |err|={err:.2e} (tol 1e-9), runtime {elapsed * 1e3:.1f} ms (limit 100 ms)",
    )


def check_k53_identity() -> CheckResult:
    v = volume(make_params(5, 3)).volume
    d_j = 3 * dilog.bloch_wigner(cmath.exp(2j * math.pi / 3))
    lob = 6 * dilog.lobachevsky(math.pi / 3)
    err = max(abs(v - d_j), abs(v - lob), abs(d_j - lob))
    return CheckResult(
        2,
        "K(5,3) = 3D(j) = 6 Lambda(pi/3)",
        err <= 1e-9,
        f"V={v:.12f} 3D(j)={d_j:.12f} 6L={lob:.12f} max gap {err:.2e} (tol 1e-9)",
    )


def check_torus() -> CheckResult:
    worst = max(abs(r.volume) for r in census().results if r.params.q == 1)
    return CheckResult(3, "torus knots K(p,1) have zero volume", worst <= 1e-8, f"max |V| = {worst:.2e} (tol 1e-8)")


def check_riley_exact() -> CheckResult:
    coeffs = riley_poly(make_params(5, 3)).coeffs
    return CheckResult(
        4, "P_4 for (5,3) is x^4 - x^2 + 1", coeffs == (1, 0, -1, 0, 1), f"coefficients {list(coeffs)}"
    )


def check_lemmas() -> CheckResult:
    failures = []
    pairs = valid_pairs(99)
    for p, q in pairs:
        words = build_presentation(make_params(p, q))
        if not (check_lemma_2_1(words) and check_lemma_2_2(words)):
            failures.append((p, q))
    return CheckResult(
        5,
        "free-group lemmas, all p < 100",
        not failures,
        f"{len(pairs)} pairs, failures {failures[:5]}",
    )


def check_fundamental() -> CheckResult:
    failures = []
    pairs = valid_pairs(49)
    for p, q in pairs:
        words = build_presentation(make_params(p, q))
        for name in ("w", "g", "r", "l"):
            if not check_fundamental_formula(getattr(words, name)):
                failures.append((p, q, name))
    rng = random.Random(20261018)
    bad_random = sum(not check_fundamental_formula(random_word(rng, 50)) for _ in range(1000))
    return CheckResult(
        6,
        "Fox fundamental formula in Z[F]",
        not failures and bad_random == 0,
        f"{4 * len(pairs)} presentation words, 1000 random words; failures {failures[:5]}, random {bad_random}",
    )


def continued_fraction_oracle(signs: list[int]):
    """Canonical numerator and denominator of e_1 x + 1/(e_2 x + ...) via sympy."""
    import sympy

    x = sympy.Symbol("x")
    expr = signs[-1] * x
    for e in reversed(signs[:-1]):
        expr = e * x + 1 / expr
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    to_coeffs = lambda f: tuple(int(c) for c in reversed(sympy.Poly(f, x).all_coeffs()))  # noqa: E731
    return to_coeffs(num), to_coeffs(den)


def _poly_det_is(p_cur, q_prev, p_prev, q_cur, expected: int) -> bool:
    obj = lambda c: np.array(c or (0,), dtype=object)  # noqa: E731
    a = np.convolve(obj(p_cur), obj(q_prev))
    b = np.convolve(obj(p_prev), obj(q_cur))
    size = max(len(a), len(b))
    diff = [int(t) for t in np.pad(a, (0, size - len(a))) - np.pad(b, (0, size - len(b)))]
    while diff and diff[-1] == 0:
        diff.pop()
    return diff == [expected]


def check_convergents() -> CheckResult:
    rng = random.Random(7)
    pairs = rng.sample(valid_pairs(99), 50)
    mismatches = []
    for p, q in pairs:
        params = make_params(p, q)
        for pair in convergents(params, 12):
            num, den = continued_fraction_oracle([params.epsilon(k) for k in range(1, pair.n + 1)])
            if not any(
                num == tuple(s * c for c in pair.P.coeffs) and den == tuple(s * c for c in pair.Q.coeffs)
                for s in (1, -1)
            ):
                mismatches.append((p, q, pair.n))
    det_fail = []
    det_pairs = [(5, 3), (7, 3), (199, 45), (101, 37), (63, 25)]
    for p, q in det_pairs:
        prev_p, prev_q = (1,), ()
        for pair in convergents(make_params(p, q), 200):
            if not _poly_det_is(pair.P.coeffs, prev_q, prev_p, pair.Q.coeffs, (-1) ** pair.n):
                det_fail.append((p, q, pair.n))
            prev_p, prev_q = pair.P.coeffs, pair.Q.coeffs
    return CheckResult(
        7,
        "convergent recurrence vs symbolic continued fraction",
        not mismatches and not det_fail,
        f"50 pairs x n<=12 oracle mismatches {mismatches[:3]}; "
        f"determinant n<=200 on {len(det_pairs)} pairs failures {det_fail[:3]}",
    )


def check_dual_path() -> CheckResult:
    worst = max(abs(r.v_cross - r.v_theorem) for res in census().results for r in res.per_root)
    return CheckResult(8, "cross-ratio vs explicit-fraction route", worst <= 1e-9, f"max gap {worst:.2e} (tol 1e-9)")


def check_isotopy() -> CheckResult:
    vols = {(r.params.p, r.params.q): r.volume for r in census().results}
    worst = 0.0
    for (p, q), v in vols.items():
        for key in equivalent_params(make_params(p, q)):
            worst = max(worst, abs(v - vols[key]))
    return CheckResult(9, "isotopy invariance, p < 50", worst <= 1e-8, f"max gap {worst:.2e} (tol 1e-8)")


def check_lackenby() -> CheckResult:
    bad = []
    for res in census().results:
        p, q = res.params.p, res.params.q
        if q == 1:
            continue
        lower, upper = lackenby_bounds(cf_positive(p, q))
        if not lower <= res.volume <= upper:
            bad.append((p, q))
    return CheckResult(10, "Lackenby bounds, hyperbolic p < 50", not bad, f"violations {bad[:5]}")


def check_dilog() -> CheckResult:
    rng = np.random.default_rng(11)

    def sample(n: int) -> np.ndarray:
        z = rng.uniform(-3, 3, n) + 1j * rng.uniform(-3, 3, n)
        return z

    x, y = sample(1000), sample(1000)
    bad = (np.abs(x) < 0.05) | (np.abs(x - 1) < 0.05) | (np.abs(y) < 0.05) | (np.abs(y - 1) < 0.05)
    x[bad] += 0.3 + 0.4j
    D = dilog.bloch_wigner_array
    five = D(x) - D(y) + D(y / x) - D((1 - y) / (1 - x)) + D((1 - 1 / y) / (1 - 1 / x))
    five_err = float(np.max(np.abs(five)))
    z = sample(1000)
    conj_err = float(np.max(np.abs(D(np.conj(z)) + D(z))))
    catalan = float(mpmath.catalan)
    cat_err = abs(dilog.bloch_wigner(1j) - catalan)
    return CheckResult(
        11,
        "dilogarithm identities",
        five_err <= 1e-10 and conj_err <= 1e-12 and cat_err <= 1e-12,
        f"five-term {five_err:.2e} (1e-10), conjugation {conj_err:.2e} (1e-12), D(i)-Catalan {cat_err:.2e} (1e-12)",
    )


def check_z_invariants() -> CheckResult:
    worst = 0.0
    for res in census().results:
        params = res.params
        for r in res.per_root:
            zs = z_sequence(params, r.root)
            worst = max(
                worst,
                zs[params.p - 1].distance(ZERO),
                zs[2 * params.p - 2].distance(ProjectivePoint.of(-1 / r.root)),
            )
    return CheckResult(12, "z_{p-1} = 0 and z_{2p-2} = -1/x", worst <= 1e-9, f"max deviation {worst:.2e} (tol 1e-9)")


def check_figure() -> CheckResult:
    c = census()
    records = [to_record(r) for r in c.results]
    expected = len(valid_pairs(CENSUS_PMAX))
    first = render_svg(records, CENSUS_PMAX)
    second = render_svg([to_record(r) for r in c.results], CENSUS_PMAX)
    markers = first.count("<circle")
    ok = len(records) == expected and markers == expected and first == second and c.seconds < 60
    return CheckResult(
        13,
        "volume scan p < 50 and SVG scatter",
        ok,
        f"{len(records)} records / {expected} pairs, {markers} markers, scan {c.seconds:.1f} s (limit 60 s), "
        f"byte-identical {first == second}",
    )


CHECKS: list[Callable[[], CheckResult]] = [
    check_k73,
    check_k53_identity,
    check_torus,
    check_riley_exact,
    check_lemmas,
    check_fundamental,
    check_convergents,
    check_dual_path,
    check_isotopy,
    check_lackenby,
    check_dilog,
    check_z_invariants,
    check_figure,
]


def run_check(check: Callable[[], CheckResult]) -> CheckResult:
    try:
        return check()
    except Exception as exc:  # a crash is a failed criterion, not an aborted run
        number = CHECKS.index(check) + 1 if check in CHECKS else 0
        return CheckResult(number, check.__name__, False, f"raised {type(exc).__name__}: {exc}")


def run_all() -> list[CheckResult]:
    return [run_check(c) for c in CHECKS]
