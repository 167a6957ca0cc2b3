"""Parameter scans over all two-bridge knots up to a given p, and their SVG scatter plot."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

from twobridge.knotparams import cf_positive, make_params
from twobridge.volume import VolumeResult, volume

CSV_FIELDS = ("p", "q", "ratio", "volume", "cf_len", "ell")
THREADS_ENV = "TWOBRIDGE_THREADS"


@dataclass(frozen=True)
class ScanRecord:
    p: int
    q: int
    ratio: float
    volume: float
    cf_len: int
    ell: int


def format_fixed(x: float, digits: int = 12) -> str:
    """Fixed-point text that never shows a negative zero."""
    s = f"{x:.{digits}f}"
    if s.startswith("-") and float(s) == 0.0:
        s = s[1:]
    return s


def valid_pairs(pmax: int) -> list[tuple[int, int]]:
    return [
        (p, q)
        for p in range(3, pmax + 1, 2)
        for q in range(1, p, 2)
        if gcd(p, q) == 1
    ]


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _volume_of(pair: tuple[int, int]) -> VolumeResult:
    return volume(make_params(*pair))


def scan_results(pmax: int, workers: Optional[int] = None) -> list[VolumeResult]:
    """Volumes for every valid pair with p <= pmax, ordered by (p, q)."""
    pairs = valid_pairs(pmax)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(pairs) < 8:
        return [_volume_of(pair) for pair in pairs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_volume_of, pairs, chunksize=4))


def to_record(result: VolumeResult) -> ScanRecord:
    p, q = result.params.p, result.params.q
    return ScanRecord(
        p=p,
        q=q,
        ratio=q / p,
        # the max over a conjugation-closed root set is >= 0 up to rounding
        volume=max(result.volume, 0.0),
        cf_len=len(cf_positive(p, q)),
        ell=result.params.ell,
    )


def scan(pmax: int, workers: Optional[int] = None) -> list[ScanRecord]:
    return [to_record(r) for r in scan_results(pmax, workers)]


def records_to_csv(records: Iterable[ScanRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        writer.writerow([r.p, r.q, format_fixed(r.ratio), format_fixed(r.volume), r.cf_len, r.ell])
    return out.getvalue()


def records_from_csv(text: str) -> list[ScanRecord]:
    rows = csv.DictReader(io.StringIO(text))
    if tuple(rows.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {rows.fieldnames}")
    return [
        ScanRecord(
            p=int(row["p"]),
            q=int(row["q"]),
            ratio=float(row["ratio"]),
            volume=float(row["volume"]),
            cf_len=int(row["cf_len"]),
            ell=int(row["ell"]),
        )
        for row in rows
    ]


def records_to_json(records: Iterable[ScanRecord]) -> str:
    rows = []
    for r in records:
        row = asdict(r)
        row["ratio"] = float(format_fixed(r.ratio))
        row["volume"] = float(format_fixed(r.volume))
        rows.append(row)
    return json.dumps(rows, indent=1) + "\n"


# Canvas geometry for the scatter plot, in SVG user units.
WIDTH, HEIGHT = 800, 600
LEFT, RIGHT, TOP, BOTTOM = 70, 30, 50, 60


def _nice_step(span: float) -> float:
    raw = span / 8
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        if m * mag >= raw:
            return m * mag
    return 10 * mag


def render_svg(records: Sequence[ScanRecord], pmax: int) -> str:
    """Scatter of (q/p, volume); deterministic text for identical input."""
    ymax = max([1.0] + [math.ceil(r.volume) for r in records])
    ystep = _nice_step(ymax)
    ymax = math.ceil(ymax / ystep) * ystep
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(x: float) -> str:
        return f"{LEFT + x * pw:.2f}"

    def sy(y: float) -> str:
        return f"{TOP + ph - y / ymax * ph:.2f}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.2f}" y="{TOP / 2 + 6:.2f}" text-anchor="middle" font-size="16">'
        f"Volumes of two-bridge knots K(p,q), p &lt;= {pmax}</text>",
        '<g stroke="#cccccc" stroke-width="0.5">',
    ]
    for k in range(11):
        x = k / 10
        lines.append(f'<line x1="{sx(x)}" y1="{sy(0)}" x2="{sx(x)}" y2="{sy(ymax)}"/>')
    n_y = int(round(ymax / ystep))
    for k in range(n_y + 1):
        y = k * ystep
        lines.append(f'<line x1="{sx(0)}" y1="{sy(y)}" x2="{sx(1)}" y2="{sy(y)}"/>')
    lines.append("</g>")
    lines.append(
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>'
    )
    for k in range(11):
        x = k / 10
        lines.append(
            f'<text x="{sx(x)}" y="{TOP + ph + 18}" text-anchor="middle">{x:.1f}</text>'
        )
    for k in range(n_y + 1):
        y = k * ystep
        label = f"{y:g}"
        lines.append(
            f'<text x="{LEFT - 8}" y="{float(sy(y)) + 4:.2f}" text-anchor="end">{label}</text>'
        )
    lines.append(
        f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle">q/p</text>'
    )
    lines.append(
        f'<text x="18" y="{TOP + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {TOP + ph / 2:.2f})">volume</text>'
    )
    lines.append('<g fill="#1f4e9c" fill-opacity="0.8">')
    for r in records:
        lines.append(
            f'<circle cx="{sx(r.ratio)}" cy="{sy(r.volume)}" r="2.5">'
            f"<title>K({r.p},{r.q}) {format_fixed(r.volume)}</title></circle>"
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
