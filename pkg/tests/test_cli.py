import json
import re

import pytest

from twobridge.cli import info_report, main
from twobridge.scan import records_from_csv, records_to_csv, render_svg, scan, valid_pairs


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_vol(capsys):
    code, out, _ = run(capsys, "vol", "7", "3")
    assert code == 0 and out.strip() == "2.828122088331"
    assert run(capsys, "vol", "9", "1")[1].strip() == "0.000000000000"


def test_vol_all_roots(capsys):
    code, out, _ = run(capsys, "vol", "5", "3", "--all-roots")
    assert code == 0
    assert out.count(" no") == 4
    assert "argmax root" in out


def test_vol_json(capsys):
    code, out, _ = run(capsys, "vol", "7", "3", "--json")
    data = json.loads(out)
    assert code == 0 and data["p"] == 7 and data["q"] == 3
    assert data["volume"] == pytest.approx(2.82812208833078, abs=1e-9)
    assert len(data["per_root"]) == 6


@pytest.mark.parametrize(
    "argv, name",
    [(["vol", "9", "3"], "NotCoprime"), (["vol", "8", "3"], "NotOdd"), (["info", "7", "9"], "OutOfRange")],
)
def test_invalid_parameters(capsys, argv, name):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith(name)


def test_not_coprime_message(capsys):
    assert run(capsys, "vol", "9", "3")[2].strip() == "NotCoprime: gcd(9, 3) = 3"


def test_info(capsys):
    code, out, _ = run(capsys, "info", "5", "3")
    assert code == 0
    assert "ell = 3" in out and "P_4 = x^4 - x^2 + 1" in out
    text = info_report(7, 3)
    assert "epsilon = + + - - + +" in text
    assert "cf = [2, 3]" in text
    assert "equivalent = K(7,3), K(7,5)" in text


def test_info_roots(capsys):
    code, out, _ = run(capsys, "info", "5", "3", "--roots")
    rows = [line for line in out.splitlines() if re.match(r"\s+[+-]\d", line)]
    assert code == 0 and len(rows) == 4


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--pmax", "7")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "p,q,ratio,volume,cf_len,ell"
    assert len(lines) == 1 + len(valid_pairs(7))
    assert "7,3,0.428571428571,2.828122088331,2,9" in lines


def test_scan_json(capsys, tmp_path):
    target = tmp_path / "scan.json"
    assert run(capsys, "scan", "--pmax", "9", "--format", "json", "-o", str(target))[0] == 0
    rows = json.loads(target.read_text())
    assert [(r["p"], r["q"]) for r in rows] == valid_pairs(9)
    assert set(rows[0]) == {"p", "q", "ratio", "volume", "cf_len", "ell"}


def test_csv_round_trip():
    records = scan(11)
    back = records_from_csv(records_to_csv(records))
    assert [(r.p, r.q, r.cf_len, r.ell) for r in back] == [(r.p, r.q, r.cf_len, r.ell) for r in records]
    assert all(abs(a.volume - b.volume) < 1e-12 for a, b in zip(back, records))
    with pytest.raises(ValueError):
        records_from_csv("a,b\n1,2\n")


def test_no_negative_zero():
    text = records_to_csv(scan(15))
    assert "-0.000000000000" not in text


def test_figure(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run(capsys, "figure", "--pmax", "13", "-o", str(a))[0] == 0
    assert run(capsys, "figure", "--pmax", "13", "-o", str(b))[0] == 0
    svg = a.read_text()
    assert svg == b.read_text()
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
    assert svg.count("<circle") == len(valid_pairs(13))


def test_figure_single_marker():
    assert render_svg(scan(3), 3).count("<circle") == 1


def test_pmax_too_small(capsys):
    assert run(capsys, "scan", "--pmax", "1")[0] == 2
    assert run(capsys, "figure", "--pmax", "2", "-o", "x.svg")[0] == 2


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "figure", "--pmax", "5", "-o", str(tmp_path / "missing" / "f.svg"))
    assert code == 3 and "cannot write" in err


def test_bad_usage_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["vol", "seven", "3"])
    assert info.value.code == 2


def test_selftest_negative_control(capsys, monkeypatch):
    from twobridge import acceptance, dilog

    # keep this fast: only the checks that do not need the census
    monkeypatch.setattr(acceptance, "CHECKS", [acceptance.check_k73, acceptance.check_k53_identity, acceptance.check_dilog])
    previous = dilog.get_config()
    try:
        code, out, _ = run(capsys, "selftest", "--dilog-tol", "1e-1")
    finally:
        dilog.set_config(previous)
    assert code == 1
    assert "[FAIL]" in out and "criteria passed" in out
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "3/3 criteria passed" in out
