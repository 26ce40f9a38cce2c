import json
import subprocess
import sys

import pytest

from rankone.cli import RunConfig, main, run
from rankone.decide import ExplicitFamily, LarsonWogenFamily
from rankone.errors import SpecParseError, UnsupportedFamily, ZeroWeight
from rankone.specio import load_spec, parse_spec

LW_ONES = {"family": "larson_wogen", "prefix": [], "tail": {"kind": "constant", "c": 1}, "n_max": 12}
LW_POW2 = {"family": "larson_wogen", "tail": {"kind": "geometric", "c": 1, "q": "1/2"}, "n_max": 30}
LW_HARMONIC = {"family": "larson_wogen", "tail": {"kind": "power", "c": 1, "p": 1}, "n_max": 20}
EXPLICIT = {"family": "explicit", "side": ["L", "R", "L", "R"],
            "f_entries": [[1, 2, 2], [3, 2, "1/2"], [3, 4, -1]], "bandwidth": 1}


@pytest.fixture
def spec_file(tmp_path):
    def write(obj, name="spec.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
        return str(p)
    return write


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def test_parse_families():
    assert isinstance(parse_spec(LW_ONES).family, LarsonWogenFamily)
    spec = parse_spec(EXPLICIT)
    assert isinstance(spec.family, ExplicitFamily)
    assert spec.system().f(3, 2) == pytest.approx(0.5)
    assert spec.system().fstar(2, 3) == -0.5


def test_parse_errors():
    with pytest.raises(UnsupportedFamily):
        parse_spec({"family": "hilbert"})
    with pytest.raises(SpecParseError):
        parse_spec([1, 2])
    with pytest.raises(SpecParseError):
        parse_spec({"family": "explicit", "side": ["L", "X"], "f_entries": [], "bandwidth": 1})
    with pytest.raises(SpecParseError):
        parse_spec({**EXPLICIT, "f_entries": [[1, 9, 1]]})
    with pytest.raises(SpecParseError):
        parse_spec({**LW_ONES, "n_max": 0})
    with pytest.raises(ZeroWeight):
        parse_spec({**LW_ONES, "prefix": [1, 2, 0]})


def test_load_spec_bad_json(spec_file):
    with pytest.raises(SpecParseError):
        load_spec(spec_file("{not json"))


def test_decide_dense_exit_zero(capsys, spec_file):
    code, report, err = _run(capsys, "decide", "--spec", spec_file(LW_ONES))
    assert code == 0
    assert report["verdict"] == "Dense"
    assert "Dense" in err


def test_decide_not_dense_emits_witness(capsys, spec_file, tmp_path):
    out = tmp_path / "ray.json"
    code, report, _ = _run(capsys, "decide", "--spec", spec_file(LW_POW2), "--emit-witness", str(out))
    assert code == 1
    assert report["verdict"] == "NotDense"
    witness = json.loads(out.read_text())
    assert set(witness) >= {"ray", "partial_lengths", "bound"}
    assert witness["ray"][:3] == [1, 2, 3]


def test_decide_numeric_inconclusive(capsys, spec_file):
    code, report, _ = _run(capsys, "decide", "--spec", spec_file(LW_HARMONIC), "--mode", "numeric",
                           "--depth", "500")
    assert code == 2
    assert report["verdict"] == "Inconclusive"


def test_threshold_flag(capsys, spec_file):
    code, report, _ = _run(capsys, "decide", "--spec", spec_file(LW_ONES), "--mode", "numeric",
                           "--depth", "100", "--threshold", "10")
    assert code == 0
    assert report["certificate"]["threshold_crossed_at"] == 11


def test_roundtrip_report(capsys, spec_file):
    code, report, _ = _run(capsys, "roundtrip", "--spec", spec_file(LW_POW2), "--depth", "30")
    assert code == 0
    assert report["trace"] == 1
    assert report["defect"] <= 1e-10
    assert report["roundtrip_identity"] is True


def test_witness_command(capsys, spec_file):
    code, report, _ = _run(capsys, "witness", "--spec", spec_file(LW_POW2))
    assert code == 1
    assert report["cross_validation"]["trace"] == 1.0
    code, report, _ = _run(capsys, "witness", "--spec", spec_file(LW_ONES))
    assert code == 0 and "cross_validation" not in report


def test_validate(capsys, spec_file):
    code, report, _ = _run(capsys, "validate", "--spec", spec_file(EXPLICIT))
    assert code == 0 and report["ok"] and report["biorthogonality_defect"] == 0
    broken = {**EXPLICIT, "fstar_entries": [[2, 1, 2]]}
    code, report, _ = _run(capsys, "validate", "--spec", spec_file(broken))
    assert code == 1
    assert {v["condition"] for v in report["violations"]} == {"C4"}


def test_validate_zero_weight(capsys, spec_file):
    code, report, _ = _run(capsys, "validate", "--spec",
                           spec_file({**LW_ONES, "prefix": [1, 2, 0, 4]}))
    assert code > 2
    assert report["error"] == "ZeroWeight"


@pytest.mark.parametrize("payload, code", [
    ("{oops", 3),
    ({"family": "toeplitz"}, 4),
])
def test_error_codes_distinct(capsys, spec_file, payload, code):
    got, report, _ = _run(capsys, "validate", "--spec", spec_file(payload))
    assert got == code


def test_missing_file_code(capsys, tmp_path):
    code, report, _ = _run(capsys, "decide", "--spec", str(tmp_path / "nope.json"))
    assert code == 5
    assert report["error"] == "FileNotFoundError"


def test_build_graph(capsys, spec_file):
    code, report, _ = _run(capsys, "build-graph", "--spec", spec_file(LW_ONES), "--depth", "4")
    assert code == 0
    assert report["graph"]["edges"] == [[1, 2, 1], [3, 2, -1], [3, 4, 1]]
    assert report["network"]["sink"] == 5


def test_oracle_command(capsys, spec_file):
    code, report, _ = _run(capsys, "oracle", "--spec", spec_file(LW_ONES), "--depth", "10",
                           "--seed", "4")
    assert code == 0 and report["mismatches"] == []
    assert report["cycles_after"] == 0
    code, report, _ = _run(capsys, "oracle", "--spec", spec_file(LW_ONES), "--depth", "40")
    assert code == 7


def test_oracle_trivial_single_edge(capsys, spec_file):
    one_edge = {"family": "explicit", "side": ["L", "R"], "f_entries": [[1, 2, 3]], "bandwidth": 1}
    code, report, _ = _run(capsys, "oracle", "--spec", spec_file(one_edge))
    assert code == 0
    assert report["distances"] == {"0": 0, "1": 1, "2": "4/3", "3": "7/3"}


def test_reports_are_deterministic(spec_file):
    path = spec_file(LW_POW2)
    cmd = [sys.executable, "-m", "rankone.cli", "oracle", "--spec", path, "--depth", "12",
           "--seed", "9"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    assert first.returncode == 0
    assert first.stdout == second.stdout


def test_run_config_checks():
    with pytest.raises(ValueError):
        RunConfig("decide", "x.json", depth=1)
    with pytest.raises(ValueError):
        RunConfig("decide", "x.json", tolerance=0)
    with pytest.raises(ValueError):
        RunConfig("plot", "x.json")


def test_run_returns_report(spec_file):
    code, report, summary = run(RunConfig("decide", spec_file(LW_ONES), depth=50, mode="numeric"))
    assert code == 2 and report["verdict"] == "Inconclusive"
