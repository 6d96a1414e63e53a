import csv
import io
import json
import subprocess
import sys

import pytest

from dw2vect.cli import main, parse_group
from dw2vect.cli import UsageError

COMMANDS = [
    ["character-table", "--group", "sym:3"],
    ["circle-basis", "--group", "cyc:2", "--omega", "zn:2:1"],
    ["pants-matrix", "--group", "cyc:3"],
    ["pants-matrix", "--group", "cyc:2", "--omega", "zn:2:1"],
    ["block", "--group", "sym:3", "--block", "(),()", "()", "--provenance"],
    ["surface-dim", "--group", "sym:3", "--genus", "2"],
    ["closed-invariant", "--group", "cyc:2", "--presentation", "cylinder:1"],
    ["validate-cocycle", "--group", "cyc:4", "--omega", "zn:4:3"],
    ["transgress", "--group", "cyc:2", "--omega", "zn:2:1"],
    ["fusion-check", "--group", "sym:3"],
]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv", COMMANDS, ids=[" ".join(a[:3]) for a in COMMANDS])
@pytest.mark.parametrize("fmt", ["table", "csv", "json"])
def test_every_command_succeeds_and_is_deterministic(argv, fmt, capsys):
    code, first, err = run(argv + ["--format", fmt], capsys)
    assert code == 0, err
    assert first
    code, second, _ = run(argv + ["--format", fmt], capsys)
    assert first == second
    if fmt == "json":
        json.loads(first)
    if fmt == "csv":
        body = [line for line in first.splitlines() if not line.startswith("#")]
        rows = list(csv.reader(io.StringIO("\n".join(body))))
        assert len({len(r) for r in rows}) == 1


def test_surface_dim_reports_mednykh_agreement(capsys):
    code, out, _ = run(["surface-dim", "--group", "sym:3", "--genus", "2", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["hom_count"] == 486 and doc["dimension"] == 116
    assert str(doc["agrees"]).lower() == "true"


def test_pants_matrix_json_orientation(capsys):
    code, out, _ = run(["pants-matrix", "--group", "cyc:2", "--format", "json"], capsys)
    doc = json.loads(out)
    assert doc["shape"] == "4x16"
    assert doc["orientation"].startswith("rows = target")


def test_boundary_flag_builds_surface(capsys):
    code, out, _ = run(["pants-matrix", "--group", "cyc:2", "--genus", "0", "--boundary", "3", "--format", "json"],
                       capsys)
    assert code == 0
    assert json.loads(out)["presentation"] == "surface:0:3"
    code, _, err = run(["pants-matrix", "--group", "cyc:2", "--boundary", "3"], capsys)
    assert code == 2


def test_presentation_and_alpha_files(tmp_path, capsys):
    from dw2vect.field_theory import builtin_presentation
    p = tmp_path / "annulus.json"
    p.write_text(builtin_presentation("annulus").to_json())
    code, out, err = run(["pants-matrix", "--group", "cyc:3", "--presentation", str(p), "--format", "json"], capsys)
    assert code == 0, err
    bad = tmp_path / "alpha.json"
    bad.write_text(json.dumps({"degree": 1, "entries": ["1/2"] * 3}))
    code, _, err = run(["pants-matrix", "--group", "cyc:3", "--presentation", str(p), "--omega", "zn:3:1",
                        "--alpha", str(bad)], capsys)
    assert code == 1
    assert "CocycleError" in err


def test_dump_groupoid_writes_json(tmp_path, capsys):
    path = tmp_path / "apex.json"
    code, _, err = run(["pants-matrix", "--group", "cyc:2", "--dump-groupoid", str(path)], capsys)
    assert code == 0, err
    doc = json.loads(path.read_text())
    assert len(doc["objects"]) == 4 and len(doc["morphisms"]) == 8


@pytest.mark.parametrize("argv", [
    ["pants-matrix", "--group", "foo:3"],
    ["block", "--group", "cyc:2"],
    ["character-table"],
    ["no-such-command", "--group", "cyc:2"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert not out
    assert "usage" in err


def test_zero_block_between_unrelated_classes(capsys):
    code, out, _ = run(["block", "--group", "sym:3", "--block", "(12),()", "()", "--format", "json"], capsys)
    assert code == 0
    assert all(v == 0 for row in json.loads(out)["rows"] for v in row[1:])


@pytest.mark.parametrize("argv,kind", [
    (["surface-dim", "--group", "sym:4", "--genus", "2", "--cap", "1000"], "EnumerationCapExceeded"),
    (["validate-cocycle", "--group", "cyc:3", "--omega", "zn:2:1"], ""),
    (["block", "--group", "sym:3", "--block", "(1234),()", "()"], "GroupoidError"),
])
def test_domain_errors_exit_1(argv, kind, capsys):
    code, out, err = run(argv, capsys)
    assert code == 1
    assert err.startswith("dw2vect: ") and kind in err


def test_cap_message_is_actionable(capsys):
    _, _, err = run(["surface-dim", "--group", "sym:4", "--genus", "2", "--cap", "1000"], capsys)
    assert "--cap" in err


def test_group_grammar():
    assert parse_group("cyc:2 x cyc:3").order == 6
    assert parse_group("dih:4").order == 8
    assert parse_group('{"type": "cyclic", "n": 5}').order == 5
    with pytest.raises(UsageError):
        parse_group("cyc:")


def test_seed_accepts_hex(capsys):
    code, a, _ = run(["character-table", "--group", "sym:4", "--seed", "0x10"], capsys)
    code2, b, _ = run(["character-table", "--group", "sym:4", "--seed", "16"], capsys)
    assert code == code2 == 0 and a == b


def test_console_script_matches_module():
    cmd = ["character-table", "--group", "cyc:4", "--format", "csv"]
    a = subprocess.run([sys.executable, "-m", "dw2vect.cli", *cmd], capture_output=True, text=True, check=True)
    b = subprocess.run([sys.executable, "-m", "dw2vect.cli", *cmd], capture_output=True, text=True, check=True)
    assert a.stdout == b.stdout and a.stdout.startswith("# group: Z4")
