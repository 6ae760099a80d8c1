import json

import pytest

from monodromy import cli


def run(argv):
    import io, contextlib

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


def test_analyze():
    code, out = run(["analyze", "-p", "5", "-l", "3"])
    assert code == 0
    assert "unitary" in out and "q = 5" in out


def test_matrices():
    code, out = run(["matrices", "-p", "5", "-l", "3", "-k", "1,1,1,1"])
    assert code == 0
    assert "sigma_2^2" in out


def test_verify_match_exit_zero(tmp_path):
    out_file = tmp_path / "report.json"
    code, _ = run([
        "verify", "-p", "5", "-l", "3", "-k", "1,1,1,1",
        "--checks", "splitting,form", "--out", str(out_file),
    ])
    assert code == 0
    records = json.loads(out_file.read_text())
    assert [r["name"] for r in records] == ["splitting", "form"]
    assert all(r["match"] for r in records)
    for r in records:
        assert set(r) == {
            "name", "parameters", "expected", "computed", "match",
            "runtime_ms", "findings",
        }
        assert "provenance" in r["expected"]


def test_verify_runs_checks_in_dependency_order(tmp_path):
    out_file = tmp_path / "r.json"
    code, _ = run([
        "verify", "-p", "5", "-l", "3", "-k", "1,1,1,1",
        "--checks", "form,splitting,relations", "--out", str(out_file),
    ])
    assert code == 0
    names = [r["name"] for r in json.loads(out_file.read_text())]
    assert names == ["splitting", "relations", "form"]


def test_empty_checks_empty_report():
    code, out = run(["verify", "-p", "5", "-l", "3", "-k", "1,1,1,1",
                     "--checks", ""])
    assert code == 0
    assert json.loads(out) == []


def test_big_integers_are_decimal_strings():
    code, out = run([
        "verify", "-p", "5", "-l", "3", "-k", "1,1,1,1",
        "--checks", "image",
    ])
    assert code == 0
    rec = json.loads(out)[0]
    assert rec["expected"]["value"]["order"] == "1134000"
    assert rec["computed"]["order"] == "1134000"


def test_byte_identical_reports():
    argv = ["verify", "-p", "5", "-l", "3", "-k", "1,2,1,2",
            "--checks", "splitting,relations,form", "--seed", "42"]
    _, first = run(argv)
    _, second = run(argv)
    assert first == second


def test_tsv_format():
    code, out = run([
        "verify", "-p", "5", "-l", "3", "-k", "1,1,1,1",
        "--checks", "splitting", "--format", "tsv",
    ])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].split("\t") == [
        "name", "parameters", "expected", "computed", "match",
        "runtime_ms", "findings",
    ]
    assert len(lines) == 2


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("p=5\nl=3\nk=1,1,1,1\nchecks=form\nseed=7\n",
                   encoding="utf-8")
    code, out = run(["verify", "--config", str(cfg)])
    assert code == 0
    records = json.loads(out)
    assert [r["name"] for r in records] == ["form"]
    assert records[0]["parameters"]["seed"] == 7
    # flags override the file
    code, out = run(["verify", "--config", str(cfg), "--checks", "splitting",
                     "--seed", "9"])
    records = json.loads(out)
    assert [r["name"] for r in records] == ["splitting"]
    assert records[0]["parameters"]["seed"] == 9


def test_operational_error_exit_two():
    code, _ = run(["verify", "-p", "4", "-l", "3", "-k", "1,1",
                   "--checks", "splitting"])
    assert code == 2
    code, _ = run(["verify", "-p", "5", "-l", "3", "-k", "1,5,1",
                   "--checks", "splitting"])
    assert code == 2


def test_overflow_is_skipped_not_an_error():
    # F_{5^6} exceeds the table cap; the check is skipped, exit stays 0
    code, out = run(["verify", "-p", "5", "-l", "7", "-k", "1,1,1",
                     "--checks", "form"])
    assert code == 0
    rec = json.loads(out)[0]
    assert rec["match"] is True
    assert any("skipped: overflow" in f for f in rec["findings"])


def test_order_cap_skip():
    code, out = run(["verify", "-p", "5", "-l", "3", "-k", "1,1,1,1,1",
                     "--checks", "image", "--order-cap", "1000000"])
    assert code == 0
    rec = json.loads(out)[0]
    assert any("skipped: overflow" in f for f in rec["findings"])


def test_mismatch_findings_carry_repro_line(monkeypatch):
    # force a mismatch by sabotaging the expected-order computation
    from monodromy import unitary

    real = unitary.expected_image

    def wrong(sd, kvec):
        exp = real(sd, kvec)
        import dataclasses

        return dataclasses.replace(exp, order=exp.order + 1)

    monkeypatch.setattr(cli.unitary, "expected_image", wrong)
    code, out = run(["verify", "-p", "5", "-l", "3", "-k", "1,1,1,1",
                     "--checks", "image"])
    assert code == 1
    rec = json.loads(out)[0]
    assert not rec["match"]
    assert any(f.startswith("reproduce: monodromy verify") for f in
               rec["findings"])


def test_scan_isolation_and_grid():
    code, out = run(["scan", "--p-max", "6", "--l-max", "6", "--n-max", "2",
                     "--order-cap", "10000", "--format", "json"])
    assert code == 0
    records = json.loads(out)
    pairs = {(r["parameters"]["p"], r["parameters"]["l"]) for r in records}
    assert pairs == {(3, 5), (5, 3)}
    assert all(r["match"] for r in records)
