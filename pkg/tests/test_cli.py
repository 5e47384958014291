import json

import pytest

from tlfusion.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, TSV_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fuse_finite_gives_three_spins(capsys):
    code, out, _ = run(capsys, "fuse", "finite", "--n1", "2", "--j1", "1", "--n2", "2", "--j2", "1")
    assert code == EXIT_OK
    rec = json.loads(out)
    assert rec["result"] == "W_0 + W_1 + W_2" and rec["dim"] == 6


def test_scan_has_two_resonance_lines(capsys):
    code, out, _ = run(capsys, "fuse", "affine", "--n1", "1", "--j1", "1/2", "--n2", "1", "--j2", "1/2",
                       "--scan", "--random", "2")
    assert code == EXIT_OK
    recs = [json.loads(line) for line in out.splitlines()]
    hits = sorted(r["relation"] for r in recs if r["dim"])
    assert hits == ["z2=-q*z1", "z2=z1^-1"]


def test_both_orders_shows_noncommutativity(capsys):
    code, out, _ = run(capsys, "fuse", "affine-hecke", "--n1", "1", "--j1", "1/2", "--n2", "1", "--j2", "1/2",
                       "--z2=-q*z1", "--both-orders")
    dims = [json.loads(line)["dim"] for line in out.splitlines()]
    assert code == EXIT_OK and dims == [1, 0]


def test_inconclusive_exit_code(capsys):
    code, out, _ = run(capsys, "fuse", "affine", "--n1", "1", "--j1", "1/2", "--n2", "2", "--j2", "1",
                       "--z2=-i*q*s*z1", "--radius", "1")
    assert code == EXIT_INCONCLUSIVE
    assert json.loads(out)["status"] == "inconclusive"


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "tl", "--max-n", "4")
    assert code == EXIT_OK
    assert json.loads(out.splitlines()[-1])["check"] == "summary"
    code, _, _ = run(capsys, "verify", "embeddings", "--pairs", "1,1", "2,1")
    assert code == EXIT_OK


def test_verify_failure_exit_code(capsys, monkeypatch):
    from tlfusion import suites
    from tlfusion.report import Report

    def broken(field, max_n):
        rep = Report("finite relations")
        rep.add("deliberately false", False)
        return rep
    monkeypatch.setattr(suites, "suite_tl", broken)
    code, _, _ = run(capsys, "verify", "tl")
    assert code == EXIT_FAIL


def test_tsv_header_is_versioned(capsys):
    code, out, _ = run(capsys, "dims", "--max-n", "3", "--format", "tsv", "--root-p", "3")
    lines = out.splitlines()
    assert lines[0] == "# tlfusion-tsv v1 dims"
    assert lines[1].split("\t") == TSV_COLUMNS["dims"]
    assert len(lines) == 2 + 5


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "run.ini"
    bad.write_text("[field]\nbackend = modp\nseed = many\n")
    code, _, err = run(capsys, "dims", "--config", str(bad))
    assert code == EXIT_CONFIG and f"{bad}:3" in err
    code, _, _ = run(capsys, "fuse", "affine", "--n1", "1", "--j1", "1/2", "--n2", "1", "--j2", "1/2")
    assert code == EXIT_CONFIG  # neither --z2 nor --scan
    with pytest.raises(SystemExit) as exc:
        main(["fuse", "finite", "--n1", "x"])
    assert exc.value.code == EXIT_CONFIG


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[run]\nformat = tsv\n[params]\nz1 = 3\n")
    code, out, _ = run(capsys, "fuse", "affine", "--config", str(cfg), "--format", "json", "--n1", "1",
                       "--j1", "1/2", "--n2", "1", "--j2", "1/2", "--z2=-q*z1")
    rec = json.loads(out)
    assert rec["z1"].startswith("3 ")


def test_cache_hit_matches_cold_run(capsys, tmp_path):
    args = ["fuse", "affine", "--n1", "1", "--j1", "1/2", "--n2", "1", "--j2", "1/2", "--scan", "--random", "2",
            "--both-orders"]
    _, cold, _ = run(capsys, *args, "--no-cache")
    _, first, _ = run(capsys, *args, "--cache-dir", str(tmp_path))
    _, hit, _ = run(capsys, *args, "--cache-dir", str(tmp_path))
    assert cold == first == hit
    assert any(tmp_path.rglob("*.json"))


def test_seed_changes_output(capsys):
    base = ["fuse", "affine", "--n1", "1", "--j1", "1/2", "--n2", "1", "--j2", "1/2", "--z2=-q*z1"]
    _, a, _ = run(capsys, *base, "--seed", "0")
    _, b, _ = run(capsys, *base, "--seed", "0")
    _, c, _ = run(capsys, *base, "--seed", "1")
    assert a == b != c


def test_table_aggregates(capsys, tmp_path):
    _, out, _ = run(capsys, "fuse", "affine", "--n1", "1", "--j1", "1/2", "--n2", "1", "--j2", "1/2", "--scan",
                    "--random", "1")
    src = tmp_path / "scan.jsonl"
    src.write_text(out)
    code, tsv, _ = run(capsys, "table", str(src), "--format", "tsv")
    lines = tsv.splitlines()
    assert code == EXIT_OK and lines[0] == "# tlfusion-tsv v1 table"
    rows = [dict(zip(lines[1].split("\t"), ln.split("\t"))) for ln in lines[2:]]
    assert len(rows) == len(out.splitlines())
    assert {r["relation"] for r in rows if r["dim"] != "0"} == {"z2=-q*z1", "z2=z1^-1"}
