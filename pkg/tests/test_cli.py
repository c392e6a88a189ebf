from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from postulab import cli
from postulab.cli import (EXIT_INCONCLUSIVE, EXIT_OK, EXIT_REFUTED, EXIT_USAGE, ResultCache, RunConfig, dispatch,
                          emit_report, item, run_batch, suite_items)
from postulab.postulation import INCONCLUSIVE, REFUTED, VERIFIED

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_params(capsys):
    code, out, _ = run(capsys, "params", "--d", "4")
    assert code == EXIT_OK and out.strip() == "r=7 q=0 m=2 s=1 t=3"
    code, out, _ = run(capsys, "params", "--d", "3", "--json")
    assert json.loads(out) == {"d": 3, "r": 5, "q": 0, "m": 2, "s": 0, "t": 3}


def test_limit_cone(capsys):
    code, out, _ = run(capsys, "limit", "cone", "--s", "3")
    rec = json.loads(out)
    assert code == EXIT_OK
    assert rec["limit_equal"] and rec["trace_equal"] and rec["residual_equal"]
    assert rec["config"]["prime"] == 32003


def test_h0_three_lines(capsys):
    for backend in ("matrix", "groebner"):
        code, out, _ = run(capsys, "h0", "--scheme", str(DATA / "three-lines.json"), "--degree", "2",
                           "--backend", backend)
        assert code == EXIT_OK and out.strip() == "1"


def test_h0_malformed_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ambient": 3,\n "components": [\n')
    code, _, err = run(capsys, "h0", "--scheme", str(bad), "--degree", "2")
    assert code == EXIT_USAGE and "line 3" in err


def test_h0_bad_field(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"ambient": 3, "components": [{"kind": "line", "points": [[1, 0, 0, 0]]}]}))
    code, _, err = run(capsys, "h0", "--scheme", str(bad), "--degree", "2")
    assert code == EXIT_USAGE and "components[0]" in err


def test_h0_resource_limit(capsys):
    code, _, err = run(capsys, "h0", "--scheme", str(DATA / "three-lines.json"), "--degree", "30",
                       "--max-slice", "50")
    assert code == EXIT_INCONCLUSIVE and "resource" in err


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["params"], ["params", "--d", "x"], ["check", "nope", "--d", "3"],
    ["check", "hd", "--d", "4", "--prime", "32004"], ["prove", "--d", "2"], ["suite", "--max-d", "2"],
    ["params", "--dd", "4"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE and "usage error" in err


def test_check_verdicts(capsys):
    code, out, _ = run(capsys, "check", "ah", "--d", "4", "--s", "5", "--cross-check")
    rec = json.loads(out)
    assert code == EXIT_OK and rec["exceptional"] and rec["actual_h0"] == 1
    code, out, _ = run(capsys, "check", "lines", "--d", "2", "--e", "3", "--seed", "4")
    assert code == EXIT_OK and json.loads(out)["seed"] == 4


def test_exit_codes_follow_verdicts(capsys, monkeypatch):
    for verdict, code in [(VERIFIED, EXIT_OK), (REFUTED, EXIT_REFUTED), (INCONCLUSIVE, EXIT_INCONCLUSIVE)]:
        monkeypatch.setattr(cli, "execute", lambda it, v=verdict: {"command": "check", "verdict": v})
        assert run(capsys, "check", "hd", "--d", "3")[0] == code


def test_prove_writes_certificate(capsys, tmp_path):
    out = tmp_path / "cert.json"
    code, text, _ = run(capsys, "prove", "--d", "4", "--out", str(out))
    assert code == EXIT_OK and "verified" in text
    data = json.loads(out.read_text())
    assert data["d"] == 4 and data["root"]["statement"] == "H_4"


def test_help_documents_verdicts(capsys):
    with pytest.raises(SystemExit) as exc:
        dispatch(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for word in ("verified", "refuted", "inconclusive", "64"):
        assert word in out


# ---- batches ----

def test_empty_batch(tmp_path):
    cfg = RunConfig()
    records = run_batch([], ResultCache(None))
    out = tmp_path / "report.jsonl"
    emit_report(records, out, cfg)
    assert records == [] and out.read_text() == ""


def test_suite_items_count():
    items = suite_items(6, 3, RunConfig())
    statements = [it for it in items if it.command == "check" and dict(it.params)["kind"] in ("hd", "hprime", "hsecond")]
    assert len(statements) == 3 * 4 * 3
    assert len({it.key for it in items}) == len(items)


def test_cache_short_circuits_and_reruns_identically(tmp_path, monkeypatch):
    cfg = RunConfig()
    items = [item("check", cfg.prime, seed, kind="lines", d=3, e=4) for seed in (0, 1)]
    items.append(item("limit", cfg.prime, 0, s=3, n=3))
    cache_path = tmp_path / "cache.jsonl"
    first = run_batch(items, ResultCache(cache_path))
    r1, r2 = tmp_path / "r1.jsonl", tmp_path / "r2.jsonl"
    emit_report(first, r1, cfg)

    def boom(it):
        raise AssertionError("cache should have answered")

    monkeypatch.setattr(cli, "execute", boom)
    second = run_batch(items, ResultCache(cache_path))
    emit_report(second, r2, cfg)
    assert r1.read_bytes() == r2.read_bytes()
    assert len(r1.read_text().splitlines()) == 3


def test_force_audit_reports_mismatch(tmp_path, monkeypatch):
    cache_path = tmp_path / "cache.jsonl"
    it = item("check", 32003, 0, kind="lines", d=3, e=4)
    run_batch([it], ResultCache(cache_path))
    monkeypatch.setattr(cli, "execute", lambda it: {"command": "check", "params": dict(it.params),
                                                    "verdict": INCONCLUSIVE})
    messages = []
    out = run_batch([it], ResultCache(cache_path), force=True, log=messages.append)
    assert out[0]["verdict"] == INCONCLUSIVE and messages
    assert len(cache_path.read_text().splitlines()) == 2


def test_force_audit_agrees(tmp_path):
    cache_path = tmp_path / "cache.jsonl"
    items = [item("check", 32003, s, kind="hd", d=5) for s in range(2)]
    first = run_batch(items, ResultCache(cache_path))
    messages = []
    again = run_batch(items, ResultCache(cache_path), force=True, log=messages.append)
    assert [r["verdict"] for r in first] == [r["verdict"] for r in again] and not messages


def test_suite_cli_small(tmp_path):
    out, summary = tmp_path / "r.jsonl", tmp_path / "summary.txt"
    argv = [sys.executable, "-m", "postulab.cli", "suite", "--max-d", "4", "--seeds", "1", "--out", str(out),
            "--summary", str(summary), "--cache", str(tmp_path / "c.jsonl"), "--workers", "2"]
    proc = subprocess.run(argv, capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    lines = [json.loads(x) for x in out.read_text().splitlines()]
    assert lines and all(r["verdict"] == VERIFIED for r in lines)
    assert "verified" in summary.read_text()
    keys = [(r["command"], r.get("d", -1), r.get("seed", 0)) for r in lines]
    assert keys == sorted(keys, key=lambda k: (k[0], k[1], k[2]))
