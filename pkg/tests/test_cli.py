"""Command-line surface: flows, exit codes, cache, and config handling."""

import json
import os

import pytest

from regorb import cli, repkit


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    """Keep tests away from any real ./regorb.json or REGORB_CONFIG."""
    monkeypatch.delenv("REGORB_CONFIG", raising=False)
    monkeypatch.chdir(tmp_path)
    yield


# -------------------------------------------------------------------- dims


def test_dims_text_and_json(capsys):
    code, out, _ = run(capsys, "dims", "--n", "5", "--p", "2")
    assert code == 0
    assert "(3, 2): dim D = 4" in out
    code, out, _ = run(capsys, "dims", "--n", "5", "--p", "2", "--json")
    assert code == 0
    payload = json.loads(out)
    rows = {tuple(r["mu"]): r for r in payload["rows"]}
    assert rows[(3, 2)]["dim"] == 4
    assert set(rows) == {(5,), (4, 1), (3, 2)}


def test_dims_usage_errors(capsys):
    assert run(capsys, "dims", "--n", "5")[0] == cli.EXIT_USAGE
    assert run(capsys, "dims", "--n", "5", "--p", "4")[0] == cli.EXIT_USAGE


# ----------------------------------------------------------------- verdict


def test_verdict_pigeonhole(capsys):
    code, out, _ = run(capsys, "verdict", "--n", "5", "--p", "2", "--mu", "3,2")
    assert code == 0
    assert "NoRegular" in out
    assert "Pigeonhole" in out


def test_verdict_json_structure(capsys):
    code, out, _ = run(capsys, "verdict", "--n", "5", "--p", "3",
                       "--mu", "3,1,1", "--json")
    assert code == 0
    record = json.loads(out)
    assert record["outcome"] == "Regular"
    assert record["pieces"][0]["dim"] == 6
    v = record["pieces"][0]["verdict"]
    assert v["orbit_size"] == 120
    assert len(record["job_hash"]) == 64
    assert "basis_note" in record and "timestamp" in record


def test_verdict_scalar_flip(capsys):
    code, out, _ = run(capsys, "verdict", "--n", "5", "--p", "3",
                       "--mu", "3,1,1", "--scalars", "2")
    assert code == 0
    assert "NoRegular" in out


def test_verdict_an_split_pieces(capsys):
    code, out, _ = run(capsys, "verdict", "--n", "7", "--p", "2",
                       "--mu", "4,3", "--group", "an", "--json")
    assert code == 0
    record = json.loads(out)
    assert len(record["pieces"]) == 2
    assert {p["dim"] for p in record["pieces"]} == {4}
    assert record["outcome"] == "NoRegular"


def test_verdict_usage_errors(capsys):
    # mu does not sum to n
    assert run(capsys, "verdict", "--n", "6", "--p", "2",
               "--mu", "3,2")[0] == cli.EXIT_USAGE
    # missing mu for dmu module
    assert run(capsys, "verdict", "--n", "5", "--p", "2")[0] == cli.EXIT_USAGE
    # scalars must divide p - 1
    assert run(capsys, "verdict", "--n", "5", "--p", "3", "--mu", "3,1,1",
               "--scalars", "3")[0] == cli.EXIT_USAGE
    # mu not a partition: rejected inside argparse's type hook
    with pytest.raises(SystemExit) as err:
        cli.main(["verdict", "--n", "5", "--p", "2", "--mu", "2,3"])
    assert err.value.code == 2
    # bad group name
    assert run(capsys, "verdict", "--n", "5", "--p", "2", "--mu", "3,2",
               "--group", "gl")[0] == cli.EXIT_USAGE


# ------------------------------------------------------------------- cache


def test_cache_append_and_hit(capsys, tmp_path):
    cache = str(tmp_path / "cache.jsonl")
    argv = ("verdict", "--n", "5", "--p", "2", "--mu", "3,2", "--cache", cache)
    code, out1, _ = run(capsys, *argv)
    assert code == 0 and "(cached)" not in out1
    with open(cache) as fh:
        lines1 = [json.loads(l) for l in fh.read().splitlines()]
    assert len(lines1) == 1

    code, out2, _ = run(capsys, *argv)
    assert code == 0 and "(cached)" in out2
    with open(cache) as fh:
        lines2 = fh.read().splitlines()
    assert len(lines2) == 1  # hit appends nothing

    # a different seed is a different job: separate record
    code, _, _ = run(capsys, *argv, "--seed", "99")
    with open(cache) as fh:
        assert len(fh.read().splitlines()) == 2


def test_cache_reprints_stored_record(capsys, tmp_path):
    cache = str(tmp_path / "cache.jsonl")
    argv = ("verdict", "--n", "5", "--p", "3", "--mu", "3,1,1",
            "--cache", cache, "--json")
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert json.loads(out1) == json.loads(out2)  # timestamp included: verbatim


def test_cache_corrupt_line_is_parse_error(capsys, tmp_path):
    cache = tmp_path / "cache.jsonl"
    cache.write_text("{not json}\n")
    code, _, err = run(capsys, "verdict", "--n", "5", "--p", "2",
                       "--mu", "3,2", "--cache", str(cache))
    assert code == cli.EXIT_PARSE
    assert "parse error" in err


def test_job_hash_stability():
    spec = {"n": 5, "p": 2, "module": {"kind": "dmu", "mu": [3, 2]},
            "group": "sn", "sign": False, "scalars": 1,
            "budgets": {"max_vspace": 1, "max_orbit": 1, "huge": False},
            "seed": 0}
    h1 = cli.job_hash(spec)
    h2 = cli.job_hash(dict(reversed(list(spec.items()))))
    assert h1 == h2  # key order is canonicalized
    spec2 = dict(spec, seed=1)
    assert cli.job_hash(spec2) != h1


# ------------------------------------------------------------------ config


def test_config_via_env(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "conf.json"
    cfg.write_text(json.dumps({"seed": 1234}))
    monkeypatch.setenv("REGORB_CONFIG", str(cfg))
    code, out, _ = run(capsys, "verdict", "--n", "5", "--p", "2",
                       "--mu", "3,2", "--json")
    assert code == 0
    assert json.loads(out)["job"]["seed"] == 1234


def test_config_default_file_in_cwd(capsys, tmp_path):
    (tmp_path / "regorb.json").write_text(json.dumps({"seed": 777}))
    code, out, _ = run(capsys, "verdict", "--n", "5", "--p", "2",
                       "--mu", "3,2", "--json")
    assert code == 0
    assert json.loads(out)["job"]["seed"] == 777


def test_config_flag_overrides_file(capsys, tmp_path):
    (tmp_path / "regorb.json").write_text(json.dumps({"seed": 777}))
    code, out, _ = run(capsys, "verdict", "--n", "5", "--p", "2",
                       "--mu", "3,2", "--json", "--seed", "5")
    assert code == 0
    assert json.loads(out)["job"]["seed"] == 5


def test_config_missing_env_target_is_usage_error(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("REGORB_CONFIG", str(tmp_path / "absent.json"))
    assert run(capsys, "bounds", "--n", "9", "--p", "3")[0] == cli.EXIT_USAGE


def test_config_bad_json_is_parse_error(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "conf.json"
    cfg.write_text("{broken")
    monkeypatch.setenv("REGORB_CONFIG", str(cfg))
    assert run(capsys, "bounds", "--n", "9", "--p", "3")[0] == cli.EXIT_PARSE


def test_config_unknown_key_is_parse_error(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "conf.json"
    cfg.write_text(json.dumps({"max_space": 10}))
    monkeypatch.setenv("REGORB_CONFIG", str(cfg))
    assert run(capsys, "bounds", "--n", "9", "--p", "3")[0] == cli.EXIT_PARSE


# ---------------------------------------------------------------- external


def test_external_module_roundtrip(capsys, tmp_path):
    path = tmp_path / "cover.rep"
    repkit.save_rep(repkit.load_builtin_cover(), str(path))
    code, out, _ = run(capsys, "verdict", "--n", "5", "--p", "5",
                       "--module", f"ext:{path}", "--group", "ext", "--json")
    assert code == 0
    record = json.loads(out)
    assert record["outcome"] == "NoRegular"
    assert record["job"]["module"]["kind"] == "external"
    assert len(record["job"]["module"]["sha256"]) == 64


def test_external_cache_key_tracks_content(capsys, tmp_path):
    path = tmp_path / "cover.rep"
    repkit.save_rep(repkit.load_builtin_cover(), str(path))
    cache = str(tmp_path / "c.jsonl")
    argv = ("verdict", "--n", "5", "--p", "5", "--module", f"ext:{path}",
            "--group", "ext", "--cache", cache)
    run(capsys, *argv)
    _, out, _ = run(capsys, *argv)
    assert "(cached)" in out
    # touching the content invalidates the key even at the same path
    path.write_text(path.read_text() + "\n")
    _, out, _ = run(capsys, *argv)
    assert "(cached)" not in out


def test_external_module_errors(capsys, tmp_path):
    missing = tmp_path / "nope.rep"
    assert run(capsys, "verdict", "--n", "5", "--p", "5",
               "--module", f"ext:{missing}", "--group", "ext")[0] == cli.EXIT_USAGE
    bad = tmp_path / "bad.rep"
    bad.write_text("regorb-rep 1\np 4 dim 2 gens 0\n")
    assert run(capsys, "verdict", "--n", "5", "--p", "5",
               "--module", f"ext:{bad}", "--group", "ext")[0] == cli.EXIT_PARSE
    # group mismatch both ways
    path = tmp_path / "cover.rep"
    repkit.save_rep(repkit.load_builtin_cover(), str(path))
    assert run(capsys, "verdict", "--n", "5", "--p", "5",
               "--module", f"ext:{path}", "--group", "sn")[0] == cli.EXIT_USAGE
    assert run(capsys, "verdict", "--n", "5", "--p", "5", "--mu", "3,1,1",
               "--group", "ext")[0] == cli.EXIT_USAGE


# ------------------------------------------------------------------ bounds


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "20", "--p", "2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["g_floor"] == 620
    code, out, _ = run(capsys, "bounds", "--n", "8", "--p", "3")
    assert code == 0
    assert "delta_2an = 8" in out


# -------------------------------------------------------------- graph-cert


def test_graph_cert(capsys):
    code, out, _ = run(capsys, "graph-cert", "--n", "13", "--p", "3")
    assert code == 0
    assert "PASSED" in out
    code, out, _ = run(capsys, "graph-cert", "--n", "13", "--p", "5",
                       "--shape", "hook", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert payload["report"]["aut_trivial"] is True


def test_graph_cert_rejects_excluded_cell(capsys):
    assert run(capsys, "graph-cert", "--n", "12", "--p", "2")[0] == cli.EXIT_USAGE
    assert run(capsys, "graph-cert", "--n", "11", "--p", "3")[0] == cli.EXIT_USAGE


# --------------------------------------------------------------- base-size


def test_base_size(capsys):
    code, out, _ = run(capsys, "base-size", "--n", "5", "--p", "3",
                       "--mu", "3,1,1", "--group", "an", "--json")
    assert code == 0
    payload = json.loads(out)
    piece = payload["pieces"][0]
    assert piece["t"] == 1
    assert piece["affine_base_size"] == 2
    assert piece["certified_minimal"] is True


def test_base_size_budget_exceeded(capsys):
    # dim 26 module: |V| = 2^26 exceeds the per-vector mask budget
    code, _, err = run(capsys, "base-size", "--n", "9", "--p", "2",
                       "--mu", "7,2")
    assert code == cli.EXIT_BUDGET
    assert "budget" in err


# ----------------------------------------------------------- verify-tables


def test_verify_tables_small(capsys):
    code, out, _ = run(capsys, "verify-tables", "--max-n", "5")
    assert code == 0
    assert "all verified" in out
    assert "skipped (external data)" in out
    assert "MISMATCH" not in out


def test_verify_tables_json(capsys):
    code, out, _ = run(capsys, "verify-tables", "--max-n", "5", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert payload["tables_version"]
    assert any(r["skipped"] for r in payload["results"])


# ------------------------------------------------------------------- misc


def test_missing_subcommand_is_argparse_exit_2():
    with pytest.raises(SystemExit) as err:
        cli.main([])
    assert err.value.code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["--version"])
    assert err.value.code == 0
