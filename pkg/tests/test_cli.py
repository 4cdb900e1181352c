import json
import os

import numpy as np
import pytest

from precycles import cli, perm, recognize


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_density_pre_cycle(capsys):
    code, out, _ = run(["density", "--n", "5", "--p", "2"], capsys)
    assert code == 0
    assert "1/4" in out


def test_density_window_json(capsys):
    code, out, _ = run(
        ["density", "--n", "5", "--window", "1", "2", "--format", "json"],
        capsys)
    assert code == 0
    blob = json.loads(out)
    assert blob["value"] == "1/4"
    assert blob["hit"] == "3/8"
    assert blob["repeat"] == "1/8"
    assert blob["primes"] == [2]


def test_density_coprime(capsys):
    code, out, _ = run(
        ["density", "--coprime", "3", "2", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["value"] == "1/2"


def test_density_requires_one_mode(capsys):
    code, _, err = run(["density", "--n", "5"], capsys)
    assert code == 2
    assert "choose exactly one" in err


def test_avoid(capsys):
    code, out, _ = run(["avoid", "--n", "4", "--lengths", "1"], capsys)
    assert code == 0
    assert "3/8" in out
    assert "certified" in out


def test_avoid_json_round_trip(capsys):
    code, out, _ = run(
        ["avoid", "--n", "6", "--lengths", "1,2", "--group", "alt",
         "--format", "json"], capsys)
    assert code == 0
    blob = json.loads(out)
    # canonical form: dumping again reproduces the output byte for byte
    assert json.dumps(blob, sort_keys=True) + "\n" == out
    assert blob["certified"] is True


def test_bounds_sample_count(capsys):
    code, out, _ = run(
        ["bounds", "--sample-count", "1/100", "1/19"], capsys)
    assert code == 0
    assert "86" in out
    code, out, _ = run(
        ["bounds", "--sample-count", "0.01", "1/19", "--format", "json"],
        capsys)
    assert code == 0
    assert json.loads(out)["draws"] == 86


def test_bounds_headline(capsys):
    code, out, _ = run(
        ["bounds", "--headline", "1000000", "1", "--format", "json"], capsys)
    assert code == 0
    blob = json.loads(out)
    assert blob["asserted"] is True
    assert blob["simple"] < 1


def test_bounds_window(capsys):
    code, out, _ = run(
        ["bounds", "--window-bound", "1000000", "13.8", "2.6", "1",
         "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["value"] < 1


def test_bounds_prime_sums(capsys):
    code, out, _ = run(
        ["bounds", "--prime-sums", "12", "12", "--format", "json"], capsys)
    assert code == 0
    blob = json.loads(out)
    assert blob["recip_sq_upper"] == pytest.approx(0.0204573, abs=1e-6)


def test_bounds_usage_error(capsys):
    code, _, err = run(["bounds"], capsys)
    assert code == 2
    assert "choose exactly one" in err


def test_estimate_deterministic(capsys):
    argv = ["estimate", "--n", "6", "--event", "avoids", "--lengths", "1",
            "--trials", "2000", "--seed", "9", "--format", "json"]
    code1, out1, _ = run(argv, capsys)
    code2, out2, _ = run(argv, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["trials"] == 2000


def test_estimate_compare_exact(capsys):
    code, out, _ = run(
        ["estimate", "--n", "5", "--event", "window", "--window", "1", "2",
         "--trials", "20000", "--seed", "1", "--compare-exact",
         "--format", "json"], capsys)
    assert code == 0
    blob = json.loads(out)
    assert blob["exact"] == "1/4"
    assert blob["within_interval"] is True


def test_estimate_missing_window(capsys):
    code, _, err = run(
        ["estimate", "--n", "5", "--event", "window"], capsys)
    assert code == 2
    assert "--window is required" in err


def test_recognize_uniform(capsys):
    code, out, _ = run(
        ["recognize", "--source", "sym", "--n", "20", "--seed", "42",
         "--format", "json"], capsys)
    assert code == 0
    blob = json.loads(out)
    assert blob["status"] == "found"
    assert blob["epsilon"] == "1/100"


def test_recognize_replay(tmp_path, capsys):
    rng = np.random.default_rng(2)
    elements = [perm.sample_uniform(15, "any", rng) for _ in range(200)]
    path = tmp_path / "draws.txt"
    recognize.save_element_list(elements, path)
    argv = ["recognize", "--source", "replay", "--file", str(path),
            "--format", "json"]
    code1, out1, _ = run(argv, capsys)
    code2, out2, _ = run(argv, capsys)
    assert code1 == code2 == 0
    assert out1 == out2


def test_recognize_small_degree_is_usage_error(capsys):
    code, _, err = run(
        ["recognize", "--source", "sym", "--n", "6"], capsys)
    assert code == 2
    assert "degree >= 7" in err


def test_verify_primes_small(capsys):
    code, out, _ = run(
        ["verify-primes", "--sieve-limit", "20000", "--grid-max", "200",
         "--pairs", "20", "--format", "json"], capsys)
    assert code == 0
    blob = json.loads(out)
    assert blob["ok"] is True
    assert all(s["holds"] for s in blob["sweeps"])


def test_verify_r2_small(capsys):
    code, out, _ = run(
        ["verify-r2", "--max", "2000", "--exact-upto", "12",
         "--format", "json"], capsys)
    assert code == 0
    blob = json.loads(out)
    assert blob["holds_from_11"] is True
    assert [e["n"] for e in blob["exceptions"]] == [5, 6, 7]
    values = {e["n"]: e["value"] for e in blob["exact_proportions"]}
    assert values[5] == "1/4"


def test_sieve_cache_env(tmp_path, capsys, monkeypatch):
    cache = tmp_path / "sieve.bin"
    monkeypatch.setenv(cli.SIEVE_CACHE_ENV, str(cache))
    argv = ["verify-primes", "--sieve-limit", "5000", "--grid-max", "60",
            "--pairs", "5"]
    code, _, _ = run(argv, capsys)
    assert code == 0
    assert cache.exists()
    size = cache.stat().st_size
    code2, _, _ = run(argv, capsys)
    assert code2 == 0
    assert cache.stat().st_size == size


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as info:
        cli.main(["avoid", "--n", "4"])
    assert info.value.code == 2


def test_csv_format(capsys):
    code, out, _ = run(
        ["density", "--n", "5", "--p", "2", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    assert "value" in lines[0]
    assert "1/4" in lines[1]


def test_selftest_single_fast_criterion(capsys):
    code, out, _ = run(["selftest", "--only", "2"], capsys)
    assert code == 0
    assert "PASS criterion 2" in out
