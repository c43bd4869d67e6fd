import json

import pytest

from mvsfs.cli import main
from mvsfs.data import bundled_dataset_path

IRIS = str(bundled_dataset_path("iris"))


def run(capsys, *argv, environ=None):
    code = main(list(argv), environ or {})
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return [line.split("\t") for line in text.splitlines() if line and not line.startswith("#")]


def test_gain_toy(capsys, toy_csv):
    code, out, _ = run(capsys, "gain", "--data", str(toy_csv), "--header")
    assert code == 0
    table = rows(out)
    assert table[0] == ["attribute", "unique_values", "id3_gain", "gid3_best_singleton", "mvs_exhaustive"]
    assert table[1] == ["A", "4", "1.4488", "0.9852", "0.9852"]


def test_gain_constant_attribute(capsys, tmp_path):
    p = tmp_path / "const.csv"
    p.write_text("5,a\n5,b\n5,a\n")
    code, out, _ = run(capsys, "gain", "--data", str(p))
    assert code == 0
    assert rows(out)[1] == ["1", "1", "0.0000", "0.0000", "0.0000"]


def test_gain_skips_enumeration_above_max_r(capsys):
    code, out, _ = run(capsys, "gain", "--data", IRIS)
    assert code == 0
    assert all(r[4] == "-" for r in rows(out)[1:])
    code, out, _ = run(capsys, "gain", "--data", IRIS, "--discretize", "freq", "--bins", "5")
    assert all(r[4] != "-" for r in rows(out)[1:])


def test_gain_jsonl(capsys, toy_csv):
    code, out, _ = run(capsys, "gain", "--data", str(toy_csv), "--header", "--format", "jsonl")
    record = json.loads(out.splitlines()[0])
    assert record["mvs_exhaustive"] == "0.9852"


def test_missing_file(capsys):
    code, _, err = run(capsys, "gain", "--data", "/nope/missing.csv")
    assert code == 2
    assert err.startswith("DatasetMissing")


def test_missing_data_flag(capsys):
    code, _, err = run(capsys, "gain")
    assert code == 2
    assert "--data" in err


@pytest.mark.parametrize("extra", [["--ratio", "1.5"], ["--restarts", "0"], ["--seed", "-1"], ["--t0", "0.5"],
                                   ["--bins", "1", "--discretize", "width"]])
def test_bad_configuration(capsys, toy_csv, extra):
    code, _, err = run(capsys, "gain", "--data", str(toy_csv), "--header", *extra)
    assert code == 2
    assert err


def test_malformed_csv(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2,a\n1,b\n")
    code, _, err = run(capsys, "gain", "--data", str(p))
    assert code == 2
    assert err.startswith("MalformedRow")


def test_search_toy(capsys, toy_csv, tmp_path):
    log = tmp_path / "run.log"
    code, out, _ = run(capsys, "search", "--data", str(toy_csv), "--header", "--attribute", "1",
                       "--log", str(log))
    assert code == 0
    summary = dict(rows(out)[1:])
    assert summary["best_gain"] == "0.985228"
    assert summary["subset"] in ("0,1", "2,3")
    assert summary["temperature_levels"] == "66"
    assert summary["attains_optimum"] == "1"
    lines = log.read_text().splitlines()
    assert len(lines) == int(summary["evaluations"]) + 1


def test_search_replay(capsys):
    args = ("search", "--data", IRIS, "--attribute", "3", "--seed", "9")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_search_single_symbol(capsys, tmp_path):
    p = tmp_path / "one.csv"
    p.write_text("1,7,a\n2,7,b\n3,7,a\n")
    code, out, _ = run(capsys, "search", "--data", str(p), "--attribute", "2")
    assert code == 0
    assert dict(rows(out)[1:])["best_gain"] == "0.000000"


def test_search_attribute_out_of_range(capsys, toy_csv):
    code, _, err = run(capsys, "search", "--data", str(toy_csv), "--header", "--attribute", "2")
    assert code == 2
    assert "attribute" in err


def test_rank_iris(capsys):
    code, out, _ = run(capsys, "rank", "--data", IRIS, "--method", "id3")
    assert code == 0
    table = rows(out)
    assert [r[0] for r in table[1:]] == ["1", "2", "3", "4"]
    assert sorted(r[1] for r in table[1:]) == ["1", "2", "3", "4"]
    assert "# method: id3" in out


def test_rank_mvs_has_subsets(capsys):
    code, out, _ = run(capsys, "rank", "--data", IRIS, "--method", "mvs", "--t0", "10")
    assert code == 0
    assert all(r[4] != "-" for r in rows(out)[1:])


def test_reproduce_to_file_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    assert run(capsys, "reproduce", "iris", "--out", str(a))[0] == 0
    assert run(capsys, "reproduce", "iris", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nseed=3\nt0=10\n")
    _, from_file, _ = run(capsys, "reproduce", "iris", "--config", str(cfg))
    assert "# master_seed: 3" in from_file
    _, flag, _ = run(capsys, "reproduce", "iris", "--config", str(cfg), "--seed", "4")
    assert "# master_seed: 4" in flag
    _, env, _ = run(capsys, "reproduce", "iris", "--config", str(cfg), "--seed", "4", environ={"MVS_SEED": "6"})
    assert "# master_seed: 6" in env


def test_bad_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour=blue\n")
    code, _, err = run(capsys, "reproduce", "iris", "--config", str(cfg))
    assert code == 2
    assert "colour" in err


def test_bad_env_seed(capsys):
    code, _, err = run(capsys, "reproduce", "iris", environ={"MVS_SEED": "abc"})
    assert code == 2
    assert "MVS_SEED" in err


def test_samples(capsys, toy_csv):
    code, out, _ = run(capsys, "samples", "--data", str(toy_csv), "--header", "--restarts", "2")
    assert code == 0
    table = rows(out)
    assert table[0][:3] == ["attribute", "restart", "master_seed"]
    assert {r[1] for r in table[1:]} == {"0", "1"}
