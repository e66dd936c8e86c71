import json
import subprocess
import sys
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from satlab import cli
from satlab.family import FamilySequence, SetFamily
from satlab.io import (
    DuplicateSubsetWarning,
    FormatError,
    parse_family,
    parse_sequence,
    serialize_family,
    serialize_sequence,
)
from satlab.lattice import all_bits


def test_parse_examples():
    assert parse_family("n 2\n1\n1,2\n") == SetFamily.from_sets(2, [{1}, {1, 2}])
    assert parse_family("n 2\n{}\n").sets() == [()]
    assert parse_family("# header\nn 3  # ground\n\n2,3\n") == SetFamily.from_sets(3, [{2, 3}])


def test_serialize_is_canonical():
    text = "n 3\n1,2\n3\n{}\n1\n"
    assert serialize_family(parse_family(text)) == "n 3\n{}\n1\n3\n1,2\n"


@pytest.mark.parametrize("bad", ["", "1\n", "n x\n", "n 0\n", "n 2\n3\n", "n 2\n2,1\n", "n 2\na\n", "n 2\n1\n---\n2\n"])
def test_parse_errors(bad):
    with pytest.raises(FormatError):
        parse_family(bad)


def test_duplicate_warns_and_dedupes():
    with pytest.warns(DuplicateSubsetWarning):
        f = parse_family("n 2\n1\n1\n")
    assert f.size() == 1


@given(st.integers(1, 6), st.data())
def test_round_trip(n, data):
    f = SetFamily(n, data.draw(st.integers(0, all_bits(n))))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert parse_family(serialize_family(f)) == f


def test_sequence_format():
    seq = FamilySequence.of(SetFamily.empty(2), SetFamily.power_set(2))
    text = serialize_sequence(seq)
    assert text == "n 2\n---\n{}\n1\n2\n1,2\n"
    assert parse_sequence(text) == seq
    single = parse_sequence("n 1\n1\n", s=3)
    assert single.s == 3
    with pytest.raises(FormatError):
        parse_sequence("n 1\n1\n")
    with pytest.raises(FormatError):
        parse_sequence(text, s=3)


def run(*argv):
    return cli.run([str(a) for a in argv])


@pytest.fixture
def pair_file(tmp_path):
    p = tmp_path / "pair.fam"
    p.write_text("n 1\n1\n---\n1\n")
    return p


def test_cli_search_min_raw():
    res = run("search-min", "--n", 3, "--s", 3, "--mode", "raw", "--format", "json")
    assert res.code == 0
    report = json.loads(res.text)
    assert report["schema"] == 1 and report["result"]["minimum_size"] == 6
    assert "elapsed_ms" not in report


def test_cli_timing_flag():
    res = run("search-min", "--n", 3, "--s", 2, "--format", "json", "--timing")
    assert "elapsed_ms" in json.loads(res.text)


def test_cli_talagrand_fuzz():
    res = run("verify-inequality", "talagrand", "--n", 8, "--seed", 7, "--trials", 200, "--format", "json")
    report = json.loads(res.text)
    assert res.code == 0 and report["checks"][0]["trials"] == 200


def test_cli_certificate_pair(pair_file):
    res = run("certificate", "--input", pair_file, "--s", 2, "--format", "json")
    report = json.loads(res.text)
    assert res.code == 0
    assert report["result"]["total_rank"] == 2 and report["result"]["bound_confirmed"]


def test_cli_outputs_round_trip(tmp_path):
    out = tmp_path / "sat.fam"
    res = run("saturate", "--n", 4, "--s", 3, "--order", "random", "--seed", 5, "--output", out)
    assert res.code == 0 and res.output == str(out)
    f = parse_family(res.text)
    assert f.size() >= 11
    res = run("search-min", "--n", 4, "--s", 3)
    assert parse_family(res.text).size() == 12
    res = run("construct", "cross-extremal", "--n", 2, "--s", 3)
    assert parse_sequence(res.text).sizes() == [0, 4, 4]


def test_cli_failure_exit_code(tmp_path):
    p = tmp_path / "f.fam"
    p.write_text("n 2\n1,2\n")
    res = run("check-saturated", "--input", p, "--s", 2, "--format", "json")
    assert res.code == 1
    check = json.loads(res.text)["checks"][0]
    assert check["name"] == "s_saturated" and check["reason"] == "not_maximal" and check["addable"] == [1]


def test_cli_usage_errors(tmp_path, capsys):
    assert run("search-min", "--n", 9, "--s", 3).code == 2
    assert run("search-min", "--s", 3).code == 2
    bad = tmp_path / "bad.fam"
    bad.write_text("n 2\n5\n")
    assert run("check-saturated", "--input", bad, "--s", 2).code == 2
    with pytest.raises(SystemExit) as exc:
        run("no-such-command")
    assert exc.value.code == 2


def test_cli_cross_subcommands(pair_file):
    for action in ("check", "saturate", "eq1", "gfamilies", "bound"):
        assert run("cross", action, "--input", pair_file).code == 0
        assert run("cross", action, "--n", 3, "--s", 3, "--trials", 10).code == 0


def test_cli_construct_and_box(tmp_path, pair_file):
    for argv in (["dictator", "--n", 3], ["partition", "--n", 4, "--blocks", "1,2/3,4", "--choices", "1,3"],
                 ["partition", "--n", 5, "--s", 4], ["cross-extremal", "--n", 3, "--s", 2]):
        assert run("construct", *argv).code == 0
    fam = tmp_path / "d.fam"
    fam.write_text("n 2\n1\n1,2\n")
    res = run("construct", "lift", "--input", fam, "--s", 2)
    assert res.code == 0 and parse_family(res.text).n == 3
    assert run("box", "--input", pair_file).code == 0
    assert run("search-min-cross", "--n", 2, "--s", 2).code == 0


def test_cli_reports_identical_across_threads():
    for argv in (["search-min", "--n", 4, "--s", 3, "--mode", "raw"],
                 ["cross", "bound", "--n", 4, "--s", 3, "--trials", 40, "--seed", 2]):
        texts = {run(*argv, "--format", "json", "--threads", t).text for t in (1, 2, 8)}
        assert len(texts) == 1


def test_threads_env_default(monkeypatch):
    monkeypatch.setenv("SATLAB_THREADS", "3")
    args = cli.build_parser().parse_args(["search-min", "--n", "2", "--s", "2"])
    assert args.threads == 3


def test_console_entry_point(pair_file):
    proc = subprocess.run([sys.executable, "-m", "satlab", "cross", "check", "--input", str(pair_file)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS cross_saturated" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "satlab", "cross", "check", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
