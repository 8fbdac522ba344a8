import io
import json
import sys

import pytest

from demcode.cli import main


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin.encode()), encoding="utf-8"))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def run_cli(capsys, monkeypatch):
    def _run(*argv, stdin=None):
        return run(capsys, *argv, stdin=stdin, monkeypatch=monkeypatch)

    return _run


def _csv_rows(text):
    return [line.split(",") for line in text.split("\r\n") if line]


def test_segment_table(run_cli, fixture_path):
    code, out, err = run_cli("segment", str(fixture_path))
    assert code == 0 and err == ""
    rows = out.split("\r\n")
    assert rows[0] == "meeting,rank,speaker,text,code,level,rule,sequence"
    assert len([r for r in rows[1:] if r]) == 12
    assert rows[1] == "dem-sample,51,--,,INTRO/SOLed,0,,1"


def test_stats_by_level(run_cli, fixture_path):
    code, out, _ = run_cli("stats", "--by", "level", "--format", "json", str(fixture_path))
    (table,) = json.loads(out)
    assert {k: v["count"] for k, v in table["rows"].items()} == {"0": 2, "1": 8, "2": 1, "3": 1}


def test_validate_empty(run_cli, tmp_path):
    empty = tmp_path / "empty.demp"
    empty.write_text("# meeting: empty\n")
    code, out, err = run_cli("validate", str(empty))
    assert code == 0 and out == "meeting,severity,line,rank,message\r\n" and err == ""


def test_validate_reports_errors(run_cli, tmp_path):
    bad = tmp_path / "bad.demp"
    bad.write_text("# meeting: b\n1|A|x|INTRO/SOLa\n2|B|y|REJ/HYP9\n")
    code, out, err = run_cli("validate", str(bad))
    assert code == 1
    assert err.startswith(f"error:3:{bad}: move B2: dangling reference HYP9")
    assert len(_csv_rows(out)) == 2


def test_parse_error_exit_code(run_cli, tmp_path):
    bad = tmp_path / "bad.demp"
    bad.write_text("# meeting: b\n1|A|x|FOO/SOLa\n")
    code, out, err = run_cli("segment", str(bad))
    assert code == 1 and out == "" and "error:2:" in err and "FOO" in err


def test_usage_errors(run_cli, fixture_path):
    with pytest.raises(SystemExit) as exc:
        main(["lsa", "--alpha", "2", str(fixture_path)])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_composable_pipeline(run_cli, fixture_path, fixture_text):
    _, direct, _ = run_cli("stats", str(fixture_path))
    _, normalized, _ = run_cli("normalize", "-", stdin=fixture_text)
    _, segmented, _ = run_cli("segment", "-", stdin=normalized)
    _, exchanged, _ = run_cli("exchanges", "-", stdin=segmented)
    _, piped, _ = run_cli("stats", "-", stdin=exchanged)
    assert piped == direct
    _, as_json, _ = run_cli("segment", "--format", "json", str(fixture_path))
    _, via_json, _ = run_cli("stats", "-", stdin=as_json)
    assert via_json == direct


def test_exchanges_table(run_cli, fixture_path):
    _, out, _ = run_cli("exchanges", "--format", "json", str(fixture_path))
    rows = json.loads(out)
    labels = []
    for r in rows:
        if r["exchange_kind"] and (not labels or labels[-1][0] != (r["sequence"], r["exchange"])):
            labels.append(((r["sequence"], r["exchange"]), r["exchange_kind"]))
    assert [k for _, k in labels] == ["REVIEW", "COGN.SYNCHRO", "CONFLICT", "REVIEW", "COGN.SYNCHRO"]


def test_lsa_mine_cluster_formats(run_cli, tmp_path):
    corpus = tmp_path / "conf.demp"
    _, text, _ = run_cli("synth", "--kind", "configurations", "--sequences", "200", "--seed", "1")
    corpus.write_text(text)
    code, out, _ = run_cli("lsa", "--format", "dot", str(corpus))
    assert code == 0 and '"INTRO" -> "SYNCH"' in out
    code, out, _ = run_cli("mine", "--format", "json", str(corpus))
    pairs = {(r["left"], r["right"]) for r in json.loads(out)["rules"]}
    assert {("INTRO", "SYNCH"), ("REV", "ALT"), ("ALT", "REV")} <= pairs
    code, out, _ = run_cli("cluster", "--linkage", "single", str(corpus))
    assert code == 0 and out.startswith("step,left,right,height,size\r\n")
    code, out, _ = run_cli("lsa", "--unit", "move", "--lag", "2", str(corpus))
    assert code == 0 and "INTRO,INFO" not in out.split("\r\n")[0]


def test_management_excluded_by_default(run_cli, tmp_path):
    f = tmp_path / "m.demp"
    f.write_text("# meeting: m\n1|A|x|INTRO/SOLa\n2|B|y|INFO/INTRO1\n3|C|z|MAN/MEET\n")
    _, out, _ = run_cli("stats", str(f))
    assert "level,corpus,1,1," in out
    _, out, _ = run_cli("stats", "--include-management", str(f))
    assert "level,corpus,1,2," in out


def test_kappa(run_cli, fixture_path, tmp_path, fixture_text):
    other = tmp_path / "other.demp"
    other.write_text(fixture_text.replace("|HYP/INTRO51", "|INFO/INTRO51"))
    code, out, _ = run_cli("kappa", "--format", "json", str(fixture_path), str(other))
    r = json.loads(out)
    assert code == 0 and r["n_items"] == 11 and r["categories"] == 9
    assert r["observed_agreement"] == pytest.approx(10 / 11)
    code, out, _ = run_cli("kappa", "--key", "code", str(fixture_path), str(other))
    assert code == 0


def test_kappa_mismatched_moves(run_cli, fixture_path, tmp_path):
    other = tmp_path / "short.demp"
    other.write_text("# meeting: dem-sample\n51|--||INTRO/SOLed\n")
    code, _, err = run_cli("kappa", str(fixture_path), str(other))
    assert code == 1 and "different moves" in err


def test_qoc_outputs(run_cli, fixture_path, tmp_path, fixture_text):
    code, out, _ = run_cli("qoc", "--format", "json", str(fixture_path))
    graphs = json.loads(out)
    assert code == 0 and [g["decision"] for g in graphs] == [None, "s2.O1"]
    second = tmp_path / "second.demp"
    second.write_text(fixture_text.replace("dem-sample", "dem-two"))
    code, out, _ = run_cli("qoc", str(fixture_path), str(second))
    assert '"dem-two.s2.O1"' in out and out.count("digraph") == 1


def test_criteria_flag(run_cli, fixture_path, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[content]\na = Memory budget\n")
    _, out, _ = run_cli("qoc", "--criteria", str(cfg), str(fixture_path))
    assert "content: Memory budget" in out
    cfg.write_text("[content]\nb = Only b\n")
    code, _, err = run_cli("segment", "--criteria", str(cfg), str(fixture_path))
    assert code == 1 and "unknown content criterion letter" in err


def test_synth_is_seeded(run_cli):
    _, a, _ = run_cli("synth", "--seed", "5", "--sequences", "30")
    _, b, _ = run_cli("synth", "--seed", "5", "--sequences", "30")
    _, c, _ = run_cli("synth", "--seed", "6", "--sequences", "30")
    assert a == b != c
    code, _, _ = run_cli("validate", "-", stdin=a)
    assert code == 0
