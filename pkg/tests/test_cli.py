import json

from teamassembly.cli import main
from teamassembly.params import load_config

from conftest import FIXTURES, INGER_CFG


def test_simulate_writes_series(tmp_path, capsys):
    out = tmp_path / "runs"
    assert main(["simulate", str(INGER_CFG), "--ticks", "300", "--out", str(out)]) == 0
    lines = (out / "series_0.14_0.csv").read_text().splitlines()
    assert len(lines) == 301
    assert lines[0].startswith("tick,avg_team_size")
    assert (out / "edges_0.14_0.csv").read_text().startswith("source,target,weight\n")


def test_simulate_missing_config(tmp_path, capsys):
    assert main(["simulate", str(tmp_path / "missing.cfg")]) == 2
    assert "missing.cfg" in capsys.readouterr().err


def test_simulate_invalid_override(capsys):
    assert main(["simulate", str(INGER_CFG), "--set", "mixing=2"]) == 1
    assert "mixing out of [0,1]" in capsys.readouterr().err


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("homophily = 0.14\n")
    assert main(["simulate", str(cfg)]) == 1
    assert "unknown key" in capsys.readouterr().err


def test_override_last_wins(tmp_path):
    out = tmp_path / "o"
    assert main(["simulate", str(INGER_CFG), "--ticks", "5", "--out", str(out),
                 "--set", "mixing=0.3", "--set", "mixing=0.46"]) == 0
    assert (out / "series_0.46_0.csv").exists()


def test_sweep_minimal_file_set(tmp_path):
    out = tmp_path / "sweep"
    assert main(["sweep", str(INGER_CFG), "--mixing", "0.14,0.46", "--replicates", "1",
                 "--ticks", "1", "--out", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == sorted(
        [f"{kind}_{m}_0.csv" for m in ("0.14", "0.46") for kind in ("series", "census", "edges", "nodes")]
        + ["aggregate_0.14.csv", "aggregate_0.46.csv", "summary.json"])
    summary = json.loads((out / "summary.json").read_text())
    assert summary["burn_in"] == 0 and set(summary["seeds"]) == {"0.14/0", "0.46/0"}


def test_sweep_rerun_identical(tmp_path):
    args = ["sweep", str(INGER_CFG), "--mixing", "0.14,0.79", "--replicates", "2", "--ticks", "60"]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    a = {p.name: p.read_bytes() for p in (tmp_path / "a").iterdir()}
    b = {p.name: p.read_bytes() for p in (tmp_path / "b").iterdir()}
    assert a == b


def test_sweep_bad_flags(capsys):
    assert main(["sweep", str(INGER_CFG), "--mixing", "0.1,abc"]) == 1
    assert main(["sweep", str(INGER_CFG), "--mixing", "1.5", "--ticks", "2"]) == 1


def test_calibrate_fixture(tmp_path, capsys):
    out = tmp_path / "params.cfg"
    assert main(["calibrate", str(FIXTURES / "synth_bib.csv"), str(INGER_CFG), "--out", str(out)]) == 0
    manifest = json.loads((FIXTURES / "synth_bib.manifest.json").read_text())["realized"]["profiles"]
    params = load_config(out)
    for tag in ("basic", "clinical"):
        culture = params.per_culture
        cp = [v for k, v in culture.items() if k.tag == tag][0]
        assert cp.p_incumbent == manifest[tag]["avg_internal_fraction"]
        assert cp.mean_team_size == manifest[tag]["avg_team_size"]
    printed = capsys.readouterr().out
    assert printed.splitlines()[0].split()[:2] == ["culture", "teams"]


def test_calibrate_empty(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert main(["calibrate", str(empty), str(INGER_CFG), "--out", str(tmp_path / "x.cfg")]) == 1
    assert "no records" in capsys.readouterr().err
    empty.write_text("paper_id,year,author_id,is_internal,culture,classification\n")
    assert main(["calibrate", str(empty), str(INGER_CFG), "--out", str(tmp_path / "x.cfg")]) == 1


def test_calibrate_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("paper_id,year,author_id,is_internal,culture,classification\np1,2014,a,1,biomedical,basic\n")
    assert main(["calibrate", str(bad), str(INGER_CFG), "--out", str(tmp_path / "x.cfg")]) == 1
    assert "line 2" in capsys.readouterr().err


def write(path, text):
    path.write_text(text)
    return str(path)


def test_metrics_hand_fixture(tmp_path, capsys):
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (5, 6)]
    e = write(tmp_path / "e.csv", "source,target,weight\n" + "".join(f"n{a},n{b},1\n" for a, b in edges))
    c = write(tmp_path / "c.csv", "node,culture\n" + "".join(f"n{i},basic\n" for i in range(9)))
    assert main(["metrics", e, c]) == 0
    out = capsys.readouterr().out
    assert "giant_component_pct: 44.44" in out
    assert "  4,4,0" in out


def test_metrics_empty(tmp_path, capsys):
    e = write(tmp_path / "e.csv", "source,target,weight\n")
    c = write(tmp_path / "c.csv", "node,culture\n")
    assert main(["metrics", e, c]) == 0
    out = capsys.readouterr().out
    assert "giant_component_pct: 0.00" in out and "interdisciplinary_pct: 0.00" in out


def test_metrics_mixed_triangle(tmp_path, capsys):
    e = write(tmp_path / "e.csv", "source,target,weight\na,b,1\nb,c,1\na,c,1\n")
    c = write(tmp_path / "c.csv", "node,culture\na,basic\nb,clinical\nc,clinical\n")
    assert main(["metrics", e, c]) == 0
    assert "interdisciplinary_pct: 100.00" in capsys.readouterr().out


def test_metrics_malformed(tmp_path):
    e = write(tmp_path / "e.csv", "source,target,weight\na,b,x\n")
    c = write(tmp_path / "c.csv", "node,culture\na,basic\nb,basic\n")
    assert main(["metrics", e, c]) == 1
    e2 = write(tmp_path / "e2.csv", "source,target,weight\na,z,1\n")
    assert main(["metrics", e2, c]) == 1


def test_metrics_reads_simulation_output(tmp_path, capsys):
    out = tmp_path / "runs"
    main(["simulate", str(INGER_CFG), "--ticks", "200", "--out", str(out)])
    capsys.readouterr()
    assert main(["metrics", str(out / "edges_0.14_0.csv"), str(out / "nodes_0.14_0.csv")]) == 0
    assert "giant_component_pct" in capsys.readouterr().out


def test_fixtures_regenerate(tmp_path):
    out = tmp_path / "bib.csv"
    assert main(["fixtures", "--preset", "inger", "--out", str(out)]) == 0
    assert out.read_bytes() == (FIXTURES / "inger_bib.csv").read_bytes()
    assert (tmp_path / "bib.manifest.json").read_bytes() == (FIXTURES / "inger_bib.manifest.json").read_bytes()
