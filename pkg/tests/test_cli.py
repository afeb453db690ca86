import csv
import json

from click.testing import CliRunner

import tsview.cli as cli
from tsview.aggregation import Algorithm


def test_bench_writes_report(tmp_path):
    config = tmp_path / "bench.json"
    config.write_text(
        json.dumps(
            {
                "sample_sizes": [1000],
                "trace_counts": [1],
                "algorithms": ["minmaxlttb"],
                "repetitions": 1,
            }
        )
    )
    out = tmp_path / "report.csv"
    result = CliRunner().invoke(
        cli.main, ["bench", "--config", str(config), "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    with out.open() as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 2
    assert rows[1][0] == "minmaxlttb"


def test_demo_aliasing_cmd(tmp_path, monkeypatch):
    # shrink the demo so the CLI test stays fast
    import tsview.bench as bench

    orig = bench.aliasing_demo
    monkeypatch.setattr(
        cli, "aliasing_demo", lambda out: orig(out, n=100_000, n_out=100)
    )
    out = tmp_path / "demo"
    result = CliRunner().invoke(cli.main, ["demo-aliasing", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert (out / "summary.json").is_file()
    assert "retention" in result.output


def test_serve_ingests_and_configures(tmp_path, monkeypatch):
    data = tmp_path / "data.csv"
    data.write_text("ts,a,b\n" + "\n".join(f"{i},{i * 0.1},on" for i in range(50)) + "\n")

    captured = {}

    def fake_serve(registry, cfg):
        captured["registry"] = registry
        captured["cfg"] = cfg

    monkeypatch.setattr(cli, "serve", fake_serve)
    result = CliRunner().invoke(
        cli.main,
        [
            "serve",
            "--data",
            str(data),
            "--port",
            "9100",
            "--n-out",
            "500",
            "--aggregator",
            "lttb",
            "--gap-factor",
            "2.5",
        ],
    )
    assert result.exit_code == 0, result.output
    assert "loaded 2 trace(s)" in result.output
    assert len(captured["registry"]) == 2
    cfg = captured["cfg"]
    assert cfg.port == 9100
    assert cfg.default_n_out == 500
    assert cfg.aggregator.algorithm is Algorithm.LTTB
    assert cfg.gap_factor == 2.5
