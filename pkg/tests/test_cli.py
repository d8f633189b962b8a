import json
import math
import random

import pytest

from sdmstab.boundary import StabilityReport
from sdmstab.cli import Report, execute, main, parse, render
from sdmstab.simulator import GridPoint, SimResult, Window, WindowReport
from sdmstab.transfer import b_from_g


class TestParse:
    def test_bounds(self):
        cfg = parse(["bounds", "--b", "3,-3,1"])
        assert cfg.command == "bounds"
        assert cfg.b == (3.0, -3.0, 1.0)
        assert cfg.g is None
        assert cfg.format == "text"

    def test_missing_design_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            parse(["bounds"])
        assert exc.value.code == 2

    def test_check_with_probe(self):
        cfg = parse(["check", "--b", "3,-3,1", "--i-abs", "1.0"])
        assert cfg.command == "check"
        assert cfg.i_abs == 1.0

    def test_mutually_exclusive_design(self):
        with pytest.raises(SystemExit) as exc:
            parse(["bounds", "--b", "1", "--g", "1"])
        assert exc.value.code == 2

    def test_malformed_number(self):
        with pytest.raises(SystemExit) as exc:
            parse(["bounds", "--b", "3,,1"])
        assert exc.value.code == 2

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as exc:
            parse(["bounds", "--b", "1", "--frobnicate"])
        assert exc.value.code == 2

    def test_round_trip_through_argv(self):
        argvs = [
            ["bounds", "--b", "3,-3,1", "--format", "json", "--out", "-"],
            ["check", "--g", "1,3,3", "--i-abs", "1.5", "--format", "text", "--out", "-"],
            ["sweep", "--b", "1", "--amp-lo", "0.0", "--amp-hi", "0.5",
             "--amp-steps", "8", "--samples", "500", "--format", "csv", "--out", "-"],
        ]
        for argv in argvs:
            cfg = parse(argv)
            rebuilt = [cfg.command]
            if cfg.b is not None:
                rebuilt += ["--b", ",".join(repr(v) for v in cfg.b)]
            if cfg.g is not None:
                rebuilt += ["--g", ",".join(repr(v) for v in cfg.g)]
            rebuilt += ["--format", cfg.format, "--out", cfg.out]
            if cfg.command == "check":
                rebuilt += ["--i-abs", repr(cfg.i_abs)]
            if cfg.command == "sweep":
                rebuilt += [
                    "--amp-lo", repr(cfg.amp_lo), "--amp-hi", repr(cfg.amp_hi),
                    "--amp-steps", str(cfg.amp_steps), "--samples", str(cfg.samples),
                ]
            assert parse(rebuilt) == cfg


class TestExecute:
    def test_bounds_report(self):
        report, code = execute(parse(["bounds", "--b", "3,-3,1"]))
        assert code == 0
        payload = report.payload
        assert isinstance(payload, StabilityReport)
        assert payload.a_min == 0.875
        valid = [c for c in payload.candidates if c.valid]
        assert len(valid) == 1 and abs(valid[0].a - 2.0) < 1e-9
        stable = [iv for iv in payload.intervals if iv.stable]
        assert len(stable) == 1
        assert stable[0].lo == 0.875

    def test_check_stable_probe(self):
        report, code = execute(parse(["check", "--b", "3,-3,1", "--i-abs", "1.0"]))
        assert code == 0
        assert report.payload.inside == 3
        assert not report.payload.marginal

    def test_check_marginal_refusal(self):
        # at a = i_min the root sits exactly on the circle at z = -1
        report, code = execute(parse(["check", "--b", "1", "--i-abs", "0.5"]))
        assert code == 1
        assert report.payload.marginal

    def test_contour_row_count(self):
        report, code = execute(
            parse(["contour", "--b", "3,-3,1", "--i-abs", "1.5", "--samples", "8"])
        )
        assert code == 0
        assert len(report.payload) == 8

    def test_from_g(self):
        report, code = execute(parse(["from-g", "--g", "1,2,3"]))
        assert code == 0
        assert tuple(report.payload["b"]) == b_from_g((1.0, 2.0, 3.0))

    def test_simulate(self):
        report, code = execute(
            parse(["simulate", "--g", "1", "--dc", "0.25", "--samples", "20000"])
        )
        assert code == 0
        assert isinstance(report.payload, SimResult)
        assert abs(report.payload.mean_v - 0.25) < 1e-2

    def test_sweep(self):
        report, code = execute(
            parse(["sweep", "--g", "1", "--amp-lo", "0", "--amp-hi", "0.5",
                   "--amp-steps", "6", "--samples", "2000"])
        )
        assert code == 0
        assert isinstance(report.payload, WindowReport)
        assert len(report.payload.grid) == 6


class TestRender:
    def test_empty_window_report_csv_is_header_only(self):
        rep = Report(command="sweep", inputs={}, payload=WindowReport(grid=(), windows=()))
        text = render(rep, "csv")
        assert text == "amplitude,stable,max_abs_state,first_divergence_sample\n"

    def test_window_report_csv_rows(self):
        payload = WindowReport(
            grid=(
                GridPoint(amplitude=0.1, stable=True, max_abs_state=1.5,
                          first_divergence_sample=None),
                GridPoint(amplitude=0.2, stable=False, max_abs_state=2e6,
                          first_divergence_sample=77),
            ),
            windows=(Window(lo=0.2, hi=0.2),),
        )
        text = render(Report(command="sweep", inputs={}, payload=payload), "csv")
        lines = text.strip().split("\n")
        assert lines[0] == "amplitude,stable,max_abs_state,first_divergence_sample"
        assert lines[1] == "0.1,true,1.5,"
        assert lines[2] == "0.2,false,2000000.0,77"

    def test_stability_report_json_schema(self):
        report, _ = execute(parse(["bounds", "--b", "3,-3,1", "--format", "json"]))
        doc = json.loads(render(report, "json"))
        res = doc["result"]
        assert set(res) == {"sum_b", "a_min", "candidates", "intervals"}
        assert set(res["candidates"][0]) == {"a", "x", "valid", "source"}
        assert set(res["intervals"][0]) == {
            "lo", "hi", "stable", "witness_a", "witness_count"
        }
        assert res["intervals"][-1]["hi"] == math.inf

    def test_sim_result_text_fields(self):
        report, _ = execute(
            parse(["simulate", "--g", "1", "--dc", "0.0", "--samples", "100"])
        )
        text = render(report, "text")
        for key in ("diverged:", "mean_v:", "samples_run:",
                    "max_abs_state:", "first_divergence_sample:"):
            assert key in text

    def test_json_round_trips_floats(self):
        report, _ = execute(parse(["bounds", "--b", "3,-3,1"]))
        doc = json.loads(render(report, "json"))
        assert doc["result"]["a_min"] == 0.875
        assert doc["result"]["candidates"][0]["a"] == [
            c for c in report.payload.candidates
        ][0].a

    def test_csv_rejected_for_scalar_reports(self):
        report, _ = execute(parse(["bounds", "--b", "3,-3,1"]))
        with pytest.raises(ValueError):
            render(report, "csv")


class TestMain:
    def test_writes_file(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["bounds", "--b", "3,-3,1", "--format", "json", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["command"] == "bounds"
        assert doc["version"]

    def test_stdout(self, capsys):
        code = main(["check", "--b", "3,-3,1", "--i-abs", "1.0"])
        assert code == 0
        assert "inside: 3" in capsys.readouterr().out

    def test_marginal_exit_code(self, capsys):
        assert main(["check", "--b", "1", "--i-abs", "0.5"]) == 1

    def test_unwritable_output_path(self, capsys):
        code = main(["check", "--b", "3,-3,1", "--i-abs", "1.0",
                     "--out", "/nonexistent-dir/report.txt"])
        assert code == 2
        assert "cannot write" in capsys.readouterr().err

    def test_degenerate_bounds_still_reports(self, capsys):
        # reciprocal-symmetric design: classification falls back internally
        assert main(["bounds", "--b", "1,0"]) == 0

    def test_trace_formats(self, capsys):
        code = main(["simulate", "--g", "1,3,3", "--dc", "0.1",
                     "--samples", "100", "--trace-len", "3", "--format", "csv"])
        assert code == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "k,s1,s2,s3,v"
        assert len(lines) == 4
        code = main(["simulate", "--b", "3,-3,1", "--dc", "0.1",
                     "--samples", "50", "--trace-len", "2"])
        assert code == 0
        assert "state: k=0" in capsys.readouterr().out

    def test_contour_csv_stdout(self, capsys):
        # contour defaults to csv: it is plot data
        code = main(["contour", "--b", "3,-3,1", "--i-abs", "1.5",
                     "--samples", "8", "--out", "-"])
        assert code == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "phi,re_w,im_w"
        assert len(lines) == 9

    def test_fuzzed_argv_never_crashes(self, capsys):
        rng = random.Random(12345)
        vocab = [
            "bounds", "check", "contour", "from-g", "simulate", "sweep",
            "--b", "--g", "--i-abs", "--samples", "--format", "--out",
            "3,-3,1", "1,2", "x", "-1", "0.5", "json", "csv", "-", "",
            "--amp-lo", "--amp-hi", "--amp-steps", "--threshold",
        ]
        for _ in range(200):
            argv = [rng.choice(vocab) for _ in range(rng.randint(0, 6))]
            try:
                code = main(argv)
            except SystemExit as exc:
                code = exc.code if isinstance(exc.code, int) else 2
            assert code in (0, 1, 2)
        capsys.readouterr()
