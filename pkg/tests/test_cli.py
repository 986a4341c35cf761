"""End to end checks of the command line reports.

Each invocation must print exactly one JSON envelope per request that
validates against the shipped schema, with deterministic bytes and the
documented exit codes: 0 on success, 2 on bad input, 3 when a search
ends inconclusively.
"""

import io
import json
import subprocess
import sys
from importlib import resources

import pytest
from jsonschema import Draft7Validator

from cutseq.cli import main
from cutseq.exact import Surd
from cutseq.geodesic import OrientedGeodesic, in_section

SILVER = "(1+1*sqrt(2))"

CANONICAL = {
    "expand": ["expand", "--kind", "ocf", "--value", "(1+1*sqrt(2))/1"],
    "evaluate": [
        "evaluate",
        "--stream",
        json.dumps({"kind": "ocf", "leading": [3, -1], "period": [[1, 1], [1, 1], [3, -1]]}),
    ],
    "convert": [
        "convert",
        "--stream",
        json.dumps({"kind": "rcf", "leading": [0, 1], "period": [[2, 1]]}),
        "--to",
        "gcf",
    ],
    "code": ["code", "--forward", SILVER, "--backward", "(1-1*sqrt(2))", "--groups", "4"],
    "parse": ["parse", "--word", "lRrLlRrL", "--forward-sign", "1"],
    "lift": ["lift", "--forward", "(5+1*sqrt(2))", "--backward", "(5-1*sqrt(2))"],
    "length": ["length", "--kind", "ocf", "--period", "[[3,-1],[1,1],[1,1]]"],
    "equiv": ["equiv", "--alpha", SILVER, "--beta", "(3+1*sqrt(2))"],
    "periodic": ["periodic", "--value", "(1+1*sqrt(5))/2", "--kind", "ocf"],
    "measure-check": ["measure-check", "--system", "odd_digit", "--region", '["1/3","1/2"]'],
    "birkhoff": [
        "birkhoff",
        "--system",
        "odd_digit",
        "--interval",
        '[0,"1/2"]',
        "--seed",
        "0.585786437626904951198311275790",
        "--steps",
        "500",
        "--dps",
        "60",
    ],
    "render": ["render", "--depth", "1", "--output", "json"],
    "classify": ["classify", "--matrix", "[[0,-1],[1,1]]"],
}


@pytest.fixture(scope="module")
def validator():
    text = resources.files("cutseq").joinpath("data/report.schema.json").read_text()
    return Draft7Validator(json.loads(text))


@pytest.fixture()
def invoke(capsys):
    def run(*argv, expect=0):
        code = main(list(argv))
        captured = capsys.readouterr()
        assert code == expect, captured.err or captured.out
        return captured.out

    return run


def envelope(out):
    lines = out.splitlines()
    assert len(lines) == 1
    return json.loads(lines[0])


class TestDocumentedExamples:
    def test_expand_reports_silver_period(self, invoke):
        report = envelope(invoke(*CANONICAL["expand"]))
        stream = report["outputs"]["stream"]
        assert stream["leading"] == [3, -1]
        assert stream["period"] == [[1, 1], [1, 1], [3, -1]]
        assert stream["preperiod"] == []

    def test_classify_order_three_rotation(self, invoke):
        report = envelope(invoke(*CANONICAL["classify"]))
        assert report["outputs"] == {"full_modular": True, "gamma_odd": True, "theta": False}

    def test_length_prints_silver_value(self, invoke):
        report = envelope(invoke(*CANONICAL["length"]))
        assert report["outputs"]["via_trace"].startswith("3.525494")
        assert report["outputs"]["via_product"].startswith("3.525494")
        assert report["outputs"]["multiplicity"] == 1
        assert report["diagnostics"] == []


class TestEnvelopes:
    @pytest.mark.parametrize("command", sorted(CANONICAL))
    def test_reports_validate_against_schema(self, invoke, validator, command):
        report = envelope(invoke(*CANONICAL[command]))
        validator.validate(report)
        assert report["command"] == command
        assert report["outputs"]

    def test_failure_reports_validate_too(self, invoke, validator):
        report = envelope(invoke("classify", "--matrix", "[[2,0],[0,1]]", expect=2))
        validator.validate(report)
        assert report["outputs"] == {}
        assert report["diagnostics"]

    @pytest.mark.parametrize("command", ["length", "code", "measure-check", "render"])
    def test_identical_requests_identical_bytes(self, invoke, command):
        assert invoke(*CANONICAL[command]) == invoke(*CANONICAL[command])

    def test_truncation_is_diagnosed(self, invoke):
        report = envelope(invoke("expand", "--kind", "ocf", "--value", SILVER, "--depth", "2"))
        assert report["outputs"]["stream"]["truncated"] is True
        assert any("truncated" in note for note in report["diagnostics"])


class TestExitCodes:
    def test_unparseable_value_is_invalid_input(self, invoke, capsys):
        report = envelope(invoke("expand", "--kind", "ocf", "--value", "garbage", expect=2))
        assert report["diagnostics"]

    def test_unknown_subcommand_prints_usage(self, capsys):
        assert main(["frobnicate"]) == 2
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "usage" in captured.err or "invalid choice" in captured.err

    def test_unknown_flag_prints_usage(self, capsys):
        assert main(["classify", "--matrix", "[[1,0],[0,1]]", "--bogus"]) == 2
        assert capsys.readouterr().out == ""

    def test_help_succeeds(self, capsys):
        assert main(["--help"]) == 0
        assert "usage" in capsys.readouterr().out

    def test_no_input_on_a_terminal_prints_usage(self, monkeypatch, capsys):
        class Tty:
            def isatty(self):
                return True

        monkeypatch.setattr(sys, "stdin", Tty())
        assert main([]) == 2
        assert capsys.readouterr().out == ""

    def test_inconclusive_search_is_exit_three(self, invoke):
        report = envelope(
            invoke("equiv", "--alpha", "(0+1*sqrt(2))", "--beta", SILVER, expect=3)
        )
        assert report["outputs"]["within_bound"] is False
        assert report["outputs"]["depth_alpha"] > 0
        assert report["diagnostics"]

    def test_depth_bound_is_echoed(self, invoke):
        report = envelope(
            invoke("equiv", "--alpha", SILVER, "--beta", SILVER, "--depth-bound", "0")
        )
        assert report["inputs"]["depth_bound"] == 0
        assert report["outputs"] == {"within_bound": True, "r": 0, "s": 0, "witness": [[1, 0], [0, 1]]}


class TestBatch:
    def batch(self, monkeypatch, capsys, lines):
        monkeypatch.setattr(sys, "stdin", io.StringIO("\n".join(lines) + "\n"))
        code = main([])
        captured = capsys.readouterr()
        return code, captured.out.splitlines(), captured.err

    def test_one_report_per_line_in_order(self, monkeypatch, capsys, validator):
        requests = [
            {"command": "classify", "args": {"matrix": [[1, 2], [0, 1]]}},
            {"command": "periodic", "args": {"value": "(1+1*sqrt(5))/2", "kind": "ocf"}},
            {"command": "expand", "args": {"kind": "rcf", "value": "7/3"}},
        ]
        code, lines, _ = self.batch(monkeypatch, capsys, [json.dumps(r) for r in requests])
        assert code == 0
        assert [json.loads(line)["command"] for line in lines] == [
            "classify",
            "periodic",
            "expand",
        ]
        for line in lines:
            validator.validate(json.loads(line))

    def test_underscored_argument_names_map_to_flags(self, monkeypatch, capsys):
        request = {
            "command": "parse",
            "args": {"word": "lRrL", "forward_sign": 1, "parity": "odd"},
        }
        code, lines, _ = self.batch(monkeypatch, capsys, [json.dumps(request)])
        assert code == 0
        assert json.loads(lines[0])["outputs"]["stream"]["kind"] == "ocf"

    def test_any_inconclusive_line_sets_exit_three(self, monkeypatch, capsys):
        requests = [
            {"command": "classify", "args": {"matrix": [[1, 0], [0, 1]]}},
            {"command": "equiv", "args": {"alpha": "(0+1*sqrt(2))", "beta": SILVER}},
        ]
        code, lines, _ = self.batch(monkeypatch, capsys, [json.dumps(r) for r in requests])
        assert code == 3
        assert len(lines) == 2

    def test_any_invalid_line_wins_over_inconclusive(self, monkeypatch, capsys):
        requests = [
            {"command": "equiv", "args": {"alpha": "(0+1*sqrt(2))", "beta": SILVER}},
            {"command": "classify", "args": {"matrix": [[2, 0], [0, 1]]}},
        ]
        code, lines, _ = self.batch(monkeypatch, capsys, [json.dumps(r) for r in requests])
        assert code == 2
        assert len(lines) == 2

    def test_malformed_line_reported_on_stderr_and_skipped(self, monkeypatch, capsys):
        lines_in = ["this is not json", json.dumps({"command": "classify", "args": {"matrix": [[1, 0], [0, 1]]}})]
        code, lines, err = self.batch(monkeypatch, capsys, lines_in)
        assert code == 2
        assert len(lines) == 1
        assert "bad batch line" in err


class TestRoundTrips:
    def test_expand_then_evaluate_recovers_the_literal(self, invoke):
        literal = "(3+1*sqrt(7))/2"
        expanded = envelope(invoke("expand", "--kind", "ocf", "--value", literal))
        back = envelope(
            invoke("evaluate", "--stream", json.dumps(expanded["outputs"]["stream"]))
        )
        assert back["outputs"]["value"] == literal

    def test_evaluate_handles_terminating_streams(self, invoke):
        stream = {"kind": "rcf", "leading": [1, 1], "preperiod": [[2, 1]]}
        report = envelope(invoke("evaluate", "--stream", json.dumps(stream)))
        assert report["outputs"] == {"value": "3/2", "decimal": "1.5"}

    def test_code_then_parse_recovers_the_leading_digit(self, invoke):
        coded = envelope(invoke(*CANONICAL["code"]))
        parsed = envelope(
            invoke("parse", "--word", coded["outputs"]["text"], "--forward-sign", "1")
        )
        stream = parsed["outputs"]["stream"]
        digits = [stream["leading"]] + stream["preperiod"]
        assert digits[:4] == [[3, -1], [1, 1], [1, 1], [3, -1]]

    def test_convert_agrees_with_direct_expansion(self, invoke):
        rcf = envelope(invoke("expand", "--kind", "rcf", "--value", "(0+1*sqrt(2))"))
        via_convert = envelope(
            invoke(
                "convert",
                "--stream",
                json.dumps(rcf["outputs"]["stream"]),
                "--to",
                "ocf",
            )
        )
        direct = envelope(invoke("expand", "--kind", "ocf", "--value", "(0+1*sqrt(2))"))
        assert via_convert["outputs"]["stream"] == direct["outputs"]["stream"]

    def test_lift_lands_on_the_section(self, invoke):
        report = envelope(invoke(*CANONICAL["lift"]))
        lifted = OrientedGeodesic(
            Surd.parse(report["outputs"]["forward"]),
            Surd.parse(report["outputs"]["backward"]),
        )
        assert in_section(lifted, "odd")
        (a, b), (c, d) = report["outputs"]["matrix"]
        assert a * d - b * c == 1

    def test_birkhoff_reports_the_expected_frequency(self, invoke):
        report = envelope(invoke(*CANONICAL["birkhoff"]))
        assert report["outputs"]["steps"] == 500
        expected = float(report["outputs"]["expected_frequency"])
        assert abs(float(report["outputs"]["average"]) - expected) < 0.1
        assert abs(expected - 0.5574) < 1e-3


class TestPrecisionEnvironment:
    def test_variable_shrinks_the_working_precision(self, invoke, monkeypatch):
        monkeypatch.setenv("CUTSEQ_PRECISION", "40")
        coarse = envelope(invoke(*CANONICAL["length"]))
        monkeypatch.delenv("CUTSEQ_PRECISION")
        fine = envelope(invoke(*CANONICAL["length"]))
        assert coarse["outputs"]["relative_gap"] == "0.0"
        assert "e-" in fine["outputs"]["relative_gap"]


class TestRenderCommand:
    def test_default_output_is_a_bare_svg_document(self, invoke):
        out = invoke("render", "--depth", "1")
        assert out.startswith("<svg")
        assert out.rstrip().endswith("</svg>")
        assert '"schema"' not in out

    def test_json_output_wraps_the_same_document(self, invoke, validator):
        bare = invoke("render", "--depth", "1")
        report = envelope(invoke("render", "--depth", "1", "--output", "json"))
        validator.validate(report)
        assert report["outputs"]["svg"] + "\n" == bare

    def test_overlay_letters_match_the_coder(self, invoke):
        coded = envelope(invoke(*CANONICAL["code"]))
        report = envelope(
            invoke(
                "render",
                "--geodesic",
                f"{SILVER}:(1-1*sqrt(2))",
                "--letter-groups",
                "4",
                "--output",
                "json",
            )
        )
        drawn = [
            piece.split("</text>")[0].split(">")[-1]
            for piece in report["outputs"]["svg"].split("<text")[1:]
        ]
        assert drawn
        assert "".join(drawn) == coded["outputs"]["text"][: len(drawn)]

    def test_degenerate_window_is_invalid_input(self, invoke):
        report = envelope(invoke("render", "--window", "2,1,1.5", expect=2))
        assert "degenerate" in report["diagnostics"][0]

    def test_malformed_geodesic_pair_is_invalid_input(self, invoke):
        envelope(invoke("render", "--geodesic", "(1+1*sqrt(2))", expect=2))


class TestInstalledEntryPoints:
    def test_console_script(self):
        done = subprocess.run(
            ["cutseq", "classify", "--matrix", "[[1,0],[0,1]]"],
            capture_output=True,
            text=True,
        )
        assert done.returncode == 0
        assert json.loads(done.stdout)["outputs"]["full_modular"] is True

    def test_module_invocation(self):
        done = subprocess.run(
            [sys.executable, "-m", "cutseq", "expand", "--kind", "rcf", "--value", "7/3"],
            capture_output=True,
            text=True,
        )
        assert done.returncode == 0
        stream = json.loads(done.stdout)["outputs"]["stream"]
        assert stream["leading"] == [2, 1]
        assert stream["truncated"] is False
