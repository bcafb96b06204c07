"""CLI surface: commands, config file, exit-code contract."""

import json

import pytest

from apzeros import cli
from apzeros.zerotable import bundled_table_path


def run(argv):
    return cli.main(argv)


@pytest.fixture(scope="module")
def quick_cert_path(tmp_path_factory):
    """Reduced-scale certificate produced through the CLI itself."""
    out = tmp_path_factory.mktemp("cli") / "cert.json"
    code = run(
        [
            "certify",
            "--re", "14685.516156148412", "--im", "0.0798324450",
            "--order", "11",
            "--y0", "0.0669574675", "--y1", "0.121953870",
            "--m", "200", "--segments", "512", "--seg-len", "0.001",
            "-o", str(out),
        ]
    )
    assert code == 0
    return out


class TestSearch:
    def test_window_with_zero(self, tmp_path, capsys):
        out = tmp_path / "c.txt"
        assert run(["search", "--tmin", "14683", "--tmax", "14688", "-o", str(out)]) == 0
        rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert any(l.startswith("14685.516") for l in rows)

    def test_empty_window_exit_3(self, tmp_path):
        out = tmp_path / "c.txt"
        assert run(["search", "--tmin", "0.3", "--tmax", "0.6", "-o", str(out)]) == 3

    def test_missing_table_exit_2(self, tmp_path):
        code = run(
            ["search", "--table", str(tmp_path / "nope.txt"), "--tmin", "1", "--tmax", "2"]
        )
        assert code == 2

    def test_config_file(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("t_min = 14683\nt_max = 14688\nstep = 0.1\n")
        out = tmp_path / "c.txt"
        assert run(["search", "--config", str(cfgfile), "-o", str(out)]) == 0
        assert out.exists()

    def test_bad_config_key(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("bogus_key = 1\n")
        assert run(["search", "--config", str(cfgfile)]) == 2


class TestPropose:
    def test_prints_proposal(self, capsys):
        code = run(
            ["propose", "--re", "14685.516156148412", "--im", "0.0798324450", "--order", "11"]
        )
        assert code == 0
        text = capsys.readouterr().out
        assert "N = 11" in text
        assert "q0 ~" in text


class TestCertify:
    def test_quick_pipeline(self, quick_cert_path):
        doc = json.loads(quick_cert_path.read_text())
        assert doc["contour"]["N"] == 11
        assert doc["zero"]["winding"] == 1

    def test_search_grade_table_refused(self, tmp_path):
        code = run(
            [
                "certify",
                "--table", str(bundled_table_path("zeros_search_1000.txt")),
                "--re", "14685.516156148412", "--im", "0.0798324450",
                "--order", "11", "--y0", "0.0669574675", "--y1", "0.121953870",
                "-o", str(tmp_path / "x.json"),
            ]
        )
        assert code == 2

    def test_candidate_required(self, tmp_path):
        assert run(["certify", "-o", str(tmp_path / "x.json")]) == 2

    def test_partial_contour_rejected(self, tmp_path):
        code = run(
            [
                "certify",
                "--re", "14685.516156148412", "--im", "0.0798324450",
                "--y0", "0.0669574675",
                "-o", str(tmp_path / "x.json"),
            ]
        )
        assert code == 2

    def test_shifted_candidate_fails_confirmation(self, tmp_path):
        code = run(
            [
                "certify",
                "--re", "14685.517156", "--im", "0.0798",
                "--order", "11", "--y0", "0.0669574675", "--y1", "0.121953870",
                "--m", "200", "--segments", "512",
                "-o", str(tmp_path / "x.json"),
            ]
        )
        assert code == 5


class TestVerify:
    def test_genuine_passes(self, quick_cert_path, capsys):
        assert run(["verify", str(quick_cert_path)]) == 0
        out = capsys.readouterr().out
        assert "certificate: PASS" in out

    def test_tampered_q0_fails(self, quick_cert_path, tmp_path, capsys):
        doc = json.loads(quick_cert_path.read_text())
        doc["q0"] -= 1
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        assert run(["verify", str(bad)]) == 1
        assert "FAIL" in capsys.readouterr().out

    def test_truncated_json_exit_9(self, quick_cert_path, tmp_path):
        bad = tmp_path / "trunc.json"
        bad.write_text(quick_cert_path.read_text()[:200])
        assert run(["verify", str(bad)]) == 9


class TestReport:
    def test_report_prints_constants(self, quick_cert_path, capsys):
        assert run(["report", str(quick_cert_path)]) == 0
        out = capsys.readouterr().out
        assert "alpha" in out and "a_w" in out and "b_w" in out
        assert "coarser criterion" in out
        assert "sign-change density" in out

    def test_report_refuses_tampered(self, quick_cert_path, tmp_path):
        doc = json.loads(quick_cert_path.read_text())
        doc["zero"]["winding"] = 2
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        assert run(["report", str(bad)]) == 1
