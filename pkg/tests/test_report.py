import json
import pathlib

import pytest

from greenbox.cli import main
from greenbox.report import (ConfigError, RunConfig, emit, fuzz, load_config,
                             run_pipeline)

HERE = pathlib.Path(__file__).parent
CONFIGS = HERE.parent / "configs"
GOLDEN = HERE / "golden"


def cfg(name):
    return load_config(str(CONFIGS / f"{name}.cfg"))


def test_config_parsing():
    c = cfg("kummer_f5_n4")
    assert c.p == 5 and c.n == 4 and c.flavor == "kummer"
    assert c.a_raw == "2" and c.zeta_raw == "2"


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.cfg"))
    bad = tmp_path / "bad.cfg"
    bad.write_text("[extension]\nflavor = artin_schreier\nn = 3\na = 1\n")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    nofield = tmp_path / "nofield.cfg"
    nofield.write_text("[extension]\nflavor = kummer\nn = 2\na = 2\n"
                       "zeta = -1\n")
    c = load_config(str(nofield))
    with pytest.raises(ConfigError):
        c.base_field()


def test_invalid_extension_parameters_diagnosed(tmp_path):
    square = tmp_path / "square.cfg"
    square.write_text("[field]\np = 5\n\n[extension]\nflavor = kummer\n"
                      "n = 2\na = 4\nzeta = -1\n")
    c = load_config(str(square))
    from greenbox.extensions import ConstructionError
    with pytest.raises(ConstructionError):
        c.extension()


def test_report_determinism():
    r1 = run_pipeline(cfg("kummer_f7_n3"))
    r2 = run_pipeline(cfg("kummer_f7_n3"))
    assert emit(r1, "json") == emit(r2, "json")
    assert emit(r1, "text") == emit(r2, "text")


def test_json_round_trip():
    r = run_pipeline(cfg("kummer_f5_n2"))
    blob = emit(r, "json")
    parsed = json.loads(blob.decode("utf-8"))
    assert parsed["schema_version"] == 1
    assert parsed == json.loads(emit(r, "json").decode("utf-8"))
    assert parsed["verdict"]["green_etale"] is True


def test_golden_text_report():
    r = run_pipeline(cfg("artin_schreier_f2"))
    expected = (GOLDEN / "artin_schreier_f2_report.txt").read_bytes()
    assert emit(r, "text") == expected


def test_golden_json_report():
    r = run_pipeline(cfg("artin_schreier_f2"))
    expected = (GOLDEN / "artin_schreier_f2_report.json").read_bytes()
    assert emit(r, "json") == expected


def test_report_contains_displayed_values():
    text = emit(run_pipeline(cfg("artin_schreier_f2")), "text").decode()
    assert "1⊗1 + [α⊗α]" in text                       # the ideal generator
    assert "res[α⊗α] = 1⊗1 + 1⊗α + α⊗1" in text
    assert "tr(1⊗α) = 1⊗1" in text
    assert "norm of 1⊗α + α⊗1: 1⊗1 + [α⊗α]" in text
    text2 = emit(run_pipeline(cfg("kummer_f5_n2")), "text").decode()
    assert "res[α⊗α] = 2·α⊗α" in text2
    assert "tr(1⊗1) = 2·1⊗1" in text2


def test_out_of_scope_notices_present():
    parsed = json.loads(emit(run_pipeline(cfg("kummer_f7_n3")),
                             "json").decode())
    notes = " ".join(parsed["out_of_scope"])
    assert "norm" in notes and "C_3" in notes


def test_cli_check_etale_exit_codes(capsys):
    assert main(["check-etale", str(CONFIGS / "kummer_f5_n2.cfg")]) == 0
    out = capsys.readouterr().out
    assert "Green étale: YES" in out
    assert main(["check-etale", "/does/not/exist.cfg"]) == 2


def test_cli_report_json(capsys):
    assert main(["report", str(CONFIGS / "artin_schreier_f2.cfg"),
                 "--format", "json"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)["schema_version"] == 1


def test_cli_box_and_decompose(capsys):
    assert main(["box", str(CONFIGS / "kummer_f5_n2.cfg")]) == 0
    assert "[α⊗α]" in capsys.readouterr().out
    assert main(["decompose", str(CONFIGS / "kummer_f5_n4.cfg")]) == 0
    out = capsys.readouterr().out
    assert "eigenpiece 0" in out and "eigen_free" in out


def test_cli_fuzz(capsys):
    assert main(["fuzz", "--count", "6", str(CONFIGS / "kummer_f7_n3.cfg")
                 ]) == 0
    assert "PASS" in capsys.readouterr().out
    assert main(["fuzz", "--count", "4", "--corrupt",
                 str(CONFIGS / "kummer_f5_n4.cfg")]) == 0
    assert "corruptions detected: 4/4" in capsys.readouterr().out


def test_fuzz_deterministic():
    c = cfg("kummer_f7_n3")
    s1 = fuzz(c, count=8, seed=5)
    s2 = fuzz(c, count=8, seed=5)
    assert s1.text() == s2.text()
    assert s1.ok


def test_fuzz_corruption_detection():
    c = cfg("kummer_f5_n4")
    s = fuzz(c, count=10, seed=2, corrupt=True)
    assert s.corruptions_detected == 10
    assert s.ok


def test_rational_config(tmp_path):
    q = tmp_path / "rational.cfg"
    q.write_text("[field]\nrationals = true\n\n[extension]\n"
                 "flavor = kummer\nn = 2\na = 2\nzeta = -1\n")
    r = run_pipeline(load_config(str(q)))
    assert r.verdict["green_etale"]


def test_extension_base_config(tmp_path):
    f4 = tmp_path / "f4base.cfg"
    f4.write_text("[field]\np = 2\nmodulus = 1,1,1\n\n[extension]\n"
                  "flavor = kummer\nn = 3\na = 0,1\nzeta = 0,1\n")
    r = run_pipeline(load_config(str(f4)))
    assert r.verdict["green_etale"]
    # oracles that need prime scalars are reported as not applicable
    assert r.oracle_agreement["coequalizer"] is None


def test_degenerate_identity_extension_pipeline():
    r = run_pipeline(RunConfig(p=5, n=1, flavor="kummer", a_raw="3",
                               zeta_raw="1"))
    assert r.verdict["green_etale"]
    assert r.ideal[1]["dim"] == 0
    assert r.certificate["kind"] == "trivial"
