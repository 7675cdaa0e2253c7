import argparse
import asyncio
import json

import pytest

from config_loader import load_app_config
from cycle_index import hypercube_cycle_index, parse_cycle_index
from models import AppSettings, CheckStatus
from main_cli import EXIT_COMPUTATION, EXIT_OK, EXIT_USAGE, build_parser, main, parse_k_range, selected_suites
from verification_workflow import run_verification


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


# --- Argument helpers and configuration ---

def test_parse_k_range():
    assert parse_k_range("13..16") == [13, 14, 15, 16]
    assert parse_k_range("9") == [9]
    with pytest.raises(argparse.ArgumentTypeError):
        parse_k_range("a..b")


def test_unset_flags_take_model_defaults():
    settings = load_app_config(argparse.Namespace(n=4, format=None, samples=None))
    assert settings.n == 4
    assert settings.output_format == "text"
    assert settings.samples == AppSettings().samples


def test_flags_fill_the_settings():
    args = build_parser().parse_args(["verify", "--format", "json", "--samples", "50", "--subset-budget", "99"])
    settings = load_app_config(args)
    assert settings.output_format == "json"
    assert settings.samples == 50
    assert settings.subset_budget == 99


def test_environment_is_ignored(monkeypatch):
    monkeypatch.setenv("CENSUS_FORMAT", "csv")
    monkeypatch.setenv("CENSUS_SAMPLES", "0")
    settings = load_app_config()
    assert settings.output_format == "text"
    assert settings.samples == AppSettings().samples


def test_invalid_configuration_is_reported():
    with pytest.raises(ValueError, match="Invalid application configuration"):
        load_app_config(argparse.Namespace(samples=0))


def test_dimension_cap_needs_expensive_flag():
    with pytest.raises(ValueError):
        load_app_config(argparse.Namespace(n=7, expensive=False))
    assert load_app_config(argparse.Namespace(n=7, expensive=True)).n == 7


# --- Verbs ---

def test_cycle_index_verb(capsys):
    code, out = run(capsys, "cycle-index", "2")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "# Z_2 (|G|=8)"
    assert lines[1] == "1/8 * z1^4"
    assert parse_cycle_index("\n".join(lines[1:])).terms == hypercube_cycle_index(2).terms


def test_cycle_index_of_hyperplane_as_json(capsys):
    code, out = run(capsys, "cycle-index", "4", "--hyperplane", "1,1", "--rhs", "1", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["group_order"] == 32
    assert payload["terms"]["z1^8"] == "1/16"


def test_table_csv(capsys):
    code, out = run(capsys, "table", "4", "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "n,k,A,H,F,regime,provenance"
    assert "4,9,56,0,56,high,F=A since k > 2^(n-1)" in lines
    assert "4,2,4,4,0,definition,F=0 since k <= n" in lines
    assert len(lines) == 18


def test_table_output_is_deterministic(capsys):
    _, first = run(capsys, "table", "4", "--k", "5..8", "--per-hyperplane")
    _, second = run(capsys, "table", "4", "--k", "5..8", "--per-hyperplane")
    assert first == second
    assert "N[1,1|1]" in first


def test_exported_table_feeds_back_as_external_values(capsys, tmp_path):
    _, exported = run(capsys, "table", "4", "--format", "json")
    path = tmp_path / "f4.json"
    path.write_text(exported)
    code, _ = run(capsys, "table", "4", "--external", str(path))
    assert code == EXIT_OK


def test_conflicting_external_value_fails(capsys, tmp_path):
    path = tmp_path / "f4.json"
    path.write_text(json.dumps({"9": 55}))
    code, _ = run(capsys, "table", "4", "--k", "9", "--external", str(path))
    assert code == EXIT_COMPUTATION


def test_stabilizer_verb(capsys):
    code, out = run(capsys, "stabilizer", "4", "--coeffs", "1,-1,-1,2", "--rhs", "1")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "canonical: x1+x2+x3+2x4=2"
    assert "stabilizer order: 6" in out
    assert "burnside agrees: yes" in out


def test_stabilizer_needs_n_coefficients(capsys):
    code, _ = run(capsys, "stabilizer", "4", "--coeffs", "1,1", "--rhs", "1")
    assert code == EXIT_USAGE


def test_hyperplanes_verb(capsys):
    code, out = run(capsys, "hyperplanes", "4")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 7
    assert lines[0].startswith("label=H4.1 n=4 coeffs=1 rhs=0")
    assert lines[-1] == "# coeff(4) = 2"


def test_large_dimension_is_a_usage_error(capsys):
    code, _ = run(capsys, "table", "7")
    assert code == EXIT_USAGE


def test_six_cube_enumeration_needs_expensive_mode(capsys):
    code, _ = run(capsys, "hyperplanes", "6")
    assert code == EXIT_COMPUTATION


def test_verify_bounds_suite(capsys):
    code, out = run(capsys, "verify", "--suite", "bounds", "--n-max", "3", "--samples", "200")
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1] == "6 checks: 6 passed, 0 failed, 0 noted, 0 errors"


def test_verify_takes_the_suite_as_a_positional(capsys):
    code, out = run(capsys, "verify", "bounds", "--n-max", "3", "--samples", "200")
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1] == "6 checks: 6 passed, 0 failed, 0 noted, 0 errors"


def test_verify_all_selects_every_suite():
    args = build_parser().parse_args(["verify", "all", "--n-max", "5"])
    assert args.target == "all"
    assert args.n_max == 5
    assert selected_suites(args) is None
    assert selected_suites(build_parser().parse_args(["verify"])) is None
    both = build_parser().parse_args(["verify", "census", "--suite", "bounds"])
    assert selected_suites(both) == ["bounds", "census"]


def test_verify_rejects_unknown_positional():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify", "everything"])


# --- Verification workflow ---

def test_verification_collects_suites_in_order():
    settings = AppSettings(n_max=3, samples=100)
    report = asyncio.run(run_verification(settings, ["bounds", "cycle-index"]))
    suites = [c.suite for c in report.checks]
    assert suites == sorted(suites, key=["bounds", "cycle-index"].index)
    one_cube = next(c for c in report.checks if c.name == "Z_1")
    assert one_cube.status in (CheckStatus.NOTED, CheckStatus.PASSED)
    assert not report.failed


def test_unknown_suite_is_rejected():
    with pytest.raises(ValueError):
        asyncio.run(run_verification(AppSettings(n_max=2), ["nonsense"]))


@pytest.mark.slow
def test_published_listings_are_noted_not_failed():
    report = asyncio.run(run_verification(AppSettings(n_max=5), ["hyperplanes", "census"]))
    noted = {c.name for c in report.checks if c.status is CheckStatus.NOTED}
    assert {"published class count Q5", "published F_5(16)"} <= noted
    assert not report.failed
