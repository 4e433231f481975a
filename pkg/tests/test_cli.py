from __future__ import annotations

import json

import pytest

from tcov.app import main
from tcov.presentation import cli
from tcov.presentation.cli import CHECK_FAILED, USAGE_ERROR, build_parser, run


def test_non_prime_is_rejected(isolated_settings, capsys) -> None:
    assert run(["census", "--prime", "4"]) == USAGE_ERROR
    assert "NotPrimeError" in capsys.readouterr().err


def test_unsupported_genus_is_rejected(isolated_settings, capsys) -> None:
    assert run(["homology", "--genus", "4", "--prime", "2"]) == USAGE_ERROR
    assert "genus must be 2 or 3" in capsys.readouterr().err


def test_prime_above_the_configured_maximum(isolated_settings, monkeypatch, capsys) -> None:
    monkeypatch.setenv("TCOV_MAX_PRIME", "5")
    assert run(["census", "--prime", "7"]) == USAGE_ERROR
    assert run(["verify", "--primes", "2,7"]) == USAGE_ERROR


def test_unknown_subcommand(isolated_settings, capsys) -> None:
    assert run(["bogus"]) == USAGE_ERROR
    assert "usage: tcov" in capsys.readouterr().err


def test_census_json_summary(isolated_settings, capsys) -> None:
    assert run(["census", "--prime", "3"]) == 0

    summary = json.loads(capsys.readouterr().out)
    assert [level["cells"] for level in summary["levels"]][-1] == 9
    assert (isolated_settings / "data" / "census" / "g2_p3.csv").is_file()
    assert (isolated_settings / "cache" / "g2_p3" / "n2.json").is_file()


def test_census_reuses_the_cache(isolated_settings, capsys) -> None:
    run(["census", "--prime", "2"])
    capsys.readouterr()

    assert run(["census", "--prime", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["cached_dimensions"] == [0, 1, 2]


def test_census_dot_files(isolated_settings, capsys) -> None:
    assert run(["census", "--prime", "2", "--format", "dot", "--no-cache"]) == 0

    paths = capsys.readouterr().out.split()
    assert len(paths) == 7
    assert all(path.endswith(".dot") for path in paths)


def test_homology_text(isolated_settings, capsys) -> None:
    assert main(["homology", "--prime", "2"]) == 0

    out = capsys.readouterr().out.splitlines()
    assert out == ["b = (1,0,0)", "reduced = (0,0,0)", "euler = 1"]
    assert (isolated_settings / "data" / "complexes" / "g2_p2.json").is_file()


def test_homology_only_b1(isolated_settings, capsys) -> None:
    assert run(["homology", "--prime", "3", "--only-b1"]) == 0
    assert capsys.readouterr().out == "b1 = 0\n"


def test_homology_json(isolated_settings, capsys) -> None:
    assert run(["homology", "--prime", "5", "--format", "json"]) == 0

    report = json.loads(capsys.readouterr().out)
    assert report["betti"] == [1, 0, 1]
    assert report["euler"] == 2


def test_sparse_loci_at_two_need_opt_in(isolated_settings, capsys) -> None:
    assert run(["loci", "--prime", "2", "--locus", "scon"]) == USAGE_ERROR
    assert "--allow-p2-experimental" in capsys.readouterr().err

    assert run(["loci", "--prime", "2", "--locus", "scon", "--allow-p2-experimental"]) == 0


def test_loci_csv_with_betti(isolated_settings, capsys) -> None:
    assert run(["loci", "--prime", "5", "--locus", "br", "--format", "csv", "--betti"]) == 0

    out = capsys.readouterr().out
    assert out.rstrip().endswith("reduced = (0,0,0)")
    assert (isolated_settings / "data" / "reports" / "loci_g2_p5_br.csv").is_file()


def test_verify_writes_a_report(isolated_settings, capsys) -> None:
    code = run(["verify", "--primes", "2,3"])

    summary = json.loads(capsys.readouterr().out)
    assert code == (0 if summary["passed"] else CHECK_FAILED)
    assert summary["passed"]
    assert (isolated_settings / "data" / "reports" / "verify.json").is_file()


@pytest.mark.slow
def test_genus_three_b1(isolated_settings, capsys) -> None:
    assert run(["homology", "--genus", "3", "--prime", "2", "--only-b1"]) == 0
    assert capsys.readouterr().out == "b1 = 0\n"


@pytest.mark.parametrize("flag", ["--paper", "--closed-forms"])
def test_closed_form_flag_spellings(flag: str) -> None:
    args = build_parser().parse_args(["verify", flag, "--primes", "2,3,5,7"])

    assert args.closed_forms
    assert args.primes == [2, 3, 5, 7]


def test_main_builds_a_single_parser(isolated_settings, monkeypatch, capsys) -> None:
    built = []

    def counting_parser():
        built.append(1)
        return build_parser()

    monkeypatch.setattr(cli, "build_parser", counting_parser)

    assert main(["homology", "--prime", "2", "--only-b1"]) == 0
    assert built == [1]


@pytest.mark.slow
def test_verify_closed_forms_up_to_seven(isolated_settings, capsys) -> None:
    assert run(["verify", "--paper", "--primes", "2,3,5,7"]) == 0

    summary = json.loads(capsys.readouterr().out)
    assert summary["passed"]
    assert any(check["name"] == "g2.p7.family_counts" for check in summary["checks"])
