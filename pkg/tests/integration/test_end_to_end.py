"""Integration tests: full experiment suites at the default grids."""

import json

import pytest

from weakloc.cli import main
from weakloc.experiments import load_config, run_anti_wick, run_bergman, run_calderon_toeplitz

ANTI_WICK_SUITE = {
    "constant": "not_compact",
    "oscillatory:1": "not_compact",
    "indicator:1": "compact",
    "lp:2": "compact",
    "gaussian:1": "compact",
    # (1 + |z|^2)^-1 is still above both thresholds inside the default truncation
    "lp:1": "not_compact",
}

BERGMAN_SUITE = {
    "constant": "not_compact",
    "radial:r2": "not_compact",
    "conj": "not_compact",
    "disc:0.5": "compact",
}


def _berezin_or_inconclusive(report, expected):
    """The Berezin test only applies to a localized operator kernel."""
    if report.verdicts["operator_localization"]["verdict"] == "localized":
        return expected
    return "inconclusive"


@pytest.fixture(scope="module")
def out_dir(tmp_path_factory):
    """Shared output root for the suite runs."""
    return tmp_path_factory.mktemp("suite")


@pytest.fixture(scope="module")
def anti_wick_reports(out_dir):
    """Anti-Wick operators at the default grid, one per symbol."""
    return {
        symbol: run_anti_wick(load_config("anti-wick", overrides={
            "symbol": symbol, "output_dir": str(out_dir), "run_name": f"anti-wick-{symbol}",
        }))
        for symbol in ANTI_WICK_SUITE
    }


@pytest.fixture(scope="module")
def bergman_reports(out_dir):
    """Bergman Toeplitz operators at the default grid, one per symbol."""
    return {
        symbol: run_bergman(load_config("bergman", overrides={
            "symbol": symbol, "output_dir": str(out_dir), "run_name": f"bergman-{symbol}",
        }))
        for symbol in BERGMAN_SUITE
    }


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.parametrize("symbol", sorted(ANTI_WICK_SUITE))
def test_anti_wick_concordance(anti_wick_reports, symbol):
    """Berezin and singular-value verdicts agree with each other and with the symbol class."""
    report = anti_wick_reports[symbol]

    assert report.localized
    assert report.verdicts["berezin"]["verdict"] == ANTI_WICK_SUITE[symbol]
    assert report.verdicts["singular_values"]["verdict"] == ANTI_WICK_SUITE[symbol]
    assert report.verdicts["concordant"] is True


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.parametrize("symbol", sorted(BERGMAN_SUITE))
def test_bergman_concordance(bergman_reports, symbol):
    """Disc Toeplitz operators: the operator kernel is localized and the two compactness tests agree."""
    report = bergman_reports[symbol]

    assert report.verdicts["operator_localization"]["verdict"] == "localized"
    assert report.verdicts["berezin"]["verdict"] == BERGMAN_SUITE[symbol]
    assert report.verdicts["singular_values"]["verdict"] == BERGMAN_SUITE[symbol]
    assert report.compactness == BERGMAN_SUITE[symbol]
    assert report.verdicts["concordant"] is True
    assert report.verdicts["hankel_identity"]["verdict"] == "pass"
    assert report.verdicts["toeplitz_diagonal"]["verdict"] == "match"


@pytest.mark.integration
@pytest.mark.slow
def test_bergman_radial_diagonal_to_degree_40(bergman_reports):
    """u = |z|^2 gives (n+1)/(n+2) on the full default basis."""
    report = bergman_reports["radial:r2"]

    toeplitz = report.document["extras"]["toeplitz"]
    assert toeplitz["basis_cap"] == 40
    assert toeplitz["max_error"] <= 1e-10
    assert toeplitz["off_diagonal_ratio"] <= 1e-10


@pytest.mark.integration
@pytest.mark.slow
def test_bounds_dominate_norms(anti_wick_reports, bergman_reports):
    """Wherever r exceeds rho the bound dominates the norm, and some bound is within 25x."""
    ratios = []
    for report in [*anti_wick_reports.values(), *bergman_reports.values()]:
        for row in report.document["bounds"]:
            if row["r_exceeds_rho"]:
                assert row["bound"] >= row["norm"] - 1e-8
            if row["norm"] > 0:
                ratios.append(row["bound"] / row["norm"])
        rows = report.document["approximation"]
        for prev, row in zip(rows, rows[1:]):
            if row["rel_error"] > prev["rel_error"] * 1.05 + row["reconstruction_floor"]:
                assert any("approximation.rel_error" in issue for issue in report.document["issues"])

    assert min(ratios) <= 25


@pytest.mark.integration
@pytest.mark.slow
def test_haar_dichotomy(out_dir):
    """Haar: pointwise bound fails for every pair; weighted margins stay below the cap."""
    report = run_calderon_toeplitz(load_config("calderon-toeplitz", overrides={
        "symbol": "constant", "output_dir": str(out_dir), "run_name": "calderon-constant",
    }))

    assert report.verdicts["pointwise"]["verdict"] == "violated"
    stability = report.document["extras"]["stability"]
    assert max(stability["row_margins"] + stability["col_margins"]) <= 10
    assert report.verdicts["singular_values"]["verdict"] == "not_compact"
    assert report.compactness == _berezin_or_inconclusive(report, "not_compact")


@pytest.mark.integration
@pytest.mark.slow
def test_haar_ball_symbol(out_dir):
    """Haar, indicator of a ball: compact profile; the Berezin verdict agrees wherever it applies."""
    report = run_calderon_toeplitz(load_config("calderon-toeplitz", overrides={
        "symbol": "ball:0.75", "output_dir": str(out_dir), "run_name": "calderon-ball",
    }))

    assert report.verdicts["singular_values"]["verdict"] == "compact"
    assert report.compactness == _berezin_or_inconclusive(report, "compact")
    if report.verdicts["berezin"] is not None:
        assert report.verdicts["berezin"]["heuristic"] is True
        assert report.verdicts["concordant"] is True


@pytest.mark.integration
@pytest.mark.slow
def test_cli_runs_are_byte_identical(tmp_path, monkeypatch, capsys):
    """Two CLI runs with the same config and seed write identical report.json files."""
    for name in ("OUTPUT_DIR", "AUDIT_DIR", "LOG_LEVEL", "THREADS", "SEED"):
        monkeypatch.delenv(f"WEAKLOC_{name}", raising=False)
    argv = ["--seed", "7", "run", "anti-wick", "--symbol", "indicator", "--half-width", "1"]

    assert main(["--out", str(tmp_path / "first"), *argv]) == 0
    assert main(["--out", str(tmp_path / "second"), *argv]) == 0

    first = (tmp_path / "first" / "anti-wick" / "report.json").read_bytes()
    second = (tmp_path / "second" / "anti-wick" / "report.json").read_bytes()
    assert first == second
    assert json.loads(first)["seed"] == 7
    assert capsys.readouterr().out.count("compactness=compact") == 2
