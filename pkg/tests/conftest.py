import dataclasses

import pytest
from hypothesis import settings

from matrixless import build_grid, extrapolate_coefficients, parse_symbol
from matrixless.harness import PRESETS, reference_spectrum, run_experiment

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# (criterion, verdict, detail) collected by test_acceptance.py
ACCEPTANCE_LOG = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, detail in ACCEPTANCE_LOG:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {crit}: {detail}")


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LOG


_tables = {}


def coefficient_table(spec, variable="s", n1=100, alpha=5):
    """Extrapolated table built from the process-wide spectrum cache."""
    key = (spec, variable, n1, alpha)
    if key not in _tables:
        sym = parse_symbol(spec)
        grid = build_grid(n1, alpha)
        spectra = [reference_spectrum(sym, m, ceiling=m) for m in grid.sizes]
        _tables[key] = extrapolate_coefficients(sym, grid, spectra, variable)
    return _tables[key]


@pytest.fixture(scope="session")
def kms_table():
    return coefficient_table("kms:rho=0.5")


@pytest.fixture(scope="session")
def kms_lambda_table():
    return coefficient_table("kms:rho=0.5", "lambda")


_preset_runs = {}


@pytest.fixture(scope="session")
def preset_reports():
    """``get(table_id)`` -> NAS reports at n = 256, 512, 1024, levels 1..4."""

    def get(table_id):
        if table_id not in _preset_runs:
            cfg = dataclasses.replace(PRESETS[table_id], ns=(256, 512, 1024), methods=("NAS",))
            reports = run_experiment(cfg, table=coefficient_table(cfg.symbol))
            _preset_runs[table_id] = {(r.n, r.level): r for r in reports}
        return _preset_runs[table_id]

    return get
