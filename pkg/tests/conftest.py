import numpy as np
import pytest

from drisleo.scenario import scenario_from_mapping, table1_defaults

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def defaults():
    return table1_defaults()


@pytest.fixture
def small():
    """4x4 panels, SU slightly off-axis, short inter-RIS hop far beyond both Rayleigh distances."""
    return scenario_from_mapping(
        {
            "ris_u_n_x": 4, "ris_u_n_y": 4, "ris_s_n_x": 4, "ris_s_n_y": 4,
            "d_h_m": 5e4, "su_position_m": [0.1, -0.05, 0.8], "sap_position_m": [0.02, 0.03, 5e4 - 1.3],
        }
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_report():
    """Record one line per acceptance criterion; printed in the terminal summary."""

    def record(name: str, passed: bool, detail: str = ""):
        _ACCEPTANCE.append((name, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
