from pathlib import Path

import pytest

from teamassembly.params import Culture, CultureParams, ModelParams, default_params

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = Path(__file__).resolve().parent / "fixtures"
INGER_CFG = ROOT / "configs" / "inger.cfg"


def make_params(p_basic=0.3, p_clinical=0.3, q=0.5, size_basic=4.0, size_clinical=4.0,
                jitter=0, **kw) -> ModelParams:
    per_culture = {
        Culture.BASIC: CultureParams(p_basic, q, size_basic, jitter),
        Culture.CLINICAL: CultureParams(p_clinical, q, size_clinical, jitter),
    }
    return ModelParams(per_culture=per_culture, **kw)


@pytest.fixture
def inger_params():
    return default_params()


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_REPORT: list[tuple[str, bool, str]] = []


@pytest.fixture
def report():
    def add(criterion: str, ok: bool, detail: str) -> None:
        ACCEPTANCE_REPORT.append((criterion, bool(ok), detail))
    return add


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE_REPORT:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}")
