import shutil
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from lammps_lint.runner import RUNNER_ENV

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


def real_lammps() -> str | None:
    import os

    exe = os.environ.get(RUNNER_ENV) or "lmp"
    return shutil.which(exe)


@pytest.fixture
def stub_lammps(tmp_path) -> str:
    """Path to an executable copy of the stub engine."""
    exe = tmp_path / "bin" / "lmp_stub"
    exe.parent.mkdir()
    shutil.copy(FIXTURES / "stub_lammps.py", exe)
    exe.chmod(0o755)
    return str(exe)


@pytest.fixture
def potentials(tmp_path) -> str:
    pots = tmp_path / "potentials"
    pots.mkdir()
    for n in (1, 2, 3):
        (pots / f"prompt{n}.potential").write_text("stub potential\n")
    return str(pots)


# one "PASS/FAIL <criterion>" line per acceptance check, repeated at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
