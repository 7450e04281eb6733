"""Run a script through an external LAMMPS executable and capture how it ended."""

from __future__ import annotations

import os
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

RUNNER_ENV = "LAMMPS_LINT_RUNNER"
INPUT_NAME = "in.lammps"
LOG_NAME = "log.lammps"
# scripts refer to potentials as ../../../potentials/<file>, so each run sits three levels down
_RUN_SUBDIR = ("case", "model", "sample")


class RunnerUnavailable(RuntimeError):
    """The configured executable does not exist; not a property of the script."""


@dataclass(frozen=True)
class RunnerConfig:
    executable: str
    timeout: float = 300.0
    potentials_dir: str | None = None
    # keep scratch trees under this directory instead of deleting them
    keep_dir: str | None = None

    @classmethod
    def from_env(cls, executable: str | None = None, **kwargs) -> "RunnerConfig | None":
        exe = os.environ.get(RUNNER_ENV) or executable
        return cls(exe, **kwargs) if exe else None


@dataclass(frozen=True)
class ExecOutcome:
    ok: bool
    exit_status: int | None
    wall_time: float
    last_log_line: str
    log_path: str | None = None
    timed_out: bool = False
    # last line starting with ERROR, which recent LAMMPS versions follow with an echo of the input
    error_line: str = ""

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "exit_status": self.exit_status,
            "wall_time": round(self.wall_time, 3),
            "last_log_line": self.last_log_line,
            "log_path": self.log_path,
            "timed_out": self.timed_out,
            "error_line": self.error_line,
        }


def resolve_executable(executable: str) -> str:
    found = shutil.which(executable)
    if found is None:
        raise RunnerUnavailable(f"LAMMPS executable {executable!r} not found")
    return found


def last_nonempty_line(text: str) -> str:
    for line in reversed(text.splitlines()):
        if line.strip():
            return line.strip()
    return ""


def last_error_line(text: str) -> str:
    for line in reversed(text.splitlines()):
        if line.lstrip().startswith("ERROR"):
            return line.strip()
    return ""


def _prepare(root: Path, script_text: str, potentials_dir: str | None) -> Path:
    run_dir = root.joinpath(*_RUN_SUBDIR)
    run_dir.mkdir(parents=True)
    if potentials_dir:
        shutil.copytree(potentials_dir, root / "potentials")
    (run_dir / INPUT_NAME).write_text(script_text, encoding="utf-8")
    return run_dir


def run_external(script_text: str, config: RunnerConfig) -> ExecOutcome:
    """Write the script into a fresh scratch tree and run ``<exe> -in <file> -log <log>``.

    A run succeeds when the process exits 0 and no ``ERROR`` line was
    written.  On timeout the process is killed and the last log line written
    so far is kept.
    """
    exe = resolve_executable(config.executable)
    if config.keep_dir:
        Path(config.keep_dir).mkdir(parents=True, exist_ok=True)
        root = Path(tempfile.mkdtemp(prefix="run-", dir=config.keep_dir))
        cleanup = None
    else:
        cleanup = tempfile.TemporaryDirectory(prefix="lammps-lint-")
        root = Path(cleanup.name)
    try:
        run_dir = _prepare(root, script_text, config.potentials_dir)
        log = run_dir / LOG_NAME
        start = time.monotonic()
        proc = subprocess.Popen(
            [exe, "-in", INPUT_NAME, "-log", LOG_NAME],
            cwd=run_dir,
            stdin=subprocess.DEVNULL,
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            text=True,
            errors="replace",
        )
        timed_out = False
        try:
            stdout, _ = proc.communicate(timeout=config.timeout)
        except subprocess.TimeoutExpired:
            proc.kill()
            stdout, _ = proc.communicate()
            timed_out = True
        wall = time.monotonic() - start
        log_text = log.read_text(encoding="utf-8", errors="replace") if log.exists() else ""
        last = last_nonempty_line(log_text) or last_nonempty_line(stdout or "")
        if timed_out and not last:
            last = f"timeout after {config.timeout:g} s"
        error = last_error_line(log_text) or last_error_line(stdout or "")
        ok = not timed_out and proc.returncode == 0 and not error
        return ExecOutcome(
            ok, None if timed_out else proc.returncode, wall, last,
            str(log) if config.keep_dir else None, timed_out, error,
        )
    finally:
        if cleanup is not None:
            cleanup.cleanup()
