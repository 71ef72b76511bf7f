import pytest

from tamc.solver import SolverUnavailable, resolve_command, run_smt


@pytest.fixture(scope="session")
def solver_cmd():
    """Command line for the SMT backend, or skip when none can be set up."""
    try:
        cmd = resolve_command(None)
        out = run_smt("(check-sat)", cmd, timeout=120)
    except (SolverUnavailable, Exception) as exc:  # noqa: BLE001 - any startup failure skips
        pytest.skip(f"SMT solver unavailable: {exc}")
    if "sat" not in out:
        pytest.skip(f"SMT solver smoke test returned {out!r}")
    return cmd
