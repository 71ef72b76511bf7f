"""Locating and invoking an external SMT-LIB2 solver.

The default backend is the z3 WASM build shipped through npm, driven by a
small Node shim (`z3smt.mjs`) that reads a script on stdin and echoes solver
output.  Any other SMT-LIB2-on-stdin solver can be substituted with an
explicit command string.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
from pathlib import Path
from typing import List, Optional, Sequence

_SHIM = Path(__file__).with_name("z3smt.mjs")


class SolverUnavailable(RuntimeError):
    pass


def _candidate_module_dirs() -> List[Path]:
    dirs = []
    env = os.environ.get("TAMC_Z3_DIR")
    if env:
        dirs.append(Path(env))
    here = Path(__file__).resolve()
    for base in [Path.cwd(), *here.parents]:
        dirs.append(base / "vendor" / "z3")
    return dirs


def bootstrap_z3(target: Optional[Path] = None) -> Path:
    """Ensure an npm installation of z3-solver exists; returns its directory.

    Reuses the first existing installation; otherwise installs into `target`
    (default: ./vendor/z3) via npm."""
    for d in _candidate_module_dirs():
        if (d / "node_modules" / "z3-solver").is_dir():
            return d
    dest = target or (Path.cwd() / "vendor" / "z3")
    dest.mkdir(parents=True, exist_ok=True)
    pkg = dest / "package.json"
    if not pkg.exists():
        pkg.write_text('{\n  "dependencies": {\n    "z3-solver": "^5.1.0"\n  }\n}\n')
    proc = subprocess.run(
        ["npm", "install", "--no-audit", "--no-fund"],
        cwd=dest,
        capture_output=True,
        text=True,
        timeout=600,
    )
    if proc.returncode != 0 or not (dest / "node_modules" / "z3-solver").is_dir():
        raise SolverUnavailable(
            f"npm install of z3-solver failed:\n{proc.stdout}\n{proc.stderr}"
        )
    return dest


def default_command() -> List[str]:
    """Command for the bundled z3 backend, bootstrapping it if necessary."""
    if shutil.which("node") is None:
        raise SolverUnavailable("node is not on PATH; pass an explicit solver command")
    moddir = bootstrap_z3()
    return ["node", str(_SHIM), str(moddir)]


def resolve_command(solver: Optional[str] = None) -> List[str]:
    """Turn a --solver string into an argv list, or produce the default."""
    if solver:
        return shlex.split(solver)
    return default_command()


def run_smt(
    script: str,
    command: Optional[Sequence[str]] = None,
    timeout: float = 600.0,
) -> str:
    """Feed an SMT-LIB2 script to the solver and return its raw output."""
    argv = list(command) if command else default_command()
    try:
        proc = subprocess.run(
            argv,
            input=script,
            capture_output=True,
            text=True,
            timeout=timeout,
        )
    except FileNotFoundError as e:
        raise SolverUnavailable(f"solver command not found: {argv[0]}") from e
    except subprocess.TimeoutExpired as e:
        raise TimeoutError(f"solver exceeded {timeout}s") from e
    if proc.returncode not in (0, 1):  # some solvers exit 1 on sat/unsat
        raise SolverUnavailable(
            f"solver exited with {proc.returncode}:\n{proc.stdout}\n{proc.stderr}"
        )
    return proc.stdout
