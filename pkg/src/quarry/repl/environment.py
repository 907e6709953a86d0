"""Throwaway project directories the REPL evaluates code inside.

Each session gets a fresh uniquely-named directory with an initialized
manifest, so installs never pollute the user's own projects. The installed
set is always re-read from the manifest after package-manager runs rather
than tracked by hand.
"""

from __future__ import annotations

import json
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

MANIFEST = "package.json"


class EnvironmentError_(RuntimeError):
    pass


class EnvironmentLost(EnvironmentError_):
    """The environment directory disappeared out from under the session."""


@dataclass
class InstallResult:
    ok: bool
    output: str


@dataclass
class ReplEnvironment:
    root_dir: Path
    manifest_initialized: bool = False
    installed: list[str] = field(default_factory=list)
    session_buffer: list[str] = field(default_factory=list)
    last_viewed_snippet: Optional[str] = None

    def check_alive(self) -> None:
        if not self.root_dir.is_dir() or not (self.root_dir / MANIFEST).is_file():
            raise EnvironmentLost(f"environment directory lost: {self.root_dir}")

    def refresh_installed(self) -> None:
        self.check_alive()
        manifest = json.loads((self.root_dir / MANIFEST).read_text(encoding="utf-8"))
        deps = manifest.get("dependencies") or {}
        self.installed = sorted(deps)

    def destroy(self) -> None:
        shutil.rmtree(self.root_dir, ignore_errors=True)


def create_environment(base) -> ReplEnvironment:
    base = Path(base)
    try:
        base.mkdir(parents=True, exist_ok=True)
        root = Path(tempfile.mkdtemp(prefix="quarry-env-", dir=base))
    except OSError as exc:
        raise EnvironmentError_(f"cannot create environment under {base}: {exc}")
    manifest = {
        "name": "quarry-session",
        "version": "0.0.0",
        "private": True,
        "dependencies": {},
    }
    (root / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                 encoding="utf-8")
    return ReplEnvironment(root_dir=root, manifest_initialized=True)


def run_package_manager(env: ReplEnvironment, package_manager: str, verb: str,
                        package: str,
                        on_output: Optional[Callable[[str], None]] = None,
                        timeout: float = 300.0) -> InstallResult:
    """Run `<pm> <verb> <package>` inside the environment, streaming output."""
    env.check_alive()
    if shutil.which(package_manager) is None and not Path(package_manager).exists():
        raise EnvironmentError_(f"package manager not found: {package_manager}")
    try:
        proc = subprocess.Popen(
            [package_manager, verb, package], cwd=env.root_dir,
            stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True)
    except OSError as exc:
        raise EnvironmentError_(f"cannot run package manager: {exc}")
    lines = []
    assert proc.stdout is not None
    try:
        for line in proc.stdout:
            line = line.rstrip("\n")
            lines.append(line)
            if on_output:
                on_output(line)
        code = proc.wait(timeout=timeout)
    except subprocess.TimeoutExpired:
        proc.kill()
        return InstallResult(ok=False, output="\n".join(lines + ["(timed out)"]))
    result = InstallResult(ok=code == 0, output="\n".join(lines))
    if result.ok:
        env.refresh_installed()
    return result
