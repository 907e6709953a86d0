"""The interactive shell: dot-command dispatch, package selection, snippet
cycling, execution, editing, and session persistence."""

from __future__ import annotations

import os
import re
import shlex
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .. import ingest
from ..forest import RunnabilityModel, featurize, predict
from ..jsa import correct_snippets, sort_snippets, tokenize
from ..search import EmptyQueryError, build_index, query_packages
from .environment import (EnvironmentError_, EnvironmentLost, ReplEnvironment,
                          create_environment, run_package_manager)
from .io import BaseIO, TerminalIO
from .sandbox import SandboxClient, SandboxCrashed, SandboxError, SandboxTimeout

PRINT_CAP = 10_000
_REDECLARE_RE = re.compile(r"already been declared|redeclar", re.IGNORECASE)

HELP_TEXT = """\
commands:
  .packages <query>   search the package database (enter installs the selection)
  .samples [package]  cycle example snippets (F3/Ctrl-N next, F2/Ctrl-P previous)
  .install <package>  install into the session environment
  .uninstall <package>  remove from the session environment
  .editor             edit and re-run the session buffer
  .reset              clear evaluator state and the session buffer
  .save <file>        write the session buffer to a runnable file
  .help               this text
  .exit               leave the shell
anything else is evaluated as JavaScript."""


@dataclass
class ShellConfig:
    db: Path
    model: Optional[Path] = None
    workspace: Optional[Path] = None
    keep_env: bool = False
    runtime: str = "node"
    package_manager: str = "npm"
    runner: Optional[str] = None
    editor: Optional[str] = None
    now: Optional[str] = None

    @classmethod
    def from_environ(cls, db, **overrides) -> "ShellConfig":
        env = os.environ
        cfg = cls(
            db=Path(env.get("QUARRY_DB", str(db))),
            runtime=env.get("QUARRY_JS_RUNTIME", "node"),
            package_manager=env.get("QUARRY_PACKAGE_MANAGER", "npm"),
            runner=env.get("QUARRY_SANDBOX_RUNNER"),
            editor=env.get("QUARRY_EDITOR"),
            now=env.get("QUARRY_NOW"),
        )
        for key, value in overrides.items():
            if value is not None:
                setattr(cfg, key, value)
        return cfg


def needs_continuation(code: str) -> bool:
    """True when the input has an unclosed bracket or template literal."""
    depth = 0
    for tok in tokenize(code):
        if tok.kind == "punctuator":
            if tok.text in "([{":
                depth += 1
            elif tok.text in ")]}":
                depth = max(0, depth - 1)
        elif tok.kind == "invalid" and tok.text.startswith(("`", "'", '"')):
            return True
    return depth > 0


class ReplShell:
    def __init__(self, config: ShellConfig, io: Optional[BaseIO] = None):
        self.config = config
        self.io = io or TerminalIO()
        self.env: Optional[ReplEnvironment] = None
        self.sandbox: Optional[SandboxClient] = None
        self.index = None
        self.model: Optional[RunnabilityModel] = None
        self._samples: list[tuple[str, str]] = []  # (package, corrected text)
        self._running = False

    # --- startup / teardown

    def start(self) -> None:
        self.model = (RunnabilityModel.load(self.config.model)
                      if self.config.model else None)
        self.index = build_index(self.config.db,
                                 probabilities=self._probabilities())
        workspace = self.config.workspace or Path.home() / ".cache" / "quarry-envs"
        self.env = create_environment(workspace)
        self.io.write(f"environment: {self.env.root_dir}")
        if self.config.runner:
            try:
                self.sandbox = SandboxClient(
                    self.config.runtime, self.config.runner,
                    cwd=self.env.root_dir, on_output=self._on_sandbox_output)
            except SandboxError as exc:
                self.io.write(f"warning: sandbox unavailable ({exc})")
        else:
            self.io.write("warning: no sandbox runner configured; "
                          "code execution is disabled")

    def _probabilities(self) -> Optional[dict]:
        if self.model is None:
            return None
        now = self.config.now or datetime.now(timezone.utc).isoformat()
        probs = {}
        for record, _ in ingest.iter_packages(self.config.db):
            probs[record.name] = predict(self.model, featurize(record, now))
        return probs

    def _on_sandbox_output(self, doc: dict) -> None:
        text = doc.get("text", "")
        for line in str(text).split("\n"):
            self.io.write(f"out| {line}")

    def run(self) -> int:
        self.start()
        self.io.write("type .help for commands")
        self._running = True
        while self._running:
            line = self.io.read_command("> ")
            if line is None:
                self.cmd_exit()
                break
            line = line.rstrip()
            if not line.strip():
                continue
            try:
                self.dispatch(line)
            except EnvironmentLost as exc:
                self.io.write(f"error: {exc}")
                self.io.write("the session environment is gone; "
                              ".exit and start a new session")
            except EnvironmentError_ as exc:
                self.io.write(f"error: {exc}")
        return 0

    # --- dispatch

    def dispatch(self, line: str) -> None:
        if not line.startswith("."):
            self.execute(self._collect_continuation(line))
            return
        parts = line.split(None, 1)
        name = parts[0]
        arg = parts[1].strip() if len(parts) > 1 else ""
        handlers = {
            ".packages": lambda: self.cmd_packages(arg),
            ".samples": lambda: self.cmd_samples(arg),
            ".install": lambda: self.cmd_install(arg),
            ".uninstall": lambda: self.cmd_uninstall(arg),
            ".editor": lambda: self.cmd_editor(),
            ".reset": lambda: self.cmd_reset(),
            ".save": lambda: self.cmd_save(arg),
            ".help": lambda: self.io.write(HELP_TEXT),
            ".exit": lambda: self.cmd_exit(),
        }
        handler = handlers.get(name)
        if handler is None:
            self.io.write(f"unknown command {name}")
            self.io.write(HELP_TEXT)
            return
        handler()

    def _collect_continuation(self, first: str) -> str:
        code = first
        while needs_continuation(code):
            more = self.io.read_command("... ")
            if more is None:
                break
            code += "\n" + more
        return code

    # --- package search and selection

    def cmd_packages(self, query: str) -> None:
        if not query:
            self.io.write("usage: .packages <search terms>")
            return
        assert self.index is not None
        try:
            result = query_packages(query, self.index, mode="runnability")
        except EmptyQueryError:
            self.io.write("usage: .packages <search terms> "
                          "(the query had no searchable words)")
            return
        if not result.entries:
            self.io.write("no packages found")
            return
        names = [name for name, _ in result.entries]
        records = {}
        for name in names:
            record, _ = ingest.load_package(self.config.db, name)
            records[name] = record
        for i, name in enumerate(names, 1):
            rec = records[name]
            desc = (rec.description or "").strip()
            self.io.write(f"{i:3}. {name}  [stars {rec.stars}]  {desc}")
        cursor = 0
        height = self.io.viewport_height()
        self.io.write(f"cursor: {names[cursor]}")
        while True:
            key = self.io.read_key()
            if key in ("down", "ctrl-n"):
                cursor = min(cursor + 1, len(names) - 1)
                self.io.write(f"cursor: {names[cursor]}")
            elif key in ("up", "ctrl-p"):
                cursor = max(cursor - 1, 0)
                self.io.write(f"cursor: {names[cursor]}")
            elif key == "enter":
                answer = self.io.ask(f"install {names[cursor]}? [y/n] ")
                if answer.strip().lower().startswith("y"):
                    self.cmd_install(names[cursor])
                return
            elif key == "escape":
                return
            if cursor < max(0, len(names) - height):
                pass  # viewport bookkeeping is visual only in transcript mode

    # --- snippets

    def cmd_samples(self, arg: str) -> None:
        if arg:
            targets = [arg]
        else:
            assert self.env is not None
            if not self.env.installed:
                self.io.write("nothing installed yet; .packages <query> to "
                              "find one, or .samples <package>")
                return
            targets = list(self.env.installed)
        self._samples = []
        for name in targets:
            try:
                _, snippets = ingest.load_package(self.config.db, name)
            except ingest.DatabaseError:
                self.io.write(f"package not found: {name}")
                return
            corrected = sort_snippets(
                correct_snippets([s.raw_text for s in snippets]))
            self._samples.extend(
                (name, c.report.corrected) for c in corrected)
        if not self._samples:
            self.io.write("no snippets available")
            return
        pos = 0
        self._show_sample(pos)
        while True:
            key = self.io.read_key()
            if key in ("f3", "ctrl-n", "down"):
                pos = (pos + 1) % len(self._samples)
                self._show_sample(pos)
            elif key in ("f2", "ctrl-p", "up"):
                pos = (pos - 1) % len(self._samples)
                self._show_sample(pos)
            elif key == "enter":
                _, text = self._samples[pos]
                assert self.env is not None
                self.env.last_viewed_snippet = text
                self.execute(text)
                return
            elif key == "escape":
                assert self.env is not None
                self.env.last_viewed_snippet = self._samples[pos][1]
                return

    def _show_sample(self, pos: int) -> None:
        name, text = self._samples[pos]
        self.io.write(f"[sample {pos + 1}/{len(self._samples)} from {name}]")
        for line in text.split("\n"):
            self.io.write(f"| {line}")

    # --- install / uninstall

    def _run_pm(self, verb: str, package: str) -> None:
        if not package:
            self.io.write(f"usage: .{verb} <package>")
            return
        assert self.env is not None
        self.io.write(f"{verb}ing {package} ...")
        result = run_package_manager(
            self.env, self.config.package_manager, verb, package,
            on_output=lambda line: self.io.write(f"pm| {line}"))
        if result.ok:
            self.io.write(f"{verb} ok: {package}")
            self.io.write("installed: " + (", ".join(self.env.installed) or "(none)"))
        else:
            tail = "\n".join(result.output.split("\n")[-5:])
            self.io.write(f"{verb} failed: {package}")
            if tail:
                self.io.write(tail)

    def cmd_install(self, package: str) -> None:
        self._run_pm("install", package)

    def cmd_uninstall(self, package: str) -> None:
        self._run_pm("uninstall", package)

    # --- execution

    def execute(self, code: str) -> None:
        assert self.env is not None
        self.env.check_alive()
        if self.sandbox is None:
            self.io.write("error: no sandbox available")
            return
        try:
            result = self.sandbox.eval(code)
        except SandboxTimeout:
            self.io.write("error: execution timed out")
            return
        except SandboxCrashed:
            self._recover_sandbox()
            return
        if result.ok:
            value = result.value_repr if result.value_repr is not None else "undefined"
            if len(value) > PRINT_CAP:
                value = value[:PRINT_CAP] + " ... (truncated)"
            self.io.write(f"=> {value}")
            self.env.session_buffer.append(code)
        else:
            error = result.error or {}
            name = error.get("name", "Error")
            message = error.get("message", "")
            self.io.write(f"! {name}: {message}")
            if _REDECLARE_RE.search(message or ""):
                self.io.write("hint: .reset clears the session state so the "
                              "name can be declared again")

    def _recover_sandbox(self) -> None:
        self.io.write("error: the sandbox crashed; restarting it")
        assert self.sandbox is not None and self.env is not None
        self.sandbox.restart()
        if self.env.session_buffer:
            answer = self.io.ask("replay the session buffer? [y/n] ")
            if answer.strip().lower().startswith("y"):
                self._replay(self.env.session_buffer)

    def _replay(self, entries: list[str]) -> bool:
        assert self.sandbox is not None
        for lineno, entry in enumerate(entries, 1):
            try:
                result = self.sandbox.eval(entry)
            except SandboxError as exc:
                self.io.write(f"replay stopped at entry {lineno}: {exc}")
                return False
            if not result.ok:
                error = result.error or {}
                self.io.write(
                    f"replay error at entry {lineno}: "
                    f"{error.get('name', 'Error')}: {error.get('message', '')}")
                return False
        return True

    # --- editor / session commands

    def cmd_editor(self) -> None:
        assert self.env is not None
        initial = list(self.env.session_buffer)
        if not initial and self.env.last_viewed_snippet:
            answer = self.io.ask("the buffer is empty; load the last viewed "
                                 "snippet? [y/n] ")
            if answer.strip().lower().startswith("y"):
                initial = self.env.last_viewed_snippet.split("\n")
        edited = self._edit(initial)
        if edited is None:
            self.io.write("editor cancelled; buffer unchanged")
            return
        self.env.session_buffer = [line for line in edited if line.strip()]
        if self.sandbox is not None:
            self.sandbox.reset()
        self.io.write("state reset; replaying the buffer")
        if self.env.session_buffer:
            ok = self._replay(self.env.session_buffer)
            if ok:
                self.io.write("replay ok")

    def _edit(self, initial: list[str]) -> Optional[list[str]]:
        if self.config.editor:
            return self._edit_external(initial)
        return self.io.edit_lines(initial)

    def _edit_external(self, initial: list[str]) -> Optional[list[str]]:
        import subprocess
        import tempfile

        assert self.env is not None
        fd, path = tempfile.mkstemp(suffix=".js", prefix="quarry-edit-",
                                    dir=self.env.root_dir)
        os.close(fd)
        Path(path).write_text("\n".join(initial) + ("\n" if initial else ""),
                              encoding="utf-8")
        cmd = shlex.split(self.config.editor) + [path]
        try:
            proc = subprocess.run(cmd)
        except OSError as exc:
            self.io.write(f"error: cannot run editor: {exc}")
            return None
        if proc.returncode != 0:
            return None
        content = Path(path).read_text(encoding="utf-8")
        os.unlink(path)
        return content.split("\n")

    def cmd_reset(self) -> None:
        assert self.env is not None
        if self.sandbox is not None:
            self.sandbox.reset()
        self.env.session_buffer.clear()
        self.io.write("session state cleared (installed packages kept)")

    def cmd_save(self, arg: str) -> None:
        if not arg:
            self.io.write("usage: .save <file>")
            return
        assert self.env is not None
        path = Path(arg)
        if not path.is_absolute():
            path = self.env.root_dir / path
        text = "\n".join(self.env.session_buffer) + "\n"
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            self.io.write(f"error: cannot write {path}: {exc}")
            return
        self.io.write(f"saved {len(self.env.session_buffer)} entries to {path}")

    def cmd_exit(self) -> None:
        self._running = False
        if self.sandbox is not None:
            self.sandbox.shutdown()
        if self.env is not None:
            if self.config.keep_env:
                self.io.write(f"keeping environment {self.env.root_dir}")
            else:
                self.env.destroy()
        self.io.write("bye")


def run_transcript(config: ShellConfig, transcript_path) -> int:
    from .io import TranscriptIO

    lines = Path(transcript_path).read_text(encoding="utf-8").split("\n")
    io = TranscriptIO(lines)
    shell = ReplShell(config, io=io)
    return shell.run()
