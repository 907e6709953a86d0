"""Client side of the sandbox evaluation protocol.

The shell spawns the configured JavaScript runtime with the runner script
and exchanges one JSON document per line over stdio. Out-of-band lines with
id 0 (console output, unhandled rejections) are delivered to a callback as
they arrive; everything else is matched to its request id.
"""

from __future__ import annotations

import json
import subprocess
import threading
import queue
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional


class SandboxError(RuntimeError):
    pass


class SandboxCrashed(SandboxError):
    pass


class SandboxTimeout(SandboxError):
    pass


@dataclass
class EvalResult:
    ok: bool
    value_repr: Optional[str] = None
    error: Optional[dict] = None


class SandboxClient:
    def __init__(self, runtime: str, runner: str, cwd,
                 on_output: Optional[Callable[[dict], None]] = None,
                 timeout: float = 30.0):
        self.runtime = runtime
        self.runner = runner
        self.cwd = Path(cwd)
        self.on_output = on_output
        self.timeout = timeout
        self.next_id = 1
        self.proc: Optional[subprocess.Popen] = None
        self._responses: "queue.Queue[Optional[dict]]" = queue.Queue()
        self.start()

    # --- process lifecycle

    def start(self) -> None:
        try:
            self.proc = subprocess.Popen(
                [self.runtime, self.runner], cwd=self.cwd,
                stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL, text=True, bufsize=1)
        except OSError as exc:
            raise SandboxError(f"cannot start sandbox runtime: {exc}")
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    def _read_loop(self) -> None:
        proc = self.proc
        assert proc is not None and proc.stdout is not None
        for line in proc.stdout:
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except ValueError:
                continue
            if doc.get("id") == 0:
                if self.on_output:
                    self.on_output(doc)
                continue
            self._responses.put(doc)
        self._responses.put(None)  # EOF sentinel

    def alive(self) -> bool:
        return self.proc is not None and self.proc.poll() is None

    def _request(self, op: str, code: Optional[str] = None) -> dict:
        if not self.alive():
            raise SandboxCrashed("sandbox process is not running")
        req = {"id": self.next_id, "op": op}
        if code is not None:
            req["code"] = code
        self.next_id += 1
        assert self.proc is not None and self.proc.stdin is not None
        try:
            self.proc.stdin.write(json.dumps(req) + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError):
            raise SandboxCrashed("sandbox pipe closed")
        while True:
            try:
                doc = self._responses.get(timeout=self.timeout)
            except queue.Empty:
                raise SandboxTimeout(f"no response to {op} within {self.timeout}s")
            if doc is None:
                raise SandboxCrashed("sandbox exited mid-request")
            if doc.get("id") == req["id"]:
                return doc
            # stale response from a previous crashed exchange; drop it

    # --- operations

    def eval(self, code: str) -> EvalResult:
        doc = self._request("eval", code)
        return EvalResult(ok=bool(doc.get("ok")),
                          value_repr=doc.get("value_repr"),
                          error=doc.get("error"))

    def reset(self) -> None:
        self._request("reset")

    def ping(self) -> bool:
        return bool(self._request("ping").get("ok"))

    def shutdown(self) -> None:
        if not self.alive():
            return
        try:
            self._request("shutdown")
        except SandboxError:
            pass
        assert self.proc is not None
        try:
            self.proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self.proc.kill()

    def restart(self) -> None:
        if self.proc is not None and self.proc.poll() is None:
            self.proc.kill()
        self._responses = queue.Queue()
        self.start()
