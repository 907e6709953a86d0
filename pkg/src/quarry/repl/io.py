"""Terminal and scripted I/O backends for the shell.

The shell only talks to the small interface here, so the same command loop
drives a live terminal and the deterministic transcript harness used by the
end-to-end tests.

Transcript files contain one action per line:
  plain text        typed at the prompt (also answers y/n questions)
  @key <name>       a key press in a list/cycling view (down, up, enter,
                    escape, f2, f3, ctrl-p, ctrl-n)
  @end              terminates an inline editor session
  # ...             comment, ignored
"""

from __future__ import annotations

import sys
from typing import Optional

KEYS = {"up", "down", "enter", "escape", "f2", "f3", "ctrl-p", "ctrl-n"}


class TranscriptExhausted(Exception):
    pass


class BaseIO:
    def write(self, text: str = "") -> None:
        raise NotImplementedError

    def read_command(self, prompt: str) -> Optional[str]:
        raise NotImplementedError

    def read_key(self) -> str:
        raise NotImplementedError

    def ask(self, prompt: str) -> str:
        raise NotImplementedError

    def edit_lines(self, initial: list[str]) -> Optional[list[str]]:
        """Return replacement buffer lines, or None on cancel."""
        raise NotImplementedError

    def viewport_height(self) -> int:
        return 10


class TranscriptIO(BaseIO):
    """Replays a scripted session and collects a deterministic log."""

    def __init__(self, lines: list[str], out=None):
        self.lines = [l for l in lines if not l.lstrip().startswith("#")]
        self.pos = 0
        self.out = out if out is not None else sys.stdout
        self.log: list[str] = []

    def _next(self) -> Optional[str]:
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            self.pos += 1
            return line.rstrip("\n")
        return None

    def write(self, text: str = "") -> None:
        self.log.append(text)
        self.out.write(text + "\n")

    def read_command(self, prompt: str) -> Optional[str]:
        line = self._next()
        if line is None:
            return None
        if line.startswith("@key "):
            # keys at the prompt are meaningless; skip to stay robust
            return self.read_command(prompt)
        self.write(prompt + line)
        return line

    def read_key(self) -> str:
        line = self._next()
        if line is None:
            return "escape"
        if line.startswith("@key "):
            key = line[len("@key "):].strip()
            if key in KEYS:
                return key
        # anything else ends the interactive widget
        self.pos -= 1
        return "escape"

    def ask(self, prompt: str) -> str:
        line = self._next()
        if line is None:
            return ""
        self.write(prompt + line)
        return line

    def edit_lines(self, initial: list[str]) -> Optional[list[str]]:
        collected: list[str] = []
        while True:
            line = self._next()
            if line is None or line.strip() == "@end":
                break
            collected.append(line)
        return collected


class TerminalIO(BaseIO):
    """Line-oriented interactive backend.

    Key handling reads raw escape sequences when stdin is a tty; when it is
    not, single letters (j/k/q and return) act as fallbacks so the shell
    stays usable inside dumb terminals and pipes.
    """

    _SEQUENCES = {
        "\x1b[A": "up", "\x1b[B": "down",
        "\x1bOQ": "f2", "\x1bOR": "f3",
        "\x1b[12~": "f2", "\x1b[13~": "f3",
    }

    def write(self, text: str = "") -> None:
        print(text)

    def read_command(self, prompt: str) -> Optional[str]:
        try:
            return input(prompt)
        except EOFError:
            return None

    def _read_raw_key(self) -> str:
        import termios
        import tty

        fd = sys.stdin.fileno()
        old = termios.tcgetattr(fd)
        try:
            tty.setraw(fd)
            ch = sys.stdin.read(1)
            if ch == "\x1b":
                seq = ch
                while len(seq) < 6:
                    seq += sys.stdin.read(1)
                    if seq in self._SEQUENCES:
                        return self._SEQUENCES[seq]
                    if seq[-1].isalpha() or seq[-1] == "~":
                        break
                return "escape"
            return ch
        finally:
            termios.tcsetattr(fd, termios.TCSADRAIN, old)

    def read_key(self) -> str:
        if not sys.stdin.isatty():
            ch = sys.stdin.read(1)
            if not ch:
                return "escape"
        else:
            ch = self._read_raw_key()
        if ch in KEYS:
            return ch
        mapping = {"\r": "enter", "\n": "enter", "j": "down", "k": "up",
                   "q": "escape", "\x10": "ctrl-p", "\x0e": "ctrl-n"}
        return mapping.get(ch, "escape")

    def ask(self, prompt: str) -> str:
        try:
            return input(prompt)
        except EOFError:
            return ""

    def edit_lines(self, initial: list[str]) -> Optional[list[str]]:
        self.write("-- editor: current buffer --")
        for i, line in enumerate(initial, 1):
            self.write(f"{i:3}  {line}")
        self.write("-- enter the replacement buffer; finish with a single '.' --")
        collected: list[str] = []
        while True:
            line = self.read_command("")
            if line is None or line == ".":
                break
            collected.append(line)
        return collected

    def viewport_height(self) -> int:
        import shutil

        return max(4, shutil.get_terminal_size((80, 14)).lines - 4)
