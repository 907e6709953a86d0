"""Error-tolerant JavaScript tokenizer.

Total over arbitrary input: unrecognized or unterminated constructs become
``invalid`` tokens instead of failures. Each token carries the whitespace
that preceded it, so concatenating ``leading + text`` over the stream
reproduces the source byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

KEYWORDS = frozenset("""
await break case catch class const continue debugger default delete do else
enum export extends false finally for function if import in instanceof let
new null return static super switch this throw true try typeof var void
while with yield
""".split())

# longest-match punctuator list
PUNCTUATORS = sorted([
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=",
    "??=", "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "**", "<<", ">>",
    "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/",
    "%", "&", "|", "^", "!", "~", "?", ":", "=", ".", "@",
], key=len, reverse=True)

_ID_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_ID_CONT = _ID_START | set("0123456789")
_DIGITS = set("0123456789")

# a `/` starts a regex unless the previous significant token can end an
# expression
_NO_REGEX_AFTER_KINDS = {"identifier", "number", "string", "template", "regex"}
_NO_REGEX_AFTER_TEXT = {")", "]", "}", "this", "true", "false", "null", "super", "++", "--"}


@dataclass
class Token:
    kind: str
    text: str
    line: int  # 1-based
    column: int  # 0-based
    leading: str = ""
    offset: int = 0  # byte offset of text within the source

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.column})"


def detokenize(tokens: list[Token]) -> str:
    return "".join(t.leading + t.text for t in tokens)


class _Scanner:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 0
        self.tokens: list[Token] = []
        self.pending = ""  # whitespace trivia awaiting the next token

    def peek(self, ahead=0):
        i = self.pos + ahead
        return self.src[i] if i < len(self.src) else ""

    def _advance_over(self, text: str):
        for ch in text:
            if ch == "\n":
                self.line += 1
                self.col = 0
            else:
                self.col += 1
        self.pos += len(text)

    def emit(self, kind: str, text: str):
        self.tokens.append(Token(kind=kind, text=text, line=self.line,
                                 column=self.col, leading=self.pending,
                                 offset=self.pos))
        self.pending = ""
        self._advance_over(text)

    def last_significant(self):
        for tok in reversed(self.tokens):
            if tok.kind not in ("newline", "comment"):
                return tok
        return None

    def regex_allowed(self):
        prev = self.last_significant()
        if prev is None:
            return True
        if prev.kind in _NO_REGEX_AFTER_KINDS:
            return False
        if prev.text in _NO_REGEX_AFTER_TEXT:
            return False
        return True

    # --- scanners for multi-char constructs; each returns the lexeme or None

    def scan_string(self):
        quote = self.peek()
        i = self.pos + 1
        while i < len(self.src):
            ch = self.src[i]
            if ch == "\\":
                i += 2
                continue
            if ch == quote:
                return self.src[self.pos:i + 1], "string"
            if ch == "\n":
                break
            i += 1
        # unterminated: take to end of line / input
        end = self.src.find("\n", self.pos)
        end = len(self.src) if end == -1 else end
        return self.src[self.pos:end], "invalid"

    def scan_template(self):
        # one token for the whole literal, nesting ${ } and inner templates
        i = self.pos + 1
        depth = 0
        while i < len(self.src):
            ch = self.src[i]
            if ch == "\\":
                i += 2
                continue
            if depth == 0 and ch == "`":
                return self.src[self.pos:i + 1], "template"
            if ch == "$" and self.src[i:i + 2] == "${":
                depth += 1
                i += 2
                continue
            if depth > 0:
                if ch == "{":
                    depth += 1
                elif ch == "}":
                    depth -= 1
            i += 1
        return self.src[self.pos:], "invalid"

    def scan_line_comment(self):
        end = self.src.find("\n", self.pos)
        end = len(self.src) if end == -1 else end
        return self.src[self.pos:end]

    def scan_block_comment(self):
        end = self.src.find("*/", self.pos + 2)
        if end == -1:
            return self.src[self.pos:], "invalid"
        return self.src[self.pos:end + 2], "comment"

    def scan_regex(self):
        i = self.pos + 1
        in_class = False
        while i < len(self.src):
            ch = self.src[i]
            if ch == "\\":
                i += 2
                continue
            if ch == "\n":
                return None
            if ch == "[":
                in_class = True
            elif ch == "]":
                in_class = False
            elif ch == "/" and not in_class:
                i += 1
                while i < len(self.src) and self.src[i] in _ID_CONT:
                    i += 1
                return self.src[self.pos:i]
            i += 1
        return None

    def scan_number(self):
        i = self.pos
        src = self.src
        if src[i] == "0" and src[i + 1:i + 2].lower() in ("x", "o", "b"):
            i += 2
            while i < len(src) and (src[i] in _ID_CONT):
                i += 1
            return src[self.pos:i]
        while i < len(src) and src[i] in _DIGITS:
            i += 1
        if i < len(src) and src[i] == ".":
            i += 1
            while i < len(src) and src[i] in _DIGITS:
                i += 1
        if i < len(src) and src[i] in "eE":
            j = i + 1
            if j < len(src) and src[j] in "+-":
                j += 1
            if j < len(src) and src[j] in _DIGITS:
                i = j
                while i < len(src) and src[i] in _DIGITS:
                    i += 1
        if i < len(src) and src[i] == "n":  # bigint
            i += 1
        return src[self.pos:i]

    def run(self):
        src = self.src
        while self.pos < len(src):
            ch = src[self.pos]
            if ch == "\n":
                self.emit("newline", "\n")
                continue
            if ch in " \t\r\f\v":
                self.pending += ch
                self.pos += 1
                self.col += 1
                continue
            if ch == "/" and self.peek(1) == "/":
                self.emit("comment", self.scan_line_comment())
                continue
            if ch == "/" and self.peek(1) == "*":
                text, kind = self.scan_block_comment()
                self.emit(kind, text)
                continue
            if ch in "'\"":
                text, kind = self.scan_string()
                self.emit(kind, text)
                continue
            if ch == "`":
                text, kind = self.scan_template()
                self.emit(kind, text)
                continue
            if ch in _ID_START:
                i = self.pos
                while i < len(src) and src[i] in _ID_CONT:
                    i += 1
                word = src[self.pos:i]
                self.emit("keyword" if word in KEYWORDS else "identifier", word)
                continue
            if ch in _DIGITS or (ch == "." and self.peek(1) in _DIGITS):
                self.emit("number", self.scan_number())
                continue
            if ch == "/" and self.regex_allowed():
                lexeme = self.scan_regex()
                if lexeme is not None:
                    self.emit("regex", lexeme)
                    continue
            for punct in PUNCTUATORS:
                if src.startswith(punct, self.pos):
                    self.emit("punctuator", punct)
                    break
            else:
                self.emit("invalid", ch)
        self.tokens.append(Token(kind="eof", text="", line=self.line,
                                 column=self.col, leading=self.pending,
                                 offset=self.pos))
        return self.tokens


def tokenize(source: str) -> list[Token]:
    return _Scanner(source).run()
