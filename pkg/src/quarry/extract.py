"""Fenced code block extraction from README markdown and JS filtering."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, asdict
from typing import Optional

from .records import PackageRecord

# Language tags accepted as JavaScript; everything else is dropped.
JS_TAGS = {"js", "javascript", "jsx", "node", "es6", "mjs", "cjs"}

# First-word shell prefixes that mark a block as a terminal transcript.
COMMAND_PREFIXES = {"npm", "yarn", "node", "git", "cd", "curl", "$", "#", ">"}

NON_JS_TAG = "non_js_tag"
COMMAND_PREFIX = "command_prefix"
JSON_LITERAL = "json_literal"

_FENCE_RE = re.compile(r"^ {0,3}(`{3,}|~{3,})(.*)$")


@dataclass
class FencedBlock:
    ordinal: int
    lang_tag: Optional[str]
    text: str
    drop_reason: Optional[str] = None


@dataclass
class Snippet:
    package_name: str
    ordinal: int
    raw_text: str
    corrected_text: Optional[str] = None
    error_count: Optional[int] = None
    comment_only: Optional[bool] = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Snippet":
        return cls(**d)


def extract_fenced_blocks(markdown: str) -> list[FencedBlock]:
    """All triple-backtick/tilde fences in document order.

    An unterminated final fence captures to end of document. Indented code
    without a fence is ignored.
    """
    blocks: list[FencedBlock] = []
    lines = markdown.split("\n")
    i = 0
    while i < len(lines):
        m = _FENCE_RE.match(lines[i])
        if not m:
            i += 1
            continue
        marker, info = m.group(1), m.group(2).strip()
        # backtick info strings may not contain backticks (it would be inline code)
        if marker[0] == "`" and "`" in info:
            i += 1
            continue
        tag = info.split()[0].lower() if info else None
        close = re.compile(r"^ {0,3}%s{%d,}\s*$" % (re.escape(marker[0]), len(marker)))
        body: list[str] = []
        i += 1
        while i < len(lines) and not close.match(lines[i]):
            body.append(lines[i])
            i += 1
        if i < len(lines):
            i += 1  # consume the closing fence
        blocks.append(FencedBlock(ordinal=len(blocks), lang_tag=tag, text="\n".join(body)))
    return blocks


def _first_nonblank_line(text: str) -> str:
    for line in text.split("\n"):
        if line.strip():
            return line.strip()
    return ""


def _is_json_literal(text: str) -> bool:
    t = text.strip()
    if not t or t[0] not in "{[":
        return False
    try:
        json.loads(t)
        return True
    except ValueError:
        return False


def classify_block(block: FencedBlock) -> FencedBlock:
    """Set drop_reason on non-JavaScript blocks; kept blocks stay unmarked."""
    if block.lang_tag is not None and block.lang_tag not in JS_TAGS:
        block.drop_reason = NON_JS_TAG
        return block
    first = _first_nonblank_line(block.text)
    word = first.split()[0] if first.split() else ""
    if word in COMMAND_PREFIXES or (first and first[0] in "$#>"):
        block.drop_reason = COMMAND_PREFIX
        return block
    if _is_json_literal(block.text):
        block.drop_reason = JSON_LITERAL
        return block
    block.drop_reason = None
    return block


def classify_blocks(markdown: str) -> list[FencedBlock]:
    return [classify_block(b) for b in extract_fenced_blocks(markdown)]


def extract_snippets(record: PackageRecord) -> list[Snippet]:
    """Kept blocks as Snippets, preserving source-fence ordinals."""
    return [
        Snippet(package_name=record.name, ordinal=b.ordinal, raw_text=b.text)
        for b in classify_blocks(record.readme_text)
        if b.drop_reason is None
    ]
