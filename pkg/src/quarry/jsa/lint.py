"""Lint rules over snippets, with automatic text-edit fixes.

Severity ``error`` marks code that cannot run: parse errors, duplicate
function parameters, and import/export syntax outside module mode. Severity
``warning`` marks fixable style issues: loose equality, missing semicolons,
and indentation that is not two spaces per bracket level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .parser import parse
from .tokens import tokenize

MAX_FIX_PASSES = 10

_EQ_FIX = {"==": "===", "!=": "!=="}


@dataclass(frozen=True)
class TextEdit:
    start: int
    end: int
    replacement: str


@dataclass
class LintFinding:
    rule_id: str
    severity: str  # "error" or "warning"
    line: int
    column: int
    message: str
    fixable: bool = False
    fix: Optional[TextEdit] = None


def _line_starts(source: str) -> list[int]:
    starts = [0]
    for i, ch in enumerate(source):
        if ch == "\n":
            starts.append(i + 1)
    return starts


def _indent_findings(source: str) -> list[LintFinding]:
    """Two-space indentation, offset from the line holding the open bracket.

    A line's expected indent is the innermost unclosed bracket's line indent
    plus two; a line starting with a closing bracket aligns with that line
    instead. Expected indents chain off computed (not actual) values, so one
    fix pass converges and a second pass finds nothing.
    """
    tokens = tokenize(source)
    starts = _line_starts(source)
    findings = []
    stack: list[int] = []  # computed indent of each unclosed bracket's line
    seen_lines = set()
    line_indent = 0
    for tok in tokens:
        if tok.kind in ("newline", "eof"):
            continue
        first_on_line = tok.line not in seen_lines
        seen_lines.add(tok.line)
        # lines spanned by a multi-line token never get a first token of
        # their own, so string/template/comment interiors are left alone
        seen_lines.update(range(tok.line, tok.line + tok.text.count("\n") + 1))
        if first_on_line:
            closes = tok.kind == "punctuator" and tok.text and tok.text[0] in ")]}"
            if closes:
                want = stack[-1] if stack else 0
            else:
                want = stack[-1] + 2 if stack else 0
            line_indent = want
            if tok.kind != "comment":
                line_start = starts[tok.line - 1]
                actual_ws = source[line_start:tok.offset]
                if tok.column != want or actual_ws != " " * tok.column:
                    findings.append(LintFinding(
                        rule_id="indent", severity="warning",
                        line=tok.line, column=0,
                        message=f"expected indentation of {want} spaces",
                        fixable=True,
                        fix=TextEdit(line_start, tok.offset, " " * want)))
        if tok.kind == "punctuator":
            for ch in tok.text:
                if ch in "([{":
                    stack.append(line_indent)
                elif ch in ")]}" and stack:
                    stack.pop()
    return findings


def lint(source: str, config: Optional[dict] = None) -> list[LintFinding]:
    config = config or {}
    source_type = config.get("source_type", "script")
    outcome = parse(source, source_type)
    findings: list[LintFinding] = []

    for err in outcome.parse_errors:
        findings.append(LintFinding(
            rule_id="import-export-in-script" if err.module_syntax else "parse-error",
            severity="error", line=err.line, column=err.column,
            message=err.message))

    for name, line, column in outcome.dupe_args:
        findings.append(LintFinding(
            rule_id="no-dupe-args", severity="error", line=line, column=column,
            message=f"duplicate parameter {name!r}"))

    for tok in tokenize(source):
        if tok.kind == "punctuator" and tok.text in _EQ_FIX:
            fixed = _EQ_FIX[tok.text]
            findings.append(LintFinding(
                rule_id="eqeqeq", severity="warning",
                line=tok.line, column=tok.column,
                message=f"expected {fixed!r} instead of {tok.text!r}",
                fixable=True,
                fix=TextEdit(tok.offset, tok.offset + len(tok.text), fixed)))

    for offset, line, column in outcome.semi_candidates:
        findings.append(LintFinding(
            rule_id="semicolon", severity="warning", line=line, column=column,
            message="missing semicolon", fixable=True,
            fix=TextEdit(offset, offset, ";")))

    findings.extend(_indent_findings(source))
    findings.sort(key=lambda f: (f.line, f.column, f.rule_id))
    return findings


def error_count(findings: list[LintFinding]) -> int:
    return sum(1 for f in findings if f.severity == "error")


def _apply_edits(source: str, edits: list[TextEdit]) -> str:
    chosen: list[TextEdit] = []
    last_end = -1
    for edit in sorted(edits, key=lambda e: (e.start, e.end)):
        if edit.start < last_end:
            continue  # overlapping fix deferred to the next pass
        chosen.append(edit)
        last_end = max(edit.end, edit.start + (0 if edit.end > edit.start else 1))
    out = source
    for edit in reversed(chosen):
        out = out[:edit.start] + edit.replacement + out[edit.end:]
    return out


def apply_fixes_report(source: str, config: Optional[dict] = None) -> tuple[str, bool]:
    """Fix until a lint pass yields no fixable findings; at most 10 passes.

    Returns (text, converged).
    """
    text = source
    for _ in range(MAX_FIX_PASSES):
        fixes = [f.fix for f in lint(text, config) if f.fixable and f.fix]
        if not fixes:
            return text, True
        updated = _apply_edits(text, fixes)
        if updated == text:
            return text, True
        text = updated
    return text, not any(f.fixable for f in lint(text, config))


def apply_fixes(source: str, config: Optional[dict] = None) -> str:
    text, _ = apply_fixes_report(source, config)
    return text
