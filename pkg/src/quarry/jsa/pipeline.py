"""Snippet correction: import rewriting, line deletion, and the full pipeline.

The pipeline mirrors how a REPL wants to consume README code: apply style
fixes, turn module syntax into require() calls so the code runs in script
mode, then comment out whatever still cannot parse. Snippets that end up
fully commented are kept but flagged so sorting can push them last.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .lint import LintFinding, apply_fixes_report, error_count, lint
from .parser import ImportExportNode, parse

COMMENT_MARKER = "// "


def _named_bindings(raw: str) -> str:
    """Translate the inside of an import brace list to destructuring syntax."""
    parts = []
    for item in raw.split(","):
        words = item.split()
        if len(words) == 3 and words[1] == "as":
            parts.append(f"{words[0]}: {words[2]}")
        elif words:
            parts.append(" ".join(words))
    return ", ".join(parts)


def _import_replacement(node: ImportExportNode) -> Optional[str]:
    if node.kind == "import":
        src = node.source
        pieces = []
        if node.namespace_name:
            pieces.append(f"const {node.namespace_name} = require({src});")
        elif node.default_name and node.named:
            pieces.append(f"const {node.default_name} = require({src});")
            pieces.append(f"const {{{_named_bindings(node.named)}}} = {node.default_name};")
        elif node.default_name:
            pieces.append(f"const {node.default_name} = require({src});")
        elif node.named is not None:
            pieces.append(f"const {{{_named_bindings(node.named)}}} = require({src});")
        else:
            pieces.append(f"require({src});")
        return "\n".join(pieces)
    # export
    if node.has_from:
        return f"require({node.source});"
    return None  # keyword removal handled by the caller


def rewrite_imports(source: str) -> str:
    """Rewrite module syntax into script-mode equivalents.

    import declarations become require() calls; export statements lose the
    `export` (and `default`) keywords. Lines the module-mode parser cannot
    make sense of are left untouched.
    """
    outcome = parse(source, "module")
    edits: list[tuple[int, int, str]] = []
    for node in outcome.imports:
        replacement = _import_replacement(node)
        if replacement is not None:
            edits.append((node.start, node.end, replacement))
        else:
            # drop the export/default keywords, keep the declaration
            keyword_end = node.export_keyword_end
            while keyword_end < len(source) and source[keyword_end] == " ":
                keyword_end += 1
            edits.append((node.start, keyword_end, ""))
    out = source
    for start, end, replacement in sorted(edits, reverse=True):
        out = out[:start] + replacement + out[end:]
    return out


def _has_module_syntax_errors(findings: Sequence[LintFinding]) -> bool:
    return any(f.rule_id == "import-export-in-script" for f in findings)


def line_deletion(source: str) -> str:
    """Comment out lines carrying errors until the source is clean or stuck."""
    lines = source.split("\n")
    for _ in range(len(lines) or 1):
        findings = lint("\n".join(lines))
        bad = sorted({f.line for f in findings if f.severity == "error"})
        progress = False
        for lineno in bad:
            idx = lineno - 1
            if idx >= len(lines):
                continue
            if lines[idx].lstrip().startswith("//"):
                continue
            lines[idx] = COMMENT_MARKER + lines[idx]
            progress = True
        if not bad or not progress:
            break
    return "\n".join(lines)


def uncomment_lines(source: str) -> str:
    """Reverse line_deletion by stripping one added marker per line."""
    out = []
    for line in source.split("\n"):
        if line.startswith(COMMENT_MARKER):
            out.append(line[len(COMMENT_MARKER):])
        else:
            out.append(line)
    return "\n".join(out)


def is_comment_only(source: str) -> bool:
    lines = [line.strip() for line in source.split("\n")]
    nonblank = [line for line in lines if line]
    return bool(nonblank) and all(line.startswith("//") for line in nonblank)


@dataclass
class CorrectionReport:
    original: str
    corrected: str
    error_count: int
    comment_only: bool
    stages: list[str] = field(default_factory=list)
    fix_converged: bool = True


def correct_snippet(raw: str) -> CorrectionReport:
    stages: list[str] = []
    text, converged = apply_fixes_report(raw)
    fixed_any = text != raw

    findings = lint(text)
    if _has_module_syntax_errors(findings):
        rewritten = rewrite_imports(text)
        if rewritten != text:
            stages.append("import_rewrite")
            text = rewritten
        findings = lint(text)

    if any(f.severity == "error" for f in findings):
        deleted = line_deletion(text)
        if deleted != text:
            stages.append("line_deletion")
            text = deleted

    # final style pass: the rewrite and deletion may expose fixable findings
    text2, converged2 = apply_fixes_report(text)
    if text2 != text or fixed_any:
        stages.insert(0, "fix_pass")
    text = text2

    final = lint(text)
    return CorrectionReport(
        original=raw, corrected=text,
        error_count=error_count(final),
        comment_only=is_comment_only(text),
        stages=stages,
        fix_converged=converged and converged2)


@dataclass
class CorrectedSnippet:
    ordinal: int
    text: str
    report: CorrectionReport

    @property
    def error_count(self) -> int:
        return self.report.error_count

    @property
    def comment_only(self) -> bool:
        return self.report.comment_only


def correct_snippets(texts: Sequence[str]) -> list[CorrectedSnippet]:
    return [CorrectedSnippet(ordinal=i, text=t, report=correct_snippet(t))
            for i, t in enumerate(texts)]


def sort_snippets(snippets: Sequence) -> list:
    """Error-free first, comment-only last, README order as the tiebreak."""
    return sorted(snippets, key=lambda s: (s.comment_only, s.error_count, s.ordinal))
