"""Error-tolerant JavaScript analysis: lexing, parsing, lint fixes, and the
snippet correction pipeline."""

from .lint import (LintFinding, TextEdit, apply_fixes, apply_fixes_report,
                   error_count, lint)
from .parser import ImportExportNode, ParseError, ParseOutcome, parse
from .pipeline import (COMMENT_MARKER, CorrectedSnippet, CorrectionReport,
                       correct_snippet, correct_snippets, is_comment_only,
                       line_deletion, rewrite_imports, sort_snippets,
                       uncomment_lines)
from .report import CorpusErrorReport, corpus_error_report, snippet_error_profile
from .tokens import Token, detokenize, tokenize

__all__ = [
    "COMMENT_MARKER", "CorpusErrorReport", "CorrectedSnippet",
    "CorrectionReport", "ImportExportNode", "LintFinding", "ParseError",
    "ParseOutcome", "TextEdit", "Token", "apply_fixes", "apply_fixes_report",
    "correct_snippet", "correct_snippets", "corpus_error_report", "detokenize",
    "error_count", "is_comment_only", "line_deletion", "lint", "parse",
    "rewrite_imports", "snippet_error_profile", "sort_snippets", "tokenize",
    "uncomment_lines",
]
