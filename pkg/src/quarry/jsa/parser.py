"""Error-recovering recursive-descent parser for a practical JavaScript subset.

Covers declarations, functions (including arrow and async), classes, control
flow, expressions, try/catch, template literals, and object/array literals.
Errors are recorded and the parser resynchronizes at the next statement
boundary, so one bad line does not hide later problems.

In ``script`` mode, import and export statements are themselves errors; in
``module`` mode they parse. The parser also collects byproducts the lint
layer consumes directly: duplicate function parameters, statements that
relied on automatic semicolon insertion, and import/export descriptors with
their source spans (used by the import rewrite).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .tokens import Token, tokenize

_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=",
               "&=", "|=", "^=", "&&=", "||=", "??="}
_BINARY_PRECEDENCE = {
    "??": 1, "||": 2, "&&": 3, "|": 4, "^": 5, "&": 6,
    "==": 7, "!=": 7, "===": 7, "!==": 7,
    "<": 8, ">": 8, "<=": 8, ">=": 8, "in": 8, "instanceof": 8,
    "<<": 9, ">>": 9, ">>>": 9,
    "+": 10, "-": 10,
    "*": 11, "/": 11, "%": 11,
    "**": 12,
}
_UNARY = {"+", "-", "!", "~", "++", "--", "typeof", "void", "delete", "await"}
_VALUE_KEYWORDS = {"this", "true", "false", "null", "super"}


@dataclass
class ParseError:
    line: int
    column: int
    message: str
    module_syntax: bool = False  # import/export seen outside module mode

    def as_tuple(self):
        return (self.line, self.column, self.message)


@dataclass
class ImportExportNode:
    kind: str  # "import" or "export"
    start: int
    end: int
    line: int
    source: Optional[str] = None  # module specifier token text, quotes included
    default_name: Optional[str] = None
    named: Optional[str] = None  # raw text between the braces
    namespace_name: Optional[str] = None
    is_default_export: bool = False
    export_keyword_end: int = 0  # end offset of `export` (+ `default`) keywords
    has_from: bool = False


@dataclass
class ParseOutcome:
    statements: list = field(default_factory=list)
    parse_errors: list[ParseError] = field(default_factory=list)
    dupe_args: list[tuple[str, int, int]] = field(default_factory=list)
    semi_candidates: list[tuple[int, int, int]] = field(default_factory=list)
    imports: list[ImportExportNode] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.parse_errors


class _Failure(Exception):
    def __init__(self, token: Token, message: str):
        self.token = token
        self.message = message


class _Parser:
    def __init__(self, source: str, source_type: str):
        self.source_type = source_type
        all_tokens = tokenize(source)
        self.tokens: list[Token] = []
        self.newline_before: list[bool] = []
        saw_newline = True
        for tok in all_tokens:
            if tok.kind in ("newline", "comment"):
                saw_newline = saw_newline or tok.kind == "newline"
                continue
            self.tokens.append(tok)
            self.newline_before.append(saw_newline)
            saw_newline = False
        self.i = 0
        self.out = ParseOutcome()

    # --- cursor helpers

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    @property
    def prev(self) -> Token:
        return self.tokens[max(0, self.i - 1)]

    def at_eof(self) -> bool:
        return self.cur.kind == "eof"

    def at(self, text: str) -> bool:
        return self.cur.text == text and self.cur.kind in ("punctuator", "keyword", "identifier")

    def nl_before(self) -> bool:
        return self.newline_before[self.i]

    def advance(self) -> Token:
        tok = self.cur
        if not self.at_eof():
            self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise _Failure(self.cur, f"expected {text!r}")
        return self.advance()

    def fail(self, message: str):
        raise _Failure(self.cur, message)

    def _token_end(self, tok: Token) -> int:
        return tok.offset + len(tok.text)

    # --- program / statements

    def parse_program(self) -> ParseOutcome:
        while not self.at_eof():
            start = self.i
            try:
                stmt = self.parse_statement()
                if stmt is not None:
                    self.out.statements.append(stmt)
            except _Failure as f:
                tok = f.token
                if tok.kind == "eof" and self.tokens[0].kind != "eof":
                    # blame the construct left hanging, not the phantom eof
                    tok = self.tokens[min(self.i, len(self.tokens) - 1) - 1]
                self.out.parse_errors.append(
                    ParseError(tok.line, tok.column, f.message))
                self.i = max(self.i, start)
                self._resync()
        return self.out

    def _resync(self):
        """Skip to a plausible statement boundary after an error."""
        self.advance()
        while not self.at_eof():
            if self.prev.text in (";", "}") or self.nl_before():
                return
            self.advance()

    def parse_statement(self):
        tok = self.cur
        text, kind = tok.text, tok.kind
        if kind == "punctuator":
            if text == "{":
                return self.parse_block()
            if text == ";":
                self.advance()
                return self._stmt("empty", tok)
        if kind == "keyword":
            if text in ("var", "let", "const"):
                return self.parse_var_decl()
            if text == "function":
                return self.parse_function(declaration=True)
            if text == "class":
                return self.parse_class()
            if text == "if":
                return self.parse_if()
            if text == "for":
                return self.parse_for()
            if text == "while":
                return self.parse_while()
            if text == "do":
                return self.parse_do_while()
            if text in ("return", "throw"):
                return self.parse_return_throw()
            if text in ("break", "continue"):
                return self.parse_break_continue()
            if text == "try":
                return self.parse_try()
            if text == "switch":
                return self.parse_switch()
            if text == "debugger":
                self.advance()
                self._terminate()
                return self._stmt("debugger", tok)
            if text == "import":
                return self.parse_import()
            if text == "export":
                return self.parse_export()
            if text == "with":
                self.advance()
                self.expect("(")
                self.parse_expression()
                self.expect(")")
                self.parse_statement()
                return self._stmt("with", tok)
        if kind == "identifier":
            if text == "async" and not self.newline_sep(1) and \
                    self._peek_text(1) == "function":
                return self.parse_function(declaration=True)
            if self._peek_text(1) == ":" and self._peek_kind(1) == "punctuator":
                self.advance()
                self.advance()
                self.parse_statement()
                return self._stmt("label", tok)
        if kind == "invalid":
            self.fail(f"unexpected character {text!r}")
        if kind == "eof":
            self.fail("unexpected end of input")
        # expression statement
        self.parse_expression()
        self._terminate()
        return self._stmt("expression", tok)

    def _peek_text(self, ahead: int) -> str:
        j = self.i + ahead
        return self.tokens[j].text if j < len(self.tokens) else ""

    def _peek_kind(self, ahead: int) -> str:
        j = self.i + ahead
        return self.tokens[j].kind if j < len(self.tokens) else "eof"

    def newline_sep(self, ahead: int) -> bool:
        j = self.i + ahead
        return self.newline_before[j] if j < len(self.tokens) else True

    def _stmt(self, stype: str, start_tok: Token) -> dict:
        return {"type": stype, "line": start_tok.line, "start": start_tok.offset,
                "end": self._token_end(self.prev)}

    def _terminate(self):
        """Consume `;` or apply automatic semicolon insertion."""
        if self.at(";"):
            self.advance()
            return
        if self.at_eof() or self.at("}") or self.nl_before():
            end = self._token_end(self.prev)
            self.out.semi_candidates.append((end, self.prev.line, self.prev.column))
            return
        self.fail("expected ';'")

    # --- declarations

    def parse_var_decl(self, in_for_header: bool = False):
        tok = self.advance()  # var/let/const
        while True:
            self.parse_binding_target()
            if self.at("="):
                self.advance()
                self.parse_assignment()
            if self.at(","):
                self.advance()
                continue
            break
        if in_for_header:
            return self._stmt("var", tok)
        if self.at("in") or (self.at("of") and self.cur.kind == "identifier"):
            self.fail("unexpected for-header keyword outside for")
        self._terminate()
        return self._stmt("var", tok)

    def parse_binding_target(self):
        if self.cur.kind == "identifier":
            self.advance()
            return
        if self.at("{") or self.at("["):
            self._skip_balanced()
            return
        self.fail("expected a binding name")

    def _skip_balanced(self):
        opener = self.advance().text
        closer = {"{": "}", "[": "]", "(": ")"}[opener]
        depth = 1
        while depth and not self.at_eof():
            t = self.cur.text
            if self.cur.kind == "punctuator":
                if t in "([{":
                    depth += 1
                elif t in ")]}":
                    depth -= 1
            if self.cur.kind == "invalid":
                self.fail(f"unexpected character {self.cur.text!r}")
            self.advance()
        if depth:
            self.fail(f"unterminated {opener!r}")

    def parse_function(self, declaration: bool):
        tok = self.cur
        if self.at("async"):
            self.advance()
        self.expect("function")
        if self.at("*"):
            self.advance()
        if self.cur.kind == "identifier":
            self.advance()
        elif declaration:
            pass  # tolerate anonymous declarations seen in snippets
        self.parse_params()
        self.parse_block()
        return self._stmt("function", tok)

    def parse_params(self):
        open_tok = self.expect("(")
        names: list[tuple[str, int, int]] = []
        seen: dict[str, int] = {}
        while not self.at(")"):
            if self.at_eof():
                self.fail("unterminated parameter list")
            if self.at("..."):
                self.advance()
            if self.cur.kind == "identifier":
                name_tok = self.advance()
                names.append((name_tok.text, name_tok.line, name_tok.column))
                if name_tok.text in seen:
                    self.out.dupe_args.append(
                        (name_tok.text, name_tok.line, name_tok.column))
                seen[name_tok.text] = seen.get(name_tok.text, 0) + 1
            elif self.at("{") or self.at("["):
                self._skip_balanced()
            else:
                self.fail("expected a parameter")
            if self.at("="):
                self.advance()
                self.parse_assignment()
            if self.at(","):
                self.advance()
        self.expect(")")
        return names, open_tok

    def parse_block(self):
        tok = self.expect("{")
        while not self.at("}"):
            if self.at_eof():
                self.fail("unterminated block")
            stmt = self.parse_statement()
            if stmt is not None:
                pass
        self.expect("}")
        return self._stmt("block", tok)

    def parse_class(self):
        tok = self.expect("class")
        if self.cur.kind == "identifier":
            self.advance()
        if self.at("extends"):
            self.advance()
            self.parse_unary_chain()
        self.expect("{")
        while not self.at("}"):
            if self.at_eof():
                self.fail("unterminated class body")
            self.parse_class_member()
        self.expect("}")
        return self._stmt("class", tok)

    def parse_class_member(self):
        if self.at(";"):
            self.advance()
            return
        while self.cur.text in ("static", "async", "get", "set") and \
                self._peek_text(1) not in ("(", "=", ";", "}"):
            self.advance()
        if self.at("*"):
            self.advance()
        if self.cur.kind in ("identifier", "keyword", "string", "number"):
            self.advance()
        elif self.at("["):
            self._skip_balanced()
        elif self.at("#") or self.cur.text == "#":
            self.advance()
            if self.cur.kind == "identifier":
                self.advance()
        else:
            self.fail("expected a class member")
        if self.at("("):  # method
            self.parse_params()
            self.parse_block()
            return
        if self.at("="):  # field with initializer
            self.advance()
            self.parse_assignment()
        if self.at(";"):
            self.advance()

    # --- control flow

    def parse_if(self):
        tok = self.expect("if")
        self.expect("(")
        self.parse_expression()
        self.expect(")")
        self.parse_statement()
        if self.at("else"):
            self.advance()
            self.parse_statement()
        return self._stmt("if", tok)

    def parse_for(self):
        tok = self.expect("for")
        if self.at("await"):
            self.advance()
        self.expect("(")
        if not self.at(";"):
            if self.cur.text in ("var", "let", "const"):
                self.parse_var_decl(in_for_header=True)
            else:
                self.parse_expression()
        if self.at("in") or self.at("of"):
            self.advance()
            self.parse_assignment()
            self.expect(")")
        else:
            self.expect(";")
            if not self.at(";"):
                self.parse_expression()
            self.expect(";")
            if not self.at(")"):
                self.parse_expression()
            self.expect(")")
        self.parse_statement()
        return self._stmt("for", tok)

    def parse_while(self):
        tok = self.expect("while")
        self.expect("(")
        self.parse_expression()
        self.expect(")")
        self.parse_statement()
        return self._stmt("while", tok)

    def parse_do_while(self):
        tok = self.expect("do")
        self.parse_statement()
        self.expect("while")
        self.expect("(")
        self.parse_expression()
        self.expect(")")
        self._terminate()
        return self._stmt("do", tok)

    def parse_return_throw(self):
        tok = self.advance()
        if not (self.at(";") or self.at("}") or self.at_eof() or self.nl_before()):
            self.parse_expression()
        elif tok.text == "throw" and not self.at(";"):
            pass  # `throw` with nothing on the line; tolerated
        self._terminate()
        return self._stmt(tok.text, tok)

    def parse_break_continue(self):
        tok = self.advance()
        if self.cur.kind == "identifier" and not self.nl_before():
            self.advance()
        self._terminate()
        return self._stmt(tok.text, tok)

    def parse_try(self):
        tok = self.expect("try")
        self.parse_block()
        handled = False
        if self.at("catch"):
            handled = True
            self.advance()
            if self.at("("):
                self.advance()
                self.parse_binding_target()
                self.expect(")")
            self.parse_block()
        if self.at("finally"):
            handled = True
            self.advance()
            self.parse_block()
        if not handled:
            self.fail("try without catch or finally")
        return self._stmt("try", tok)

    def parse_switch(self):
        tok = self.expect("switch")
        self.expect("(")
        self.parse_expression()
        self.expect(")")
        self.expect("{")
        while not self.at("}"):
            if self.at_eof():
                self.fail("unterminated switch body")
            if self.at("case"):
                self.advance()
                self.parse_expression()
                self.expect(":")
            elif self.at("default"):
                self.advance()
                self.expect(":")
            else:
                self.parse_statement()
        self.expect("}")
        return self._stmt("switch", tok)

    # --- modules

    def _module_error(self, tok: Token, what: str):
        if self.source_type != "module":
            self.out.parse_errors.append(ParseError(
                tok.line, tok.column,
                f"{what} declarations are only valid in module mode",
                module_syntax=True))

    def parse_import(self):
        tok = self.expect("import")
        if self.at("("):  # dynamic import expression statement
            self.i -= 1
            self.parse_expression()
            self._terminate()
            return self._stmt("expression", tok)
        self._module_error(tok, "import")
        node = ImportExportNode(kind="import", start=tok.offset, end=0,
                                line=tok.line)
        if self.cur.kind == "string":
            node.source = self.advance().text
        else:
            if self.cur.kind == "identifier":
                node.default_name = self.advance().text
                if self.at(","):
                    self.advance()
            if self.at("{"):
                open_tok = self.advance()
                parts = []
                while not self.at("}"):
                    if self.at_eof():
                        self.fail("unterminated import list")
                    parts.append(self.advance().text)
                close_tok = self.expect("}")
                node.named = " ".join(parts)
            elif self.at("*"):
                self.advance()
                if not (self.cur.kind == "identifier" and self.cur.text == "as"):
                    self.fail("expected 'as' in namespace import")
                self.advance()
                if self.cur.kind != "identifier":
                    self.fail("expected a namespace name")
                node.namespace_name = self.advance().text
            if node.default_name is None and node.named is None and \
                    node.namespace_name is None:
                self.fail("expected import bindings")
            if not (self.cur.kind == "identifier" and self.cur.text == "from"):
                self.fail("expected 'from'")
            self.advance()
            if self.cur.kind != "string":
                self.fail("expected a module specifier string")
            node.source = self.advance().text
        if self.at(";"):
            self.advance()
        node.end = self._token_end(self.prev)
        self.out.imports.append(node)
        return self._stmt("import", tok)

    def parse_export(self):
        tok = self.expect("export")
        self._module_error(tok, "export")
        node = ImportExportNode(kind="export", start=tok.offset, end=0,
                                line=tok.line,
                                export_keyword_end=self._token_end(tok))
        if self.at("default"):
            default_tok = self.advance()
            node.is_default_export = True
            node.export_keyword_end = self._token_end(default_tok)
            if self.cur.text in ("function", "async", "class") and \
                    self.cur.kind in ("keyword", "identifier"):
                self.parse_statement()
            else:
                self.parse_expression()
                self._terminate()
        elif self.at("{"):
            self._skip_balanced()
            if self.cur.kind == "identifier" and self.cur.text == "from":
                self.advance()
                if self.cur.kind != "string":
                    self.fail("expected a module specifier string")
                node.source = self.advance().text
                node.has_from = True
            if self.at(";"):
                self.advance()
        elif self.at("*"):
            self.advance()
            if self.cur.kind == "identifier" and self.cur.text == "as":
                self.advance()
                if self.cur.kind != "identifier":
                    self.fail("expected a name after 'as'")
                self.advance()
            if not (self.cur.kind == "identifier" and self.cur.text == "from"):
                self.fail("expected 'from'")
            self.advance()
            if self.cur.kind != "string":
                self.fail("expected a module specifier string")
            node.source = self.advance().text
            node.has_from = True
            if self.at(";"):
                self.advance()
        else:
            self.parse_statement()
        node.end = self._token_end(self.prev)
        self.out.imports.append(node)
        return self._stmt("export", tok)

    # --- expressions

    def parse_expression(self):
        self.parse_assignment()
        while self.at(","):
            self.advance()
            self.parse_assignment()

    def parse_assignment(self):
        if self._try_arrow():
            return
        if self.at("yield"):
            self.advance()
            if self.at("*"):
                self.advance()
            if not (self.at(")") or self.at("]") or self.at("}") or self.at(",")
                    or self.at(";") or self.at_eof() or self.nl_before()):
                self.parse_assignment()
            return
        self.parse_conditional()
        if self.cur.kind == "punctuator" and self.cur.text in _ASSIGN_OPS:
            self.advance()
            self.parse_assignment()

    def _try_arrow(self) -> bool:
        """Parse an arrow function if one starts here; otherwise do nothing."""
        j = self.i
        if self.tokens[j].text == "async" and self.tokens[j].kind == "identifier" \
                and not self.newline_sep(1):
            j += 1
        if j < len(self.tokens) and self.tokens[j].kind == "identifier" and \
                self._text_at(j + 1) == "=>":
            if self.tokens[j].text == "async" and self.i == j - 1:
                pass
            self.i = j
            self.advance()
            self.advance()  # =>
            self._parse_arrow_body()
            return True
        if j < len(self.tokens) and self.tokens[j].text == "(":
            close = self._matching_paren(j)
            if close is not None and self._text_at(close + 1) == "=>":
                self.i = j
                self.parse_params()
                self.expect("=>")
                self._parse_arrow_body()
                return True
        return False

    def _text_at(self, j: int) -> str:
        return self.tokens[j].text if j < len(self.tokens) else ""

    def _matching_paren(self, j: int) -> Optional[int]:
        depth = 0
        for k in range(j, len(self.tokens)):
            t = self.tokens[k]
            if t.kind == "punctuator":
                if t.text in "([{":
                    depth += 1
                elif t.text in ")]}":
                    depth -= 1
                    if depth == 0:
                        return k
        return None

    def _parse_arrow_body(self):
        if self.at("{"):
            self.parse_block()
        else:
            self.parse_assignment()

    def parse_conditional(self):
        self.parse_binary(0)
        if self.at("?") and not self.at("?."):
            self.advance()
            self.parse_assignment()
            self.expect(":")
            self.parse_assignment()

    def parse_binary(self, min_prec: int):
        self.parse_unary_chain()
        while True:
            text = self.cur.text
            prec = _BINARY_PRECEDENCE.get(text)
            if prec is None or prec < min_prec:
                return
            if text in ("in", "instanceof") and self.cur.kind != "keyword":
                return
            self.advance()
            self.parse_binary(prec + 1)

    def parse_unary_chain(self):
        tok = self.cur
        if (tok.kind == "punctuator" and tok.text in _UNARY) or \
                (tok.kind == "keyword" and tok.text in _UNARY):
            self.advance()
            self.parse_unary_chain()
            return
        if tok.kind == "identifier" and tok.text == "await":
            self.advance()
            self.parse_unary_chain()
            return
        if tok.kind == "keyword" and tok.text == "new":
            self.advance()
            if self.at("."):  # new.target
                self.advance()
                if self.cur.kind == "identifier":
                    self.advance()
                return
            self.parse_unary_chain()
            return
        self.parse_primary()
        self.parse_call_tail()
        if self.cur.kind == "punctuator" and self.cur.text in ("++", "--") \
                and not self.nl_before():
            self.advance()

    def parse_call_tail(self):
        while True:
            if self.at("."):
                self.advance()
                if self.cur.kind in ("identifier", "keyword"):
                    self.advance()
                else:
                    self.fail("expected a property name")
            elif self.at("?."):
                self.advance()
                if self.cur.kind in ("identifier", "keyword"):
                    self.advance()
                elif self.at("(") or self.at("["):
                    continue
                else:
                    self.fail("expected a property name")
            elif self.at("["):
                self.advance()
                self.parse_expression()
                self.expect("]")
            elif self.at("("):
                self.advance()
                while not self.at(")"):
                    if self.at_eof():
                        self.fail("unterminated argument list")
                    if self.at("..."):
                        self.advance()
                    self.parse_assignment()
                    if self.at(","):
                        self.advance()
                self.expect(")")
            elif self.cur.kind == "template":
                self.advance()  # tagged template
            else:
                return

    def parse_primary(self):
        tok = self.cur
        if tok.kind in ("number", "string", "template", "regex"):
            self.advance()
            return
        if tok.kind == "identifier":
            if tok.text == "async" and self._peek_text(1) == "function" and \
                    not self.newline_sep(1):
                self.parse_function(declaration=False)
                return
            self.advance()
            return
        if tok.kind == "keyword":
            if tok.text in _VALUE_KEYWORDS:
                self.advance()
                return
            if tok.text == "function":
                self.parse_function(declaration=False)
                return
            if tok.text == "class":
                self.parse_class()
                return
            if tok.text == "import" and self._peek_text(1) == "(":
                self.advance()
                return  # dynamic import callee; call tail parses the args
            self.fail(f"unexpected keyword {tok.text!r}")
        if tok.kind == "punctuator":
            if tok.text == "(":
                self.advance()
                self.parse_expression()
                self.expect(")")
                return
            if tok.text == "[":
                self.advance()
                while not self.at("]"):
                    if self.at_eof():
                        self.fail("unterminated array literal")
                    if self.at(","):
                        self.advance()
                        continue
                    if self.at("..."):
                        self.advance()
                    self.parse_assignment()
                    if self.at(","):
                        self.advance()
                self.expect("]")
                return
            if tok.text == "{":
                self.parse_object_literal()
                return
        if tok.kind == "invalid":
            self.fail(f"unexpected character {tok.text!r}")
        if tok.kind == "eof":
            self.fail("unexpected end of input")
        self.fail(f"unexpected token {tok.text!r}")

    def parse_object_literal(self):
        self.expect("{")
        while not self.at("}"):
            if self.at_eof():
                self.fail("unterminated object literal")
            if self.at("..."):
                self.advance()
                self.parse_assignment()
            else:
                self.parse_object_property()
            if self.at(","):
                self.advance()
        self.expect("}")

    def parse_object_property(self):
        if self.cur.kind == "identifier" and self.cur.text in ("get", "set", "async") \
                and self._peek_text(1) not in (":", ",", "}", "(", "="):
            self.advance()
        if self.at("*"):
            self.advance()
        if self.cur.kind in ("identifier", "keyword", "string", "number"):
            self.advance()
        elif self.at("["):
            self.advance()
            self.parse_assignment()
            self.expect("]")
        else:
            self.fail("expected a property key")
        if self.at(":"):
            self.advance()
            self.parse_assignment()
        elif self.at("("):
            self.parse_params()
            self.parse_block()
        elif self.at("="):  # shorthand with default (destructuring reuse)
            self.advance()
            self.parse_assignment()
        # otherwise shorthand property


def parse(source: str, source_type: str = "script") -> ParseOutcome:
    if source_type not in ("script", "module"):
        raise ValueError(f"unknown source_type {source_type!r}")
    return _Parser(source, source_type).parse_program()
