"""Hand-labeled snippet suite for the correction pipeline.

Each entry is (raw_source, expectations). Expectations are hand-derived:
``corrected`` pins the exact output where it is practical to derive by hand,
``error_count`` / ``comment_only`` pin the final report fields, and
``stages_include`` lists stages that must have been recorded.
"""

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class Labeled:
    raw: str
    error_count: int = 0
    comment_only: bool = False
    corrected: Optional[str] = None
    stages_include: frozenset = frozenset()


CLEAN = [
    Labeled("const a = 1;\nconsole.log(a);", corrected="const a = 1;\nconsole.log(a);"),
    Labeled("function add(a, b) {\n  return a + b;\n}",
            corrected="function add(a, b) {\n  return a + b;\n}"),
    Labeled("const f = (x) => x * 2;\nf(21);"),
    Labeled("for (let i = 0; i < 3; i++) {\n  console.log(i);\n}"),
    Labeled("try {\n  run();\n} catch (err) {\n  console.error(err);\n}"),
    Labeled("const obj = {\n  name: 'x',\n  go() {\n    return this.name;\n  }\n};"),
    Labeled("class Point {\n  constructor(x, y) {\n    this.x = x;\n    this.y = y;\n  }\n}"),
    Labeled("const re = /ab+c/i;\nre.test('abbc');"),
    Labeled("const msg = `hello ${name}, bye`;\nconsole.log(msg);"),
    Labeled("async function main() {\n  const r = await fetch(url);\n  return r;\n}"),
]

STYLE_ONLY = [
    # wrong indentation only
    Labeled("function f() {\nreturn 1;\n}",
            corrected="function f() {\n  return 1;\n}",
            stages_include=frozenset({"fix_pass"})),
    Labeled("if (ok) {\n      go();\n}", corrected="if (ok) {\n  go();\n}",
            stages_include=frozenset({"fix_pass"})),
    Labeled("const o = {\n a: 1,\n b: 2\n};",
            corrected="const o = {\n  a: 1,\n  b: 2\n};",
            stages_include=frozenset({"fix_pass"})),
    Labeled("while (x) {\n\tstep();\n}", corrected="while (x) {\n  step();\n}",
            stages_include=frozenset({"fix_pass"})),
    Labeled("  const a = 1;", corrected="const a = 1;",
            stages_include=frozenset({"fix_pass"})),
    # nested blocks, every level off by one space
    Labeled("function g() {\n if (x) {\n  return 1;\n }\n}",
            corrected="function g() {\n  if (x) {\n    return 1;\n  }\n}",
            stages_include=frozenset({"fix_pass"})),
    Labeled("const xs = [\n1,\n2\n];", corrected="const xs = [\n  1,\n  2\n];",
            stages_include=frozenset({"fix_pass"})),
    Labeled("do {\n    tick();\n} while (alive);",
            corrected="do {\n  tick();\n} while (alive);",
            stages_include=frozenset({"fix_pass"})),
    Labeled("switch (v) {\n    case 1:\n    break;\n}",
            corrected="switch (v) {\n  case 1:\n  break;\n}",
            stages_include=frozenset({"fix_pass"})),
    Labeled("fetch(url).then((r) => {\nreturn r.json();\n});",
            corrected="fetch(url).then((r) => {\n  return r.json();\n});",
            stages_include=frozenset({"fix_pass"})),
]

EQEQEQ = [
    Labeled("if (x == 1) {\n  go();\n}", corrected="if (x === 1) {\n  go();\n}",
            stages_include=frozenset({"fix_pass"})),
    Labeled("if (x != null) {\n  go();\n}",
            corrected="if (x !== null) {\n  go();\n}",
            stages_include=frozenset({"fix_pass"})),
    Labeled("const same = a == b;", corrected="const same = a === b;",
            stages_include=frozenset({"fix_pass"})),
    Labeled("while (a == b && c != d) {\n  spin();\n}",
            corrected="while (a === b && c !== d) {\n  spin();\n}",
            stages_include=frozenset({"fix_pass"})),
    # == inside a string must not be touched
    Labeled("const s = 'a == b';\nif (x == 2) {\n  go();\n}",
            corrected="const s = 'a == b';\nif (x === 2) {\n  go();\n}",
            stages_include=frozenset({"fix_pass"})),
    Labeled("check(a == 1, b != 2, c == 3);",
            corrected="check(a === 1, b !== 2, c === 3);",
            stages_include=frozenset({"fix_pass"})),
    Labeled("return x == y;", corrected="return x === y;",
            stages_include=frozenset({"fix_pass"})),
    Labeled("const t = x == 1 ? 'a' : 'b';",
            corrected="const t = x === 1 ? 'a' : 'b';",
            stages_include=frozenset({"fix_pass"})),
]

MISSING_SEMICOLON = [
    Labeled("let a = 1\nlet b = 2", corrected="let a = 1;\nlet b = 2;",
            stages_include=frozenset({"fix_pass"})),
    Labeled("const x = require('m')", corrected="const x = require('m');",
            stages_include=frozenset({"fix_pass"})),
    Labeled("console.log('hi')", corrected="console.log('hi');",
            stages_include=frozenset({"fix_pass"})),
    Labeled("const a = 1\nconsole.log(a)",
            corrected="const a = 1;\nconsole.log(a);",
            stages_include=frozenset({"fix_pass"})),
    Labeled("function f() {\n  return 1\n}",
            corrected="function f() {\n  return 1;\n}",
            stages_include=frozenset({"fix_pass"})),
    Labeled("do {\n  x--\n} while (x > 0)",
            corrected="do {\n  x--;\n} while (x > 0);",
            stages_include=frozenset({"fix_pass"})),
    Labeled("throw new Error('nope')",
            corrected="throw new Error('nope');",
            stages_include=frozenset({"fix_pass"})),
    # mixed with eqeqeq on the same line
    Labeled("const eq = a == b",
            corrected="const eq = a === b;",
            stages_include=frozenset({"fix_pass"})),
]

IMPORT_EXPORT = [
    Labeled("import fs from 'fs'\nfs.readFileSync('x')",
            corrected="const fs = require('fs');\nfs.readFileSync('x');",
            stages_include=frozenset({"import_rewrite"})),
    Labeled('import path from "path";\npath.join("a", "b");',
            corrected='const path = require("path");\npath.join("a", "b");',
            stages_include=frozenset({"import_rewrite"})),
    Labeled("import {readFile, writeFile} from 'fs';",
            corrected="const {readFile, writeFile} = require('fs');",
            stages_include=frozenset({"import_rewrite"})),
    Labeled("import {readFile as rf} from 'fs';",
            corrected="const {readFile: rf} = require('fs');",
            stages_include=frozenset({"import_rewrite"})),
    Labeled("import * as os from 'os';\nos.cpus();",
            corrected="const os = require('os');\nos.cpus();",
            stages_include=frozenset({"import_rewrite"})),
    Labeled("import 'polyfill';", corrected="require('polyfill');",
            stages_include=frozenset({"import_rewrite"})),
    Labeled("import dflt, {extra} from 'pkg';\ndflt(extra);",
            corrected="const dflt = require('pkg');\nconst {extra} = dflt;\ndflt(extra);",
            stages_include=frozenset({"import_rewrite"})),
    Labeled("export const version = '1.0';",
            corrected="const version = '1.0';",
            stages_include=frozenset({"import_rewrite"})),
    Labeled("export function ping() {\n  return 'pong';\n}",
            corrected="function ping() {\n  return 'pong';\n}",
            stages_include=frozenset({"import_rewrite"})),
    Labeled("export default createClient('u');",
            corrected="createClient('u');",
            stages_include=frozenset({"import_rewrite"})),
    Labeled("import http from 'http'\nconst srv = http.createServer()\nsrv.listen(8080)",
            corrected="const http = require('http');\nconst srv = http.createServer();\nsrv.listen(8080);",
            stages_include=frozenset({"import_rewrite"})),
    Labeled("import {a} from 'm'\nif (a == 1) {\n  go()\n}",
            corrected="const {a} = require('m');\nif (a === 1) {\n  go();\n}",
            stages_include=frozenset({"import_rewrite"})),
]

DUP_ARGS = [
    Labeled("function f(a, a) { return a; }", comment_only=True,
            corrected="// function f(a, a) { return a; }",
            stages_include=frozenset({"line_deletion"})),
    Labeled("function add(a, b, a) {\n  return a + b;\n}",
            stages_include=frozenset({"line_deletion"})),
    Labeled("const h = function (x, x) { return x; };", comment_only=True,
            stages_include=frozenset({"line_deletion"})),
    Labeled("function noop(q, q) {}", comment_only=True,
            stages_include=frozenset({"line_deletion"})),
    Labeled("function mix(a, b, b, a) { return 0; }", comment_only=True,
            stages_include=frozenset({"line_deletion"})),
    Labeled("const good = (m, n) => m + n;\nfunction bad(z, z) { return z; }",
            stages_include=frozenset({"line_deletion"})),
]

UNPARSEABLE = [
    Labeled("((( \n )))", comment_only=True,
            stages_include=frozenset({"line_deletion"})),
    Labeled("let a = 1;\n)))\nlet b = 2;",
            corrected="let a = 1;\n// )))\nlet b = 2;",
            stages_include=frozenset({"line_deletion"})),
    Labeled("garbage $$$ ### here", comment_only=True,
            stages_include=frozenset({"line_deletion"})),
    Labeled("let a = (1 +", comment_only=True,
            stages_include=frozenset({"line_deletion"})),
    Labeled("const ok = 1;\nif (\nconst also = 2;",
            stages_include=frozenset({"line_deletion"})),
    Labeled("} else {", comment_only=True,
            stages_include=frozenset({"line_deletion"})),
    Labeled("for (;;;;) {}", comment_only=True,
            stages_include=frozenset({"line_deletion"})),
    Labeled("output: value = ???",  comment_only=True,
            stages_include=frozenset({"line_deletion"})),
]

SUITES = {
    "clean": CLEAN,
    "style_only": STYLE_ONLY,
    "eqeqeq": EQEQEQ,
    "missing_semicolon": MISSING_SEMICOLON,
    "import_export": IMPORT_EXPORT,
    "dup_args": DUP_ARGS,
    "unparseable": UNPARSEABLE,
}

ALL = [item for suite in SUITES.values() for item in suite]
