"""Registry dump parsing, README statistics and the on-disk corpus database.

The database is a directory: a single ``manifest.json`` plus one JSON file
per snippet-bearing package under ``packages/``, sharded by a content hash
of the package name. Everything is written with sorted keys so re-ingesting
the same dump reproduces the database byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
import shutil
from pathlib import Path
from typing import Iterator, Optional

from .extract import classify_blocks, extract_snippets, Snippet
from .records import CorpusStats, PackageRecord, ReadmeStats

logger = logging.getLogger(__name__)

DB_VERSION = 1

_ATX_HEADING_RE = re.compile(r"^ {0,3}#{1,6}\s+(.*)$")
_SETEXT_UNDERLINE_RE = re.compile(r"^ {0,3}(=+|-+)\s*$")


class DocumentRejected(Exception):
    """A registry document that cannot become a PackageRecord."""

    def __init__(self, identifier: str, reason: str):
        super().__init__(f"{identifier}: {reason}")
        self.identifier = identifier
        self.reason = reason


class DatabaseError(Exception):
    pass


def parse_registry_doc(doc, identifier: str = "<doc>",
                       repo_readme: Optional[str] = None) -> PackageRecord:
    """Build a PackageRecord from one registry JSON document.

    ``doc`` may be a JSON string or an already-decoded mapping. A repository
    README (either the ``repo_readme`` argument or a ``repository_readme``
    field in the document) replaces the registry copy only when strictly
    longer, since registry copies are truncated.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except ValueError as exc:
            raise DocumentRejected(identifier, f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentRejected(identifier, "document is not a JSON object")
    name = doc.get("name")
    if not name or not isinstance(name, str):
        raise DocumentRejected(identifier, "missing name")

    readme = doc.get("readme")
    source = "none"
    text = ""
    if isinstance(readme, str):
        source = "registry"
        text = readme
    override = repo_readme if repo_readme is not None else doc.get("repository_readme")
    if isinstance(override, str) and len(override) > len(text):
        source = "repository"
        text = override

    keywords = doc.get("keywords") or []
    if not isinstance(keywords, list):
        keywords = []
    record = PackageRecord(
        name=name.lower(),
        description=str(doc.get("description") or ""),
        keywords=[str(k) for k in keywords],
        readme_text=text,
        readme_source=source,
        repo_url=doc.get("repository_url") or doc.get("repo_url"),
        stars=int(doc.get("stars") or 0),
        has_license=bool(doc.get("license")) or bool(doc.get("has_license")),
        last_modified=str(doc.get("last_modified") or "1970-01-01T00:00:00Z"),
    )
    record.stats = compute_readme_stats(record.readme_text)
    return record


def _heading_lines(text: str) -> Iterator[str]:
    lines = text.split("\n")
    in_fence = False
    for i, line in enumerate(lines):
        if re.match(r"^ {0,3}(`{3,}|~{3,})", line):
            in_fence = not in_fence
            continue
        if in_fence:
            continue
        m = _ATX_HEADING_RE.match(line)
        if m:
            yield m.group(1)
        elif (line.strip() and i + 1 < len(lines)
              and _SETEXT_UNDERLINE_RE.match(lines[i + 1])):
            yield line.strip()


def compute_readme_stats(readme_text: str) -> ReadmeStats:
    if readme_text == "":
        return ReadmeStats()
    blocks = classify_blocks(readme_text)
    headings = [h.lower() for h in _heading_lines(readme_text)]
    return ReadmeStats(
        line_count=len(readme_text.split("\n")),
        code_block_count=len(blocks),
        js_snippet_count=sum(1 for b in blocks if b.drop_reason is None),
        has_install_example=(any("install" in h for h in headings)
                             or "npm install" in readme_text),
        has_run_example=(any("usage" in h for h in headings)
                         or "npm run" in readme_text),
    )


def _iter_dump(source: Path) -> Iterator[tuple[str, str]]:
    """Yield (identifier, raw JSON text) per document."""
    if source.is_dir():
        for path in sorted(source.glob("*.json")):
            yield str(path), path.read_text(encoding="utf-8", errors="replace")
    elif source.suffix == ".jsonl":
        with open(source, encoding="utf-8", errors="replace") as fh:
            for n, line in enumerate(fh, 1):
                if line.strip():
                    yield f"{source}:{n}", line
    else:
        raise DatabaseError(f"unsupported dump format: {source}")


def _package_path(db: Path, name: str) -> Path:
    digest = hashlib.sha256(name.encode("utf-8")).hexdigest()
    return db / "packages" / digest[:2] / f"{digest}.json"


def _dump_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
    path.write_text(text + "\n", encoding="utf-8")


def ingest_corpus(source, db) -> CorpusStats:
    """Parse a dump, extract snippets, and persist the searchable corpus.

    Packages without snippets are tallied but not persisted. Bad documents
    are skipped and counted; an unreadable source is fatal.
    """
    source, db = Path(source), Path(db)
    if not source.exists():
        raise DatabaseError(f"dump not readable: {source}")
    db.mkdir(parents=True, exist_ok=True)
    pkg_dir = db / "packages"
    if pkg_dir.exists():
        shutil.rmtree(pkg_dir)

    stats = CorpusStats()
    rejects = 0
    names: list[str] = []
    for identifier, raw in _iter_dump(source):
        try:
            record = parse_registry_doc(raw, identifier=identifier)
        except DocumentRejected as exc:
            logger.warning("skipping document %s: %s", exc.identifier, exc.reason)
            rejects += 1
            continue
        stats.total_packages += 1
        if record.readme_source != "none":
            stats.packages_with_readme += 1
        if record.readme_text.strip():
            stats.packages_with_nonempty_readme += 1
        snippets = extract_snippets(record)
        if not snippets:
            continue
        stats.packages_with_snippets += 1
        stats.total_snippets += len(snippets)
        record.snippet_count = len(snippets)
        names.append(record.name)
        _dump_json(_package_path(db, record.name), {
            "record": record.to_dict(),
            "snippets": [s.to_dict() for s in snippets],
        })
    names.sort()
    _dump_json(db / "manifest.json", {
        "version": DB_VERSION,
        "stats": stats.to_dict(),
        "rejected_documents": rejects,
        "packages": names,
    })
    if rejects:
        logger.info("rejected %d documents", rejects)
    return stats


def _read_manifest(db: Path) -> dict:
    path = Path(db) / "manifest.json"
    if not path.exists():
        raise DatabaseError(f"no corpus database at {db}")
    return json.loads(path.read_text(encoding="utf-8"))


def corpus_stats(db) -> CorpusStats:
    return CorpusStats(**_read_manifest(Path(db))["stats"])


def load_package(db, name: str) -> tuple[PackageRecord, list[Snippet]]:
    path = _package_path(Path(db), name)
    if not path.exists():
        raise DatabaseError(f"package not in corpus: {name}")
    payload = json.loads(path.read_text(encoding="utf-8"))
    return (PackageRecord.from_dict(payload["record"]),
            [Snippet.from_dict(s) for s in payload["snippets"]])


def iter_packages(db) -> Iterator[tuple[PackageRecord, list[Snippet]]]:
    db = Path(db)
    for name in _read_manifest(db)["packages"]:
        yield load_package(db, name)


def package_names(db) -> list[str]:
    return list(_read_manifest(Path(db))["packages"])
