"""Stemmed inverted index over package descriptions/keywords and querying."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from . import ingest
from .porter import porter_stem

# Fixed English stop-word list, pinned for reproducible indexing.
STOP_WORDS = frozenset("""
a about above after again against all am an and any are as at be because
been before being below between both but by can cannot could did do does
doing down during each few for from further had has have having he her here
hers herself him himself his how i if in into is it its itself just me more
most my myself no nor not now of off on once only or other our ours
ourselves out over own same she should so some such than that the their
theirs them themselves then there these they this those through to too
under until up very was we were what when where which while who whom why
will with you your yours yourself yourselves
""".split())

_WORD_RE = re.compile(r"[a-z0-9]+")

INDEX_FILE = "index.json"


class EmptyQueryError(ValueError):
    """Query reduced to no tokens after stop-word removal."""


def _stem_fixpoint(word: str) -> str:
    # Porter is not idempotent for every input; index and query both store
    # the fixpoint so lookups stay consistent.
    for _ in range(4):
        stemmed = porter_stem(word)
        if stemmed == word:
            return word
        word = stemmed
    return word


def tokenize(text: str) -> set[str]:
    """Lowercase, split on non-alphanumerics, drop stop words, stem."""
    tokens = set()
    for word in _WORD_RE.findall(text.lower()):
        if word in STOP_WORDS:
            continue
        tokens.add(_stem_fixpoint(word))
    return tokens


@dataclass
class InvertedIndex:
    postings: dict[str, list[str]]
    ranking_inputs: dict[str, tuple[int, float]]  # name -> (stars, probability)

    def save(self, db) -> None:
        payload = {
            "postings": self.postings,
            "ranking_inputs": {k: list(v) for k, v in self.ranking_inputs.items()},
        }
        path = Path(db) / INDEX_FILE
        path.write_text(
            json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8")

    @classmethod
    def load(cls, db) -> "InvertedIndex":
        path = Path(db) / INDEX_FILE
        if not path.exists():
            raise ingest.DatabaseError(f"no index at {path}; run `quarry index` first")
        payload = json.loads(path.read_text(encoding="utf-8"))
        return cls(
            postings=payload["postings"],
            ranking_inputs={k: (int(v[0]), float(v[1]))
                            for k, v in payload["ranking_inputs"].items()},
        )


def package_tokens(record) -> set[str]:
    return tokenize(record.description) | tokenize(" ".join(record.keywords))


def build_index(db, probabilities: dict[str, float] | None = None) -> InvertedIndex:
    """Index every searchable package under its description+keyword tokens.

    ``probabilities`` maps package name to runnability probability; missing
    entries rank with probability 0.
    """
    probabilities = probabilities or {}
    postings: dict[str, set[str]] = {}
    ranking: dict[str, tuple[int, float]] = {}
    for record, _snippets in ingest.iter_packages(db):
        ranking[record.name] = (record.stars,
                                float(probabilities.get(record.name, 0.0)))
        for token in package_tokens(record):
            postings.setdefault(token, set()).add(record.name)
    return InvertedIndex(
        postings={t: sorted(ns) for t, ns in sorted(postings.items())},
        ranking_inputs=ranking,
    )


@dataclass
class RankedResult:
    entries: list[tuple[str, float]]  # (package_name, score)
    ranking_mode: str  # stars | runnability


def query_packages(query: str, index: InvertedIndex, mode: str = "runnability") -> RankedResult:
    """Intersect postings over the query tokens and rank the candidates.

    Runnability mode sorts by model probability but demotes every zero-star
    package below every starred one; stars mode sorts by stars alone. Ties
    break by stars descending then name ascending.
    """
    tokens = tokenize(query)
    if not tokens:
        raise EmptyQueryError("query contains no searchable words")
    candidates: set[str] | None = None
    for token in tokens:
        names = set(index.postings.get(token, ()))
        candidates = names if candidates is None else candidates & names
        if not candidates:
            return RankedResult(entries=[], ranking_mode=mode)

    def stars(name: str) -> int:
        return index.ranking_inputs.get(name, (0, 0.0))[0]

    def prob(name: str) -> float:
        return index.ranking_inputs.get(name, (0, 0.0))[1]

    ordered = sorted(candidates)
    if mode == "stars":
        ordered.sort(key=lambda n: (-stars(n), n))
        entries = [(n, float(stars(n))) for n in ordered]
    elif mode == "runnability":
        ordered.sort(key=lambda n: (stars(n) == 0, -prob(n), -stars(n), n))
        entries = [(n, prob(n)) for n in ordered]
    else:
        raise ValueError(f"unknown ranking mode: {mode}")
    return RankedResult(entries=entries, ranking_mode=mode)
