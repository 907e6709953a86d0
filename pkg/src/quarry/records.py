"""Domain records shared across the corpus, search and ranking modules."""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from typing import Optional


@dataclass
class ReadmeStats:
    line_count: int = 0
    code_block_count: int = 0
    js_snippet_count: int = 0
    has_install_example: bool = False
    has_run_example: bool = False


@dataclass
class PackageRecord:
    name: str
    description: str = ""
    keywords: list[str] = field(default_factory=list)
    readme_text: str = ""
    readme_source: str = "none"  # registry | repository | none
    repo_url: Optional[str] = None
    stars: int = 0
    has_license: bool = False
    last_modified: str = "1970-01-01T00:00:00Z"  # UTC ISO-8601
    stats: ReadmeStats = field(default_factory=ReadmeStats)
    snippet_count: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PackageRecord":
        d = dict(d)
        d["stats"] = ReadmeStats(**d.get("stats", {}))
        return cls(**d)


@dataclass
class CorpusStats:
    total_packages: int = 0
    packages_with_readme: int = 0
    packages_with_nonempty_readme: int = 0
    packages_with_snippets: int = 0
    total_snippets: int = 0

    def to_dict(self) -> dict:
        return asdict(self)
