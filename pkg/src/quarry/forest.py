"""Runnability ranking: eight package features and a from-scratch random forest.

Trees are grown with greedy Gini splits over a random 3-feature subset per
node; leaves store the positive-class fraction and the forest prediction is
the mean over trees. Everything is deterministic given the seed: examples
are canonically sorted before bootstrap sampling and per-tree RNGs derive
from the forest seed.
"""

from __future__ import annotations

import json
import math
import random
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from .records import PackageRecord

FEATURE_NAMES = (
    "has_license", "has_readme", "readme_lines", "readme_code_blocks",
    "js_snippet_count", "has_run_example", "has_install_example",
    "days_since_update",
)
FEATURE_SCHEMA = "build-features/v1:" + ",".join(FEATURE_NAMES)

MODEL_MAGIC = b"QRFM"
MODEL_VERSION = 1

DEFAULT_HYPERPARAMS = {
    "tree_count": 100,
    "max_depth": 8,
    "min_leaf": 2,
    "feature_subset": 3,
    "seed": 42,
}


class SchemaMismatch(ValueError):
    pass


class OracleError(RuntimeError):
    """Labeling sandbox unavailable; not a label."""


def _parse_timestamp(value: str) -> datetime:
    value = value.strip()
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def featurize(record: PackageRecord, now) -> tuple[int, ...]:
    """Fixed-order eight-feature vector; ``now`` is a UTC datetime or ISO string."""
    if isinstance(now, str):
        now = _parse_timestamp(now)
    delta = (now - _parse_timestamp(record.last_modified)).total_seconds()
    days = max(0, math.floor(delta / 86400))
    s = record.stats
    return (
        1 if record.has_license else 0,
        1 if record.readme_source != "none" else 0,
        s.line_count,
        s.code_block_count,
        s.js_snippet_count,
        1 if s.has_run_example else 0,
        1 if s.has_install_example else 0,
        days,
    )


@dataclass
class LabeledExample:
    features: tuple[int, ...]
    label: bool


def _gini(pos: int, n: int) -> float:
    if n == 0:
        return 0.0
    p = pos / n
    return 2.0 * p * (1.0 - p)


def _build_tree(rows: list[tuple[tuple[int, ...], bool]], rng: random.Random,
                max_depth: int, min_leaf: int, subset: int, depth: int = 0) -> dict:
    n = len(rows)
    pos = sum(1 for _, y in rows if y)
    if depth >= max_depth or n < 2 * min_leaf or pos in (0, n):
        return {"leaf": pos / n}
    n_features = len(rows[0][0])
    shuffled = list(range(n_features))
    rng.shuffle(shuffled)
    best = None  # (gini, feature, threshold, left, right)
    # try the random subset first; keep drawing features until a valid
    # split exists, so separable data always splits
    for drawn, f in enumerate(shuffled):
        if drawn >= subset and best is not None:
            break
        values = sorted({x[f] for x, _ in rows})
        for lo, hi in zip(values, values[1:]):
            threshold = (lo + hi) / 2.0
            left = [(x, y) for x, y in rows if x[f] <= threshold]
            right = [(x, y) for x, y in rows if x[f] > threshold]
            if len(left) < min_leaf or len(right) < min_leaf:
                continue
            score = (len(left) * _gini(sum(y for _, y in left), len(left))
                     + len(right) * _gini(sum(y for _, y in right), len(right))) / n
            if best is None or score < best[0]:
                best = (score, f, threshold, left, right)
    if best is None:
        return {"leaf": pos / n}
    _, f, threshold, left, right = best
    return {
        "feature": f,
        "threshold": threshold,
        "left": _build_tree(left, rng, max_depth, min_leaf, subset, depth + 1),
        "right": _build_tree(right, rng, max_depth, min_leaf, subset, depth + 1),
    }


@dataclass
class RunnabilityModel:
    trees: list[dict]
    hyperparams: dict
    schema: str = FEATURE_SCHEMA

    def to_bytes(self) -> bytes:
        payload = json.dumps(
            {"schema": self.schema, "hyperparams": self.hyperparams,
             "trees": self.trees},
            sort_keys=True, separators=(",", ":")).encode("utf-8")
        return MODEL_MAGIC + bytes([MODEL_VERSION]) + payload

    @classmethod
    def from_bytes(cls, blob: bytes) -> "RunnabilityModel":
        if blob[:4] != MODEL_MAGIC:
            raise ValueError("not a runnability model file")
        if blob[4] != MODEL_VERSION:
            raise ValueError(f"unsupported model version {blob[4]}")
        payload = json.loads(blob[5:].decode("utf-8"))
        return cls(trees=payload["trees"], hyperparams=payload["hyperparams"],
                   schema=payload["schema"])

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path) -> "RunnabilityModel":
        return cls.from_bytes(Path(path).read_bytes())


def train_forest(examples: Sequence[LabeledExample],
                 hyperparams: Optional[dict] = None) -> RunnabilityModel:
    if not examples:
        raise ValueError("empty training set")
    hp = dict(DEFAULT_HYPERPARAMS)
    hp.update(hyperparams or {})
    for ex in examples:
        if len(ex.features) != len(FEATURE_NAMES):
            raise SchemaMismatch(f"expected {len(FEATURE_NAMES)} features")
    # canonical order so input permutation cannot change the model
    rows = sorted(((tuple(ex.features), bool(ex.label)) for ex in examples))
    seed_rng = random.Random(hp["seed"])
    tree_seeds = [seed_rng.randrange(2**32) for _ in range(hp["tree_count"])]
    trees = []
    for tree_seed in tree_seeds:
        rng = random.Random(tree_seed)
        sample = [rows[rng.randrange(len(rows))] for _ in range(len(rows))]
        trees.append(_build_tree(sample, rng, hp["max_depth"], hp["min_leaf"],
                                 min(hp["feature_subset"], len(FEATURE_NAMES))))
    return RunnabilityModel(trees=trees, hyperparams=hp)


def _walk(tree: dict, fv: Sequence[float]) -> float:
    node = tree
    while "leaf" not in node:
        node = node["left"] if fv[node["feature"]] <= node["threshold"] else node["right"]
    return node["leaf"]


def predict(model: RunnabilityModel, fv: Sequence[float]) -> float:
    if model.schema != FEATURE_SCHEMA:
        raise SchemaMismatch(f"model schema {model.schema!r} != {FEATURE_SCHEMA!r}")
    if len(fv) != len(FEATURE_NAMES):
        raise SchemaMismatch(f"expected {len(FEATURE_NAMES)} features, got {len(fv)}")
    return sum(_walk(t, fv) for t in model.trees) / len(model.trees)


@dataclass
class LabelResult:
    name: str
    label: bool
    timeout: bool = False


def label_oracle(package: str, package_manager: str, timeout: float = 120.0,
                 workdir: Optional[str] = None) -> LabelResult:
    """True iff a fresh-environment install of ``package`` exits 0 in time."""
    if shutil.which(package_manager) is None and not Path(package_manager).exists():
        raise OracleError(f"package manager not found: {package_manager}")
    tmp = tempfile.mkdtemp(prefix="quarry-label-", dir=workdir)
    manifest = {"name": "quarry-label-probe", "version": "0.0.0", "dependencies": {}}
    (Path(tmp) / "package.json").write_text(json.dumps(manifest), encoding="utf-8")
    try:
        proc = subprocess.run(
            [package_manager, "install", package],
            cwd=tmp, capture_output=True, timeout=timeout)
        return LabelResult(name=package, label=proc.returncode == 0)
    except subprocess.TimeoutExpired:
        return LabelResult(name=package, label=False, timeout=True)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def synthetic_examples(n: int, seed: int = 0) -> list[LabeledExample]:
    """Random vectors labeled by: has_install_example and updated < 730 days ago."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        fv = (
            rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 400),
            rng.randint(0, 12), rng.randint(0, 10), rng.randint(0, 1),
            rng.randint(0, 1), rng.randint(0, 2000),
        )
        out.append(LabeledExample(features=fv, label=fv[6] == 1 and fv[7] < 730))
    return out
