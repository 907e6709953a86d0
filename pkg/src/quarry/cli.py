"""Command line entry points."""

from __future__ import annotations

import json
import sys
from dataclasses import asdict
from pathlib import Path

import click

from . import ingest
from .extract import classify_blocks
from .forest import (LabeledExample, OracleError, RunnabilityModel, featurize,
                     label_oracle, predict, train_forest)
from .jsa import correct_snippet, corpus_error_report, lint
from .search import (EmptyQueryError, InvertedIndex, build_index,
                     query_packages)


@click.group()
def main():
    """Offline package search and README snippet reuse tools."""


def _fatal(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@main.command()
@click.argument("dump", type=click.Path(exists=False))
@click.option("--db", "db_dir", required=True, type=click.Path())
def mine(dump, db_dir):
    """Ingest a registry dump (directory or .jsonl) into a corpus database."""
    try:
        stats = ingest.ingest_corpus(dump, db_dir)
    except ingest.DatabaseError as exc:
        _fatal(str(exc))
    for key, value in stats.to_dict().items():
        click.echo(f"{key:32} {value}")


@main.command()
@click.option("--db", "db_dir", required=True, type=click.Path())
@click.option("--json", "as_json", is_flag=True)
def stats(db_dir, as_json):
    """Print corpus statistics."""
    try:
        result = ingest.corpus_stats(db_dir)
    except ingest.DatabaseError as exc:
        _fatal(str(exc))
    if as_json:
        click.echo(json.dumps(result.to_dict(), sort_keys=True))
    else:
        for key, value in result.to_dict().items():
            click.echo(f"{key:32} {value}")


@main.command()
@click.argument("readme", type=click.Path(exists=True))
@click.option("--explain", is_flag=True, help="annotate dropped blocks")
def extract(readme, explain):
    """Print JavaScript snippets extracted from a README file."""
    text = Path(readme).read_text(encoding="utf-8")
    blocks = classify_blocks(text)
    if explain:
        for block in blocks:
            status = ("kept" if block.drop_reason is None
                      else f"dropped ({block.drop_reason})")
            click.echo(f"-- block {block.ordinal} "
                       f"[{block.lang_tag or 'untagged'}]: {status}")
            for line in block.text.split("\n"):
                click.echo(f"   {line}")
    else:
        kept = [b for b in blocks if b.drop_reason is None]
        for i, block in enumerate(kept):
            if i:
                click.echo("\x1e")  # record separator
            click.echo(block.text)


@main.command()
@click.option("--db", "db_dir", required=True, type=click.Path())
@click.option("--model", "model_path", type=click.Path(exists=True))
def index(db_dir, model_path):
    """Build the search index and store it inside the database directory."""
    probabilities = None
    if model_path:
        model = RunnabilityModel.load(model_path)
        probabilities = {
            record.name: predict(model, featurize(record, _now_arg()))
            for record, _ in ingest.iter_packages(db_dir)}
    try:
        idx = build_index(db_dir, probabilities=probabilities)
    except ingest.DatabaseError as exc:
        _fatal(str(exc))
    idx.save(db_dir)
    click.echo(f"indexed {len(idx.ranking_inputs)} packages, "
               f"{len(idx.postings)} tokens")


def _now_arg() -> str:
    import os
    from datetime import datetime, timezone

    return os.environ.get("QUARRY_NOW",
                          datetime.now(timezone.utc).isoformat())


def _load_index(db_dir) -> InvertedIndex:
    path = Path(db_dir) / "index.json"
    if path.exists():
        return InvertedIndex.load(db_dir)
    return build_index(db_dir)


@main.command()
@click.argument("query")
@click.option("--db", "db_dir", required=True, type=click.Path())
@click.option("--mode", type=click.Choice(["stars", "runnability"]),
              default="runnability")
@click.option("--limit", default=20, show_default=True)
def search(query, db_dir, mode, limit):
    """Rank packages matching every word of the query."""
    try:
        idx = _load_index(db_dir)
        result = query_packages(query, idx, mode=mode)
    except EmptyQueryError:
        _fatal("query contains no searchable words")
    except ingest.DatabaseError as exc:
        _fatal(str(exc))
    for rank, (name, score) in enumerate(result.entries[:limit], 1):
        record, _ = ingest.load_package(db_dir, name)
        stars, prob = idx.ranking_inputs[name]
        click.echo(f"{rank:3}. {name}  stars={stars}  p={prob:.3f}  "
                   f"{record.description}")


@main.command()
@click.option("--db", "db_dir", required=True, type=click.Path())
@click.option("--labels", "labels_path", required=True,
              type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def train(db_dir, labels_path, out_path):
    """Train the runnability model from oracle labels."""
    labels = {}
    with open(labels_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                doc = json.loads(line)
                labels[doc["name"]] = bool(doc["label"])
    now = _now_arg()
    examples = []
    for record, _ in ingest.iter_packages(db_dir):
        if record.name in labels:
            examples.append(LabeledExample(features=featurize(record, now),
                                           label=labels[record.name]))
    if not examples:
        _fatal("no labeled packages found in the database")
    model = train_forest(examples)
    model.save(out_path)
    click.echo(f"trained on {len(examples)} examples -> {out_path}")


@main.command()
@click.option("--db", "db_dir", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--package-manager", default="npm", show_default=True)
@click.option("--timeout", default=120.0, show_default=True)
def label(db_dir, out_path, package_manager, timeout):
    """Label every corpus package by attempting a real install."""
    try:
        names = ingest.package_names(db_dir)
    except ingest.DatabaseError as exc:
        _fatal(str(exc))
    with open(out_path, "w", encoding="utf-8") as fh:
        for name in names:
            try:
                result = label_oracle(name, package_manager, timeout=timeout)
            except OracleError as exc:
                _fatal(str(exc))
            fh.write(json.dumps({"name": result.name, "label": result.label,
                                 "timeout": result.timeout}) + "\n")
            click.echo(f"{name}: {'ok' if result.label else 'failed'}")


@main.command()
@click.argument("source", type=click.Path(exists=True))
def fix(source):
    """Run the correction pipeline on a JavaScript file; print the report."""
    report = correct_snippet(Path(source).read_text(encoding="utf-8"))
    click.echo(json.dumps({
        "corrected": report.corrected,
        "error_count": report.error_count,
        "comment_only": report.comment_only,
        "stages": report.stages,
    }, indent=2))


@main.command(name="lint")
@click.argument("source", type=click.Path(exists=True))
def lint_cmd(source):
    """Lint a JavaScript file; one JSON finding per line."""
    findings = lint(Path(source).read_text(encoding="utf-8"))
    for f in findings:
        doc = {"rule_id": f.rule_id, "severity": f.severity,
               "line": f.line, "column": f.column, "message": f.message,
               "fixable": f.fixable}
        click.echo(json.dumps(doc, sort_keys=True))
    if any(f.severity == "error" for f in findings):
        sys.exit(1)


@main.command(name="error-report")
@click.option("--db", "db_dir", required=True, type=click.Path())
def error_report(db_dir):
    """Snippet error statistics over the whole corpus."""
    try:
        report = corpus_error_report(db_dir)
    except ingest.DatabaseError as exc:
        _fatal(str(exc))
    for key, value in report.to_dict().items():
        if isinstance(value, float):
            click.echo(f"{key:32} {value:.3f}")
        else:
            click.echo(f"{key:32} {value}")


@main.command()
@click.option("--db", "db_dir", required=True, type=click.Path())
@click.option("--model", "model_path", type=click.Path(exists=True))
@click.option("--workspace", type=click.Path())
@click.option("--keep-env", is_flag=True)
@click.option("--runner", "runner_path", type=click.Path())
@click.option("--transcript", "transcript_path", type=click.Path(exists=True))
def repl(db_dir, model_path, workspace, keep_env, runner_path, transcript_path):
    """Start the interactive shell (or replay a transcript)."""
    from .repl import ReplShell, ShellConfig, run_transcript

    config = ShellConfig.from_environ(
        db_dir,
        model=Path(model_path) if model_path else None,
        workspace=Path(workspace) if workspace else None,
        keep_env=keep_env or None,
        runner=runner_path,
    )
    if keep_env:
        config.keep_env = True
    try:
        if transcript_path:
            sys.exit(run_transcript(config, transcript_path))
        sys.exit(ReplShell(config).run())
    except ingest.DatabaseError as exc:
        _fatal(str(exc))


if __name__ == "__main__":
    main()
