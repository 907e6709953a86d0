import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import fixture_corpus
import fixture_repl
from quarry import ingest

FIXTURES = Path(__file__).parent / "fixtures"
FAKENODE = FIXTURES / "fakenode"
FAKENPM = FIXTURES / "fakenpm"


@pytest.fixture(scope="session")
def dump_dir(tmp_path_factory):
    return fixture_corpus.write_dump(tmp_path_factory.mktemp("dump"))


@pytest.fixture(scope="session")
def corpus_db(dump_dir, tmp_path_factory):
    db = tmp_path_factory.mktemp("db")
    ingest.ingest_corpus(dump_dir, db)
    return db


@pytest.fixture(scope="session")
def repl_db(tmp_path_factory):
    dump = fixture_repl.write_dump(tmp_path_factory.mktemp("repl-dump"))
    db = tmp_path_factory.mktemp("repl-db")
    ingest.ingest_corpus(dump, db)
    return db


@pytest.fixture(scope="session")
def registry_dir(tmp_path_factory):
    return fixture_repl.write_registry(tmp_path_factory.mktemp("registry"))
