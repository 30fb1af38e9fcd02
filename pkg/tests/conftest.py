"""
Shared fixtures: cached root systems and character tables, an in-memory
checkpoint database, and the --runslow switch for full enumerations.
"""
import os

# keep test runs from writing a log file into the working directory
os.environ.setdefault("SPRINGERLAB_LOG_FILE", "")

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import scoped_session, sessionmaker
from sqlalchemy.pool import StaticPool

import springerlab.models  # noqa: F401  registers the tables on Base
from springerlab.services.chevalley import constants_for
from springerlab.services.rootsys import build_root_system
from springerlab.services.weylchar import table_for
from springerlab.utils import db


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow enumerations")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full flag or group enumeration, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


# ----------------------------
# Root systems and tables
# ----------------------------
@pytest.fixture(scope="session")
def g2():
    return build_root_system("G2")


@pytest.fixture(scope="session")
def f4():
    return build_root_system("F4")


@pytest.fixture(scope="session")
def g2_table():
    return table_for("G2")


@pytest.fixture(scope="session")
def f4_table():
    return table_for("F4")


@pytest.fixture(scope="session")
def g2_constants():
    return constants_for("G2")


@pytest.fixture(scope="session")
def f4_constants():
    return constants_for("F4")


# ----------------------------
# Database Fixtures
# ----------------------------
@pytest.fixture(scope="function")
def db_session_factory():
    engine = create_engine(
        "sqlite:///:memory:",
        echo=False,
        connect_args={"check_same_thread": False},
        poolclass=StaticPool,
    )
    db.Base.metadata.create_all(engine)

    factory = scoped_session(sessionmaker(bind=engine))
    yield factory

    factory.remove()
    db.Base.metadata.drop_all(engine)
    engine.dispose()


@pytest.fixture(scope="function")
def checkpoint_db():
    """Point the package-level session helper at a fresh in-memory database."""

    db.init_engine("sqlite:///:memory:")
    yield db
    db.dispose_engine()
