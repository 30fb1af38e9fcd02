# springerlab/utils/db.py

from contextlib import contextmanager

from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, scoped_session, sessionmaker
from sqlalchemy.pool import StaticPool

from springerlab.config import get_config

_engine = None
_SessionFactory = None

Base = declarative_base()


def init_engine(database_url: str | None = None, echo: bool = False):
    """
    Initialize the SQLAlchemy engine and session factory for the checkpoint store.
    Call this in tests or at CLI startup to pick the DB URL.
    """
    global _engine, _SessionFactory

    if database_url is None:
        database_url = get_config().DATABASE_URL

    connect_args = (
        {"check_same_thread": False}
        if database_url.startswith("sqlite")
        else {}
    )

    # one shared connection, or every thread would see its own empty in-memory db
    extra = {"poolclass": StaticPool} if ":memory:" in database_url else {}

    _engine = create_engine(
        database_url,
        echo=echo,
        future=True,
        connect_args=connect_args,
        **extra,
    )

    # chunk workers write from several threads
    _SessionFactory = scoped_session(
        sessionmaker(
            bind=_engine,
            autoflush=False,
            autocommit=False,
            expire_on_commit=False,
        )
    )

    Base.metadata.create_all(_engine)
    return _engine


def get_engine():
    return _engine


def get_session_factory():
    return _SessionFactory


@contextmanager
def get_session():
    """
    Context manager yielding a Session.
    Commits on success, rolls back and re-raises on error.
    """
    if _SessionFactory is None:
        init_engine()

    session = _SessionFactory()

    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()


def dispose_engine():
    """Drop the current engine and session factory; the next get_session() re-initializes."""
    global _engine, _SessionFactory

    if _SessionFactory is not None:
        _SessionFactory.remove()
    if _engine is not None:
        _engine.dispose()
    _engine = None
    _SessionFactory = None
