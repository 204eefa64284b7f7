from contextlib import contextmanager
from typing import Dict, Iterator, Optional

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker

from config.factory import settings

# one engine per database url, created on first use
_ENGINES: Dict[str, Engine] = {}
_SESSIONS: Dict[str, sessionmaker] = {}


def get_engine(url: Optional[str] = None) -> Engine:
    url = url or settings.DATABASE_URL
    if url not in _ENGINES:
        from .models import Base

        options = settings.get_database_config()
        engine = create_engine(url, pool_pre_ping=options["pool_pre_ping"], echo=options["echo"])
        Base.metadata.create_all(engine)
        _ENGINES[url] = engine
        _SESSIONS[url] = sessionmaker(bind=engine, autoflush=False, autocommit=False)
    return _ENGINES[url]


@contextmanager
def get_db(url: Optional[str] = None) -> Iterator[Session]:
    url = url or settings.DATABASE_URL
    get_engine(url)
    db = _SESSIONS[url]()
    try:
        yield db
        db.commit()
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()


def dispose_engines() -> None:
    for engine in _ENGINES.values():
        engine.dispose()
    _ENGINES.clear()
    _SESSIONS.clear()
