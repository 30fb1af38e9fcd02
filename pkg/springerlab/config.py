# springerlab/config.py

"""
Configuration module for springerlab.
Reads environment variables (optionally from a .env file) and exposes
thread counts, enumeration budgets, fixture location and the checkpoint DB URL.
"""
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

PACKAGE_DIR = Path(__file__).resolve().parent


class BaseConfig:
    ENV = os.getenv("SPRINGERLAB_ENV", "development")
    SQLALCHEMY_ECHO = False
    THREADS = int(os.getenv("SPRINGERLAB_THREADS", 1))
    ENUM_BUDGET = int(os.getenv("SPRINGERLAB_ENUM_BUDGET", 500_000_000))
    CENTRALIZER_BUDGET = int(os.getenv("SPRINGERLAB_CENTRALIZER_BUDGET", 100_000_000))
    CHUNK_CELLS = int(os.getenv("SPRINGERLAB_CHUNK_CELLS", 65536))
    FIXTURE_DIR = os.getenv("SPRINGERLAB_FIXTURE_DIR", str(PACKAGE_DIR / "fixtures"))
    LOG_FILE = os.getenv("SPRINGERLAB_LOG_FILE", "springerlab.log")


class DevConfig(BaseConfig):
    DEBUG = True

    @property
    def DATABASE_URL(self):
        database_url = os.getenv("DATABASE_URL")
        if database_url:
            return database_url
        return "sqlite:///springerlab_dev.db"


class ProdConfig(BaseConfig):
    DEBUG = False

    @property
    def DATABASE_URL(self):
        database_url = os.getenv("DATABASE_URL")
        if not database_url:
            raise RuntimeError("Production checkpoint database not configured (DATABASE_URL)")
        return database_url


def get_config():
    env = os.getenv("SPRINGERLAB_ENV", "development").lower()
    if env == "production":
        return ProdConfig()
    return DevConfig()
