# springerlab/services/fixtures.py

import json
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from springerlab.config import get_config
from springerlab.services.errors import FixtureError

logger = logging.getLogger(__name__)

FIXTURE_VERSION = 1

_FIXTURE_DIR: Optional[str] = None
_CACHE: Dict[str, Any] = {}


# ==========================================================
# Contexts
# ==========================================================

@dataclass(frozen=True)
class Context:
    """Where an orbit table lives: algebra g or g*, a Cartan type and a characteristic."""

    algebra: str
    type_label: str
    char: int

    @property
    def key(self) -> str:
        return f"{self.algebra},{self.type_label},{self.char}"

    @property
    def dual(self) -> bool:
        return self.algebra == "g*"

    def __str__(self):
        return self.key


SUPPORTED_CONTEXTS = ("g*,G2,3", "g,G2,2", "g,G2,3", "g*,F4,2", "g,F4,3")


def parse_context(text: str) -> Context:
    """'g*,F4,2' -> Context. Raises FixtureError on anything else."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 3 or parts[0] not in ("g", "g*"):
        raise FixtureError(f"Malformed context {text!r}; expected e.g. 'g*,F4,2'")
    try:
        char = int(parts[2])
    except ValueError:
        raise FixtureError(f"Malformed characteristic in context {text!r}")
    return Context(parts[0], parts[1], char)


def context_for(type_label: str, char: int, dual: bool) -> Context:
    return Context("g*" if dual else "g", type_label, int(char))


# ==========================================================
# Loading
# ==========================================================

def fixture_dir() -> str:
    return _FIXTURE_DIR or get_config().FIXTURE_DIR


def set_fixture_dir(path: Optional[str]) -> None:
    """Point the loaders at another directory (None restores the default)."""
    global _FIXTURE_DIR
    _FIXTURE_DIR = path
    _CACHE.clear()


def load(name: str) -> Dict[str, Any]:
    if name in _CACHE:
        return _CACHE[name]

    path = os.path.join(fixture_dir(), f"{name}.json")
    if not os.path.exists(path):
        raise FixtureError(f"Fixture {name!r} not found at {path}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise FixtureError(f"Fixture {name!r} is not valid JSON: {exc}")

    if data.get("version") != FIXTURE_VERSION:
        raise FixtureError(f"Fixture {name!r} has version {data.get('version')}, expected {FIXTURE_VERSION}")

    logger.debug("Loaded fixture %s from %s", name, path)
    _CACHE[name] = data
    return data


def _by_context(name: str, context) -> Any:
    key = context.key if isinstance(context, Context) else str(context)
    entries = load(name).get("contexts", {})
    if key not in entries:
        raise FixtureError(f"Fixture {name!r} has no entry for context {key}")
    return entries[key]


# ==========================================================
# Named fixtures
# ==========================================================

def load_fingerprints() -> Dict[str, Any]:
    return load("fingerprints")


def load_s1() -> Dict[str, List[str]]:
    return load("s1")["types"]


def load_orbits(context) -> List[Dict[str, Any]]:
    return _by_context("orbits", context)


def load_induced(context) -> List[Dict[str, Any]]:
    return _by_context("induced", context)


def load_constraints(context) -> Dict[str, Any]:
    return _by_context("constraints", context)


def load_golden(context) -> List[Dict[str, Any]]:
    return _by_context("golden", context)


def load_component_groups() -> List[Dict[str, Any]]:
    return load("component_groups")["presentations"]


def load_identities() -> List[Dict[str, Any]]:
    return load("identities")["identities"]


def load_levi_orbits() -> Dict[str, Any]:
    return load("levi_orbits")["orbits"]


def available_contexts() -> List[Context]:
    return [parse_context(key) for key in load("orbits")["contexts"]]
