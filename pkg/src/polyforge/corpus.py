"""The shipped corpus of presentations and their tagged expected values."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .fpgroup import DEFAULT_MAX_COSETS, Presentation, parse_presentation, regular_representation
from .string_cgroup import StringCGroup, validate

TAGS = ("PAPER", "DERIVED", "TRIVIAL")


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Expectation:
    value: Any
    tag: str
    basis: str


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    path: Path
    rank: int
    role: str = "theorem"
    expected: dict[str, Expectation] = field(default_factory=dict)

    def presentation(self) -> Presentation:
        return parse_presentation(self.path.read_text(encoding="utf-8"))

    def string_cgroup(self, max_cosets: int = DEFAULT_MAX_COSETS) -> StringCGroup:
        G = regular_representation(self.presentation(), max_cosets)
        return validate(G, G.generators)


def default_corpus_dir() -> Path:
    return Path(str(resources.files("polyforge") / "corpus"))


def _expectation(entry_id: str, name: str, raw) -> Expectation:
    if not isinstance(raw, dict) or raw.get("tag") not in TAGS or "value" not in raw:
        raise CorpusError(f"{entry_id}: expectation {name!r} lacks a provenance tag")
    return Expectation(raw["value"], raw["tag"], raw.get("basis", ""))


def load_corpus(directory: str | Path | None = None) -> list[CorpusEntry]:
    """Entries sorted by id. Every expected value must carry a tag from ``TAGS``."""
    root = Path(directory) if directory is not None else default_corpus_dir()
    meta = json.loads((root / "corpus.json").read_text(encoding="utf-8"))
    entries = []
    seen = set()
    for raw in meta["entries"]:
        eid = raw["id"]
        if eid in seen:
            raise CorpusError(f"duplicate corpus id {eid}")
        seen.add(eid)
        expected = {k: _expectation(eid, k, v) for k, v in raw.get("expected", {}).items()}
        entries.append(CorpusEntry(eid, root / raw["file"], raw["rank"], raw.get("role", "theorem"), expected))
    return sorted(entries, key=lambda e: e.id)
