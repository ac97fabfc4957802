"""On-disk cache of irreducible characters.

One file per (family, rank, highest weight). The first line is
``family rank c1,...,cr mass``; every following line is ``c1 ... cr mult``,
sorted lexicographically by the integer coordinates. Files written from a
fresh computation and files read back are byte-identical.
"""

from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path

from .charalg import FormalCharacter
from .rootsys import RootSystem

log = logging.getLogger(__name__)

CACHE_ENV = "FOLDBRANCH_CACHE_DIR"


def dumps_character(rs: RootSystem, lam: tuple[int, ...], ch: FormalCharacter) -> str:
    t = rs.type
    lines = [f"{t.family} {t.rank} {','.join(map(str, lam))} {ch.mass}"]
    lines += [" ".join(map(str, w)) + f" {m}" for w, m in ch.sorted_items()]
    return "\n".join(lines) + "\n"


def loads_character(rs: RootSystem, lam: tuple[int, ...], text: str) -> FormalCharacter:
    rows = text.splitlines()
    if not rows:
        raise ValueError("empty character file")
    family, rank, coords, mass = rows[0].split()
    t = rs.type
    if (family, int(rank)) != (t.family, t.rank):
        raise ValueError(f"file is for {family}{rank}, not {t}")
    if tuple(int(c) for c in coords.split(",")) != tuple(lam):
        raise ValueError(f"file is for highest weight {coords}, not {lam}")
    terms = {}
    for row in rows[1:]:
        parts = [int(x) for x in row.split()]
        if len(parts) != t.rank + 1:
            raise ValueError(f"malformed line {row!r}")
        terms[tuple(parts[:-1])] = parts[-1]
    ch = FormalCharacter(rs, terms)
    if ch.mass != int(mass):
        raise ValueError(f"mass {ch.mass} does not match header {mass}")
    return ch


class CharacterStore:
    """Directory-backed store used through ``charalg.configured(store=...)``."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path_for(self, rs: RootSystem, lam: tuple[int, ...]) -> Path:
        t = rs.type
        return self.root / f"{t.family}{t.rank}_{'_'.join(map(str, lam))}.char"

    def load(self, rs: RootSystem, lam: tuple[int, ...]) -> FormalCharacter | None:
        path = self.path_for(rs, lam)
        if not path.exists():
            return None
        try:
            return loads_character(rs, lam, path.read_text())
        except (ValueError, OSError) as exc:
            log.warning("ignoring unreadable cache file %s: %s", path, exc)
            return None

    def save(self, rs: RootSystem, lam: tuple[int, ...], ch: FormalCharacter) -> None:
        path = self.path_for(rs, lam)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps_character(rs, lam, ch))
        os.replace(tmp, path)
