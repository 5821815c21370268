"""On-disk metric cache keyed by the LUT digest, so equal functions share entries."""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .funcrep import LutFunction


def default_dir() -> Path:
    env = os.environ.get("PIECEPERM_CACHE_DIR")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "pieceperm"


class Cache:
    def __init__(self, directory: str | Path | None = None, enabled: bool = True):
        self.directory = Path(directory) if directory else default_dir()
        self.enabled = enabled

    def _path(self, lut: LutFunction) -> Path:
        return self.directory / f"{lut.digest()}.json"

    def load(self, lut: LutFunction) -> dict:
        if not self.enabled:
            return {}
        try:
            return json.loads(self._path(lut).read_text())
        except (OSError, ValueError):
            return {}

    def get(self, lut: LutFunction, metric: str):
        return self.load(lut).get(metric)

    def put(self, lut: LutFunction, metric: str, value) -> None:
        if not self.enabled:
            return
        entry = self.load(lut)
        entry[metric] = value
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, self._path(lut))
        except OSError:
            # a read-only cache location only costs recomputation
            self.enabled = False

    def clear(self) -> int:
        removed = 0
        if self.directory.is_dir():
            for p in self.directory.glob("*.json"):
                p.unlink()
                removed += 1
        return removed
