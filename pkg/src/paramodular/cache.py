"""Write-once on-disk memo for expensive per-prime and per-weight objects.

Entries are pickles named by a version tag and the key; deleting the
directory is always safe.
"""

from __future__ import annotations

import logging
import os
import pickle
import tempfile
from pathlib import Path

log = logging.getLogger(__name__)

CACHE_VERSION = 1
CACHE_ENV = "PARAMODULAR_CACHE_DIR"


def default_cache_dir() -> Path:
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "paramodular"


class DiskCache:
    """Pickle cache; ``directory=None`` keeps everything in memory only."""

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory is not None else None
        self._memory: dict = {}

    def _path(self, key) -> Path:
        name = "-".join(str(k) for k in key)
        return self.directory / f"v{CACHE_VERSION}-{name}.pkl"

    def get(self, key: tuple, build):
        if key in self._memory:
            return self._memory[key]
        value = None
        path = self._path(key) if self.directory is not None else None
        if path is not None and path.exists():
            try:
                with open(path, "rb") as fh:
                    value = pickle.load(fh)
                log.debug("cache hit %s", path)
            except Exception as exc:  # corrupt or stale entry, rebuild
                log.warning("ignoring unreadable cache entry %s: %s", path, exc)
                value = None
        if value is None:
            value = build()
            if path is not None:
                self._write(path, value)
        self._memory[key] = value
        return value

    def _write(self, path: Path, value) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                pickle.dump(value, fh, protocol=pickle.HIGHEST_PROTOCOL)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
