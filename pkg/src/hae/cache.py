"""On-disk cache of series records keyed by (geometry hash, stage, truncation)."""

import logging
import os
import tempfile
from pathlib import Path

from .series import SeriesError, from_record, to_record

log = logging.getLogger(__name__)


class SeriesCache:
    def __init__(self, root):
        self.root = Path(root)

    def path(self, geom_hash, stage, truncation):
        return self.root / geom_hash[:24] / f"{stage}.N{truncation}.rec"

    def get(self, geom_hash, stage, truncation):
        p = self.path(geom_hash, stage, truncation)
        if not p.exists():
            return None
        try:
            return from_record(p.read_text())
        except (SeriesError, UnicodeDecodeError, OSError) as exc:
            log.warning("ignoring corrupt cache record %s (%s); recomputing", p, exc)
            return None

    def put(self, geom_hash, stage, truncation, s):
        p = self.path(geom_hash, stage, truncation)
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(to_record(s))
            os.replace(tmp, p)
        except BaseException:
            os.unlink(tmp)
            raise

    def fetch(self, geom_hash, stage, truncation, compute):
        hit = self.get(geom_hash, stage, truncation)
        if hit is not None:
            return hit, True
        value = compute()
        self.put(geom_hash, stage, truncation, value)
        return value, False


class NullCache:
    def fetch(self, geom_hash, stage, truncation, compute):
        return compute(), False


def cache_roundtrip(s, path):
    """Write a record to ``path`` atomically and read it back."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(to_record(s))
    os.replace(tmp, path)
    return from_record(path.read_text())
