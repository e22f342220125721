"""On-disk cache of expensive arrays, keyed by a hash of their parameters.

The directory is ``$AIRY2COV_CACHE_DIR`` if set, else ``~/.cache/airy2cov``.
Entries are ``.npz`` files written atomically, so concurrent writers of the
same key are harmless.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

ENV_VAR = "AIRY2COV_CACHE_DIR"
FORMAT_VERSION = 1


def cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else Path.home() / ".cache" / "airy2cov"


def cache_key(kind: str, params: dict) -> str:
    payload = json.dumps({"kind": kind, "v": FORMAT_VERSION, **params}, sort_keys=True, default=repr)
    return f"{kind}-{hashlib.sha256(payload.encode()).hexdigest()[:20]}"


def load(kind: str, params: dict) -> dict[str, np.ndarray] | None:
    path = cache_dir() / f"{cache_key(kind, params)}.npz"
    try:
        with np.load(path, allow_pickle=False) as data:
            return {k: data[k] for k in data.files}
    except (OSError, ValueError, KeyError):
        return None


def store(kind: str, params: dict, arrays: dict[str, np.ndarray]) -> Path | None:
    directory = cache_dir()
    try:
        directory.mkdir(parents=True, exist_ok=True)
        target = directory / f"{cache_key(kind, params)}.npz"
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".npz.tmp")
        with os.fdopen(fd, "wb") as fh:
            np.savez(fh, **arrays)
        os.replace(tmp, target)
        return target
    except OSError:
        return None
