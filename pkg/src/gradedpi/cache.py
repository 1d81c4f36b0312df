"""Persistent cache for identity spaces, keyed by content hashes.

A cache entry stores the kernel of the multilinear evaluation map for one
(algebra, degree tuple) pair.  Keys hash the algebra's canonical
serialization together with the degree tuple, so equal inputs share entries
across processes.  Writes go through a temporary file and an atomic rename;
corrupt or unreadable entries count as misses and are reported on stderr.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

from .algebras import GradedAlgebra
from .identities import IdentitySpace, identity_space
from .scalars import RationalMatrix
from .specfile import canonical_serialization

ENV_CACHE_DIR = "GRADEDPI_CACHE_DIR"


def default_cache_dir() -> str:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return env
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(
        os.path.expanduser("~"), ".cache")
    return os.path.join(base, "gradedpi")


@dataclass(frozen=True)
class CacheEntry:
    key: str
    value: dict


def space_key(a: GradedAlgebra, degrees) -> str:
    text = canonical_serialization(a) + "\ndegrees " + \
        " ".join(str(tuple(g.exps)) for g in degrees)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def serialize_space(space: IdentitySpace) -> dict:
    return {
        "format": 1,
        "degrees": [list(g.exps) for g in space.degrees],
        "ncols": space.kernel.ncols,
        "kernel": [[str(q) for q in row] for row in space.kernel.rows],
    }


def space_from_payload(a: GradedAlgebra, payload: dict) -> IdentitySpace:
    degrees = tuple(a.group.element(tuple(e)) for e in payload["degrees"])
    ncols = int(payload["ncols"])
    if ncols != math.factorial(len(degrees)):
        raise ValueError("column count does not match the degree tuple")
    rows = [[Fraction(s) for s in row] for row in payload["kernel"]]
    for row in rows:
        if len(row) != ncols:
            raise ValueError("ragged kernel row")
    return IdentitySpace(degrees, RationalMatrix(rows, ncols))


def _entry_path(directory: str, key: str) -> str:
    return os.path.join(directory, key + ".json")


def cache_get(key: str, directory: str | None = None) -> CacheEntry | None:
    directory = directory or default_cache_dir()
    path = _entry_path(directory, key)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("key") != key or "value" not in data:
            raise ValueError("key mismatch")
        return CacheEntry(key, data["value"])
    except FileNotFoundError:
        return None
    except (OSError, ValueError, KeyError) as err:
        print(f"gradedpi: ignoring corrupt cache entry {key[:12]}...: {err}",
              file=sys.stderr)
        return None


def cache_put(key: str, value: dict, directory: str | None = None) -> CacheEntry:
    directory = directory or default_cache_dir()
    os.makedirs(directory, exist_ok=True)
    payload = json.dumps({"key": key, "value": value}, sort_keys=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, _entry_path(directory, key))
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return CacheEntry(key, value)


def cached_identity_space(a: GradedAlgebra, degrees, enabled: bool = True,
                          directory: str | None = None) -> IdentitySpace:
    """identity_space with a persistent layer under the in-memory one."""
    degrees = tuple(degrees)
    if not enabled:
        return identity_space(a, degrees)
    hit = a._mul_cache.get(degrees)
    if hit is not None:
        return hit
    key = space_key(a, degrees)
    entry = cache_get(key, directory)
    if entry is not None:
        try:
            space = space_from_payload(a, entry.value)
        except (ValueError, KeyError, TypeError, ZeroDivisionError) as err:
            print(f"gradedpi: ignoring corrupt cache entry {key[:12]}...: {err}",
                  file=sys.stderr)
        else:
            a._mul_cache[degrees] = space
            return space
    space = identity_space(a, degrees)
    cache_put(key, serialize_space(space), directory)
    return space
