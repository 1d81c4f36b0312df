"""Persistent identity-space cache: keys, round trips, corruption handling."""

import json
import os

import pytest

from gradedpi.algebras import catalog
from gradedpi.cache import (ENV_CACHE_DIR, CacheEntry, cache_get, cache_put,
                            cached_identity_space, default_cache_dir,
                            serialize_space, space_from_payload, space_key)
from gradedpi.identities import identity_space


def degrees_of(a, *exps):
    return tuple(a.group.element(x) for x in exps)


def test_key_is_stable_and_content_addressed():
    a = catalog("H4")
    degs = degrees_of(a, (0, 0), (1, 0))
    k1 = space_key(a, degs)
    k2 = space_key(catalog("H4"), degs)
    assert k1 == k2 and len(k1) == 64
    # different tuple, different key
    assert k1 != space_key(a, degrees_of(a, (0, 0), (0, 1)))
    # different algebra with the same group, different key
    assert k1 != space_key(catalog("M2_4"), degs)


def test_serialize_space_round_trip_is_exact(tmp_path):
    a = catalog("M2C_Z4")
    degs = degrees_of(a, (1,), (1,), (2,))
    space = identity_space(a, degs, use_cache=False)
    payload = serialize_space(space)
    back = space_from_payload(a, payload)
    assert back == space
    assert back.kernel == space.kernel
    # byte-identical reserialization
    assert json.dumps(serialize_space(back), sort_keys=True) == \
        json.dumps(payload, sort_keys=True)


def test_cache_put_get_round_trip(tmp_path):
    d = str(tmp_path)
    a = catalog("H4")
    degs = degrees_of(a, (1, 0), (0, 1))
    space = identity_space(a, degs, use_cache=False)
    key = space_key(a, degs)
    cache_put(key, serialize_space(space), directory=d)
    entry = cache_get(key, directory=d)
    assert isinstance(entry, CacheEntry)
    assert entry.key == key
    assert space_from_payload(a, entry.value) == space


def test_cache_get_missing_is_none(tmp_path):
    assert cache_get("0" * 64, directory=str(tmp_path)) is None


def test_corrupt_entries_are_logged_misses(tmp_path, capsys):
    d = str(tmp_path)
    key = "a" * 64
    os.makedirs(d, exist_ok=True)
    with open(os.path.join(d, key + ".json"), "w") as fh:
        fh.write("{nope")
    assert cache_get(key, directory=d) is None
    err = capsys.readouterr().err
    assert "corrupt cache entry" in err


def test_key_mismatch_inside_entry_is_corruption(tmp_path, capsys):
    d = str(tmp_path)
    a = catalog("H4")
    degs = degrees_of(a, (0, 0),)
    key = space_key(a, degs)
    cache_put(key, serialize_space(identity_space(a, degs, use_cache=False)),
              directory=d)
    other = "b" * 64
    os.rename(os.path.join(d, key + ".json"), os.path.join(d, other + ".json"))
    assert cache_get(other, directory=d) is None
    assert "corrupt cache entry" in capsys.readouterr().err


def test_atomic_writes_leave_no_temp_files(tmp_path):
    d = str(tmp_path)
    a = catalog("H4")
    degs = degrees_of(a, (0, 0), (0, 0))
    cache_put(space_key(a, degs),
              serialize_space(identity_space(a, degs, use_cache=False)),
              directory=d)
    names = os.listdir(d)
    assert len(names) == 1 and names[0].endswith(".json")


def test_cached_identity_space_hits_disk_then_memory(tmp_path):
    d = str(tmp_path)
    a = catalog("M2_4")
    degs = degrees_of(a, (1, 0), (0, 1))
    s1 = cached_identity_space(a, degs, directory=d)
    assert os.listdir(d)  # wrote through
    b = catalog("M2_4")  # fresh instance, cold memory cache
    s2 = cached_identity_space(b, degs, directory=d)
    assert s1 == s2
    # third call hits the in-memory cache of b
    assert cached_identity_space(b, degs, directory=d) is s2


def test_cached_identity_space_disabled(tmp_path):
    d = str(tmp_path)
    a = catalog("C2")
    degs = degrees_of(a, (1,), (1,))
    s = cached_identity_space(a, degs, enabled=False, directory=d)
    assert s.dimension == identity_space(a, degs).dimension
    assert not os.listdir(d) if os.path.isdir(d) else True


def test_bad_payload_shape_is_corruption(tmp_path, capsys):
    d = str(tmp_path)
    a = catalog("H4")
    degs = degrees_of(a, (0, 0), (0, 0))
    key = space_key(a, degs)
    cache_put(key, {"format": 1, "degrees": [[0, 0], [0, 0]], "ncols": 99,
                    "kernel": [["1"]]}, directory=d)
    s = cached_identity_space(a, degs, directory=d)
    assert "corrupt" in capsys.readouterr().err
    assert s == identity_space(a, degs, use_cache=False)
    # the bad entry was replaced by a good one
    entry = cache_get(key, directory=d)
    assert space_from_payload(a, entry.value) == s


def test_env_var_controls_default_dir(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_CACHE_DIR, str(tmp_path / "envcache"))
    assert default_cache_dir() == str(tmp_path / "envcache")
    monkeypatch.delenv(ENV_CACHE_DIR)
    assert "gradedpi" in default_cache_dir()
