"""On-disk store for reduced Groebner bases of ideals.

Entries are keyed by a content hash of the ring, the generators and the
monomial order, and hold the reduced basis as exact term lists.  Writes go
to a temporary file that is renamed into place, so concurrent writers never
leave a partial entry behind.
"""

from __future__ import annotations

import contextlib
import contextvars
import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .ring import MonomialOrder, Polynomial, RingSpec

_STORE: contextvars.ContextVar = contextvars.ContextVar("aluffi_gb_store", default=None)


def basis_key(ring: RingSpec, gens, order: MonomialOrder) -> str:
    payload = json.dumps({
        "vars": list(ring.vars),
        "characteristic": ring.characteristic,
        "quotient": sorted(str(q) for q in ring.quotient),
        "gens": [str(g) for g in gens],
        "order": order.describe(),
    }, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


class GroebnerStore:
    """Directory of ``<key>.json`` files; an unreadable entry counts as a miss."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str, ring: RingSpec):
        path = self._path(key)
        try:
            data = json.loads(path.read_text())
        except (OSError, ValueError):
            self.misses += 1
            return None
        self.hits += 1
        return [Polynomial(ring, {tuple(e): ring.coerce_coeff(Fraction(c)) for e, c in terms})
                for terms in data["basis"]]

    def put(self, key: str, basis) -> None:
        data = {"basis": [[[list(e), str(c)] for e, c in g.terms()] for g in basis]}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(data, fh)
            os.replace(tmp, self._path(key))
        except BaseException:
            with contextlib.suppress(OSError):
                os.unlink(tmp)
            raise


def active_store():
    return _STORE.get()


@contextlib.contextmanager
def using_store(store):
    token = _STORE.set(store)
    try:
        yield store
    finally:
        _STORE.reset(token)
