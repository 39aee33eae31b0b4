"""Deterministic fresh-name supply."""

from __future__ import annotations

import itertools
from typing import Iterable


class Fresh:
    """Mints names ``hint + n`` that avoid a reserved set.

    A counter (not randomness) keeps generated output byte-stable across runs.
    """

    def __init__(self, avoid: Iterable[str] = (), start: int = 0):
        self._used = set(avoid)
        self._counter = itertools.count(start)

    def reserve(self, names: Iterable[str]) -> None:
        self._used.update(names)

    def __call__(self, hint: str = "v") -> str:
        base = "".join(c for c in hint if c.isalpha()) or "v"
        while True:
            name = f"{base}{next(self._counter)}"
            if name not in self._used:
                self._used.add(name)
                return name


def fresh_like(name: str, avoid: set[str]) -> str:
    """A primed variant of ``name`` outside ``avoid``."""
    base = name.split("'")[0]
    for n in itertools.count(1):
        cand = f"{base}'{n}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")
