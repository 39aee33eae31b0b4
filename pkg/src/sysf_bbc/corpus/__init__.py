"""Closed System F terms used by the test suite and the scripts."""

from __future__ import annotations

from pathlib import Path

from .. import system_f as sf

DIR = Path(__file__).parent

# the three smallest end-to-end terms, with their oracle step counts
SMALL = {"identity": 0, "id_id": 1, "k_a_b": 2}


def names() -> list[str]:
    return sorted(p.stem for p in DIR.glob("*.sf"))


def path(name: str) -> Path:
    return DIR / f"{name}.sf"


def load(name: str) -> sf.Derivation:
    return sf.elaborate(sf.parse_term(path(name).read_text()))


def load_all() -> dict[str, sf.Derivation]:
    return {n: load(n) for n in names()}
