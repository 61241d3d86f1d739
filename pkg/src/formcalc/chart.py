"""Coordinate charts: the index space every tensor in this package lives on."""

from __future__ import annotations

import re
from typing import Iterable

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class Chart:
    """An ordered tuple of distinct coordinate names.

    Polynomials, forms and multivectors all refer back to one of these.
    Charts are immutable and compare (and hash) by their name tuple.
    """

    __slots__ = ("names", "_positions")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("a chart needs at least one coordinate")
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid coordinate name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError("coordinate names must be distinct")
        self.names = names
        self._positions = {name: i for i, name in enumerate(names)}

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._positions[name]
        except KeyError:
            raise ValueError(f"unknown coordinate {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._positions

    def extended(self, name: str) -> "Chart":
        """A new chart with one extra coordinate appended at the end."""
        if name in self._positions:
            raise ValueError(f"coordinate {name!r} already present")
        return Chart(self.names + (name,))

    def __eq__(self, other):
        return isinstance(other, Chart) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Chart({', '.join(self.names)})"
