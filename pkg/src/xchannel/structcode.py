"""Structured coding of a two-dimensional integer point into one real integer.

A point ``(u, v)`` with ``u, v`` in ``{-Q..-1, 1..Q}`` is packed as
``s = u + c*v``.  With ``c >= 2Q + 1`` the packing is one-to-one and distinct
codewords stay at least one apart, so every message can be sent as a single
real stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DecodeError, DomainError

__all__ = [
    "ConstellationParam",
    "ConstellationPoint",
    "encode",
    "decode",
    "power_constraint",
    "legal_points",
    "codebook",
    "nearest_codeword",
]


@dataclass(frozen=True)
class ConstellationParam:
    Q: int
    c: int | None = None

    def __post_init__(self):
        if int(self.Q) != self.Q or self.Q < 1:
            raise ValueError(f"Q must be a positive integer, got {self.Q!r}")
        if self.c is None:
            object.__setattr__(self, "c", 2 * self.Q + 1)
        if int(self.c) != self.c or self.c < 2 * self.Q + 1:
            raise ValueError(f"c must be an integer >= 2Q+1 = {2 * self.Q + 1}, got {self.c!r}")


@dataclass(frozen=True)
class ConstellationPoint:
    u: int
    v: int


def _legal_coordinate(x: int, Q: int) -> bool:
    return x != 0 and -Q <= x <= Q


def legal_points(param: ConstellationParam) -> Iterator[ConstellationPoint]:
    """All ``(2Q)**2`` legal points, ``v`` outer and ``u`` inner, both ascending."""
    axis = [x for x in range(-param.Q, param.Q + 1) if x != 0]
    for v in axis:
        for u in axis:
            yield ConstellationPoint(u, v)


def encode(p: ConstellationPoint, param: ConstellationParam) -> int:
    if not (_legal_coordinate(p.u, param.Q) and _legal_coordinate(p.v, param.Q)):
        raise DomainError(f"{p} is outside the constellation for Q={param.Q}")
    return p.u + param.c * p.v


def decode(s: int, param: ConstellationParam) -> ConstellationPoint:
    """Recover ``(u, v)`` with ``v = round(s / c)`` and ``u = s - c*v``."""
    if int(s) != s:
        raise DecodeError(f"codewords are integers, got {s!r}")
    s = int(s)
    # floor((2s + c) / 2c) rounds s/c to the nearest integer; ties cannot occur
    # for legal codewords because |u| <= Q < c/2.
    v = (2 * s + param.c) // (2 * param.c)
    u = s - param.c * v
    if not (_legal_coordinate(u, param.Q) and _legal_coordinate(v, param.Q)):
        raise DecodeError(f"{s} is not a codeword for Q={param.Q}, c={param.c}")
    return ConstellationPoint(u, v)


def power_constraint(param: ConstellationParam) -> int:
    """Peak power ``(cQ)**2 + Q**2`` of the packed alphabet."""
    return (param.c * param.Q) ** 2 + param.Q ** 2


def codebook(param: ConstellationParam) -> np.ndarray:
    """Sorted array of every legal codeword."""
    return np.sort(np.array([encode(p, param) for p in legal_points(param)], dtype=np.int64))


def nearest_codeword(x, book: np.ndarray) -> np.ndarray:
    """Map real estimates onto the closest entries of a sorted codebook."""
    x = np.asarray(x, dtype=float)
    idx = np.clip(np.searchsorted(book, x), 1, len(book) - 1)
    left = book[idx - 1]
    right = book[idx]
    return np.where(np.abs(x - left) <= np.abs(right - x), left, right)
