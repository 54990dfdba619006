"""Intersection pairings of weighted curve families, at curve granularity.

A lamination carried by the c-family has one weight per lift c_i, one carried
by the d-family one weight per d_j; two such families meet only through the
c/d incidence, so every sum runs over incident pairs and carries the
multiplicity i(c_i, d_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real
from typing import Sequence

import numpy as np

from .curve_model import IncidenceMap
from .errors import DimensionError


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative weights; ``split`` is K for a labeled (c | d) vector of length 2K."""

    entries: tuple
    split: int | None = None

    def __post_init__(self):
        entries = tuple(self.entries)
        if any(x < 0 for x in entries):
            raise ValueError("weights must be nonnegative")
        if self.split is not None and len(entries) != 2 * self.split:
            raise DimensionError(f"labeled vector needs 2*{self.split} entries, got {len(entries)}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def labeled(cls, a: Sequence, b: Sequence) -> "WeightVector":
        if len(a) != len(b):
            raise DimensionError("c-part and d-part must have the same length")
        return cls(tuple(a) + tuple(b), split=len(a))

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def c_part(self) -> tuple:
        self._need_split()
        return self.entries[: self.split]

    @property
    def d_part(self) -> tuple:
        self._need_split()
        return self.entries[self.split :]

    def _need_split(self):
        if self.split is None:
            raise DimensionError("vector has no c/d labeling")

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class AveragedWeights:
    a_sum: float
    b_sum: float

    def as_array(self) -> np.ndarray:
        return np.array([self.a_sum, self.b_sum])


def _entries(x) -> tuple:
    return x.entries if isinstance(x, WeightVector) else tuple(x)


def pairing_weights(upsilon, omega, inc: IncidenceMap):
    """Double sum over incident pairs of upsilon(c_i) * omega(d_j) * i(c_i, d_j)."""
    u, w = _entries(upsilon), _entries(omega)
    if len(u) != inc.K or len(w) != inc.K:
        raise DimensionError(f"weights of length {len(u)}, {len(w)} for an incidence on K={inc.K}")
    return sum(u[i - 1] * w[j - 1] * mult for (i, j), mult in inc.pairs.items())


def reweight(omega, inc: IncidenceMap) -> WeightVector:
    """Push d-side weights onto the c-lifts: out(c_i) = sum_j omega(d_j) i(c_i, d_j)."""
    w = _entries(omega)
    if len(w) != inc.K:
        raise DimensionError(f"weights of length {len(w)} for an incidence on K={inc.K}")
    out = [0] * inc.K
    for (i, j), mult in inc.pairs.items():
        out[i - 1] += w[j - 1] * mult
    return WeightVector(tuple(out))


def pairing_via_reweight(upsilon, omega, inc: IncidenceMap):
    u = _entries(upsilon)
    pushed = reweight(omega, inc).entries
    if len(u) != inc.K:
        raise DimensionError(f"weights of length {len(u)} for an incidence on K={inc.K}")
    return sum(x * y for x, y in zip(u, pushed))


def solenoid_pairing(surface_value: Real, degree: int):
    """Pairing of the lifts to the solenoid: the cover value over the cover degree."""
    if degree < 1:
        raise ValueError(f"cover degree must be >= 1, got {degree}")
    return surface_value / degree


def averaged_vector(upsilon: WeightVector) -> AveragedWeights:
    if not isinstance(upsilon, WeightVector) or upsilon.split is None:
        raise DimensionError("averaging needs a vector labeled with its c/d split")
    return AveragedWeights(float(sum(upsilon.c_part)), float(sum(upsilon.d_part)))


def curve_pairing(upsilon: WeightVector, test_kind: str, inc: IncidenceMap):
    """Pairing of a lamination with the full preimage of c (or d) on the cover.

    Every lift of the test curve has weight one, so only the opposite family of
    ``upsilon`` contributes.
    """
    ones = (1,) * inc.K
    if test_kind == "c":
        return pairing_weights(ones, upsilon.d_part, inc)
    if test_kind == "d":
        return pairing_weights(upsilon.c_part, ones, inc)
    raise ValueError(f"test curve kind must be 'c' or 'd', got {test_kind!r}")
