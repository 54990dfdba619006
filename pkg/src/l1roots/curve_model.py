"""Base filling pair, mod-2 homology predicates and necklace cover combinatorics.

Curves downstairs are only seen through their mod-2 homology classes, written
in a symplectic basis ordered (a_1, b_1, ..., a_g, b_g).  Lifts in the necklace
cover are numbered 1..K with cyclic wraparound, so index 0 means K.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Optional, Sequence

from .errors import ConfigError, DimensionError, InvalidCoverError, InvalidCurveError


@dataclass(frozen=True)
class FillingPairConfig:
    """Filling pair (c, d) with |c ∩ d| = r; downstairs map is G^{-2N} F^{2N}."""

    r: int
    N: int
    n: int = 2

    def __post_init__(self):
        if self.r < 1:
            raise ConfigError(f"r must be >= 1, got {self.r}")
        if self.N < 1:
            raise ConfigError(f"N must be >= 1, got {self.N}")
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}")


@dataclass(frozen=True)
class HomologyClass:
    coordinates: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(x) & 1 for x in self.coordinates)
        if len(coords) == 0 or len(coords) % 2:
            raise DimensionError(f"class needs an even number (2g) of bits, got {len(coords)}")
        object.__setattr__(self, "coordinates", coords)

    @classmethod
    def from_bits(cls, bits: str) -> "HomologyClass":
        if not bits or set(bits) - {"0", "1"}:
            raise InvalidCurveError(f"malformed bit string {bits!r}")
        return cls(tuple(int(ch) for ch in bits))

    @classmethod
    def basis(cls, genus: int, name: str) -> "HomologyClass":
        """``basis(2, "b1")`` is the class b_1 in genus 2."""
        kind, k = name[0], int(name[1:])
        if kind not in "ab" or not 1 <= k <= genus:
            raise InvalidCurveError(f"no basis class {name!r} in genus {genus}")
        coords = [0] * (2 * genus)
        coords[2 * (k - 1) + (kind == "b")] = 1
        return cls(tuple(coords))

    @property
    def genus(self) -> int:
        return len(self.coordinates) // 2

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def bits(self) -> str:
        return "".join(map(str, self.coordinates))

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        _check_same_genus(self, other)
        return HomologyClass(tuple(x ^ y for x, y in zip(self.coordinates, other.coordinates)))

    def __str__(self):
        return self.bits()


def _check_same_genus(x: HomologyClass, y: HomologyClass):
    if len(x.coordinates) != len(y.coordinates):
        raise DimensionError(
            f"homology classes live in different genera ({x.genus} vs {y.genus})"
        )


def mod2_pairing(x: HomologyClass, y: HomologyClass) -> int:
    _check_same_genus(x, y)
    u, v = x.coordinates, y.coordinates
    total = 0
    for k in range(0, len(u), 2):
        total += u[k] * v[k + 1] + u[k + 1] * v[k]
    return total & 1


def preimage_is_connected(c: HomologyClass, gamma: HomologyClass) -> bool:
    """Whether the preimage of ``c`` in the double cover dual to ``gamma`` is connected.

    The double cover obtained by cutting two copies of the surface along gamma
    and swapping sheets is classified by the functional x -> <x, gamma> mod 2,
    so a loop lifts to a closed loop exactly when it meets gamma evenly.
    """
    if gamma.is_zero():
        raise InvalidCoverError("the zero class defines no connected double cover")
    return mod2_pairing(c, gamma) == 1


def nonzero_classes(genus: int) -> Iterator[HomologyClass]:
    """All nonzero classes in lexicographic order of their bit strings."""
    for bits in itertools.product((0, 1), repeat=2 * genus):
        if any(bits):
            yield HomologyClass(bits)


def find_interlacing(
    c: HomologyClass, d: HomologyClass
) -> Optional[tuple[HomologyClass, HomologyClass]]:
    """Lexicographically first (alpha, beta) interlacing c and d, or None."""
    _check_same_genus(c, d)
    if c.is_zero() or d.is_zero():
        raise InvalidCurveError("interlacing needs nonzero (nonseparating) classes")
    classes = list(nonzero_classes(c.genus))
    alpha = next(
        (a for a in classes if preimage_is_connected(c, a) and not preimage_is_connected(d, a)),
        None,
    )
    beta = next(
        (b for b in classes if preimage_is_connected(d, b) and not preimage_is_connected(c, b)),
        None,
    )
    if alpha is None or beta is None:
        return None
    return alpha, beta


@dataclass(frozen=True)
class NecklaceConfig:
    """Necklace parameters; the cover has K = m^2 n lifts of each curve."""

    m: int
    n: int
    K: int = field(init=False)
    shift: int = field(init=False)

    def __post_init__(self):
        if self.m < 2:
            raise ConfigError(f"m must be >= 2, got {self.m}")
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}")
        object.__setattr__(self, "K", self.m * self.m * self.n)
        object.__setattr__(self, "shift", self.m)

    @property
    def cover_degree(self) -> int:
        return 2 * self.K


def wrap(i: int, K: int) -> int:
    """1-based cyclic index: wrap(0, K) == K, wrap(K + 1, K) == 1."""
    return (i - 1) % K + 1


@dataclass(frozen=True)
class IncidenceMap:
    """Weighted bipartite incidence between lifts c_1..c_K and d_1..d_K.

    ``pairs`` maps (i, j), 1-based, to i(c_i, d_j); absent pairs are disjoint.
    """

    K: int
    r: int
    pairs: dict

    def weight(self, i: int, j: int) -> int:
        return self.pairs.get((i, j), 0)

    def neighbors_of_c(self, i: int) -> list[int]:
        return sorted(j for (ii, j) in self.pairs if ii == i)

    def neighbors_of_d(self, j: int) -> list[int]:
        return sorted(i for (i, jj) in self.pairs if jj == j)

    def total_mass(self) -> int:
        return sum(self.pairs.values())

    def row_sums(self) -> list[int]:
        out = [0] * self.K
        for (i, _), w in self.pairs.items():
            out[i - 1] += w
        return out

    def column_sums(self) -> list[int]:
        out = [0] * self.K
        for (_, j), w in self.pairs.items():
            out[j - 1] += w
        return out

    def relabel(self, perm: Sequence[int]) -> "IncidenceMap":
        """Push the pair set through ``perm`` (perm[i-1] is the image of index i)."""
        pairs = {(perm[i - 1], perm[j - 1]): w for (i, j), w in self.pairs.items()}
        return IncidenceMap(self.K, self.r, pairs)


def necklace_incidence(cfg: NecklaceConfig, r: int, flipped: bool = False) -> IncidenceMap:
    """c_i meets d_{i-1} and d_i, r times each.

    ``flipped=True`` uses the mirrored adjacency {d_i, d_{i+1}}; it only exists
    as a negative control for the residual reconciliation.
    """
    if r < 1:
        raise ConfigError(f"r must be >= 1, got {r}")
    K = cfg.K
    offsets = (0, 1) if flipped else (-1, 0)
    pairs = {}
    for i in range(1, K + 1):
        for off in offsets:
            pairs[(i, wrap(i + off, K))] = r
    return IncidenceMap(K, r, pairs)


def single_pair_incidence(r: int) -> IncidenceMap:
    """Downstairs incidence: one c, one d, |c ∩ d| = r."""
    return IncidenceMap(1, r, {(1, 1): r})


def chi_permutation(cfg: NecklaceConfig, power: int = 1) -> tuple[int, ...]:
    """Image table of i -> i + power*m (1-based, mod K)."""
    return shift_permutation(cfg.K, power * cfg.shift)


def shift_permutation(K: int, shift: int) -> tuple[int, ...]:
    return tuple(wrap(i + shift, K) for i in range(1, K + 1))


def permutation_order(perm: Sequence[int]) -> int:
    order = 1
    seen = set()
    for start in range(1, len(perm) + 1):
        if start in seen:
            continue
        length, i = 0, start
        while i not in seen:
            seen.add(i)
            i = perm[i - 1]
            length += 1
        order = order * length // gcd(order, length)
    return order
