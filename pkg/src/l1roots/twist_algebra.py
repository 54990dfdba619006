"""Exact-integer curve matrices of Dehn twist words on a filling pair of families.

Matrices act on column weight vectors ordered (c_1..c_K, d_1..d_K).  A c-twist
adds N * i(c_i, d_j) * weight(d_j) to weight(c_i), and a word is applied right
to left, so ``compose([G, F])`` is M_G @ M_F.  The carrying matrix in the
a_ij = |Phi(e_i) ∩ t_j| orientation is the transpose of what is built here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .curve_model import (
    FillingPairConfig,
    IncidenceMap,
    NecklaceConfig,
    necklace_incidence,
    shift_permutation,
    single_pair_incidence,
)
from .errors import ConfigError, DimensionError, MatrixParseError


class CurveMatrix:
    """Sparse square matrix with exact Python-int entries and row/column labels.

    Treated as immutable: every operation returns a new matrix.
    """

    __slots__ = ("dim", "labels", "_rows")

    def __init__(self, dim: int, rows: dict, labels: Optional[Sequence[str]] = None):
        self.dim = dim
        self.labels = tuple(labels) if labels is not None else default_labels(dim)
        if len(self.labels) != dim:
            raise DimensionError(f"{len(self.labels)} labels for a {dim}x{dim} matrix")
        # drop explicit zeros so equality is structural
        self._rows = {i: {j: v for j, v in row.items() if v} for i, row in rows.items()}
        self._rows = {i: row for i, row in self._rows.items() if row}

    @classmethod
    def identity(cls, dim: int, labels=None) -> "CurveMatrix":
        return cls(dim, {i: {i: 1} for i in range(dim)}, labels)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], labels=None) -> "CurveMatrix":
        dim = len(rows)
        if any(len(row) != dim for row in rows):
            raise DimensionError("matrix must be square")
        data = {i: {j: int(v) for j, v in enumerate(row) if v} for i, row in enumerate(rows)}
        return cls(dim, data, labels)

    @classmethod
    def permutation(cls, perm: Sequence[int], labels=None) -> "CurveMatrix":
        """Matrix sending basis vector j to basis vector perm[j] (0-based)."""
        dim = len(perm)
        return cls(dim, {perm[j]: {j: 1} for j in range(dim)}, labels)

    def __getitem__(self, key) -> int:
        i, j = key
        return self._rows.get(i, {}).get(j, 0)

    def items(self):
        for i in sorted(self._rows):
            row = self._rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def row(self, i: int) -> dict:
        return dict(self._rows.get(i, {}))

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.dim for _ in range(self.dim)]
        for i, j, v in self.items():
            out[i][j] = v
        return out

    def to_numpy(self, dtype=float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=dtype)
        for i, j, v in self.items():
            out[i, j] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, CurveMatrix):
            return NotImplemented
        return self.dim == other.dim and self._rows == other._rows

    def __hash__(self):
        return hash((self.dim, tuple(self.items())))

    def __repr__(self):
        if self.dim <= 6:
            return f"CurveMatrix({self.to_dense()})"
        return f"CurveMatrix(dim={self.dim}, nnz={self.nnz})"

    def __matmul__(self, other: "CurveMatrix") -> "CurveMatrix":
        if self.dim != other.dim:
            raise DimensionError(f"cannot multiply {self.dim}x{self.dim} by {other.dim}x{other.dim}")
        out = {}
        orows = other._rows
        for i, row in self._rows.items():
            acc = {}
            for k, a in row.items():
                for j, b in orows.get(k, {}).items():
                    acc[j] = acc.get(j, 0) + a * b
            out[i] = acc
        return CurveMatrix(self.dim, out, self.labels)

    def __pow__(self, k: int) -> "CurveMatrix":
        if k < 0:
            raise ValueError("negative powers are not nonnegative matrices")
        result = CurveMatrix.identity(self.dim, self.labels)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def transpose(self) -> "CurveMatrix":
        out: dict = {}
        for i, j, v in self.items():
            out.setdefault(j, {})[i] = v
        return CurveMatrix(self.dim, out, self.labels)

    T = property(transpose)

    def relabeled(self, labels: Sequence[str]) -> "CurveMatrix":
        return CurveMatrix(self.dim, self._rows, labels)

    def apply(self, vec: Sequence) -> list:
        """Matrix-vector product without leaving exact arithmetic for int/Fraction input."""
        if len(vec) != self.dim:
            raise DimensionError(f"vector of length {len(vec)} for dim {self.dim}")
        out = [0] * self.dim
        for i, row in self._rows.items():
            out[i] = sum(v * vec[j] for j, v in row.items())
        return out

    def column_sums(self) -> list[int]:
        out = [0] * self.dim
        for _, j, v in self.items():
            out[j] += v
        return out

    def row_sums(self) -> list[int]:
        return [sum(self._rows.get(i, {}).values()) for i in range(self.dim)]

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for _, _, v in self.items())

    def determinant(self) -> int:
        """Exact determinant by sparse Gaussian elimination over the rationals."""
        rows = {i: {j: Fraction(v) for j, v in row.items()} for i, row in self._rows.items()}
        if len(rows) < self.dim:
            return 0
        det = Fraction(1)
        pivot_rows = []
        remaining = set(range(self.dim))
        for col in range(self.dim):
            # sparsest row holding this column keeps fill-in down
            pivot = None
            for i in remaining:
                if col in rows[i] and (pivot is None or len(rows[i]) < len(rows[pivot])):
                    pivot = i
            if pivot is None:
                return 0
            prow = rows[pivot]
            pval = prow[col]
            det *= pval
            pivot_rows.append(pivot)
            remaining.discard(pivot)
            for i in remaining:
                row = rows[i]
                f = row.get(col)
                if f is None:
                    continue
                f = f / pval
                for j, v in prow.items():
                    nv = row.get(j, 0) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        return int(det) * permutation_sign(pivot_rows)

    def __sub__(self, other: "CurveMatrix") -> "CurveMatrix":
        out = {i: dict(row) for i, row in self._rows.items()}
        for i, j, v in other.items():
            out.setdefault(i, {})
            out[i][j] = out[i].get(j, 0) - v
        return CurveMatrix(self.dim, out, self.labels)


def default_labels(dim: int) -> tuple[str, ...]:
    if dim % 2:
        return tuple(f"x{i + 1}" for i in range(dim))
    K = dim // 2
    return tuple([f"c{i}" for i in range(1, K + 1)] + [f"d{i}" for i in range(1, K + 1)])


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a 0-based permutation given as an image list."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class Twist:
    """A power of the positive (kind "c") or negative (kind "d") twist about one lift."""

    kind: str
    index: int
    exponent: int

    def __post_init__(self):
        if self.kind not in ("c", "d"):
            raise ConfigError(f"twist kind must be 'c' or 'd', got {self.kind!r}")
        if self.exponent < 1:
            raise ConfigError(f"twist exponents are positive, got {self.exponent}")


@dataclass(frozen=True)
class Chi:
    """Simultaneous index shift c_i -> c_{i+shift}, d_i -> d_{i+shift}."""

    shift: int


Letter = Union[Twist, Chi]
TwistWord = Sequence[Letter]


def elementary_twist_matrix(kind: str, i: int, N: int, inc: IncidenceMap) -> CurveMatrix:
    letter = Twist(kind, i, N)
    K = inc.K
    if not 1 <= i <= K:
        raise ConfigError(f"twist index {i} outside 1..{K}")
    rows = {k: {k: 1} for k in range(2 * K)}
    if letter.kind == "c":
        row = rows[i - 1]
        for j in inc.neighbors_of_c(i):
            row[K + j - 1] = row.get(K + j - 1, 0) + N * inc.weight(i, j)
    else:
        row = rows[K + i - 1]
        for j in inc.neighbors_of_d(i):
            row[j - 1] = row.get(j - 1, 0) + N * inc.weight(j, i)
    return CurveMatrix(2 * K, rows)


def chi_matrix(K: int, shift: int) -> CurveMatrix:
    perm = shift_permutation(K, shift)
    images = [p - 1 for p in perm] + [K + p - 1 for p in perm]
    return CurveMatrix.permutation(images)


def compose(word: TwistWord, inc: IncidenceMap) -> CurveMatrix:
    """Curve matrix of a word applied right to left (``word[-1]`` acts first)."""
    K = inc.K
    result = CurveMatrix.identity(2 * K)
    for letter in word:
        if isinstance(letter, Chi):
            factor = chi_matrix(K, letter.shift)
        else:
            factor = elementary_twist_matrix(letter.kind, letter.index, letter.exponent, inc)
        result = result @ factor
    return result


def inverse_word(word: TwistWord) -> list:
    """Word of the inverse map with the roles of the two families exchanged.

    Letters are reversed and every chi shift is negated.  Keeping each twist's
    kind flips which family is twisted positively, which is what makes the
    inverse of a Thurston-Penner word Thurston-Penner again.
    """
    return [Chi(-x.shift) if isinstance(x, Chi) else x for x in reversed(word)]


def base_word(N: int) -> list:
    """G^{-N} F^{N} on a single pair."""
    return [Twist("d", 1, N), Twist("c", 1, N)]


def base_curve_matrix(cfg: FillingPairConfig) -> CurveMatrix:
    """[[1, 2rN], [2rN, (2rN)^2 + 1]], the downstairs map G^{-2N} F^{2N}."""
    x = 2 * cfg.r * cfg.N
    return CurveMatrix.from_dense([[1, x], [x, x * x + 1]], labels=("c", "d"))


def base_curve_matrix_from_word(cfg: FillingPairConfig, stable: bool = False) -> CurveMatrix:
    word = base_word(2 * cfg.N)
    if stable:
        word = inverse_word(word)
    return compose(word, single_pair_incidence(cfg.r)).relabeled(("c", "d"))


def lifted_word(cfg: NecklaceConfig, N: int) -> list:
    K = cfg.K
    return [Twist("d", i, N) for i in range(K, 0, -1)] + [Twist("c", i, N) for i in range(K, 0, -1)]


def root_word(cfg: NecklaceConfig, N: int) -> list:
    """chi ∘ G_m^{-N} ∘ ... ∘ G_1^{-N} ∘ F_m^N ∘ ... ∘ F_1^N."""
    m = cfg.m
    return (
        [Chi(cfg.shift)]
        + [Twist("d", i, N) for i in range(m, 0, -1)]
        + [Twist("c", i, N) for i in range(m, 0, -1)]
    )


def _check_necklace(cfg: NecklaceConfig, r: int, N: int):
    if r < 1 or N < 1:
        raise ConfigError(f"r and N must be >= 1, got r={r}, N={N}")


def lifted_full_matrix(cfg: NecklaceConfig, r: int, N: int, flipped: bool = False) -> CurveMatrix:
    _check_necklace(cfg, r, N)
    return compose(lifted_word(cfg, N), necklace_incidence(cfg, r, flipped))


def necklace_root_matrix(
    cfg: NecklaceConfig, r: int, N: int, stable: bool = False, flipped: bool = False
) -> CurveMatrix:
    _check_necklace(cfg, r, N)
    word = root_word(cfg, N)
    if stable:
        word = inverse_word(word)
    return compose(word, necklace_incidence(cfg, r, flipped))


def psi_matrix(
    cfg: NecklaceConfig, r: int, N: int, stable: bool = False, flipped: bool = False
) -> CurveMatrix:
    return necklace_root_matrix(cfg, r, N, stable=stable, flipped=flipped) ** cfg.m


def is_primitive(M: CurveMatrix, max_power: Optional[int] = None) -> bool:
    """True iff some power M^k, k <= max_power (default dim^2), is entrywise positive."""
    if not M.is_nonnegative():
        raise ValueError("primitivity is defined for nonnegative matrices")
    if max_power is None:
        max_power = M.dim * M.dim
    pattern = M.to_numpy(dtype=float) > 0
    step = pattern.astype(np.int64)
    current = pattern
    seen = set()
    for _ in range(max_power):
        if current.all():
            return True
        key = np.packbits(current).tobytes()
        if key in seen:
            return False
        seen.add(key)
        current = (current.astype(np.int64) @ step) > 0
    return False


# --- text serialization ------------------------------------------------------
#
# line 1:   <dim> <label_1> ... <label_dim>
# then:     <row> <col> <value>     one per nonzero entry, 1-based, exact decimal


def dumps(M: CurveMatrix) -> str:
    lines = [" ".join([str(M.dim), *M.labels])]
    lines += [f"{i + 1} {j + 1} {v}" for i, j, v in M.items()]
    return "\n".join(lines) + "\n"


def loads(text: str) -> CurveMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixParseError("empty matrix file")
    head = lines[0].split()
    try:
        dim = int(head[0])
    except ValueError:
        raise MatrixParseError(f"header must start with the dimension, got {head[0]!r}") from None
    labels = head[1:]
    if dim < 1 or len(labels) != dim:
        raise MatrixParseError(f"header declares dim {dim} but lists {len(labels)} labels")
    rows: dict = {}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3:
            raise MatrixParseError(f"line {lineno}: expected 'row col value', got {line!r}")
        try:
            i, j, v = (int(p) for p in parts)
        except ValueError:
            raise MatrixParseError(f"line {lineno}: non-integer field in {line!r}") from None
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise MatrixParseError(f"line {lineno}: index out of range 1..{dim}")
        if j - 1 in rows.get(i - 1, {}):
            raise MatrixParseError(f"line {lineno}: duplicate entry ({i}, {j})")
        rows.setdefault(i - 1, {})[j - 1] = v
    return CurveMatrix(dim, rows, labels)


def save(M: CurveMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(M))


def load(path) -> CurveMatrix:
    with open(path) as fh:
        return loads(fh.read())
