"""Coalitions, characteristic functions and Shapley values of small games."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Protocol, Sequence

import numpy as np

EXACT_CEILING = 16


@dataclass(frozen=True)
class Coalition:
    """A subset of ``range(capacity)`` stored as an integer bit pattern."""

    bits: int
    capacity: int

    def __post_init__(self):
        if self.capacity < 0:
            raise ValueError("capacity must be non-negative")
        if self.bits < 0 or self.bits >> self.capacity:
            raise ValueError(f"bit pattern {self.bits:#x} exceeds capacity {self.capacity}")

    @classmethod
    def from_members(cls, members: Iterable[int], capacity: int) -> "Coalition":
        bits = 0
        for j in members:
            j = int(j)
            if not 0 <= j < capacity:
                raise ValueError(f"member {j} outside [0, {capacity})")
            if bits >> j & 1:
                raise ValueError(f"duplicate member {j}")
            bits |= 1 << j
        return cls(bits, capacity)

    @classmethod
    def empty(cls, capacity: int) -> "Coalition":
        return cls(0, capacity)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.capacity) if self.bits >> j & 1)

    def cardinality(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, j: int) -> bool:
        return 0 <= j < self.capacity and bool(self.bits >> j & 1)

    def __len__(self) -> int:
        return self.cardinality()

    def __iter__(self):
        return iter(self.members)

    def with_member(self, j: int) -> "Coalition":
        if not 0 <= j < self.capacity:
            raise ValueError(f"member {j} outside [0, {self.capacity})")
        return Coalition(self.bits | 1 << j, self.capacity)

    def __repr__(self):
        return f"Coalition({set(self.members) or '{}'}, capacity={self.capacity})"


class GameOracle(Protocol):
    """Characteristic function of a cooperative game with values in [0, 1]."""

    n_players: int

    def value(self, coalition: Coalition) -> float:
        ...


class FunctionGame:
    """Game backed by a Python callable over member tuples.

    The callable is never invoked on the empty coalition, whose value is
    pinned at zero.
    """

    def __init__(self, n_players: int, fn: Callable[[tuple[int, ...]], float]):
        self.n_players = n_players
        self._fn = fn

    def value(self, coalition: Coalition) -> float:
        if coalition.bits == 0:
            return 0.0
        return float(self._fn(coalition.members))


class TableGame:
    """Game given by an explicit table indexed by coalition bit pattern."""

    def __init__(self, values: Sequence[float] | np.ndarray):
        values = np.asarray(values, dtype=float)
        n = int(round(math.log2(values.size))) if values.size else -1
        if n < 0 or 1 << n != values.size:
            raise ValueError("table length must be a power of two")
        if values[0] != 0.0:
            raise ValueError("value of the empty coalition must be 0")
        self.n_players = n
        self.table = values

    def value(self, coalition: Coalition) -> float:
        return float(self.table[coalition.bits])

    def __add__(self, other: "TableGame") -> "TableGame":
        return TableGame(self.table + other.table)


class CountingGame:
    """Wraps a game and counts ``value`` calls."""

    def __init__(self, game: GameOracle):
        self.game = game
        self.n_players = game.n_players
        self.calls = 0

    def value(self, coalition: Coalition) -> float:
        self.calls += 1
        return self.game.value(coalition)


def value_table(game: GameOracle) -> np.ndarray:
    """Evaluate ``game`` on every coalition; index = bit pattern."""
    n = game.n_players
    if n > EXACT_CEILING:
        raise ValueError(f"{n} players exceeds the exact-mode ceiling of {EXACT_CEILING}")
    return np.array([game.value(Coalition(b, n)) for b in range(1 << n)], dtype=float)


def _popcounts(n: int) -> np.ndarray:
    masks = np.arange(1 << n)
    counts = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        counts += (masks >> j) & 1
    return counts


def marginal_contribution(game: GameOracle, coalition: Coalition, i: int) -> float:
    """Gain ``v(T + {i}) - v(T)`` from player ``i`` joining ``coalition``."""
    if not 0 <= i < game.n_players:
        raise ValueError(f"player {i} outside [0, {game.n_players})")
    if i in coalition:
        raise ValueError(f"player {i} already belongs to {coalition}")
    return game.value(coalition.with_member(i)) - game.value(coalition)


def exact_shapley(game: GameOracle, ceiling: int = EXACT_CEILING) -> np.ndarray:
    """Shapley values by full enumeration of coalitions.

    Each coalition T not containing i is weighted by
    ``|T|! (n - |T| - 1)! / n!``. Exponential in the number of players;
    refuses games above ``ceiling`` players.
    """
    n = game.n_players
    if n > ceiling:
        raise ValueError(f"{n} players exceeds the exact-mode ceiling of {ceiling}")
    if n == 0:
        return np.zeros(0)
    table = value_table(game)
    sizes = _popcounts(n)
    weights = np.array(
        [math.factorial(s) * math.factorial(n - s - 1) / math.factorial(n) for s in range(n)]
    )
    masks = np.arange(1 << n)
    phi = np.empty(n)
    for i in range(n):
        without = masks[(masks >> i) & 1 == 0]
        gains = table[without | (1 << i)] - table[without]
        phi[i] = np.dot(weights[sizes[without]], gains)
    return phi


def exact_size_means(game: GameOracle, ceiling: int = EXACT_CEILING) -> np.ndarray:
    """Mean marginal contribution of each player over all size-t coalitions.

    Returns an ``(n, n)`` array; entry ``[i, t]`` averages over the
    ``C(n-1, t)`` coalitions of size t that exclude i.
    """
    n = game.n_players
    if n > ceiling:
        raise ValueError(f"{n} players exceeds the exact-mode ceiling of {ceiling}")
    table = value_table(game)
    sizes = _popcounts(n)
    masks = np.arange(1 << n)
    means = np.zeros((n, n))
    for i in range(n):
        without = masks[(masks >> i) & 1 == 0]
        gains = table[without | (1 << i)] - table[without]
        s = sizes[without]
        means[i] = np.bincount(s, weights=gains, minlength=n)[:n] / np.bincount(s, minlength=n)[:n]
    return means


def truncated_shapley(
    means: Mapping[tuple[int, int], float] | np.ndarray, n_features: int, max_size: int
) -> np.ndarray:
    """Average the per-size mean marginals over sizes ``0 .. max_size - 1``.

    ``means`` is either a mapping ``(i, t) -> mean`` or an array indexed
    ``[i, t]``.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    out = np.empty(n_features)
    if isinstance(means, np.ndarray):
        if means.ndim != 2 or means.shape[0] < n_features or means.shape[1] < max_size:
            raise ValueError(f"means array of shape {means.shape} lacks ({n_features}, {max_size}) entries")
        return means[:n_features, :max_size].mean(axis=1)
    for i in range(n_features):
        total = 0.0
        for t in range(max_size):
            try:
                total += means[(i, t)]
            except KeyError:
                raise KeyError(f"missing per-size mean for feature {i}, size {t}") from None
        out[i] = total / max_size
    return out


def verify_game_properties(
    game: GameOracle, mode: str, ceiling: int = EXACT_CEILING, tol: float = 1e-12
) -> bool:
    """Exhaustively test a game for convexity or super-additivity."""
    if mode not in ("convex", "superadditive"):
        raise ValueError(f"unknown mode {mode!r}")
    table = value_table(game) if game.n_players <= ceiling else None
    if table is None:
        raise ValueError(f"{game.n_players} players exceeds the exact-mode ceiling of {ceiling}")
    masks = np.arange(table.size)
    for s in range(table.size):
        if mode == "convex":
            lhs = table[masks | s] + table[masks & s]
            rhs = table[s] + table
        else:
            others = masks[(masks & s) == 0]
            lhs = table[others | s]
            rhs = table[s] + table[others]
        if np.any(lhs < rhs - tol):
            return False
    return True


@dataclass
class ShapleyReport:
    """Per-feature Shapley estimates plus the strata they came from."""

    values: np.ndarray
    size_means: dict[tuple[int, int], float]
    size_counts: dict[tuple[int, int], int]
    evaluations: int
    feature_names: list[str] | None = None

    def ranks(self) -> np.ndarray:
        return rank_descending(self.values)

    def names(self) -> list[str]:
        if self.feature_names is not None:
            return list(self.feature_names)
        return [f"f{i}" for i in range(len(self.values))]

    def to_rows(self) -> list[tuple]:
        ranks = self.ranks()
        names = self.names()
        order = np.argsort(ranks, kind="stable")
        return [(int(i), names[i], float(self.values[i]), int(ranks[i])) for i in order]

    def write(self, path, delimiter: str = ",") -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(delimiter.join(["feature_index", "feature_name", "shapley_value", "rank"]) + "\n")
            for idx, name, val, rank in self.to_rows():
                fh.write(delimiter.join([str(idx), name, format_float(val), str(rank)]) + "\n")


def rank_descending(scores) -> np.ndarray:
    """1-based ranks, highest score first; ties broken by lower index."""
    scores = np.asarray(scores, dtype=float)
    order = np.lexsort((np.arange(scores.size), -scores))
    ranks = np.empty(scores.size, dtype=int)
    ranks[order] = np.arange(1, scores.size + 1)
    return ranks


def format_float(x: float) -> str:
    return repr(float(x))
