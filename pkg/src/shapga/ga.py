"""Genetic-algorithm sampler of high-marginal coalitions.

For a focal feature ``i`` and coalition size ``t`` a chromosome is a
binary vector of length ``n_f - 1`` with exactly ``t`` ones; bit ``j``
stands for feature ``j`` below ``i`` and feature ``j + 1`` from ``i`` on.
Fitness is the marginal contribution of ``i`` to the encoded coalition.
Every evaluated chromosome, evicted or not, is kept as a sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .game import Coalition, GameOracle, marginal_contribution


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 20
    samples_per_size: int = 100
    max_coalition_size: int = 20
    seed: int = 0
    fitness_floor: float = 1e-6

    def __post_init__(self):
        if self.population_size < 4:
            raise ValueError("population_size must be at least 4")
        if self.samples_per_size < self.population_size:
            raise ValueError("samples_per_size must be at least population_size")
        if self.max_coalition_size < 1:
            raise ValueError("max_coalition_size must be at least 1")
        if self.fitness_floor <= 0:
            raise ValueError("fitness_floor must be positive")

    def check_features(self, n_features: int) -> None:
        if self.max_coalition_size > n_features:
            raise ValueError(
                f"max_coalition_size {self.max_coalition_size} exceeds feature count {n_features}"
            )


@dataclass(frozen=True)
class Chromosome:
    bits: tuple[int, ...]
    focal: int
    size: int

    def __post_init__(self):
        if sum(self.bits) != self.size:
            raise ValueError(f"chromosome {self.bits} does not carry exactly {self.size} ones")
        if not 0 <= self.focal <= len(self.bits):
            raise ValueError("focal feature outside chromosome range")

    @property
    def n_features(self) -> int:
        return len(self.bits) + 1

    def replace(self, bits) -> "Chromosome":
        return Chromosome(tuple(int(b) for b in bits), self.focal, self.size)

    def __str__(self):
        return "".join(map(str, self.bits))


@dataclass
class SampleSet:
    focal: int
    size: int
    n_features: int
    coalitions: list[Coalition] = field(default_factory=list)
    marginals: list[float] = field(default_factory=list)

    def __len__(self):
        return len(self.marginals)

    def add(self, coalition: Coalition, marginal: float) -> None:
        self.coalitions.append(coalition)
        self.marginals.append(float(marginal))


def chromosome_to_coalition(chromosome: Chromosome) -> Coalition:
    i = chromosome.focal
    members = [j if j < i else j + 1 for j, b in enumerate(chromosome.bits) if b]
    return Coalition.from_members(members, chromosome.n_features)


def fitness(game: GameOracle, chromosome: Chromosome) -> float:
    return marginal_contribution(game, chromosome_to_coalition(chromosome), chromosome.focal)


def random_chromosome(n_features: int, focal: int, size: int, rng: np.random.Generator) -> Chromosome:
    bits = np.zeros(n_features - 1, dtype=int)
    bits[rng.choice(n_features - 1, size=size, replace=False)] = 1
    return Chromosome(tuple(int(b) for b in bits), focal, size)


def roulette_select(fitnesses, rng: np.random.Generator, floor: float = 1e-6) -> tuple[int, int]:
    """Draw two distinct indices with probability proportional to shifted fitness.

    Weights are ``f - min(f) + floor`` so negative marginals stay usable.
    """
    f = np.asarray(fitnesses, dtype=float)
    if f.size < 2:
        raise ValueError("roulette selection needs at least two chromosomes")
    weights = f - f.min() + floor
    first = int(rng.choice(f.size, p=weights / weights.sum()))
    weights[first] = 0.0
    second = int(rng.choice(f.size, p=weights / weights.sum()))
    return first, second


def swappable_segments(a, b) -> np.ndarray:
    """Aligned windows ``(start, length)`` with equal popcount in ``a`` and ``b``.

    Windows have length at least 2 and are shorter than the chromosome; a
    full-length window always qualifies and would only exchange the parents.
    Rows are ordered by start, then length.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = a.size
    # window [s, e) balances iff the running popcount difference repeats
    c = np.concatenate(([0], np.cumsum(a - b)))
    s, e = np.nonzero(c[:, None] == c[None, :])
    length = e - s
    keep = (length >= 2) & (length < n)
    return np.column_stack([s[keep], length[keep]])


def hermaphrodite(chromosome: Chromosome, rng: np.random.Generator) -> Chromosome:
    """Reverse a random window of length at least 2 in place."""
    n = len(chromosome.bits)
    if n < 2:
        return chromosome
    length = int(rng.integers(2, n + 1))
    start = int(rng.integers(0, n - length + 1))
    bits = list(chromosome.bits)
    bits[start:start + length] = bits[start:start + length][::-1]
    return chromosome.replace(bits)


def crossover(p1: Chromosome, p2: Chromosome, rng: np.random.Generator) -> tuple[Chromosome, Chromosome]:
    if (p1.focal, p1.size, len(p1.bits)) != (p2.focal, p2.size, len(p2.bits)):
        raise ValueError("parents must share focal feature, size and length")
    segments = swappable_segments(p1.bits, p2.bits)
    if len(segments) == 0:
        return hermaphrodite(p1, rng), hermaphrodite(p2, rng)
    start, length = (int(v) for v in segments[int(rng.integers(len(segments)))])
    stop = start + length
    b1, b2 = list(p1.bits), list(p2.bits)
    b1[start:stop], b2[start:stop] = p2.bits[start:stop], p1.bits[start:stop]
    return p1.replace(b1), p2.replace(b2)


def mutate(chromosome: Chromosome, rng: np.random.Generator) -> Chromosome:
    """Flip one random 1 to 0 and one random 0 to 1."""
    bits = np.asarray(chromosome.bits)
    ones = np.flatnonzero(bits == 1)
    zeros = np.flatnonzero(bits == 0)
    if ones.size == 0 or zeros.size == 0:
        return chromosome
    bits = bits.copy()
    bits[ones[rng.integers(ones.size)]] = 0
    bits[zeros[rng.integers(zeros.size)]] = 1
    return chromosome.replace(bits)


def task_rng(seed: int, focal: int, size: int) -> np.random.Generator:
    return np.random.default_rng([seed, focal, size])


def collect_samples(game: GameOracle, focal: int, size: int, cfg: GaConfig) -> SampleSet:
    """Run the GA for one ``(focal, size)`` stratum until ``samples_per_size`` samples exist.

    Sizes with a single possible coalition (0 and ``n_f - 1``) are
    evaluated once directly.
    """
    n = game.n_players
    if not 0 <= focal < n:
        raise ValueError(f"focal feature {focal} outside [0, {n})")
    if not 0 <= size <= n - 1:
        raise ValueError(f"coalition size {size} leaves no room for feature {focal} among {n}")
    out = SampleSet(focal, size, n)
    if size == 0 or size == n - 1:
        chromosome = Chromosome(tuple([1] * size + [0] * (n - 1 - size)), focal, size)
        coalition = chromosome_to_coalition(chromosome)
        out.add(coalition, marginal_contribution(game, coalition, focal))
        return out

    rng = task_rng(cfg.seed, focal, size)
    budget = cfg.samples_per_size
    population = [random_chromosome(n, focal, size, rng) for _ in range(cfg.population_size)]
    scores = []
    for chromosome in population:
        coalition = chromosome_to_coalition(chromosome)
        scores.append(marginal_contribution(game, coalition, focal))
        out.add(coalition, scores[-1])

    while len(out) < budget:
        a, b = roulette_select(scores, rng, cfg.fitness_floor)
        c1, c2 = crossover(population[a], population[b], rng)
        children = [mutate(c1, rng), mutate(c2, rng)]
        for child in children[: budget - len(out)]:
            coalition = chromosome_to_coalition(child)
            population.append(child)
            scores.append(marginal_contribution(game, coalition, focal))
            out.add(coalition, scores[-1])
        # evict the two weakest; ties go to the oldest
        for _ in range(len(population) - cfg.population_size):
            worst = int(np.argmin(scores))
            del population[worst]
            del scores[worst]
    return out
