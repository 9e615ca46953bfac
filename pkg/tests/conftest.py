import itertools
import math
import sys

import numpy as np
import pytest

from shapga.game import Coalition


def permutation_shapley(game):
    """Shapley values by walking every player ordering (independent oracle)."""
    n = game.n_players
    phi = np.zeros(n)
    for order in itertools.permutations(range(n)):
        bits = 0
        before = 0.0
        for p in order:
            bits |= 1 << p
            after = game.value(Coalition(bits, n))
            phi[p] += after - before
            before = after
    return phi / math.factorial(n)


def brute_size_mean(game, i, t):
    """Mean marginal of ``i`` over all size-``t`` coalitions without ``i``."""
    n = game.n_players
    others = [j for j in range(n) if j != i]
    gains = []
    for members in itertools.combinations(others, t):
        c = Coalition.from_members(members, n)
        gains.append(game.value(c.with_member(i)) - game.value(c))
    return float(np.mean(gains))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
