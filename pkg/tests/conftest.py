import numpy as np
import pytest

from gamemac import Game, ProductStrategy, Povm, PureState, QuantumStrategy


def random_game(rng, max_size=3, win_density=0.5) -> Game:
    """A random small promise-free game."""
    nx1, nx2, ny1, ny2 = rng.integers(1, max_size + 1, size=4)
    win = rng.random((nx1, nx2, ny1, ny2)) < win_density
    return Game(int(nx1), int(nx2), int(ny1), int(ny2), win)


def random_strategy(rng, g: Game) -> ProductStrategy:
    """A random product strategy with random question marginals."""
    p1 = rng.dirichlet(np.ones(g.ny1), size=g.nx1).T
    p2 = rng.dirichlet(np.ones(g.ny2), size=g.nx2).T
    pi1 = rng.dirichlet(np.ones(g.nx1))
    pi2 = rng.dirichlet(np.ones(g.nx2))
    return ProductStrategy(p1, p2, pi1, pi2)


def random_quantum_strategy(rng, nx1, nx2, ny1, ny2, d=3) -> QuantumStrategy:
    """Random state and POVMs; elements conjugated to sum to the identity."""
    vec = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
    state = PureState(vec / np.linalg.norm(vec), d, d)

    def random_povm(n):
        raw = []
        for _ in range(n):
            m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            raw.append(m @ m.conj().T)
        total = sum(raw)
        vals, vecs = np.linalg.eigh(total)
        inv_sqrt = vecs @ np.diag(vals**-0.5) @ vecs.conj().T
        return Povm([inv_sqrt @ m @ inv_sqrt for m in raw])

    return QuantumStrategy(
        state,
        [random_povm(ny1) for _ in range(nx1)],
        [random_povm(ny2) for _ in range(nx2)],
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Print one explicit pass/fail line per acceptance criterion."""
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.module.__name__ == "test_acceptance":
        status = "PASS" if report.passed else "FAIL"
        reporter = item.config.pluginmanager.get_plugin("terminalreporter")
        reporter.write_line(f"{item.name}: {status}")
