"""Finite two-player non-local games and exact classical analysis.

A game couples two players who each receive a question and return an answer
without communicating; a boolean table decides which question/answer tuples
win.  Games are stored promise-free: every question pair is allowed, and
question pairs that were outside an original promise win automatically.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

import numpy as np

DEFAULT_ENUMERATION_BUDGET = 10**8

_CHUNK = 8192

# Answer alphabets of the built-in magic square game.  Alice's answers are the
# four even-parity 3-bit strings, Bob's the four odd-parity ones, both indexed
# by their leading two bits (index 2*b0 + b1).
MAGIC_SQUARE_ALICE_ANSWERS = ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0))
MAGIC_SQUARE_BOB_ANSWERS = ((0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1))


class GameFormatError(ValueError):
    """Raised when a game file does not follow the expected format."""


class EnumerationBudgetError(ValueError):
    """Raised when a brute-force enumeration would exceed its budget.

    Attributes:
        required: Number of deterministic strategy pairs the game would need.
        budget: The configured limit that was exceeded.
    """

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"too large for brute force: {required} strategy pairs "
            f"exceed the budget of {budget}"
        )


def _frozen_bool(table, shape, what: str) -> np.ndarray:
    arr = np.asarray(table, dtype=bool).copy()
    if arr.shape != shape:
        raise ValueError(f"{what} has shape {arr.shape}, expected {shape}")
    arr.setflags(write=False)
    return arr


@dataclasses.dataclass(frozen=True)
class Game:
    """A promise-free two-player game.

    Attributes:
        nx1, nx2: Question alphabet sizes for Alice and Bob.
        ny1, ny2: Answer alphabet sizes for Alice and Bob.
        win: Boolean table indexed ``[x1, x2, y1, y2]``; True entries win.
    """

    nx1: int
    nx2: int
    ny1: int
    ny2: int
    win: np.ndarray

    def __post_init__(self):
        for name in ("nx1", "nx2", "ny1", "ny2"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        shape = (self.nx1, self.nx2, self.ny1, self.ny2)
        object.__setattr__(self, "win", _frozen_bool(self.win, shape, "win table"))


@dataclasses.dataclass(frozen=True)
class PromisedGame:
    """A game with a promise: only some question pairs are ever asked.

    The win table is only meaningful on promised pairs and must be all-False
    elsewhere; :func:`promise_free` converts the game to an equivalent
    promise-free one.
    """

    nx1: int
    nx2: int
    ny1: int
    ny2: int
    win: np.ndarray
    promise: np.ndarray

    def __post_init__(self):
        for name in ("nx1", "nx2", "ny1", "ny2"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        shape = (self.nx1, self.nx2, self.ny1, self.ny2)
        object.__setattr__(self, "win", _frozen_bool(self.win, shape, "win table"))
        object.__setattr__(
            self, "promise", _frozen_bool(self.promise, shape[:2], "promise table")
        )
        if not self.promise.any():
            raise ValueError("promise must contain at least one question pair")
        if (self.win & ~self.promise[:, :, None, None]).any():
            raise ValueError("win entries defined outside the promise")


@dataclasses.dataclass(frozen=True)
class ProductStrategy:
    """A pair of local stochastic answer rules, optionally with question marginals.

    Attributes:
        p_y1_given_x1: Stochastic matrix of shape ``(ny1, nx1)``; column ``x1``
            is Alice's answer distribution for question ``x1``.
        p_y2_given_x2: Same for Bob, shape ``(ny2, nx2)``.
        pi_x1, pi_x2: Optional question marginals (probability vectors).
    """

    p_y1_given_x1: np.ndarray
    p_y2_given_x2: np.ndarray
    pi_x1: np.ndarray | None = None
    pi_x2: np.ndarray | None = None

    def __post_init__(self):
        for name in ("p_y1_given_x1", "p_y2_given_x2"):
            mat = np.asarray(getattr(self, name), dtype=float).copy()
            if mat.ndim != 2:
                raise ValueError(f"{name} must be a 2-d stochastic matrix")
            if (mat < 0).any():
                raise ValueError(f"{name} has negative entries")
            if np.abs(mat.sum(axis=0) - 1.0).max() > 1e-12:
                raise ValueError(f"columns of {name} must sum to 1")
            mat.setflags(write=False)
            object.__setattr__(self, name, mat)
        for name in ("pi_x1", "pi_x2"):
            pi = getattr(self, name)
            if pi is None:
                continue
            pi = np.asarray(pi, dtype=float).copy()
            if pi.ndim != 1 or (pi < 0).any() or abs(pi.sum() - 1.0) > 1e-12:
                raise ValueError(f"{name} must be a probability vector")
            pi.setflags(write=False)
            object.__setattr__(self, name, pi)

    @property
    def ny1(self) -> int:
        return self.p_y1_given_x1.shape[0]

    @property
    def nx1(self) -> int:
        return self.p_y1_given_x1.shape[1]

    @property
    def ny2(self) -> int:
        return self.p_y2_given_x2.shape[0]

    @property
    def nx2(self) -> int:
        return self.p_y2_given_x2.shape[1]


@dataclasses.dataclass(frozen=True)
class BruteForceResult:
    """Exact uniform-question value of a game with one maximizing strategy.

    Attributes:
        value: Winning probability as an exact rational ``wins / (nx1*nx2)``.
        alice: Deterministic answer table for Alice, ``alice[x1] = y1``.
        bob: Deterministic answer table for Bob, ``bob[x2] = y2``.
    """

    value: Fraction
    alice: tuple[int, ...]
    bob: tuple[int, ...]


def promise_free(g: PromisedGame) -> Game:
    """Convert a promised game into an equivalent promise-free game.

    Question pairs outside the promise become automatic wins for every answer
    pair; promised pairs keep their win entries unchanged.  Applying the
    conversion to an already promise-free game (full promise) is the identity.
    """
    win = g.win | ~g.promise[:, :, None, None]
    return Game(g.nx1, g.nx2, g.ny1, g.ny2, win)


def _check_strategy_shape(g: Game, s: ProductStrategy) -> None:
    if (s.nx1, s.ny1) != (g.nx1, g.ny1) or (s.nx2, s.ny2) != (g.nx2, g.ny2):
        raise ValueError(
            f"strategy alphabets ({s.nx1},{s.nx2},{s.ny1},{s.ny2}) do not match "
            f"game ({g.nx1},{g.nx2},{g.ny1},{g.ny2})"
        )
    if s.pi_x1 is None or s.pi_x2 is None:
        raise ValueError("strategy must include question marginals")
    if len(s.pi_x1) != g.nx1 or len(s.pi_x2) != g.nx2:
        raise ValueError("question marginal lengths do not match the game")


def winning_probability(g: Game, s: ProductStrategy) -> float:
    """Probability that strategy ``s`` wins ``g`` under its question marginals.

    Computes sum over winning tuples of
    ``pi1(x1) pi2(x2) p(y1|x1) p(y2|x2)``.
    """
    _check_strategy_shape(g, s)
    val = np.einsum(
        "ijkl,i,j,ki,lj->",
        g.win,
        s.pi_x1,
        s.pi_x2,
        s.p_y1_given_x1,
        s.p_y2_given_x2,
        optimize=True,
    )
    return float(min(max(val, 0.0), 1.0))


def losing_probability(g: Game, s: ProductStrategy) -> float:
    """Complement of :func:`winning_probability`."""
    return 1.0 - winning_probability(g, s)


def deterministic_strategy(
    g: Game, alice: Sequence[int], bob: Sequence[int]
) -> ProductStrategy:
    """Wrap deterministic answer tables as a ProductStrategy with uniform questions."""
    if len(alice) != g.nx1 or len(bob) != g.nx2:
        raise ValueError("answer tables must have one entry per question")
    p1 = np.zeros((g.ny1, g.nx1))
    p1[np.asarray(alice, dtype=int), np.arange(g.nx1)] = 1.0
    p2 = np.zeros((g.ny2, g.nx2))
    p2[np.asarray(bob, dtype=int), np.arange(g.nx2)] = 1.0
    return ProductStrategy(
        p1, p2, np.full(g.nx1, 1.0 / g.nx1), np.full(g.nx2, 1.0 / g.nx2)
    )


def _best_in_chunk(win: np.ndarray, start: int, stop: int):
    """Best (wins, alice_index, bob_index) over Bob tables start..stop-1.

    For each Bob table the optimal Alice reply decomposes per question, so the
    inner maximization is a per-question argmax instead of a full enumeration.
    Ties take the lowest answer index, hence the lowest Alice table index.
    """
    nx1, nx2, ny1, ny2 = win.shape
    idx = np.arange(start, stop, dtype=np.int64)
    f2 = np.empty((len(idx), nx2), dtype=np.int64)
    rem = idx.copy()
    for x2 in range(nx2 - 1, -1, -1):  # f2[:, 0] is the most significant digit
        f2[:, x2] = rem % ny2
        rem //= ny2
    counts = np.zeros((nx1, ny1, len(idx)), dtype=np.int64)
    for x2 in range(nx2):
        counts += win[:, x2, :, :][:, :, f2[:, x2]]
    best_y1 = counts.argmax(axis=1)  # (nx1, k); first max = lowest y1
    wins = np.take_along_axis(counts, best_y1[:, None, :], axis=1)[:, 0, :].sum(axis=0)
    top = int(wins.max())
    cand = np.nonzero(wins == top)[0]
    f1_idx = np.zeros(len(cand), dtype=np.int64)
    for x1 in range(nx1):
        f1_idx = f1_idx * ny1 + best_y1[x1, cand]
    order = np.lexsort((idx[cand], f1_idx))  # min (alice index, bob index)
    j = cand[order[0]]
    return top, int(f1_idx[order[0]]), int(idx[j])


def _decode_table(index: int, n_questions: int, n_answers: int) -> tuple[int, ...]:
    digits = []
    for _ in range(n_questions):
        digits.append(index % n_answers)
        index //= n_answers
    return tuple(reversed(digits))


def omega_uniform_bruteforce(
    g: Game,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int = 1,
) -> BruteForceResult:
    """Exact maximal winning probability under uniform questions.

    Enumerates Bob's deterministic tables in the outer loop and derives
    Alice's best response per question, which is exhaustive because the
    uniform-question win count is additive over Alice's questions.  The
    result is exact; among maximizing pairs the one with the lowest
    (alice index, bob index) is returned, where a table's index reads its
    answers as base-``ny`` digits with question 0 most significant.

    Args:
        g: The game to solve.
        budget: Maximum number of deterministic strategy pairs
            ``ny1**nx1 * ny2**nx2`` allowed before refusing to enumerate.
        workers: Worker threads for partitioning Bob's tables.  The result
            is independent of the worker count.

    Raises:
        EnumerationBudgetError: If the pair count exceeds ``budget``.
    """
    pairs = g.ny1**g.nx1 * g.ny2**g.nx2
    if pairs > budget:
        raise EnumerationBudgetError(pairs, budget)
    n_f2 = g.ny2**g.nx2
    spans = [(s, min(s + _CHUNK, n_f2)) for s in range(0, n_f2, _CHUNK)]
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda sp: _best_in_chunk(g.win, *sp), spans))
    else:
        results = [_best_in_chunk(g.win, *sp) for sp in spans]
    wins, a_idx, b_idx = min(results, key=lambda r: (-r[0], r[1], r[2]))
    return BruteForceResult(
        value=Fraction(wins, g.nx1 * g.nx2),
        alice=_decode_table(a_idx, g.nx1, g.ny1),
        bob=_decode_table(b_idx, g.nx2, g.ny2),
    )


def chsh_game() -> Game:
    """The CHSH game: binary questions and answers, win iff y1 XOR y2 = x1 AND x2."""
    win = np.zeros((2, 2, 2, 2), dtype=bool)
    for x1, x2, y1, y2 in np.ndindex(2, 2, 2, 2):
        win[x1, x2, y1, y2] = (y1 ^ y2) == (x1 & x2)
    return Game(2, 2, 2, 2, win)


def magic_square_game() -> Game:
    """The magic square game over parity-valid answer alphabets.

    Alice receives a row index and answers one of the four even-parity 3-bit
    strings; Bob receives a column index and answers one of the four
    odd-parity strings.  They win iff the strings agree on the shared cell:
    Alice's bit at the column position equals Bob's bit at the row position.
    """
    win = np.zeros((3, 3, 4, 4), dtype=bool)
    for r, c, a, b in np.ndindex(3, 3, 4, 4):
        s = MAGIC_SQUARE_ALICE_ANSWERS[a]
        t = MAGIC_SQUARE_BOB_ANSWERS[b]
        win[r, c, a, b] = s[c] == t[r]
    return Game(3, 3, 4, 4, win)


BUILTIN_GAMES = {
    "magicsquare": magic_square_game,
    "chsh": chsh_game,
}


def load_game_file(path) -> Game:
    """Load a game from its text format, applying promise-free conversion.

    Format: a header line ``game nx1 nx2 ny1 ny2``, optionally followed by a
    section of ``promise x1 x2`` lines, followed by one ``x1 x2 y1 y2`` line
    per winning tuple (0-based indices).  Absent tuples lose; question pairs
    outside a listed promise win automatically.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GameFormatError(f"{path}: empty game file")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "game":
        raise GameFormatError(f"{path}: expected header 'game nx1 nx2 ny1 ny2'")
    try:
        nx1, nx2, ny1, ny2 = (int(tok) for tok in head[1:])
    except ValueError as exc:
        raise GameFormatError(f"{path}: non-integer alphabet size") from exc
    if min(nx1, nx2, ny1, ny2) < 1:
        raise GameFormatError(f"{path}: alphabet sizes must be >= 1")

    promise = np.zeros((nx1, nx2), dtype=bool)
    win = np.zeros((nx1, nx2, ny1, ny2), dtype=bool)
    has_promise = False
    seen_tuple = False
    for ln in lines[1:]:
        tok = ln.split()
        if tok[0] == "promise":
            if seen_tuple:
                raise GameFormatError(f"{path}: promise lines must precede win tuples")
            if len(tok) != 3:
                raise GameFormatError(f"{path}: bad promise line {ln!r}")
            try:
                x1, x2 = int(tok[1]), int(tok[2])
            except ValueError as exc:
                raise GameFormatError(f"{path}: bad promise line {ln!r}") from exc
            if not (0 <= x1 < nx1 and 0 <= x2 < nx2):
                raise GameFormatError(f"{path}: promise indices out of range in {ln!r}")
            promise[x1, x2] = True
            has_promise = True
            continue
        if len(tok) != 4:
            raise GameFormatError(f"{path}: bad win tuple line {ln!r}")
        try:
            x1, x2, y1, y2 = (int(t) for t in tok)
        except ValueError as exc:
            raise GameFormatError(f"{path}: bad win tuple line {ln!r}") from exc
        if not (0 <= x1 < nx1 and 0 <= x2 < nx2 and 0 <= y1 < ny1 and 0 <= y2 < ny2):
            raise GameFormatError(f"{path}: indices out of range in {ln!r}")
        win[x1, x2, y1, y2] = True
        seen_tuple = True

    if not has_promise:
        return Game(nx1, nx2, ny1, ny2, win)
    if (win & ~promise[:, :, None, None]).any():
        raise GameFormatError(f"{path}: win tuples outside the declared promise")
    return promise_free(PromisedGame(nx1, nx2, ny1, ny2, win, promise))
