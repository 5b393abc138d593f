"""Discrete memoryless multiple access channels and entropic rate quantities.

A MAC takes one symbol from each of two senders and emits one output symbol
according to a conditional table ``p[a, b, z]``.  The compiler
:func:`mac_from_game` turns a promise-free game into such a channel: on a
winning question/answer tuple the channel forwards the question pair
noiselessly, otherwise it outputs a uniformly random question pair.

Index conventions (shared with :mod:`gamemac.games`): a sender's composite
question/answer input is paired x-major, ``index = x * ny + y``, and the
output pairs questions x1-major, ``z = x1 * nx2 + x2``.  All rates and
entropies are in bits (base-2 logarithms).
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .games import Game, ProductStrategy, losing_probability


class MacFormatError(ValueError):
    """Raised when a channel file does not follow the expected format."""


@dataclasses.dataclass(frozen=True)
class Mac:
    """A two-sender discrete memoryless channel.

    Attributes:
        na, nb: Input alphabet sizes of the two senders.
        nz: Output alphabet size.
        p: Conditional table of shape ``(na, nb, nz)``; ``p[a, b]`` is the
            output distribution given inputs ``(a, b)``.
    """

    na: int
    nb: int
    nz: int
    p: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=float).copy()
        if arr.shape != (self.na, self.nb, self.nz):
            raise ValueError(
                f"channel table has shape {arr.shape}, expected "
                f"({self.na}, {self.nb}, {self.nz})"
            )
        if (arr < 0).any():
            raise ValueError("channel table has negative entries")
        if np.abs(arr.sum(axis=2) - 1.0).max() > 1e-12:
            raise ValueError("every conditional row must sum to 1")
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)


@dataclasses.dataclass(frozen=True)
class ProductInput:
    """Independent input distributions for the two senders."""

    p_a: np.ndarray
    p_b: np.ndarray

    def __post_init__(self):
        for name in ("p_a", "p_b"):
            vec = np.asarray(getattr(self, name), dtype=float).copy()
            if vec.ndim != 1 or (vec < 0).any() or abs(vec.sum() - 1.0) > 1e-12:
                raise ValueError(f"{name} must be a probability vector")
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)


@dataclasses.dataclass(frozen=True)
class Pentagon:
    """The three rate constraints achievable at one product input.

    ``r1_max = I(A;Z|B)``, ``r2_max = I(B;Z|A)`` and ``sum_max = I(A,B;Z)``,
    all in bits.  The achievable set is the pentagon
    ``{(R1, R2) >= 0 : R1 <= r1_max, R2 <= r2_max, R1+R2 <= sum_max}``.
    """

    r1_max: float
    r2_max: float
    sum_max: float

    def __post_init__(self):
        if not (0.0 <= self.r1_max <= self.sum_max + 1e-12):
            raise ValueError("need 0 <= r1_max <= sum_max")
        if not (0.0 <= self.r2_max <= self.sum_max + 1e-12):
            raise ValueError("need 0 <= r2_max <= sum_max")
        if self.sum_max > self.r1_max + self.r2_max + 1e-9:
            raise ValueError("sum_max exceeds r1_max + r2_max")


@dataclasses.dataclass(frozen=True)
class Encoding:
    """A classical encoding channel mapping message pairs to MAC input pairs.

    ``p[a1, b1, a, b]`` is the probability that the senders feed ``(a, b)``
    into the downstream MAC when their raw inputs are ``(a1, b1)``.  Although
    stored jointly, a valid encoding factors through a non-signaling
    correlation with local post-processing.
    """

    n_a1: int
    n_b1: int
    na: int
    nb: int
    p: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=float).copy()
        if arr.shape != (self.n_a1, self.n_b1, self.na, self.nb):
            raise ValueError(
                f"encoding table has shape {arr.shape}, expected "
                f"({self.n_a1}, {self.n_b1}, {self.na}, {self.nb})"
            )
        if (arr < 0).any():
            raise ValueError("encoding table has negative entries")
        if np.abs(arr.sum(axis=(2, 3)) - 1.0).max() > 1e-10:
            raise ValueError("conditional distributions must sum to 1")
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)


def pair_index(x: int, y: int, ny: int) -> int:
    """Composite input index for question ``x`` and answer ``y`` (x-major)."""
    return x * ny + y


def mac_from_game(g: Game) -> Mac:
    """Compile a promise-free game into a multiple access channel.

    Sender inputs are question/answer pairs (x-major pairing) and the output
    alphabet is the set of question pairs.  Winning tuples map
    deterministically to their question pair; losing tuples output a uniform
    question pair, each row exactly ``1 / (nx1 * nx2)``.
    """
    na, nb = g.nx1 * g.ny1, g.nx2 * g.ny2
    nz = g.nx1 * g.nx2
    p = np.full((na, nb, nz), 1.0 / nz)
    win = g.win.transpose(0, 2, 1, 3).reshape(na, nb)  # rows: (x1,y1) x (x2,y2)
    x1 = np.arange(na) // g.ny1
    x2 = np.arange(nb) // g.ny2
    z = (x1[:, None] * g.nx2 + x2[None, :])[win]
    rows = p[win]
    rows[:] = 0.0
    rows[np.arange(len(z)), z] = 1.0
    p[win] = rows
    return Mac(na, nb, nz, p)


def identity_encoding(na: int, nb: int) -> Encoding:
    """The encoding that feeds both raw inputs through unchanged."""
    p = np.zeros((na, nb, na, nb))
    ia = np.arange(na)[:, None]
    ib = np.arange(nb)[None, :]
    p[ia, ib, ia, ib] = 1.0
    return Encoding(na, nb, na, nb, p)


def compose(n: Mac, e: Encoding) -> Mac:
    """The end-to-end channel obtained by feeding an encoding into a MAC.

    ``(N o E)(z | a1, b1) = sum_{a,b} N(z | a, b) E(a, b | a1, b1)``.
    Composing with :func:`identity_encoding` returns the channel table
    unchanged bit for bit.
    """
    if (e.na, e.nb) != (n.na, n.nb):
        raise ValueError(
            f"encoding outputs ({e.na}, {e.nb}) do not match channel inputs "
            f"({n.na}, {n.nb})"
        )
    p = np.einsum("abz,cdab->cdz", n.p, e.p, optimize=True)
    return Mac(e.n_a1, e.n_b1, n.nz, p)


def _entropy_raw(p: np.ndarray) -> float:
    """Shannon entropy in bits of an array of probabilities; 0 log 0 = 0."""
    flat = np.asarray(p, dtype=float).ravel()
    nz = flat[flat > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def entropy(p) -> float:
    """Shannon entropy of a probability vector, in bits.

    Raises ValueError for negative entries or a non-normalized vector.
    """
    vec = np.asarray(p, dtype=float)
    if (vec < 0).any():
        raise ValueError("probabilities must be nonnegative")
    if abs(vec.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {vec.sum()!r}, not 1")
    return _entropy_raw(vec)


def _joint(n: Mac, q: ProductInput) -> np.ndarray:
    if len(q.p_a) != n.na or len(q.p_b) != n.nb:
        raise ValueError(
            f"input distribution sizes ({len(q.p_a)}, {len(q.p_b)}) do not "
            f"match channel inputs ({n.na}, {n.nb})"
        )
    return q.p_a[:, None, None] * q.p_b[None, :, None] * n.p


def pentagon(n: Mac, q: ProductInput) -> Pentagon:
    """Evaluate the three rate bounds of a MAC at a fixed product input.

    Uses entropy expansions of the joint ``p(a, b, z)``:
    ``I(A;Z|B) = H(AB) + H(BZ) - H(B) - H(ABZ)`` and similarly for the other
    two quantities.  Values within floating-point noise below zero are
    clamped to exactly 0.
    """
    j = _joint(n, q)
    h_abz = _entropy_raw(j)
    h_ab = _entropy_raw(j.sum(axis=2))
    h_az = _entropy_raw(j.sum(axis=1))
    h_bz = _entropy_raw(j.sum(axis=0))
    h_a = _entropy_raw(j.sum(axis=(1, 2)))
    h_b = _entropy_raw(j.sum(axis=(0, 2)))
    h_z = _entropy_raw(j.sum(axis=(0, 1)))
    r1 = h_ab + h_bz - h_b - h_abz
    r2 = h_ab + h_az - h_a - h_abz
    rs = h_ab + h_z - h_abz
    return Pentagon(max(r1, 0.0), max(r2, 0.0), max(rs, 0.0))


def strategy_input(s: ProductStrategy) -> ProductInput:
    """The product input on the compiled MAC induced by playing a strategy.

    Sender distributions are ``p(x, y) = pi(x) p(y|x)`` on the composite
    (x-major) input alphabets; requires question marginals on ``s``.
    """
    if s.pi_x1 is None or s.pi_x2 is None:
        raise ValueError("strategy must include question marginals")
    p_a = (s.pi_x1[None, :] * s.p_y1_given_x1).T.reshape(-1)
    p_b = (s.pi_x2[None, :] * s.p_y2_given_x2).T.reshape(-1)
    return ProductInput(p_a, p_b)


def sum_rate_identity_check(g: Game, s: ProductStrategy) -> tuple[float, float]:
    """Two routes to the sum-rate bound of a game MAC under one strategy.

    Returns ``(lhs, rhs)`` where ``lhs = I(A,B;Z)`` is computed entropically
    from the joint distribution on the compiled channel, while
    ``rhs = H(Z) - p_lose * (log2 nx1 + log2 nx2)`` uses the losing
    probability of the strategy.  The two agree identically because losing
    rounds contribute exactly the full output entropy.
    """
    n = mac_from_game(g)
    q = strategy_input(s)
    j = _joint(n, q)
    lhs = pentagon(n, q).sum_max
    h_z = _entropy_raw(j.sum(axis=(0, 1)))
    p_l = losing_probability(g, s)
    rhs = h_z - p_l * (np.log2(g.nx1) + np.log2(g.nx2))
    return lhs, rhs


def write_mac_file(path, n: Mac) -> None:
    """Write a channel in the text format, 17 significant digits per entry.

    Format: header ``mac na nb nz`` then ``na*nb`` rows of ``nz`` entries,
    ordered a-major (row index ``a * nb + b``).
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"mac {n.na} {n.nb} {n.nz}\n")
        for a in range(n.na):
            for b in range(n.nb):
                fh.write(" ".join("%.17g" % v for v in n.p[a, b]) + "\n")


def load_mac_file(path) -> Mac:
    """Load a channel written by :func:`write_mac_file` (lossless round-trip)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MacFormatError(f"{path}: empty channel file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "mac":
        raise MacFormatError(f"{path}: expected header 'mac na nb nz'")
    try:
        na, nb, nz = (int(tok) for tok in head[1:])
    except ValueError as exc:
        raise MacFormatError(f"{path}: non-integer alphabet size") from exc
    if min(na, nb, nz) < 1:
        raise MacFormatError(f"{path}: alphabet sizes must be >= 1")
    if len(lines) - 1 != na * nb:
        raise MacFormatError(
            f"{path}: expected {na * nb} probability rows, found {len(lines) - 1}"
        )
    p = np.empty((na, nb, nz))
    for i, ln in enumerate(lines[1:]):
        tok = ln.split()
        if len(tok) != nz:
            raise MacFormatError(f"{path}: row {i} has {len(tok)} entries, expected {nz}")
        try:
            p[i // nb, i % nb] = [float(t) for t in tok]
        except ValueError as exc:
            raise MacFormatError(f"{path}: non-numeric entry in row {i}") from exc
    try:
        return Mac(na, nb, nz, p)
    except ValueError as exc:
        raise MacFormatError(f"{path}: {exc}") from exc
