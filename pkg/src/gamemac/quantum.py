"""Finite-dimensional quantum strategies and the correlations they induce.

Two players share a pure state and measure their halves with POVMs selected
by their questions; the joint outcome statistics form a non-signaling
conditional distribution that can feed classical channels.

Tensor-product convention: Alice's index is the major (slow) index of the
joint state vector, so amplitude ``psi[i * d_b + j]`` belongs to Alice basis
state ``i`` and Bob basis state ``j``.  Every operator product written
``L (x) M`` follows this ordering.
"""

from __future__ import annotations

import dataclasses
from typing import Sequence

import numpy as np

from .channel import Encoding
from .games import Game

_NORM_TOL = 1e-10
_HERM_TOL = 1e-10
_PSD_TOL = -1e-10
_SUM_TOL = 1e-10
_IMAG_TOL = 1e-10


@dataclasses.dataclass(frozen=True)
class PureState:
    """A shared pure state of two local systems.

    Attributes:
        amplitudes: Complex vector of length ``d_a * d_b``, Alice-major.
        d_a, d_b: Local dimensions.
    """

    amplitudes: np.ndarray
    d_a: int
    d_b: int

    def __post_init__(self):
        vec = np.asarray(self.amplitudes, dtype=complex).copy()
        if vec.shape != (self.d_a * self.d_b,):
            raise ValueError(
                f"amplitude vector has length {vec.size}, expected "
                f"{self.d_a * self.d_b}"
            )
        if abs(np.vdot(vec, vec).real - 1.0) > _NORM_TOL:
            raise ValueError("state is not normalized")
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)

    def as_matrix(self) -> np.ndarray:
        """The amplitudes reshaped to ``(d_a, d_b)``."""
        return self.amplitudes.reshape(self.d_a, self.d_b)


@dataclasses.dataclass(frozen=True)
class Povm:
    """A positive operator-valued measure on one local system.

    Elements must be Hermitian, positive semidefinite up to ``-1e-10``
    eigenvalue slack, and sum to the identity within ``1e-10`` entrywise.
    """

    elements: tuple[np.ndarray, ...]

    def __init__(self, elements: Sequence[np.ndarray]):
        mats = []
        for el in elements:
            m = np.asarray(el, dtype=complex).copy()
            m.setflags(write=False)
            mats.append(m)
        object.__setattr__(self, "elements", tuple(mats))
        self._validate()

    def _validate(self):
        if not self.elements:
            raise ValueError("a POVM needs at least one element")
        d = self.elements[0].shape[0]
        for m in self.elements:
            if m.shape != (d, d):
                raise ValueError("POVM elements must be square and same-sized")
            if np.abs(m - m.conj().T).max() > _HERM_TOL:
                raise ValueError("POVM element is not Hermitian")
            if np.linalg.eigvalsh(m).min() < _PSD_TOL:
                raise ValueError("POVM element is not positive semidefinite")
        total = sum(self.elements)
        if np.abs(total - np.eye(d)).max() > _SUM_TOL:
            raise ValueError("POVM elements do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)


@dataclasses.dataclass(frozen=True)
class QuantumStrategy:
    """A shared state plus one POVM per question for each player."""

    state: PureState
    alice_povms: tuple[Povm, ...]
    bob_povms: tuple[Povm, ...]

    def __init__(self, state: PureState, alice_povms, bob_povms):
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "alice_povms", tuple(alice_povms))
        object.__setattr__(self, "bob_povms", tuple(bob_povms))
        if not self.alice_povms or not self.bob_povms:
            raise ValueError("each player needs at least one POVM")
        ny1 = self.alice_povms[0].n_outcomes
        ny2 = self.bob_povms[0].n_outcomes
        for p in self.alice_povms:
            if p.dim != state.d_a:
                raise ValueError("Alice POVM dimension does not match the state")
            if p.n_outcomes != ny1:
                raise ValueError("Alice POVMs must share one outcome alphabet")
        for p in self.bob_povms:
            if p.dim != state.d_b:
                raise ValueError("Bob POVM dimension does not match the state")
            if p.n_outcomes != ny2:
                raise ValueError("Bob POVMs must share one outcome alphabet")

    @property
    def nx1(self) -> int:
        return len(self.alice_povms)

    @property
    def nx2(self) -> int:
        return len(self.bob_povms)

    @property
    def ny1(self) -> int:
        return self.alice_povms[0].n_outcomes

    @property
    def ny2(self) -> int:
        return self.bob_povms[0].n_outcomes


def correlation(qs: QuantumStrategy) -> np.ndarray:
    """Joint outcome distribution ``P[x1, x2, y1, y2] = P(y1, y2 | x1, x2)``.

    Each entry is ``<psi| L^(x1)_y1 (x) M^(x2)_y2 |psi>``; the Born rule makes
    these real and nonnegative, so any imaginary residue beyond ``1e-10``
    raises and small negative noise is clamped to 0.  Each ``(x1, x2)`` slice
    sums to 1 within ``1e-10``.
    """
    psi = qs.state.as_matrix()
    table = np.empty((qs.nx1, qs.nx2, qs.ny1, qs.ny2))
    for x1, povm_a in enumerate(qs.alice_povms):
        for x2, povm_b in enumerate(qs.bob_povms):
            for y1, el_a in enumerate(povm_a.elements):
                left = el_a @ psi
                for y2, el_b in enumerate(povm_b.elements):
                    val = np.vdot(psi, left @ el_b.T)
                    if abs(val.imag) > _IMAG_TOL:
                        raise ValueError(
                            f"correlation entry has imaginary residue {val.imag!r}"
                        )
                    if val.real < -_IMAG_TOL:
                        raise ValueError(
                            f"correlation entry is negative: {val.real!r}"
                        )
                    table[x1, x2, y1, y2] = max(val.real, 0.0)
            if abs(table[x1, x2].sum() - 1.0) > _SUM_TOL:
                raise ValueError(
                    f"correlation slice ({x1}, {x2}) sums to {table[x1, x2].sum()!r}"
                )
    return table


_SQRT_HALF = 1.0 / np.sqrt(2.0)

# Alice's measurement bases, one unitary per row question.  Measuring
# U_r |psi> in the computational basis and completing the two outcome bits to
# even parity answers the magic square game perfectly against Bob's V_c below.
_MS_ROW_UNITARIES = (
    _SQRT_HALF
    * np.array(
        [[1j, 0, 0, 1], [0, -1j, 1, 0], [0, 1j, 1, 0], [1, 0, 0, 1j]], dtype=complex
    ),
    0.5
    * np.array(
        [[1j, 1, 1, 1j], [-1j, 1, -1, 1j], [1j, 1, -1, -1j], [-1j, 1, 1, -1j]],
        dtype=complex,
    ),
    0.5
    * np.array(
        [[-1, -1, -1, 1], [1, 1, -1, 1], [1, -1, 1, 1], [1, -1, -1, -1]],
        dtype=complex,
    ),
)

# Bob's per-column unitaries; his outcome bits are completed to odd parity.
_MS_COLUMN_UNITARIES = (
    0.5
    * np.array(
        [[1j, -1j, 1, 1], [-1j, -1j, 1, -1], [1, 1, -1j, 1j], [-1j, 1j, 1, 1]],
        dtype=complex,
    ),
    0.5
    * np.array(
        [[-1, 1j, 1, 1j], [1, 1j, 1, -1j], [1, -1j, 1, 1j], [-1, -1j, 1, -1j]],
        dtype=complex,
    ),
    _SQRT_HALF
    * np.array(
        [[1, 0, 0, 1], [-1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0]], dtype=complex
    ),
)


def magic_square_row_unitaries() -> tuple[np.ndarray, ...]:
    """Alice's three 4x4 measurement unitaries (copies)."""
    return tuple(u.copy() for u in _MS_ROW_UNITARIES)


def magic_square_column_unitaries() -> tuple[np.ndarray, ...]:
    """Bob's three 4x4 measurement unitaries (copies)."""
    return tuple(u.copy() for u in _MS_COLUMN_UNITARIES)


def _basis_povm(u: np.ndarray) -> Povm:
    """Projective POVM for measuring ``u |psi>`` in the computational basis.

    Outcome ``k`` has element ``u^dag |k><k| u``, a rank-1 projector.
    """
    return Povm([np.outer(u[k].conj(), u[k]) for k in range(u.shape[0])])


def magic_square_strategy() -> QuantumStrategy:
    """The perfect strategy for the magic square game.

    The players share the two-ququart state
    ``(|0>|3> + |3>|0> - |1>|2> - |2>|1>) / 2`` (each local ququart holds two
    qubits, bit 0 major).  On question ``r`` Alice measures in the basis
    rotated by her row unitary; the two outcome bits plus an even-parity
    completion form her answer, indexed exactly as in
    ``games.MAGIC_SQUARE_ALICE_ANSWERS``.  Bob does the same with his column
    unitaries and an odd-parity completion.  The resulting correlation is
    supported on winning tuples for all nine question pairs.
    """
    amp = np.zeros(16, dtype=complex)
    amp[0 * 4 + 3] = 0.5
    amp[3 * 4 + 0] = 0.5
    amp[1 * 4 + 2] = -0.5
    amp[2 * 4 + 1] = -0.5
    state = PureState(amp, 4, 4)
    alice = [_basis_povm(u) for u in _MS_ROW_UNITARIES]
    bob = [_basis_povm(v) for v in _MS_COLUMN_UNITARIES]
    return QuantumStrategy(state, alice, bob)


def strategy_winning_probability(
    g: Game, qs: QuantumStrategy, pi_x1, pi_x2
) -> float:
    """Winning probability of a quantum strategy under given question marginals."""
    if (qs.nx1, qs.nx2, qs.ny1, qs.ny2) != (g.nx1, g.nx2, g.ny1, g.ny2):
        raise ValueError(
            f"strategy alphabets ({qs.nx1},{qs.nx2},{qs.ny1},{qs.ny2}) do not "
            f"match game ({g.nx1},{g.nx2},{g.ny1},{g.ny2})"
        )
    pi1 = np.asarray(pi_x1, dtype=float)
    pi2 = np.asarray(pi_x2, dtype=float)
    if pi1.shape != (g.nx1,) or pi2.shape != (g.nx2,):
        raise ValueError("question marginal lengths do not match the game")
    corr = correlation(qs)
    val = np.einsum("ijkl,ijkl,i,j->", g.win, corr, pi1, pi2, optimize=True)
    return float(min(max(val, 0.0), 1.0))


def identity_post(n_questions: int, n_outcomes: int) -> np.ndarray:
    """Post-processing that pairs question and outcome into one composite symbol.

    Returns the table ``f[x, y] = x * n_outcomes + y`` matching the x-major
    input pairing of compiled game channels.
    """
    return (
        np.arange(n_questions)[:, None] * n_outcomes + np.arange(n_outcomes)[None, :]
    )


def to_classical_channel(
    qs: QuantumStrategy, post1, post2, na: int, nb: int
) -> Encoding:
    """Classical encoding channel induced by measuring and post-processing.

    Args:
        qs: The quantum strategy generating outcomes.
        post1: Integer table of shape ``(nx1, ny1)``; ``post1[a1, y1]`` is the
            first sender's channel input.  Must be total with values in
            ``[0, na)``.
        post2: Same for the second sender, values in ``[0, nb)``.
        na, nb: Input alphabet sizes of the downstream channel.

    Returns:
        The encoding ``E(a, b | a1, b1) = sum over outcomes mapped to (a, b)``
        of the strategy's correlation.
    """
    f1 = np.asarray(post1, dtype=int)
    f2 = np.asarray(post2, dtype=int)
    if f1.shape != (qs.nx1, qs.ny1):
        raise ValueError(f"post1 has shape {f1.shape}, expected ({qs.nx1}, {qs.ny1})")
    if f2.shape != (qs.nx2, qs.ny2):
        raise ValueError(f"post2 has shape {f2.shape}, expected ({qs.nx2}, {qs.ny2})")
    if f1.min() < 0 or f1.max() >= na:
        raise ValueError("post1 values must lie in [0, na)")
    if f2.min() < 0 or f2.max() >= nb:
        raise ValueError("post2 values must lie in [0, nb)")
    corr = correlation(qs)
    table = np.zeros((qs.nx1, qs.nx2, na, nb))
    for a1 in range(qs.nx1):
        for b1 in range(qs.nx2):
            np.add.at(table[a1, b1], (f1[a1][:, None], f2[b1][None, :]), corr[a1, b1])
    return Encoding(qs.nx1, qs.nx2, na, nb, table)
