"""Trigger deviations and fixed points of their convex combinations.

A trigger deviation is keyed by a non-empty sequence (the trigger) and a
continuation strategy on the trigger infoset's subtree: strategies that never
play the trigger pass through unchanged, and strategies that play it are
rewritten below the trigger's information set according to the continuation.
Convex combinations of such deviations admit a closed-form linear action and,
by construction, a fixed point inside the sequence-form polytope.  The fixed
point is grown one information set at a time, top-down; every step solves for
a stationary distribution of a small column-stochastic matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import EMPTY_SEQ
from .strategies import SequenceFormStrategy, validate_strategy

_WEIGHT_TOL = 1e-9
_POWER_ITER_CAP = 10 ** 6


class NumericalError(RuntimeError):
    """A numerical routine failed to reach its required tolerance."""


@dataclass(frozen=True)
class TriggerDeviation:
    """A single trigger deviation.

    ``trigger`` is a non-empty sequence id of ``player``; ``continuation`` is
    a full-length vector supported on the trigger infoset's subtree.
    """

    player: int
    trigger: int
    continuation: np.ndarray


class ConvexTriggerDeviation:
    """Convex combination of trigger deviations for one player.

    ``entries`` holds (trigger sequence id, weight, continuation vector)
    triples.  Weights must be nonnegative and sum to 1; zero-weight entries
    are dropped.  An empty combination is allowed for players without any
    non-empty sequences and acts as the identity.
    """

    __slots__ = ("player", "terms")

    def __init__(self, player, entries):
        total = 0.0
        terms = []
        for sid, weight, cont in entries:
            if sid == EMPTY_SEQ:
                raise ValueError("the empty sequence cannot be a trigger")
            if weight < 0.0:
                raise ValueError("deviation weights must be nonnegative")
            total += weight
            if weight > 0.0:
                terms.append((int(sid), float(weight), np.asarray(cont, dtype=float)))
        if terms and abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"deviation weights sum to {total!r}, not 1")
        self.player = player
        self.terms = terms

    def weight_by_sequence(self, game):
        lam = np.zeros(game.num_sequences(self.player))
        for sid, weight, _ in self.terms:
            lam[sid] += weight
        return lam


def validate_deviation(game, phi):
    """Raise ValueError unless every continuation lies in its subtree polytope."""
    for sid, _, cont in phi.terms:
        gid = int(game.seq_infoset(phi.player)[sid])
        validate_strategy(game, SequenceFormStrategy(phi.player, cont, gid))


def build_matrix(game, dev):
    """Dense matrix of a single trigger deviation (testing and debugging only).

    Row/column indices are the player's sequence ids.  Columns not at or below
    the trigger are unit columns; the trigger's own column carries the
    continuation on the subtree of the trigger's infoset; columns strictly
    below the trigger are zero.
    """
    i = dev.player
    n = game.num_sequences(i)
    gid = int(game.seq_infoset(i)[dev.trigger])
    sub = game.subtree_sequences(gid)
    desc = game.descendant_mask(i)
    m = np.zeros((n, n))
    for col in range(n):
        if not desc[dev.trigger, col]:
            m[col, col] = 1.0
    m[sub, dev.trigger] = dev.continuation[sub]
    return m


def apply_trigger(game, dev, x):
    """Apply one trigger deviation's matrix to a vector, without the matrix."""
    i = dev.player
    x = np.asarray(x, dtype=float)
    gid = int(game.seq_infoset(i)[dev.trigger])
    out = np.where(game.descendant_mask(i)[dev.trigger], 0.0, x)
    sub = game.subtree_sequences(gid)
    out[sub] += x[dev.trigger] * dev.continuation[sub]
    return out


def cumulative_weights(game, phi):
    """For each sequence, the total deviation weight at or above it."""
    i = phi.player
    lam = phi.weight_by_sequence(game)
    cum = np.zeros_like(lam)
    parent = game.seq_parent(i)
    for gid in game.player_infosets(i):
        for sid in game.infosets[gid].seq_ids:
            par = parent[sid]
            cum[sid] = lam[sid] + (cum[par] if par != EMPTY_SEQ else 0.0)
    return cum


def apply_deviation(game, phi, x, cum=None):
    """Closed-form action of a convex trigger combination on a vector.

    Entry s keeps a (1 - total weight at or above s) share of x[s], plus, for
    every trigger on the path to s, that trigger's continuation at s scaled by
    the weight and by x at the trigger.
    """
    x = np.asarray(x, dtype=float)
    if cum is None:
        cum = cumulative_weights(game, phi)
    out = (1.0 - cum) * x
    out[EMPTY_SEQ] = x[EMPTY_SEQ]
    for sid, weight, cont in phi.terms:
        gid = int(game.seq_infoset(phi.player)[sid])
        sub = game.subtree_sequences(gid)
        out[sub] += weight * x[sid] * cont[sub]
    return out


def stationary_distribution(w, tol=1e-10):
    """Probability vector b with w @ b = b, for column-stochastic w.

    Solves the linear system directly first; if that leaves a residual above
    ``tol`` (or the system is singular), falls back to damped power iteration,
    which preserves the fixed-point set while making every chain aperiodic.
    Raises :class:`NumericalError` if the iteration cap is reached.
    """
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("matrix must be square")
    m = w.shape[0]
    if m == 0:
        raise ValueError("matrix must be non-empty")
    if np.any(w < -1e-12):
        raise ValueError("matrix entries must be nonnegative")
    colsums = w.sum(axis=0)
    if np.any(np.abs(colsums - 1.0) > 1e-9):
        raise ValueError("matrix columns must sum to 1")
    if m == 1:
        return np.ones(1)
    # Rescale away the (validated) column-sum drift: a true fixed point's
    # residual is floored at that drift, which may exceed tol.
    w = w / colsums

    def residual(b):
        return float(np.max(np.abs(w @ b - b)))

    a = w - np.eye(m)
    a[-1, :] = 1.0
    rhs = np.zeros(m)
    rhs[-1] = 1.0
    try:
        cand = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError:
        cand = None
    if cand is not None:
        cand[(cand < 0.0) & (cand >= -1e-9)] = 0.0
        s = cand.sum()
        if np.all(cand >= 0.0) and s > 0.0:
            cand = cand / s
            if residual(cand) <= tol:
                return cand

    # Damped iteration: y <- (y + w y) / 2 has the same fixed points as w.
    # The running average is kept as a fallback candidate for slow chains.
    y = np.full(m, 1.0 / m)
    avg = y.copy()
    for k in range(1, _POWER_ITER_CAP + 1):
        wy = w @ y
        if float(np.max(np.abs(wy - y))) <= tol:
            return y / y.sum()
        y = 0.5 * (y + wy)
        y /= y.sum()
        avg += (y - avg) / (k + 1.0)
        if k % 64 == 0 and residual(avg / avg.sum()) <= tol:
            return avg / avg.sum()
    raise NumericalError("stationary distribution iteration did not converge")


def is_trunk(game, player, trunk):
    """Whether ``trunk`` is predecessor closed in the player's infoset forest."""
    seq_infoset = game.seq_infoset(player)
    for gid in trunk:
        js = game.infosets[gid]
        if js.player != player:
            return False
        if js.parent_seq != EMPTY_SEQ and int(seq_infoset[js.parent_seq]) not in trunk:
            return False
    return True


def _extend_core(game, phi, j_star, x, cum, fp_tol):
    i = phi.player
    js = game.infosets[j_star]
    sids = np.asarray(js.seq_ids, dtype=np.int64)
    m = len(sids)
    parent = js.parent_seq

    r = np.zeros(m)
    for sid, weight, cont in phi.terms:
        gid = int(game.seq_infoset(i)[sid])
        if parent != EMPTY_SEQ and game.subtree_seq_mask(gid)[parent]:
            r += weight * x[sid] * cont[sids]

    xp = float(x[parent]) if parent != EMPTY_SEQ else float(x[EMPTY_SEQ])
    lam = phi.weight_by_sequence(game)
    col = np.zeros((m, m))
    for c, sid_c in enumerate(sids):
        if lam[sid_c] > 0.0:
            for t_sid, weight, cont in phi.terms:
                if t_sid == sid_c:
                    col[:, c] += weight * cont[sids]
        col[c, c] += 1.0 - cum[sid_c]
    w = r[:, None] + xp * col

    out = x.copy()
    if xp == 0.0:
        out[sids] = 0.0
    else:
        wn = w / xp
        # Columns of w sum to x[parent] exactly in real arithmetic; rounding
        # from earlier extensions leaves a small absolute drift that the
        # division by a possibly tiny xp would blow up, so rescale here.
        sums = wn.sum(axis=0)
        if np.any(np.abs(sums - 1.0) * xp > 1e-9):
            raise NumericalError("extension matrix lost mass conservation")
        b = stationary_distribution(wn / sums, tol=fp_tol)
        out[sids] = xp * b
    return out


def extend(game, phi, trunk, j_star, x, fp_tol=1e-10):
    """Grow a partial fixed point of ``phi`` by one information set.

    ``trunk`` must be predecessor closed, must not contain ``j_star``, and
    must contain the infoset owning ``j_star``'s parent sequence (when there
    is one).  ``x`` is a partial fixed point over the trunk; the returned
    vector extends it with values at ``j_star``'s sequences, every other
    coordinate untouched.
    """
    i = phi.player
    if not 0 <= j_star < len(game.infosets):
        raise ValueError(f"no information set with id {j_star}")
    js = game.infosets[j_star]
    if js.player != i:
        raise ValueError("information set belongs to a different player")
    if j_star in trunk:
        raise ValueError(f"information set '{js.label}' is already in the trunk")
    if not is_trunk(game, i, trunk):
        raise ValueError("trunk is not predecessor closed")
    if js.parent_seq != EMPTY_SEQ:
        pred = int(game.seq_infoset(i)[js.parent_seq])
        if pred not in trunk:
            raise ValueError(
                f"the trunk must contain '{game.infosets[pred].label}', the "
                f"immediate predecessor of '{js.label}'"
            )
    x = np.asarray(x, dtype=float)
    cum = cumulative_weights(game, phi)
    return _extend_core(game, phi, j_star, x, cum, fp_tol)


def fixed_point(game, phi, fp_tol=1e-10):
    """Sequence-form fixed point q = phi(q) of a convex trigger combination.

    Starts from the vector with mass only on the empty sequence and extends
    through the player's information sets in pre-order.  The result is
    checked against the closed-form action; residuals above 10 * fp_tol raise
    :class:`NumericalError`.
    """
    i = phi.player
    x = np.zeros(game.num_sequences(i))
    x[EMPTY_SEQ] = 1.0
    cum = cumulative_weights(game, phi)
    for gid in game.player_infosets(i):
        x = _extend_core(game, phi, gid, x, cum, fp_tol)
    resid = float(np.max(np.abs(apply_deviation(game, phi, x, cum) - x)))
    if resid > 10.0 * fp_tol:
        raise NumericalError(f"fixed point residual {resid:g} exceeds tolerance")
    return SequenceFormStrategy(i, x, None)
