"""Sequence-form strategies, utility vectors, and sampling.

A sequence-form strategy is a flat nonnegative vector over one player's
sequences.  Full-tree strategies put mass 1 on the empty sequence and satisfy
flow conservation at every information set; subtree strategies are scoped to
one information set's subtree, distribute mass 1 over its actions, and are
zero everywhere else (including the empty sequence).  Deterministic strategies
are the 0/1 members of these polytopes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import EMPTY_SEQ

_FLOW_TOL = 1e-9


@dataclass
class SequenceFormStrategy:
    """One player's sequence-form strategy.

    ``values`` always has one entry per sequence of the player, empty sequence
    included.  ``root`` is None for a full-tree strategy, or the global id of
    the information set whose subtree the strategy lives on.
    """

    player: int
    values: np.ndarray
    root: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    def copy(self):
        return SequenceFormStrategy(self.player, self.values.copy(), self.root)

    def is_deterministic(self):
        v = self.values
        return bool(np.all((v == 0.0) | (v == 1.0)))


@dataclass
class UtilityVector:
    """Linear payoff functional over one player's sequences.

    ``range_bound`` is a valid bound on the spread of the induced expected
    utility over the player's strategy set.
    """

    player: int
    coefficients: np.ndarray
    range_bound: float

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float)


def validate_strategy(game, strat, tol=_FLOW_TOL):
    """Raise ValueError unless ``strat`` lies in its sequence-form polytope."""
    i = strat.player
    if not 0 <= i < game.n_players:
        raise ValueError(f"strategy names player {i + 1} of a {game.n_players}-player game")
    v = strat.values
    n = game.num_sequences(i)
    if v.shape != (n,):
        raise ValueError(f"strategy has {v.shape[0]} entries, expected {n}")
    if np.any(v < -tol) or np.any(v > 1.0 + tol):
        raise ValueError("strategy entries must lie in [0, 1]")

    if strat.root is None:
        if abs(v[EMPTY_SEQ] - 1.0) > tol:
            raise ValueError("full-tree strategy must put mass 1 on the empty sequence")
        isets = game.player_infosets(i)
        in_scope = None
    else:
        root = game.infosets[strat.root]
        if root.player != i:
            raise ValueError("subtree root belongs to a different player")
        isets = game.subtree_infosets(strat.root)
        in_scope = game.subtree_seq_mask(strat.root)
        if np.any(v[~in_scope] != 0.0):
            raise ValueError("subtree strategy must be zero outside its subtree")

    for gid in isets:
        js = game.infosets[gid]
        total = float(v[list(js.seq_ids)].sum())
        if strat.root is not None and gid == strat.root:
            incoming = 1.0
        else:
            incoming = float(v[js.parent_seq])
        if abs(total - incoming) > tol:
            raise ValueError(
                f"flow conservation fails at information set '{js.label}' of "
                f"player {i + 1}: {total!r} outgoing vs {incoming!r} incoming"
            )


def is_valid_strategy(game, strat, tol=_FLOW_TOL):
    try:
        validate_strategy(game, strat, tol)
    except ValueError:
        return False
    return True


def sequence_from_behavioral(game, player, local, root=None):
    """Compose per-infoset action distributions into sequence form.

    ``local`` maps a global infoset id to an action-probability array.  The
    result is scoped to ``root`` when given, full-tree otherwise.
    """
    values = np.zeros(game.num_sequences(player))
    if root is None:
        values[EMPTY_SEQ] = 1.0
        isets = game.player_infosets(player)
    else:
        isets = game.subtree_infosets(root)
    for gid in isets:
        js = game.infosets[gid]
        mass = 1.0 if gid == root else values[js.parent_seq]
        dist = np.asarray(local[gid], dtype=float)
        values[list(js.seq_ids)] = mass * dist
    return SequenceFormStrategy(player, values, root)


def uniform_strategy(game, player, root=None):
    """Uniform behavioral strategy in sequence form."""
    local = {
        gid: np.full(len(game.infosets[gid].actions),
                     1.0 / len(game.infosets[gid].actions))
        for gid in (game.player_infosets(player) if root is None
                    else game.subtree_infosets(root))
    }
    return sequence_from_behavioral(game, player, local, root)


def sample_pure(game, strat, rng):
    """Sample a deterministic strategy whose expectation is ``strat``.

    Walks the infoset forest top-down, picking one action per reached infoset
    with probability proportional to the sequence weights.  Subtrees the
    sample does not reach, and subtrees where ``strat`` itself has no mass,
    are left all-zero.
    """
    if strat.root is not None:
        raise ValueError("can only sample from full-tree strategies")
    i = strat.player
    q = strat.values
    values = np.zeros_like(q)
    values[EMPTY_SEQ] = 1.0
    for gid in game.player_infosets(i):
        js = game.infosets[gid]
        if values[js.parent_seq] == 0.0:
            continue
        denom = q[js.parent_seq]
        if denom <= 0.0:
            continue
        x = rng.random() * denom
        acc = 0.0
        chosen = None
        for sid in js.seq_ids:
            if q[sid] > 0.0:
                chosen = sid
                acc += q[sid]
                if x < acc:
                    break
        if chosen is not None:
            values[chosen] = 1.0
    return SequenceFormStrategy(i, values, None)


def enumerate_pure(game, player, root=None):
    """Yield every deterministic strategy of the given scope."""
    order = list(game.player_infosets(player) if root is None
                 else game.subtree_infosets(root))
    values = np.zeros(game.num_sequences(player))
    if root is None:
        values[EMPTY_SEQ] = 1.0

    def rec(k):
        if k == len(order):
            yield SequenceFormStrategy(player, values.copy(), root)
            return
        js = game.infosets[order[k]]
        mass = 1.0 if order[k] == root else values[js.parent_seq]
        if mass == 0.0:
            yield from rec(k + 1)
            return
        for sid in js.seq_ids:
            values[sid] = 1.0
            yield from rec(k + 1)
            values[sid] = 0.0

    yield from rec(0)


def utility_vector(game, player, profile):
    """Coefficients of one player's expected utility, given the others.

    Entry s collects, over terminals whose last sequence of ``player`` is s,
    the payoff weighted by chance reach and the other players' realization
    weights.  ``profile`` supplies one strategy per player; the entry for
    ``player`` itself is ignored.
    """
    reach = game.term_chance.copy()
    for j in range(game.n_players):
        if j == player:
            continue
        reach *= profile[j].values[game.term_seq[:, j]]
    coeffs = np.zeros(game.num_sequences(player))
    np.add.at(coeffs, game.term_seq[:, player],
              game.term_payoffs[:, player] * reach)
    return UtilityVector(player, coeffs, game.payoff_range(player))


def evaluate(util, strat):
    """Value of a utility vector at a full-tree strategy."""
    if util.player != strat.player:
        raise ValueError("utility vector and strategy belong to different players")
    if strat.root is not None:
        raise ValueError("utility vector is scoped to the full tree")
    if util.coefficients.shape != strat.values.shape:
        raise ValueError("utility vector and strategy have different lengths")
    return float(util.coefficients @ strat.values)


def format_strategy(game, strat):
    """Human-readable labeled rendering of a strategy vector."""
    i = strat.player
    parts = [
        f"{game.sequence_name(i, sid)}: {strat.values[sid]:g}"
        for sid in range(game.num_sequences(i))
    ]
    return "[" + ", ".join(parts) + "]"
