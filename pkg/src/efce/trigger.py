"""Regret minimization against trigger deviations.

The composite minimizer is layered exactly as the objects suggest: one
counterfactual-style minimizer per trigger learns continuations on that
trigger's subtree, a regret-matching instance over the triggers learns the
mixture weights, and the combination yields a convex trigger deviation per
round.  Taking that deviation's fixed point turns deviation-space regret into
trigger regret over the strategy polytope, and sampling the fixed point gives
a deterministic strategy per round whose trigger regret concentrates around
the mixed one.

Utilities are fed back as rank-one functionals: a linear utility evaluated at
the image of the round's fixed point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .deviations import ConvexTriggerDeviation, fixed_point
from .game import EMPTY_SEQ
from .regret import CallOrderError, CfrMinimizer, RegretMatching
from .strategies import sample_pure


@dataclass
class RankOneFunctional:
    """Utility on deviations: phi maps to ell . phi(q), kept in factored form."""

    player: int
    ell: np.ndarray
    q: np.ndarray

    def matrix(self):
        """Dense coefficient matrix, for tests: entry (r, c) is ell[r] * q[c]."""
        return np.outer(self.ell, self.q)


class PerTriggerMinimizer:
    """Learns continuation strategies for one fixed trigger sequence.

    The inner minimizer works on the trigger infoset's subtree; observed
    rank-one functionals reduce to the utility ell scaled by the weight the
    played point put on the trigger.
    """

    def __init__(self, game, player, trigger):
        if trigger == EMPTY_SEQ:
            raise ValueError("the empty sequence cannot be a trigger")
        self.game = game
        self.player = player
        self.trigger = trigger
        self.infoset = int(game.seq_infoset(player)[trigger])
        self.inner = CfrMinimizer(game, player, root=self.infoset)
        self._sub = game.subtree_sequences(self.infoset)

    def next_element(self):
        return self.inner.next_element()

    def observe_utility(self, func):
        gvec = np.zeros(self.game.num_sequences(self.player))
        weight = float(func.q[self.trigger])
        if weight != 0.0:
            gvec[self._sub] = func.ell[self._sub] * weight
        self.inner.observe_utility(gvec)


class HullMinimizer:
    """Plays convex combinations of one-trigger deviations.

    Regret matching over the set of non-empty sequences picks the mixture;
    each per-trigger minimizer picks its continuation.  Observing a rank-one
    functional forwards it to every per-trigger state and feeds the mixture
    learner the value each pure-trigger deviation would have obtained.
    """

    def __init__(self, game, player):
        self.game = game
        self.player = player
        n = game.num_sequences(player)
        self.triggers = list(range(1, n))
        self.states = [PerTriggerMinimizer(game, player, sid) for sid in self.triggers]
        self.mixer = RegretMatching(len(self.triggers))
        self._subs = [st._sub for st in self.states]
        self.last_weights = None
        self.last_continuations = None
        self.last_trigger_values = None

    def next_element(self):
        conts = [st.next_element() for st in self.states]
        if not self.triggers:
            self.last_continuations = []
            return ConvexTriggerDeviation(self.player, [])
        lam = self.mixer.next_element()
        self.last_weights = lam
        self.last_continuations = conts
        return ConvexTriggerDeviation(
            self.player,
            [(sid, lam[k], conts[k].values) for k, sid in enumerate(self.triggers)],
        )

    def observe_utility(self, func):
        for st in self.states:
            st.observe_utility(func)
        if not self.triggers:
            return
        lq = func.ell * func.q
        total = float(lq.sum())
        ondesc = self.game.descendant_mask(self.player) @ lq
        values = np.empty(len(self.triggers))
        for k, sid in enumerate(self.triggers):
            sub = self._subs[k]
            cont = self.last_continuations[k].values
            values[k] = (total - float(ondesc[sid])
                         + float(func.q[sid]) * float(func.ell[sub] @ cont[sub]))
        self.last_trigger_values = values
        self.mixer.observe_utility(values)


class MixedTriggerMinimizer:
    """Trigger-regret minimizer emitting mixed sequence-form strategies.

    Each round plays the fixed point of the hull's deviation, so the value a
    deviation assigns to the played point equals the played point's own
    utility, and the hull's deviation-space regret transfers unchanged.
    """

    def __init__(self, game, player, fp_tol=1e-10):
        self.game = game
        self.player = player
        self.fp_tol = fp_tol
        self.hull = HullMinimizer(game, player)
        self.last_q = None
        self._awaiting = False

    def next_element(self):
        if self._awaiting:
            raise CallOrderError("next_element called again before observe_utility")
        phi = self.hull.next_element()
        self.last_q = fixed_point(self.game, phi, self.fp_tol)
        self._awaiting = True
        return self.last_q

    def observe_utility(self, util):
        if not self._awaiting:
            raise CallOrderError("observe_utility called before next_element")
        coeffs = np.asarray(getattr(util, "coefficients", util), dtype=float)
        self.hull.observe_utility(
            RankOneFunctional(self.player, coeffs, self.last_q.values)
        )
        self._awaiting = False


class PureTriggerMinimizer:
    """Mixed trigger minimizer plus per-round sampling of a pure strategy."""

    def __init__(self, game, player, rng, fp_tol=1e-10):
        self.game = game
        self.player = player
        self.rng = rng
        self.mixed = MixedTriggerMinimizer(game, player, fp_tol)
        self.last_mixed = None
        self.last_pure = None

    def next_element(self):
        self.last_mixed = self.mixed.next_element()
        self.last_pure = sample_pure(self.game, self.last_mixed, self.rng)
        return self.last_pure

    def observe_utility(self, util):
        self.mixed.observe_utility(util)


class PhiRegretMeter:
    """Running trigger regret of an observed play sequence.

    Accumulates, per trigger, the utility mass at or below the trigger under
    the played points and the utility vectors scaled by the played trigger
    weight.  The regret against the best fixed one-trigger deviation is then a
    max over triggers of (best continuation value - follow value), with the
    best continuation found by bottom-up dynamic programming.
    """

    def __init__(self, game, player):
        self.game = game
        self.player = player
        n = game.num_sequences(player)
        self.tables = np.zeros((n, n))
        self.follow = np.zeros(n)
        self.rounds = 0
        self._best = np.zeros(n)
        self._dirty: set[int] = set()

    def record(self, ell, played):
        ell = np.asarray(ell, dtype=float)
        played = np.asarray(played, dtype=float)
        self.follow += self.game.descendant_mask(self.player) @ (ell * played)
        for sid in np.flatnonzero(played):
            if sid == EMPTY_SEQ:
                continue
            gid = int(self.game.seq_infoset(self.player)[sid])
            sub = self.game.subtree_sequences(gid)
            self.tables[sid, sub] += played[sid] * ell[sub]
            self._dirty.add(int(sid))
        self.rounds += 1

    def _subtree_best(self, vec, gid):
        best = None
        for sid in self.game.infosets[gid].seq_ids:
            v = float(vec[sid])
            for child in self.game.child_infosets(self.player, sid):
                v += self._subtree_best(vec, child)
            if best is None or v > best:
                best = v
        return best

    def regret(self):
        """Cumulative regret against the best fixed one-trigger deviation."""
        n = self.game.num_sequences(self.player)
        if n == 1:
            return 0.0
        for sid in self._dirty:
            gid = int(self.game.seq_infoset(self.player)[sid])
            self._best[sid] = self._subtree_best(self.tables[sid], gid)
        self._dirty.clear()
        return float(np.max(self._best[1:] - self.follow[1:]))


def split_rngs(seed, n):
    """Independent deterministic random streams, one per player."""
    return [random.Random(f"{seed}/player{i}") for i in range(n)]
