"""Self-play dynamics, empirical play frequencies, and the equilibrium gap.

All players run the pure trigger-regret minimizer in uncoupled self-play.
The empirical distribution of the sampled joint strategies is summarized by
per-trigger accumulation tables; the trigger gap of that distribution (how
much any player could gain by committing to a single trigger deviation in
hindsight) is computed from the tables by dynamic programming, and doubles
as the distance from correlated-equilibrium behavior.

For small games the raw sample multiset is kept alongside the tables so an
exhaustive checker can enumerate every deviation directly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .game import EMPTY_SEQ
from .strategies import SequenceFormStrategy, utility_vector
from .trigger import PhiRegretMeter, PureTriggerMinimizer, split_rngs

_PROFILE_KEEP_LIMIT = 200


class _ConstantState:
    """Stand-in minimizer for a player with no decision points."""

    def __init__(self, game, player):
        values = np.zeros(game.num_sequences(player))
        values[EMPTY_SEQ] = 1.0
        self._strat = SequenceFormStrategy(player, values, None)

    def next_element(self):
        return self._strat.copy()

    def observe_utility(self, util):
        pass


class EmpiricalFrequency:
    """Running summary of a sequence of sampled deterministic profiles.

    For every player and every non-empty sequence s, ``tables[i][s]`` holds
    the summed utility coefficient vectors of the rounds in which the player
    actually played s, restricted to the subtree of s's infoset, and
    ``follow[i][s]`` the summed realized utility mass at or below s.  Games
    with at most 200 joint deterministic profiles also keep the raw samples.
    """

    def __init__(self, game):
        self.game = game
        self.t = 0
        self.tables = [
            np.zeros((game.num_sequences(i), game.num_sequences(i)))
            for i in range(game.n_players)
        ]
        self.follow = [np.zeros(game.num_sequences(i)) for i in range(game.n_players)]
        small = game.joint_profile_count() <= _PROFILE_KEEP_LIMIT
        self.profiles: list[list[np.ndarray]] | None = [] if small else None

    def accumulate(self, profile):
        """Fold one deterministic joint profile into the summary."""
        game = self.game
        self.t += 1
        if self.profiles is not None:
            self.profiles.append([p.values.copy() for p in profile])
        for i in range(game.n_players):
            reach = game.term_chance.copy()
            for j in range(game.n_players):
                if j != i:
                    reach *= profile[j].values[game.term_seq[:, j]]
            coeff = np.zeros(game.num_sequences(i))
            np.add.at(coeff, game.term_seq[:, i], game.term_payoffs[:, i] * reach)
            pv = profile[i].values
            self.follow[i] += game.descendant_mask(i) @ (coeff * pv)
            for sid in np.flatnonzero(pv):
                if sid == EMPTY_SEQ:
                    continue
                gid = int(game.seq_infoset(i)[sid])
                sub = game.subtree_sequences(gid)
                self.tables[i][sid, sub] += pv[sid] * coeff[sub]


@dataclass
class GapReport:
    """Trigger gap of an empirical distribution.

    ``per_player[i]`` is the best gain per round player i could get from a
    single trigger deviation; ``eps`` is the maximum over players.
    ``trigger_gaps[i][s]`` breaks the gain down per trigger sequence (minus
    infinity at the empty sequence).  ``witnesses[i]`` is the player's best
    (trigger, continuation) pair, and ``argmax`` names the player and trigger
    achieving ``eps``.
    """

    per_player: list[float]
    eps: float
    trigger_gaps: list[np.ndarray]
    witnesses: list[tuple[int, SequenceFormStrategy] | None]
    argmax: tuple[int, int] | None


def subtree_best_response(game, player, coeffs, root=None):
    """Best deterministic strategy against a coefficient vector.

    Runs bottom-up dynamic programming over the infoset forest (or the
    subtree of ``root``), breaking ties toward the lowest action index, and
    returns the optimal value together with an optimal vertex.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    order = (game.player_infosets(player) if root is None
             else game.subtree_infosets(root))
    best_val: dict[int, float] = {}
    best_act: dict[int, int] = {}
    for gid in reversed(order):
        js = game.infosets[gid]
        top = None
        for k, sid in enumerate(js.seq_ids):
            v = float(coeffs[sid])
            for child in game.child_infosets(player, sid):
                v += best_val[child]
            if top is None or v > top:
                top = v
                best_act[gid] = k
        best_val[gid] = top

    values = np.zeros(game.num_sequences(player))
    if root is None:
        values[EMPTY_SEQ] = 1.0
        roots = [gid for gid in order
                 if game.infosets[gid].parent_seq == EMPTY_SEQ]
        total = float(coeffs[EMPTY_SEQ]) + sum(best_val[g] for g in roots)
        frontier = list(roots)
    else:
        total = best_val[root]
        frontier = [root]
    while frontier:
        gid = frontier.pop()
        sid = game.infosets[gid].seq_ids[best_act[gid]]
        values[sid] = 1.0
        frontier.extend(game.child_infosets(player, sid))
    return total, SequenceFormStrategy(player, values, root)


def efce_gap(freq):
    """Trigger gap of the accumulated empirical distribution."""
    game = freq.game
    if freq.t == 0:
        raise ValueError("no profiles accumulated yet")
    per_player = []
    trigger_gaps = []
    witnesses = []
    argmax = None
    eps = None
    for i in range(game.n_players):
        n = game.num_sequences(i)
        gaps = np.full(n, -np.inf)
        best_here = None
        witness = None
        for sid in range(1, n):
            gid = int(game.seq_infoset(i)[sid])
            val, vertex = subtree_best_response(game, i, freq.tables[i][sid], gid)
            gap = (val - float(freq.follow[i][sid])) / freq.t
            gaps[sid] = gap
            if best_here is None or gap > best_here:
                best_here = gap
                witness = (sid, vertex)
        eps_i = 0.0 if best_here is None else best_here
        per_player.append(eps_i)
        trigger_gaps.append(gaps)
        witnesses.append(witness)
        if eps is None or eps_i > eps:
            eps = eps_i
            argmax = (i, witness[0]) if witness is not None else None
    return GapReport(per_player, float(eps), trigger_gaps, witnesses, argmax)


def efce_gap_brute(freq):
    """Exhaustive gap evaluation from the raw sample multiset.

    Enumerates every pure continuation at every trigger and evaluates the
    defining inequalities of the equilibrium directly on the stored samples,
    walking terminals.  Only available when the game was small enough for the
    frequency object to keep its samples.
    """
    from .strategies import enumerate_pure

    game = freq.game
    if freq.profiles is None:
        raise ValueError("raw samples were not kept for this game")
    if freq.t == 0:
        raise ValueError("no profiles accumulated yet")
    per_player = []
    trigger_gaps = []
    for i in range(game.n_players):
        n = game.num_sequences(i)
        desc = game.descendant_mask(i)
        gaps = np.full(n, -np.inf)
        for sid in range(1, n):
            gid = int(game.seq_infoset(i)[sid])
            term_i = game.term_seq[:, i]
            below_trigger = desc[sid][term_i]
            below_iset = game.subtree_seq_mask(gid)[term_i]
            follow = 0.0
            triggered_alpha = np.zeros(game.n_terminals)
            for sample in freq.profiles:
                others = game.term_chance.copy()
                for j in range(game.n_players):
                    if j != i:
                        others *= sample[j][game.term_seq[:, j]]
                alpha = game.term_payoffs[:, i] * others
                follow += float((alpha * sample[i][term_i])[below_trigger].sum())
                if sample[i][sid] == 1.0:
                    triggered_alpha += alpha
            best = None
            for cand in enumerate_pure(game, i, root=gid):
                val = float((triggered_alpha * cand.values[term_i])[below_iset].sum())
                if best is None or val > best:
                    best = val
            gaps[sid] = (best - follow) / freq.t
        per_player.append(float(gaps[1:].max()) if n > 1 else 0.0)
        trigger_gaps.append(gaps)
    eps = max(per_player)
    return GapReport(per_player, float(eps), trigger_gaps,
                     [None] * game.n_players, None)


@dataclass
class RunLog:
    """Complete record of one self-play run.

    ``rows`` holds one entry per iteration per player: (t, player number,
    measured trigger regret, regret bound, gap, gap bound), with the gap
    fields None except at checkpoints.  ``final`` is the gap report at the
    last iteration.
    """

    game_name: str
    iterations: int
    seed: int
    gap_every: int
    delta: float
    meta: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    final: GapReport | None = None

    CSV_HEADER = "t,player,phi_regret,phi_regret_bound,efce_gap,gap_bound"

    def csv_text(self):
        def fmt(x):
            return "" if x is None else f"{x:.12g}"

        lines = [self.CSV_HEADER]
        for t, player, regret, bound, gap, gap_bound in self.rows:
            lines.append(
                f"{t},{player},{fmt(regret)},{fmt(bound)},{fmt(gap)},{fmt(gap_bound)}"
            )
        return "\n".join(lines) + "\n"

    def summary_text(self):
        n = len(self.meta["sequence_counts"])
        out = [
            f"game: {self.game_name}",
            f"players: {n}",
            f"iterations: {self.iterations}",
            f"seed: {self.seed}",
            f"gap-every: {self.gap_every}",
            f"delta: {self.delta:.12g}",
            f"nodes: {self.meta['nodes']}",
            f"final efce gap: {self.final.eps:.12g}",
            f"final gap bound: {self.meta['final_gap_bound']:.12g}",
            "gap bound satisfied: "
            + ("yes" if self.final.eps <= self.meta["final_gap_bound"] else "no"),
        ]
        for i in range(n):
            regret = self.meta["final_regrets"][i]
            bound = self.meta["final_regret_bounds"][i]
            out.append(
                f"player {i + 1}: sequences={self.meta['sequence_counts'][i]} "
                f"payoff-range={self.meta['payoff_ranges'][i]:.12g} "
                f"final-phi-regret={regret:.12g} regret-bound={bound:.12g} "
                f"regret-bound-satisfied={'yes' if regret <= bound else 'no'} "
                f"final-gap={self.final.per_player[i]:.12g}"
            )
        return "\n".join(out) + "\n"


def run(game, iterations, seed, gap_every=100, delta=0.01, fp_tol=1e-10, threads=1):
    """Run uncoupled self-play for a number of rounds and log its progress.

    Every player independently runs the pure trigger-regret minimizer, with
    per-player random streams split deterministically from ``seed``.  The
    trigger gap of the empirical play distribution is evaluated every
    ``gap_every`` rounds and at the end; ``delta`` sets the confidence level
    of the logged high-probability gap bound.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    if gap_every < 1:
        raise ValueError("gap-every must be at least 1")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie strictly between 0 and 1")
    if threads < 1:
        raise ValueError("threads must be at least 1")

    n = game.n_players
    rngs = split_rngs(seed, n)
    states = [
        PureTriggerMinimizer(game, i, rngs[i], fp_tol)
        if game.num_sequences(i) > 1
        else _ConstantState(game, i)
        for i in range(n)
    ]
    meters = [PhiRegretMeter(game, i) for i in range(n)]
    freq = EmpiricalFrequency(game)
    checkpoints = set(range(gap_every, iterations + 1, gap_every))
    checkpoints.add(iterations)

    d_max = max(game.payoff_range(i) for i in range(n))
    gap_factor = d_max * (2.0 * game.n_nodes + math.sqrt(8.0 * math.log(n / delta)))
    regret_factor = [2.0 * game.payoff_range(i) * game.num_sequences(i)
                     for i in range(n)]

    log = RunLog(
        game_name=game.name,
        iterations=iterations,
        seed=seed,
        gap_every=gap_every,
        delta=delta,
        meta={
            "nodes": game.n_nodes,
            "sequence_counts": [game.num_sequences(i) for i in range(n)],
            "payoff_ranges": [game.payoff_range(i) for i in range(n)],
        },
    )

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        report = None
        for t in range(1, iterations + 1):
            if pool is not None:
                profile = list(pool.map(lambda s: s.next_element(), states))
            else:
                profile = [s.next_element() for s in states]
            freq.accumulate(profile)
            utils = [utility_vector(game, i, profile) for i in range(n)]
            for i in range(n):
                meters[i].record(utils[i].coefficients, profile[i].values)
            if pool is not None:
                list(pool.map(lambda sl: sl[0].observe_utility(sl[1]),
                              zip(states, utils)))
            else:
                for i in range(n):
                    states[i].observe_utility(utils[i])

            gaps = None
            gap_bound = None
            if t in checkpoints:
                report = efce_gap(freq)
                gaps = report.per_player
                gap_bound = gap_factor / math.sqrt(t)
            sqrt_t = math.sqrt(t)
            for i in range(n):
                log.rows.append((
                    t, i + 1, meters[i].regret(), regret_factor[i] * sqrt_t,
                    None if gaps is None else gaps[i], gap_bound,
                ))
    finally:
        if pool is not None:
            pool.shutdown()

    log.final = report
    log.meta["final_gap_bound"] = gap_factor / math.sqrt(iterations)
    log.meta["final_regrets"] = [meters[i].regret() for i in range(n)]
    log.meta["final_regret_bounds"] = [
        regret_factor[i] * math.sqrt(iterations) for i in range(n)
    ]
    return log
