"""Shared helpers for the test suite."""

import numpy as np

import efce
from efce.game import CHANCE, LEAF


def brute_expected_payoffs(game, strategies):
    """Expected payoff vector by walking the raw node tree.

    Independent of the package's terminal tables: recurses over nodes,
    multiplying chance probabilities along the way and looking up each
    player's last sequence weight at the leaves.
    """
    out = np.zeros(game.n_players)

    def walk(k, pc, last):
        kind = game.node_kind[k]
        if kind == LEAF:
            w = pc
            for i in range(game.n_players):
                w *= strategies[i].values[last[i]]
            for i in range(game.n_players):
                out[i] += game.leaf_payoffs[k][i] * w
            return
        if kind == CHANCE:
            for p, c in zip(game.chance_probs[k], game.node_children[k]):
                walk(c, pc * p, last)
            return
        i = game.node_player[k]
        gid = game.node_infoset[k]
        for sid, c in zip(game.infosets[gid].seq_ids, game.node_children[k]):
            nxt = list(last)
            nxt[i] = sid
            walk(c, pc, nxt)

    walk(game.root, 1.0, [efce.EMPTY_SEQ] * game.n_players)
    return out


def random_behavioral(game, player, rng, root=None):
    """Random point of the sequence-form polytope via random local simplices."""
    isets = (game.player_infosets(player) if root is None
             else game.subtree_infosets(root))
    local = {}
    for gid in isets:
        m = len(game.infosets[gid].actions)
        raw = np.array([rng.random() + 1e-3 for _ in range(m)])
        local[gid] = raw / raw.sum()
    return efce.sequence_from_behavioral(game, player, local, root=root)


def random_deviation(game, player, rng, max_triggers=None):
    """Random convex combination of trigger deviations for one player."""
    n = game.num_sequences(player)
    sids = list(range(1, n))
    if not sids:
        return efce.ConvexTriggerDeviation(player, [])
    rng.shuffle(sids)
    if max_triggers is not None:
        sids = sids[:max_triggers]
    k = rng.randint(1, len(sids))
    chosen = sids[:k]
    raw = np.array([rng.random() + 1e-3 for _ in chosen])
    weights = raw / raw.sum()
    entries = []
    for sid, w in zip(chosen, weights):
        gid = int(game.seq_infoset(player)[sid])
        cont = random_behavioral(game, player, rng, root=gid)
        entries.append((sid, float(w), cont.values))
    return efce.ConvexTriggerDeviation(player, entries)


def fig1_deviations(game):
    """The three worked trigger deviations on the running example game."""
    n = game.num_sequences(0)
    ya = np.zeros(n)
    ya[2] = 1.0
    ya[7] = 1.0
    yb = np.zeros(n)
    yb[1] = 1.0
    yb[3] = 1.0
    yb[5] = 1.0
    yc = np.zeros(n)
    yc[4] = 1.0
    return [
        efce.TriggerDeviation(0, 1, ya),
        efce.TriggerDeviation(0, 2, yb),
        efce.TriggerDeviation(0, 3, yc),
    ]
