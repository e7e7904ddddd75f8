"""Win-probability queries and skill rankings over a fitted model."""

from __future__ import annotations

from .data import RACES
from .design import canonical_orientation
from .glm import FitResult, sigmoid


def _matchup_term(fit: FitResult, race1: str, race2: str, map_name: str,
                  *, require_map: bool) -> float:
    pair, sign = canonical_orientation(race1, race2)
    if pair is None:
        return 0.0
    key = (map_name, pair)
    if key not in fit.index.matchup_columns:
        if require_map:
            raise ValueError(f"unknown map {map_name!r}")
        return 0.0
    return sign * fit.matchup_estimate(map_name, pair)


def predict_detail(
    fit: FitResult,
    player1: str,
    player2: str,
    race1: str,
    race2: str,
    map_name: str,
) -> dict:
    """Win probability for player1 plus the per-term breakdown.

    Anchored players contribute 0 by construction; players absent from
    the fit entirely also contribute 0 but are reported in
    ``unknown_inputs`` so callers can tell an informed prediction from
    a 50-50-by-ignorance one.  The map must be known to the fit.
    """
    if player1 == player2:
        raise ValueError(f"player1 and player2 are both {player1!r}")
    for tag in (race1, race2):
        if tag not in RACES:
            raise ValueError(f"unrecognized race tag {tag!r}")
    unknown = [
        name
        for name, player in (("player1", player1), ("player2", player2))
        if not fit.index.knows_player(player)
    ]
    c1 = fit.player_estimate(player1)
    c2 = -fit.player_estimate(player2)
    cm = _matchup_term(fit, race1, race2, map_name, require_map=True)
    eta = c1 + c2 + cm
    return {
        "probability": sigmoid(eta),
        "eta": eta,
        "contributions": {"player1": c1, "player2": c2, "matchup": cm},
        "unknown_inputs": unknown,
    }


def win_probability(
    fit: FitResult,
    player1: str,
    player2: str,
    race1: str,
    race2: str,
    map_name: str,
) -> float:
    """Probability that player1 beats player2 with these races on this map."""
    return predict_detail(fit, player1, player2, race1, race2, map_name)["probability"]


def rank_players(fit: FitResult) -> list[tuple[str, float]]:
    """Players sorted by fitted skill, best first.

    Ties break lexicographically by id.  Anchored players follow the
    ranked list (unranked, skill fixed at 0).
    """
    ranked = sorted(
        ((player, float(fit.coefficients[col]))
         for player, col in fit.index.player_columns.items()),
        key=lambda item: (-item[1], item[0]),
    )
    ranked.extend((player, 0.0) for player in sorted(fit.index.anchored_players))
    return ranked
