"""Coefficient-column bookkeeping and signed sparse design encoding.

Each match contributes one row with at most three nonzero entries, all
in {+1, -1}: +1 at player1's column, -1 at player2's column, and one
signed entry at the map/race-matchup column when the races differ.
Each unordered race pair owns a single column per map, stored under its
canonical orientation; games observed in the reversed orientation carry
sign -1 instead of a second parameter.  Swapping the two players of any
record therefore negates its row exactly, which forces
P(swapped) = 1 - P for every coefficient vector.

Low-activity players (and, if needed for identifiability, one player
per connected component of the opponent graph) are anchored: their
skill is fixed to zero and they own no column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .data import RACES, Dataset, MatchRecord, games_per_player

CANONICAL_PAIRS: tuple[tuple[str, str], ...] = (
    ("Terran", "Protoss"),
    ("Terran", "Zerg"),
    ("Protoss", "Zerg"),
)

_PAIR_POSITION = {pair: i for i, pair in enumerate(CANONICAL_PAIRS)}


class EncodingError(ValueError):
    """A record refers to a player or map the index does not know."""


def canonical_orientation(race1: str, race2: str) -> tuple[tuple[str, str] | None, int]:
    """Map an ordered race pairing onto (canonical pair, sign).

    Returns (None, 0) for same-race pairings, which carry no matchup
    term.  Raises EncodingError for unrecognized race tags.
    """
    for tag in (race1, race2):
        if tag not in RACES:
            raise EncodingError(f"unrecognized race tag {tag!r}")
    if race1 == race2:
        return None, 0
    if (race1, race2) in _PAIR_POSITION:
        return (race1, race2), 1
    return (race2, race1), -1


def _components(d: Dataset) -> tuple[frozenset[str], ...]:
    """Connected components of the opponent graph (players joined by games)."""
    parent: dict[str, str] = {p: p for p in d.players}

    def find(x: str) -> str:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for r in d.records:
        a, b = find(r.player1), find(r.player2)
        if a != b:
            parent[b] = a
    groups: dict[str, set[str]] = {}
    for p in d.players:
        groups.setdefault(find(p), set()).add(p)
    return tuple(frozenset(g) for g in sorted(groups.values(), key=min))


@dataclass(frozen=True)
class ParameterIndex:
    """Bijection between model symbols and coefficient-vector positions.

    Player columns come first (non-anchored players, sorted by id),
    followed by 3 matchup columns per map (maps sorted, pairs in
    canonical order), so columns form the gapless range [0, p).
    """

    player_columns: dict[str, int]
    anchored_players: frozenset[str]
    matchup_columns: dict[tuple[str, tuple[str, str]], int]
    maps: tuple[str, ...]
    p: int
    components: tuple[frozenset[str], ...]
    canonical_pairs: tuple[tuple[str, str], ...] = CANONICAL_PAIRS

    def matchup_column(self, map_name: str, pair: tuple[str, str]) -> int:
        return self.matchup_columns[(map_name, pair)]

    def knows_player(self, player: str) -> bool:
        return player in self.player_columns or player in self.anchored_players

    def column_symbols(self) -> list[str]:
        """Human-readable symbol per column, in column order."""
        symbols = [""] * self.p
        for player, col in self.player_columns.items():
            symbols[col] = f"player:{player}"
        for (map_name, (r1, r2)), col in self.matchup_columns.items():
            symbols[col] = f"matchup:{map_name}:{r1}>{r2}"
        return symbols


def build_parameter_index(
    d: Dataset, min_games: int = 6, *, ensure_identifiable: bool = True
) -> ParameterIndex:
    """Assign coefficient columns, anchoring low-activity players.

    Players with fewer than ``min_games`` appearances are anchored to
    zero.  With ``ensure_identifiable`` (the default), any connected
    component of the opponent graph left without an anchored player
    gets one more anchor: the member with the fewest games, ties broken
    by lexicographically smallest id.  Matchup columns are created for
    every (map, canonical pair) combination, observed or not.
    """
    if not d.records:
        raise ValueError("cannot index an empty dataset")
    if min_games < 1:
        raise ValueError(f"min_games must be a positive integer, got {min_games}")
    counts = games_per_player(d)
    anchored = {p for p, c in counts.items() if c < min_games}
    components = _components(d)
    if ensure_identifiable:
        for component in components:
            if component & anchored:
                continue
            anchored.add(min(component, key=lambda p: (counts[p], p)))

    player_columns = {
        p: i for i, p in enumerate(sorted(d.players - anchored))
    }
    maps = tuple(sorted(d.maps))
    base = len(player_columns)
    matchup_columns = {
        (m, pair): base + 3 * mi + _PAIR_POSITION[pair]
        for mi, m in enumerate(maps)
        for pair in CANONICAL_PAIRS
    }
    return ParameterIndex(
        player_columns=player_columns,
        anchored_players=frozenset(anchored),
        matchup_columns=matchup_columns,
        maps=maps,
        p=base + 3 * len(maps),
        components=components,
    )


def _encode_parts(r: MatchRecord, idx: ParameterIndex) -> Iterator[tuple[int, int]]:
    """Yield (column, sign) entries for one record, player1 first."""
    for player, sign in ((r.player1, 1), (r.player2, -1)):
        col = idx.player_columns.get(player)
        if col is not None:
            yield col, sign
        elif player not in idx.anchored_players:
            raise EncodingError(f"unknown player {player!r}")
    pair, sign = canonical_orientation(r.race1, r.race2)
    if pair is not None:
        key = (r.map_name, pair)
        if key not in idx.matchup_columns:
            raise EncodingError(f"unknown map {r.map_name!r}")
        yield idx.matchup_columns[key], sign


def encode_row(r: MatchRecord, idx: ParameterIndex) -> dict[int, int]:
    """Encode one record as a {column: sign} sparse row."""
    return dict(_encode_parts(r, idx))


@dataclass(frozen=True, eq=False)
class EncodedDataset:
    """Design rows in padded array form plus the binary responses.

    ``cols``/``signs`` are (n, 3) arrays; unused slots carry sign 0 and
    contribute nothing.  Slot order is player1, player2, matchup.
    """

    cols: np.ndarray
    signs: np.ndarray
    response: np.ndarray
    index: ParameterIndex

    @property
    def n(self) -> int:
        return self.cols.shape[0]

    @property
    def p(self) -> int:
        return self.index.p

    def linear_predictor(self, beta: np.ndarray) -> np.ndarray:
        return (self.signs * beta[self.cols]).sum(axis=1)

    def column_counts(self) -> np.ndarray:
        """Number of records touching each column."""
        touched = self.cols[self.signs != 0]
        return np.bincount(touched.ravel(), minlength=self.p)

    def subset(self, rows: np.ndarray) -> "EncodedDataset":
        return EncodedDataset(
            self.cols[rows], self.signs[rows], self.response[rows], self.index
        )

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.p))
        for k in range(self.cols.shape[1]):
            dense[np.arange(self.n), self.cols[:, k]] += self.signs[:, k]
        return dense


def build_design(d: Dataset, idx: ParameterIndex) -> EncodedDataset:
    """Encode every record, in dataset order."""
    n = len(d.records)
    cols = np.zeros((n, 3), dtype=np.int32)
    signs = np.zeros((n, 3), dtype=np.int8)
    response = np.zeros(n, dtype=np.int8)
    for i, r in enumerate(d.records):
        try:
            for slot, (col, sign) in enumerate(_encode_parts(r, idx)):
                cols[i, slot] = col
                signs[i, slot] = sign
        except EncodingError as exc:
            raise EncodingError(
                f"record {i} ({r.player1} vs {r.player2} on {r.map_name}): {exc}"
            ) from exc
        response[i] = r.winner
    return EncodedDataset(cols, signs, response, idx)


def index_to_obj(idx: ParameterIndex) -> dict:
    """JSON-ready representation (column <-> symbol table)."""
    return {
        "p": idx.p,
        "player_columns": dict(sorted(idx.player_columns.items())),
        "anchored_players": sorted(idx.anchored_players),
        "maps": list(idx.maps),
        "canonical_pairs": [list(pair) for pair in idx.canonical_pairs],
        "matchup_columns": [
            {"map": m, "race1": pair[0], "race2": pair[1], "column": col}
            for (m, pair), col in sorted(idx.matchup_columns.items(), key=lambda kv: kv[1])
        ],
        "components": [sorted(c) for c in idx.components],
    }


def index_from_obj(obj: dict) -> ParameterIndex:
    matchup_columns = {
        (mc["map"], (mc["race1"], mc["race2"])): mc["column"]
        for mc in obj["matchup_columns"]
    }
    return ParameterIndex(
        player_columns={k: int(v) for k, v in obj["player_columns"].items()},
        anchored_players=frozenset(obj["anchored_players"]),
        matchup_columns=matchup_columns,
        maps=tuple(obj["maps"]),
        p=int(obj["p"]),
        components=tuple(frozenset(c) for c in obj["components"]),
        canonical_pairs=tuple(tuple(pair) for pair in obj["canonical_pairs"]),
    )
