"""Descriptive summaries of a match dataset.

Race composition, activity histogram, head-to-head frequencies and win
ratios, and the month-by-month race mix.
"""
import numpy as np

import matchbalance as mb

rng = np.random.default_rng(7)
truth = mb.random_league(40, n_maps=4, rng=rng, schedule="tournament_tail")
dataset = mb.generate(truth, 1500, rng)
stats = mb.describe(dataset)

print("players per race:", stats.race_counts)

print("\ngames played per player (histogram):")
for bucket, count in stats.games_histogram.items():
    print(f"  {bucket:>7}: {'#' * count} {count}")

print("\ngames per race pairing:")
for (a, b), n in stats.pair_frequencies.items():
    print(f"  {a} vs {b}: {n}")

print("\ncross-race win ratios (row beats column):")
for (a, b), ratio in sorted(stats.win_ratios.items()):
    wins = stats.pair_wins.get((a, b), 0)
    total = stats.pair_frequencies[tuple(sorted((a, b)))]
    print(f"  {a} over {b}: {wins}/{total} = {ratio:.4f}")

print("\nmonthly race mix (share of that month's players):")
for month, row in stats.monthly_race_trend.items():
    shares = "  ".join(f"{race}: {count} ({prop:.3f})"
                       for race, (count, prop) in row.items())
    print(f"  {month}: {shares}")
