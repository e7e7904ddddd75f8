"""Is the game balanced overall?

Per-map matchup edges are averaged into one number per race pair, and a
case-resampling bootstrap turns that into tail probabilities
P(mean edge > 0).  Values near 0 or 1 flag a systematic race advantage;
values near 0.5 look balanced.  The simulated league carries a casual
tail per race (anchoring it pins the matchup columns) and a built-in
Terran edge over Zerg on every map.
"""
import datetime as dt

import numpy as np

import matchbalance as mb
from matchbalance.data import Dataset, MatchRecord

rng = np.random.default_rng(21)
truth = mb.random_league(20, n_maps=3, rng=rng, skill_sd=1.0, matchup_sd=0.0)
for m in truth.maps:  # tilt every map toward Terran against Zerg
    truth.matchup_effects[(m, ("Terran", "Zerg"))] = 0.5
dataset = mb.generate(truth, 2200, rng)

records = list(dataset.records)
regulars = sorted(truth.player_skills)
for race in mb.RACES:
    for c in range(30):
        name = f"casual_{race.lower()}_{c}"
        truth.player_skills[name] = 0.0
        truth.race_of[name] = race
        for g in range(4):
            opponent = regulars[int(rng.integers(len(regulars)))]
            map_name = truth.maps[int(rng.integers(len(truth.maps)))]
            eta = mb.true_eta(truth, name, opponent, map_name)
            records.append(MatchRecord(
                int(rng.random() < mb.sigmoid(eta)), name, race,
                opponent, truth.race_of[opponent], map_name,
                dt.date(2025, 3, 1), 600 + g,
            ))
dataset = Dataset.from_records(records)

fit = mb.fit_irls(mb.build_design(dataset, mb.build_parameter_index(dataset, 6)))
point = mb.aggregate_balance(fit)
print("point estimates of the mean edge over maps (true TvZ edge is +0.5):")
for pair, value in point.per_pair.items():
    print(f"  {pair[0]} over {pair[1]}: {value:+.3f}")

summary = mb.bootstrap_balance(dataset, B=300, min_games=6, seed=5)
print(f"\nbootstrap over {summary.B} resampled leagues "
      f"({summary.failed} failed draws):")
for pair in mb.CANONICAL_PAIRS:
    print(f"  {pair[0]} over {pair[1]}: mean {summary.mean[pair]:+.3f} "
          f"+/- {summary.sd[pair]:.3f}, P(edge > 0) = {summary.tail_prob[pair]:.3f}")

disp = mb.bootstrap_dispersion(dataset, B=200, min_games=6, seed=5)
print(f"\nbootstrap dispersion: {disp.mean:.3f} +/- {disp.sd:.3f} "
      f"(values well above 1 would indicate correlated outcomes)")
