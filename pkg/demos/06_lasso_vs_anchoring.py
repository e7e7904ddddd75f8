"""Does the anchoring rule agree with L1 selection?

Low-activity players are anchored to zero by a game-count threshold.
As a cross-check, an L1-penalized fit with no anchoring at all (the
penalty makes it identifiable) should zero out mostly the same players
when its penalty is chosen by cross-validation.  The league here has a
solid core of regulars plus thirty one-game newcomers.
"""
import datetime as dt

import numpy as np

import matchbalance as mb
from matchbalance.data import Dataset, MatchRecord
from matchbalance.glm import FitOptions

rng = np.random.default_rng(91)
truth = mb.random_league(12, n_maps=2, rng=rng, skill_sd=1.0, matchup_sd=0.5)
dataset = mb.generate(truth, 900, rng)

records = list(dataset.records)
regulars = sorted(truth.player_skills)
for i in range(30):
    name = f"newcomer_{i:02d}"
    race = mb.RACES[i % 3]
    truth.player_skills[name] = 0.0
    truth.race_of[name] = race
    opponent = regulars[int(rng.integers(len(regulars)))]
    map_name = truth.maps[int(rng.integers(len(truth.maps)))]
    eta = mb.true_eta(truth, name, opponent, map_name)
    records.append(MatchRecord(
        int(rng.random() < mb.sigmoid(eta)), name, race,
        opponent, truth.race_of[opponent], map_name, dt.date(2025, 2, 1), 700,
    ))
dataset = Dataset.from_records(records)

anchored = mb.build_parameter_index(dataset, min_games=6).anchored_players
print(f"threshold anchoring removes {len(anchored)} of "
      f"{len(dataset.players)} players")

free_index = mb.build_parameter_index(dataset, min_games=1,
                                      ensure_identifiable=False)
data = mb.build_design(dataset, free_index)

grid = mb.default_lambda_grid(data, num=50)
lam = mb.select_lambda_cv(data, k=10, grid=grid, seed=7)
fit = mb.fit_lasso(data, FitOptions(l1_lambda=lam, max_iterations=300))
nonzero = int(np.count_nonzero(fit.coefficients))
print(f"cross-validation picks penalty {lam:.3f}; "
      f"{nonzero} of {free_index.p} coefficients stay nonzero")

overlap = mb.zero_overlap(set(anchored), fit)
print(f"the L1 fit zeroes {overlap:.0%} of the threshold-anchored players")

zeroed_actives = [
    p for p, col in free_index.player_columns.items()
    if p not in anchored and fit.coefficients[col] == 0.0
]
print(f"and {len(zeroed_actives)} players the threshold kept")
