"""Is the fitted model adequate?

Four looks at the same fit: a likelihood-ratio test against the
coin-flip model, a grouped calibration test on deciles of fitted
probability, the quasi-binomial dispersion, and seeded 10-fold
cross-validated accuracy.  Pearson residuals are exported for plotting.
"""
import numpy as np

import matchbalance as mb

rng = np.random.default_rng(11)
truth = mb.random_league(20, n_maps=3, rng=rng)
dataset = mb.generate(truth, 2500, rng)
index = mb.build_parameter_index(dataset, min_games=6)
data = mb.build_design(dataset, index)
fit = mb.fit_irls(data)

statistic, df, p = mb.lrt_vs_constant(fit, data)
print(f"likelihood ratio vs coin-flip model: statistic {statistic:.1f}, "
      f"df {df}, p = {p:.2e}")

hl = mb.hosmer_lemeshow(fit, data, groups=10)
print(f"calibration over 10 probability deciles: statistic {hl.statistic:.2f}, "
      f"df {hl.df}, p = {hl.p_value:.3f}")
print("  bin  count  mean fitted  observed  expected")
for i, g in enumerate(hl.group_table):
    print(f"  {i:>3}  {g['count']:>5}  {g['mean_fitted']:>11.3f}"
          f"  {g['observed']:>8.0f}  {g['expected']:>8.1f}")

disp = mb.pearson_dispersion(fit, data)
print(f"dispersion: {disp.phi:.4f} on {disp.n - disp.p_effective} residual dof "
      f"(1 = independent outcomes)")

cv = mb.k_fold_cv(dataset, k=10, min_games=6, seed=3)
print(f"10-fold CV accuracy: train {cv.train_mean:.3f} +/- {cv.train_sd:.3f}, "
      f"test {cv.test_mean:.3f} +/- {cv.test_sd:.3f}")

pairs = mb.residuals_vs_fitted(fit, data)
residuals = np.array([r for _, r in pairs])
print(f"Pearson residuals: {len(pairs)} rows, largest |r| = "
      f"{np.abs(residuals).max():.2f} (export with the residuals subcommand)")
