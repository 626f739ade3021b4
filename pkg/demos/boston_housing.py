"""
Boston housing, repeated random splits
======================================

456 training / 50 test rows, attributes normalized with training
statistics, one RBF candidate per training row. Averages over a few
splits for three values of the regularizer floor epsilon.
"""

from l1pofr import load_boston
from l1pofr.experiment import ExperimentConfig, format_costs, format_table, run_experiment

cfg = ExperimentConfig(width=15.0, epsilons=(1e-2, 1e-3, 1e-4), data_path="boston",
                       n_train=456, realizations=5, seed=0)
rows = run_experiment(cfg, data=load_boston())

print(format_table(rows))
print()
# how much work the inactive set saved
print(format_costs(rows))
