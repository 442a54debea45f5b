"""Pick a resolution for the karate club without looking at its labels.

The tuner clusters the graph once, fits LFR parameters to that clustering,
and lets synthetic graphs with known communities vote for a resolution.
Labels are used only at the end, to see how the choice did.
Takes about ten seconds.
"""

from __future__ import annotations

from commtune import GRID_PRESETS, Objective, TuneConfig, tune
from commtune.datasets import karate
from commtune.experiment import evaluate

data = karate()
config = TuneConfig(GRID_PRESETS["real-gamma"], default=1.0, quality="rand", n_graphs=20, n_runs=20, master_seed=0)
report = tune(data.graph, "louvain", config)
print(report.to_text().split("\n\n")[0])

# the votes, one per synthetic graph
print("votes:", " ".join(f"{b:g}" for b in sorted(report.per_graph_best)))

# now compare default and tuned on the real labels
for gamma in (1.0, report.chosen):
    rand = evaluate(data.graph, data.truth, Objective.modularity(gamma), 100, 0, 0, ("rand",))["rand"]
    print(f"gamma {gamma:g}: mean Rand {rand.mean():.3f}")
