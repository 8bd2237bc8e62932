#!/usr/bin/env python3
"""The full comparison harness on three synthetic capture sessions.

Each dataset is generated, stationarized, and handed to every predictor;
the result is a dataset x predictor grid of MSE and wall time, rendered
as markdown tables (the same thing `trafficast repro-paper` writes).
"""
from trafficast.evaluate import compare, parse_predictor, render_report
from trafficast.preprocess import pipeline
from trafficast.rng import derive_seed
from trafficast.synth import SeasonalSpec, gen_seasonal_traffic

SEED = 42

sessions = []
for label, base_rate in (("morning", 30.0), ("midday", 65.0), ("evening", 50.0)):
    spec = SeasonalSpec(
        n=3000,
        period=60,
        base_rate=base_rate,
        amplitude=base_rate / 2.5,
        seed=derive_seed(SEED, label),
    )
    sessions.append((label, pipeline(gen_seasonal_traffic(spec))))

predictors = [
    parse_predictor(s)
    for s in ("arma:2,0", "arma:2,1", "arma:3,0", "kf:0.01,0.01")
]

report = compare(sessions, predictors, timing_repetitions=3)
print(render_report(report, "markdown"))

print("same grid as machine-readable CSV:\n")
print(render_report(report, "csv"))
