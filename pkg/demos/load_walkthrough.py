"""Walk the load target from raw synthetic data to a held-out model comparison.

Usage: python3 demos/load_walkthrough.py [--full]

Without --full the neural and boosted models use small settings so the
run finishes in seconds (the shrunken LSTM then trails the baselines);
--full uses the paper-load preset unchanged and takes a few minutes.
"""
import sys

from powercast.pipeline import RunConfig, compare, compare_table, diagnose, prepare
from powercast.synth import SynthConfig, generate_synthetic

QUICK_MODELS = {
    "lstm": {"hidden": 16, "window": 14, "epochs": 40, "batch_size": 32, "use_exog": True},
    "gbt": {"n_trees": 100, "eta": 0.1, "max_depth": 3, "window": 14, "calendar": "onehot"},
}


def main(full: bool) -> None:
    ds = generate_synthetic(SynthConfig(seed=42))
    load = ds.column("load").values
    print(f"synthetic plant: {len(ds)} days, load mean {load.mean():.1f} MWh, std {load.std(ddof=1):.1f}")

    cfg = RunConfig.from_sources("paper-load")
    if not full:
        cfg.models.update(QUICK_MODELS)
    prep = prepare(ds, cfg)
    print("cleaning chain:", " -> ".join(step["kind"] for step in prep.chain.to_dict()))

    diag = diagnose(prep, max_lag=30)
    before, after = diag["adf"], diag["adf_differenced"]
    print(f"ADF on the cleaned series: p={before['pvalue']:.3f} (stationary: {before['stationary']})")
    print(f"ADF after one difference:  p={after['pvalue']:.3g} (stationary: {after['stationary']})")

    result = compare(cfg, prep)
    print()
    print(compare_table(result))


if __name__ == "__main__":
    main("--full" in sys.argv[1:])
