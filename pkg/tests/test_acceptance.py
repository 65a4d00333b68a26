"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the "acceptance criteria" section of the terminal summary.
"""
import json
import time

import numpy as np
import pytest

from conftest import make_series, report, simulate_arma
from powercast.cli import main
from powercast.diagnostics import adf_test
from powercast.evaluation import compute_metrics
from powercast.ml.gbt import gbt_fit_arrays
from powercast.ml.lstm import LstmParams, lstm_cell_step, loss_and_grad
from powercast.ml.windows import Scaler
from powercast.preprocess import TransformChain, difference, invert_difference, savgol_smooth
from powercast.stat_models import ArimaOrder, auto_arima, fit_arima


def test_criterion_01_bptt_gradient():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    p = LstmParams.init(3, 1, rng)
    seq = rng.random((8, 4, 1))
    y = rng.random(8)
    _, grad = loss_and_grad(p, seq, y)
    theta = p.to_vector()
    step = 1e-5
    worst = 0.0
    for k in range(theta.size):
        up, dn = theta.copy(), theta.copy()
        up[k] += step
        dn[k] -= step
        num = (loss_and_grad(p.from_vector(up), seq, y)[0]
               - loss_and_grad(p.from_vector(dn), seq, y)[0]) / (2 * step)
        worst = max(worst, abs(grad[k] - num) / max(abs(grad[k]), abs(num), 1e-8))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-4 and elapsed < 10
    report(1, ok, f"max relative error {worst:.2e} over {theta.size} partials in {elapsed:.2f}s")
    assert ok


def test_criterion_02_cell_hand_value():
    p = LstmParams.constant(1, 1, 0.5, 0.0)
    h, c = lstm_cell_step(p, [1.0], [0.0], [0.0])
    target = 0.17440
    ok = abs(h[0] - target) <= 1e-5
    report(2, ok, f"h_t={h[0]:.10f} c_t={c[0]:.10f} vs stated h_t={target} (|diff|={abs(h[0] - target):.2e})")
    assert ok


def test_criterion_03_arima_recovery():
    t0 = time.perf_counter()
    ar_hits = ma_hits = d_hits = crit_hits = 0
    for seed in range(20):
        y = simulate_arma(np.random.default_rng(1000 + seed), 2000, ar=[0.7])
        ar_hits += abs(fit_arima(y, ArimaOrder(1, 0, 0)).ar[0] - 0.7) <= 0.05
        y = simulate_arma(np.random.default_rng(2000 + seed), 2000, ma=[0.5])
        ma_hits += abs(fit_arima(y, ArimaOrder(0, 0, 1)).ma[0] - 0.5) <= 0.07
        y = simulate_arma(np.random.default_rng(seed), 3000, ar=[0.5, -0.3], ma=[0.4, 0.2]).cumsum()
        best = auto_arima(y, max_p=3, max_q=3, max_d=2)
        forced = fit_arima(y, ArimaOrder(2, 1, 2), n_cond=best.n_cond)
        d_hits += best.order.d == 1
        crit_hits += best.aic <= forced.aic + 0.01
    elapsed = time.perf_counter() - t0
    ok = min(ar_hits, ma_hits, d_hits, crit_hits) >= 18 and elapsed < 120
    report(3, ok, f"AR(1) {ar_hits}/20, MA(1) {ma_hits}/20, auto d=1 {d_hits}/20, "
                  f"AIC<=forced+0.01 {crit_hits}/20 in {elapsed:.1f}s")
    assert ok


def test_criterion_04_adf_discrimination():
    t0 = time.perf_counter()
    walk_flagged = noise_flagged = diff_flagged = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        walk = rng.standard_normal(500).cumsum()
        noise = rng.standard_normal(500)
        walk_flagged += not adf_test(walk, "c").stationary
        noise_flagged += adf_test(noise, "c").stationary
        diff_flagged += adf_test(np.diff(walk), "c").stationary
    elapsed = time.perf_counter() - t0
    ok = walk_flagged >= 95 and noise_flagged >= 95 and diff_flagged >= 95 and elapsed < 60
    report(4, ok, f"random walk non-stationary {walk_flagged}/100, white noise stationary {noise_flagged}/100, "
                  f"differenced walk stationary {diff_flagged}/100 in {elapsed:.1f}s")
    assert ok


def test_criterion_05_savgol_reproduction():
    rng = np.random.default_rng(5)
    worst, cases = 0.0, 0
    t = np.linspace(-2.0, 2.0, 61)
    for window in (3, 5, 7, 9, 11, 15, 21):
        for polyorder in range(0, min(window, 7)):
            for degree in range(polyorder + 1):
                coef = rng.normal(size=degree + 1)
                y = np.polyval(coef, t)
                out = savgol_smooth(make_series(y), window, polyorder).values
                worst = max(worst, float(np.max(np.abs(out - y))))
                cases += 1
    ok = worst <= 1e-9
    report(5, ok, f"max abs error {worst:.2e} over {cases} (window, polyorder, degree) cases")
    assert ok


def test_criterion_06_metric_identities():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 100))
        a = rng.uniform(1.0, 1000.0, n)
        p = a + rng.normal(0, 50, n)
        m = compute_metrics(a, p)
        worst = max(worst, abs(m.rmse ** 2 - m.mse) / max(m.mse, 1.0), abs(m.mapa - (100 - m.mape)))
    m = compute_metrics([1, 3], [0, 2])
    hand = abs(m.mape - 200 / 3) <= 1e-10 and abs(m.mapa - 100 / 3) <= 1e-10
    ok = worst <= 1e-12 and hand
    report(6, ok, f"max identity error {worst:.1e} on 1000 pairs; hand example mape={m.mape!r}")
    assert ok


def test_criterion_07_gbt_objective():
    x = np.concatenate([np.linspace(-2, -0.1, 10), np.linspace(0, 2, 10)])[:, None]
    y = np.where(x[:, 0] < 0, -1.0, 1.0)
    stump = gbt_fit_arrays(x, y, n_trees=1, eta=1.0, max_depth=1, gamma=0.0, lam=0.0, base=0.0)
    tree = stump.trees[0]
    leaves = sorted(tree.value[tree.feature < 0].tolist())
    rng = np.random.default_rng(7)
    X = rng.random((300, 5))
    target = np.sin(5 * X[:, 0]) + X[:, 1] * X[:, 2] + 0.1 * rng.normal(size=300)
    m = gbt_fit_arrays(X, target, n_trees=500, eta=0.1, max_depth=3, gamma=0.0, lam=1.0)
    rises = int(np.sum(np.diff(m.trace) > 0))
    ok = leaves == [-1.0, 1.0] and stump.trace[-1] == 0.0 and rises == 0
    report(7, ok, f"stump leaves {leaves}, stump MSE {stump.trace[-1]}; "
                  f"{rises} increases over 500 trees (MSE {m.trace[0]:.4f} -> {m.trace[-1]:.4f})")
    assert ok


def rel_error(got, ref) -> float:
    """Norm-wise relative error: worst absolute deviation over the largest magnitude."""
    return float(np.max(np.abs(got - ref)) / np.max(np.abs(ref)))


def test_criterion_08_transform_round_trips():
    rng = np.random.default_rng(8)
    log_worst = diff_worst = norm_worst = diff_pointwise = 0.0
    for _ in range(100):
        y = rng.uniform(0.0, 3000.0, int(rng.integers(60, 200)))
        chain = TransformChain().then("log", offset=float(rng.uniform(0, 2)))
        back = chain.inverse(chain.forward(y))
        log_worst = max(log_worst, rel_error(back, y))
        for d in range(3):
            for D in range(3):
                for s in (2, 7, 12):
                    if D == 0 and s != 2:
                        continue
                    ds = difference(y, d, D, s)
                    rebuilt = invert_difference(ds, ds.values)
                    ref = y[ds.lost:]
                    diff_worst = max(diff_worst, rel_error(rebuilt, ref))
                    diff_pointwise = max(diff_pointwise, float(np.max(np.abs(rebuilt - ref) / np.abs(ref))))
        X = rng.normal(100, 30, (y.size, 3))
        sc = Scaler.fit(X, y)
        norm_worst = max(norm_worst, rel_error(sc.inverse_x(sc.transform_x(X)), X),
                         rel_error(sc.inverse_y(sc.transform_y(y)), y))
    worst = max(log_worst, diff_worst, norm_worst)
    ok = worst <= 1e-9
    report(8, ok, f"max relative error log {log_worst:.1e}, differencing {diff_worst:.1e}, "
                  f"normalisation {norm_worst:.1e} on 100 series "
                  f"(pointwise differencing worst {diff_pointwise:.1e}, near-zero values)")
    assert ok


@pytest.fixture(scope="module")
def paper_compare(tmp_path_factory):
    root = tmp_path_factory.mktemp("acceptance")
    assert main(["synth", "--seed", "42", "--out", str(root / "synth.csv")]) == 0
    t0 = time.perf_counter()
    code = main(["compare", "--preset", "paper-load", "--input", str(root / "synth.csv"),
                 "--out-dir", str(root / "run1")])
    elapsed = time.perf_counter() - t0
    return root, code, elapsed


def test_criterion_09_end_to_end(paper_compare):
    root, code, elapsed = paper_compare
    table = json.loads((root / "run1" / "compare.json").read_text())
    mape = {r["model"]: r["metrics"]["original"]["mape"] for r in table["rows"]}
    six = {"LSTM", "ARIMA", "XGBoost", "Dynamic ARIMA", "SES", "SARIMA"}
    adf_before = table["stationarity"]["before_differencing"]
    adf_after = table["stationarity"]["after_differencing"]
    ok = (code == 0 and six <= set(mape)
          and mape["LSTM"] < mape["SES"] and mape["LSTM"] < mape["Naive"]
          and not adf_before["stationary"] and adf_after["stationary"]
          and elapsed < 600)
    ranking = ", ".join(f"{k} {v:.3f}%" for k, v in sorted(mape.items(), key=lambda kv: kv[1]))
    report(9, ok, f"one-step MAPE {ranking}; ADF p before {adf_before['pvalue']:.3g}, "
                  f"after {adf_after['pvalue']:.3g}; compare took {elapsed:.0f}s")
    assert ok


def test_criterion_10_determinism(paper_compare):
    root, _, _ = paper_compare
    same = {}
    assert main(["synth", "--seed", "42", "--out", str(root / "synth2.csv")]) == 0
    same["synth"] = (root / "synth.csv").read_bytes() == (root / "synth2.csv").read_bytes()
    fits = []
    for k in range(2):
        out = root / f"fit{k}"
        for family in ("arima", "lstm", "gbt"):
            assert main(["fit", "--preset", "paper-load", "--input", str(root / "synth.csv"),
                         "--family", family, "--params", '{"epochs": 20}' if family == "lstm" else "{}",
                         "--out-dir", str(out / family)]) == 0
        fits.append([(out / f / "model.json").read_bytes() for f in ("arima", "lstm", "gbt")])
    same["fit"] = fits[0] == fits[1]
    assert main(["compare", "--preset", "paper-load", "--input", str(root / "synth.csv"),
                 "--out-dir", str(root / "run2")]) == 0
    same["compare"] = all((root / "run1" / name).read_bytes() == (root / "run2" / name).read_bytes()
                          for name in ("compare.json", "compare.txt"))
    ok = all(same.values())
    report(10, ok, "byte-identical repeats: " + ", ".join(f"{k} {'yes' if v else 'NO'}" for k, v in same.items()))
    assert ok
