import math
import warnings

import numpy as np
import pytest

from conftest import make_series, simulate_arma
from powercast.artifacts import dumps, model_from_dict
from powercast.core import ExogMatrix
from powercast.errors import (
    AlphaOutOfRange,
    MissingFutureExog,
    NonInvertible,
    SingularExog,
    TooShort,
)
from powercast.preprocess import TransformChain
from powercast.stat_models import (
    ArimaFit,
    ArimaOrder,
    SesFit,
    apply_arima,
    auto_arima,
    css_residuals,
    fit_arima,
    fit_ses,
    forecast_arima,
    information_criteria,
    ses_filter,
    ses_forecast,
)


def css_loop_oracle(w, c, ar, ma):
    """Textbook loop: e_t = w_t - c - sum phi_i (w_{t-i} - c) - sum theta_j e_{t-j}, zeros pre-sample."""
    p = len(ar)
    e = np.zeros(len(w))
    for t in range(p, len(w)):
        acc = w[t] - c
        for i, phi in enumerate(ar, 1):
            acc -= phi * (w[t - i] - c)
        for j, theta in enumerate(ma, 1):
            if t - j >= p:
                acc -= theta * e[t - j]
        e[t] = acc
    return e


@pytest.fixture(scope="module")
def ar1_fit():
    y = simulate_arma(np.random.default_rng(100), 2000, ar=[0.7])
    return fit_arima(y, ArimaOrder(1, 0, 0))


def test_ar1_recovery(ar1_fit):
    assert 0.65 <= ar1_fit.ar[0] <= 0.75
    assert ar1_fit.sigma2 == pytest.approx(1.0, abs=0.1)


def test_ma1_recovery():
    y = simulate_arma(np.random.default_rng(101), 2000, ma=[0.5])
    fit = fit_arima(y, ArimaOrder(0, 0, 1))
    assert 0.43 <= fit.ma[0] <= 0.57


def test_white_noise_intercept_only():
    y = np.random.default_rng(102).standard_normal(1500) * 3 + 50
    fit = fit_arima(y, ArimaOrder(0, 0, 0))
    assert fit.intercept == pytest.approx(y.mean(), rel=1e-6)
    assert fit.sigma2 == pytest.approx(y.var(), rel=0.02)
    fc = forecast_arima(fit, 5)
    assert np.allclose(fc.transformed, fit.intercept)


def test_criteria_identities(ar1_fit):
    f = ar1_fit
    assert f.aic == pytest.approx(-2 * f.loglik + 2 * f.k_params)
    assert f.bic == pytest.approx(-2 * f.loglik + math.log(f.n_eff) * f.k_params)
    assert f.k_params == 3  # phi, intercept, sigma2
    assert f.residuals.size == f.n_eff == 2000 - 1
    assert f.loglik == pytest.approx(-f.n_eff / 2 * (math.log(2 * math.pi) + math.log(f.sse / f.n_eff) + 1))


def test_information_criteria_examples():
    assert information_criteria(0.0, 0, 10) == (0.0, 0.0)
    aic, bic = information_criteria(-100.0, 3, 100)
    assert aic == 206.0
    assert bic == pytest.approx(200 + 3 * math.log(100), abs=1e-12)
    assert bic == pytest.approx(213.8155, abs=1e-4)
    a2, b2 = information_criteria(-50.0, 2, 20)
    assert b2 > a2


def test_css_matches_loop_oracle():
    rng = np.random.default_rng(5)
    w = simulate_arma(rng, 300, ar=[0.5, -0.2], ma=[0.4]) + 3.0
    ar, ma = np.array([0.45, -0.15]), np.array([0.35])
    e = css_residuals(w, None, 3.0, np.zeros(0), ar, ma, np.zeros(0), np.zeros(0), 1)
    assert np.allclose(e, css_loop_oracle(w, 3.0, ar, ma), atol=1e-12)


def test_stored_sse_self_consistent():
    y = simulate_arma(np.random.default_rng(6), 800, ar=[0.5], ma=[0.3])
    fit = fit_arima(y, ArimaOrder(1, 0, 1))
    e = css_loop_oracle(y, fit.intercept, fit.ar, fit.ma)[fit.n_cond:]
    assert float(e @ e) == pytest.approx(fit.sse, rel=1e-8)


def test_ar1_forecast_closed_form(ar1_fit):
    y = ar1_fit.y
    fit = fit_arima(y, ArimaOrder(1, 0, 0), include_mean=False)
    fc = forecast_arima(fit, 6)
    phi = fit.ar[0]
    assert np.allclose(fc.transformed, [phi ** h * y[-1] for h in range(1, 7)], rtol=1e-12)


def test_random_walk_forecast_is_flat():
    y = np.random.default_rng(7).standard_normal(300).cumsum()
    fit = fit_arima(y, ArimaOrder(0, 1, 0))
    assert not fit.include_mean
    assert np.allclose(forecast_arima(fit, 10).transformed, y[-1])


def test_forecast_h1_continuity():
    y = simulate_arma(np.random.default_rng(8), 500, ar=[0.6, 0.2], ma=[0.3]).cumsum()
    fit = fit_arima(y, ArimaOrder(2, 1, 1))
    fc = forecast_arima(fit, 1)
    extended = apply_arima(fit, np.append(y, 123.0))
    assert fc.transformed[0] == pytest.approx(extended.one_step()[-1], rel=1e-10)


def test_location_equivariance():
    y = simulate_arma(np.random.default_rng(9), 1500, ar=[0.5], ma=[0.2])
    a = fit_arima(y, ArimaOrder(1, 0, 1))
    b = fit_arima(y + 250.0, ArimaOrder(1, 0, 1))
    assert b.intercept - a.intercept == pytest.approx(250.0, abs=0.05)
    assert b.ar[0] == pytest.approx(a.ar[0], abs=1e-3)
    assert b.ma[0] == pytest.approx(a.ma[0], abs=1e-3)


def test_sarima_seasonal_ar_recovery():
    rng = np.random.default_rng(10)
    n, s = 1500, 7
    e = rng.standard_normal(n + 100)
    y = np.zeros(n + 100)
    for t in range(n + 100):
        y[t] = e[t] + (0.6 * y[t - s] if t >= s else 0.0)
    fit = fit_arima(y[100:], ArimaOrder(0, 0, 0, 1, 0, 0, s))
    assert fit.sar[0] == pytest.approx(0.6, abs=0.05)
    assert fit.family == "SARIMA"
    assert fit.n_cond == 7


def test_seasonal_difference_forecast_repeats_cycle():
    y = np.tile([1.0, 5.0, 3.0, 2.0], 30)
    fit = fit_arima(y, ArimaOrder(0, 0, 0, 0, 1, 0, 4))
    assert np.allclose(forecast_arima(fit, 8).transformed, np.tile([1.0, 5.0, 3.0, 2.0], 2))


def test_arimax_recovers_coefficient_and_needs_future():
    rng = np.random.default_rng(11)
    n = 1000
    x = rng.normal(20, 5, n)
    y = 2.0 * x + simulate_arma(rng, n, ar=[0.5]) + 10
    ex = ExogMatrix(0, ("temperature",), x[:, None])
    fit = fit_arima(make_series(y, start=0), ArimaOrder(1, 0, 0), exog=ex)
    assert fit.family == "ARIMAX"
    assert fit.exog_coef[0] == pytest.approx(2.0, abs=0.05)
    with pytest.raises(MissingFutureExog):
        forecast_arima(fit, 3)
    fc = forecast_arima(fit, 3, np.full((3, 1), 20.0))
    assert fc.horizon == 3


def test_singular_exog():
    x = np.arange(200.0)
    ex = ExogMatrix(0, ("temperature", "humidity"), np.column_stack([x, 2 * x]))
    with pytest.raises(SingularExog):
        fit_arima(make_series(np.random.default_rng(0).standard_normal(200), start=0), ArimaOrder(1, 0, 0), exog=ex)


def test_too_short():
    with pytest.raises(TooShort):
        fit_arima(np.random.default_rng(0).standard_normal(30), ArimaOrder(2, 0, 2))


def test_hard_enforcement_rejects_explosive():
    y = np.cumsum(np.random.default_rng(1).standard_normal(400)) * 0 + 1.05 ** np.arange(400)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(NonInvertible):
            fit_arima(y, ArimaOrder(1, 0, 0), include_mean=False, enforce="hard")


def test_roots_reported_outside_unit_circle(ar1_fit):
    assert all(m > 1 for m in ar1_fit.roots()["ar"])


def test_auto_arima_212():
    # d comes from ADF at 5%, so about 1 seed in 20 over-rejects and picks d=0
    rng = np.random.default_rng(0)
    y = simulate_arma(rng, 3000, ar=[0.5, -0.3], ma=[0.4, 0.2]).cumsum()
    best = auto_arima(y, max_p=3, max_q=3, max_d=2)
    assert best.order.d == 1
    forced = fit_arima(y, ArimaOrder(2, 1, 2), n_cond=best.n_cond)
    assert best.aic <= forced.aic + 0.01
    evaluated = [row["aic"] for row in best.search if "aic" in row]
    assert len(evaluated) == 16
    assert best.aic <= min(evaluated) + 1e-12


def test_auto_arima_white_noise_bic():
    hits = 0
    for seed in range(100):
        y = np.random.default_rng(seed).standard_normal(300) + 5.0
        f = auto_arima(y, max_p=1, max_q=1, criterion="bic")
        hits += (f.order.d, f.order.p, f.order.q) == (0, 0, 0)
    assert hits >= 90


def test_arima_artifact_round_trip(ar1_fit):
    chained = fit_arima(ar1_fit.y, ArimaOrder(1, 0, 0), chain=TransformChain().then("log", offset=0.0))
    text = dumps(chained.to_dict())
    back = model_from_dict(__import__("json").loads(text))
    assert isinstance(back, ArimaFit)
    assert dumps(back.to_dict()) == text
    assert np.array_equal(forecast_arima(back, 4).predictions, forecast_arima(chained, 4).predictions)


# ---- SES ----

def test_ses_hand_example():
    yhat, level = ses_filter(np.array([10.0, 20.0]), 0.5)
    assert yhat.tolist() == [10.0, 10.0]
    assert level == 15.0


def test_ses_alpha_one_limit():
    y = np.random.default_rng(0).standard_normal(50)
    _, fc = ses_forecast(y, alpha=0.999999, horizon=3)
    assert fc.transformed[0] == pytest.approx(y[-1], abs=1e-4)


def test_ses_constant_fixed_point():
    for alpha in (0.1, 0.5, 0.9):
        fit, fc = ses_forecast(np.full(20, 4.2), alpha=alpha, horizon=5)
        assert np.allclose(fit.fitted, 4.2) and np.allclose(fc.transformed, 4.2)


def test_ses_flat_forecast_and_optimised_alpha():
    rng = np.random.default_rng(1)
    y = rng.standard_normal(400).cumsum() + rng.standard_normal(400)
    fit, fc = ses_forecast(y, horizon=10)
    assert 0 < fit.alpha < 1
    assert np.all(fc.transformed == fc.transformed[0])
    grid = [(a, ((y - ses_filter(y, a)[0]) ** 2).sum()) for a in np.linspace(0.01, 0.99, 99)]
    best_grid = min(grid, key=lambda t: t[1])
    assert fit.sse <= best_grid[1] + 1e-9


def test_ses_alpha_out_of_range():
    for bad in (0.0, 1.0, 1.5, -0.1):
        with pytest.raises(AlphaOutOfRange):
            fit_ses(np.arange(5.0), alpha=bad)


def test_ses_round_trip():
    fit = fit_ses(np.arange(1.0, 30.0), 0.3)
    back = model_from_dict(fit.to_dict())
    assert isinstance(back, SesFit) and back.to_dict() == fit.to_dict()


def test_order_parsing_and_validation():
    assert ArimaOrder.parse("2,1,2") == ArimaOrder(2, 1, 2)
    assert ArimaOrder.parse("1,0,0", "1,1,0,12").s == 12
    with pytest.raises(ValueError):
        ArimaOrder(1, 0, 0, 1, 0, 0, 1)
    assert ArimaOrder(3, 0, 1, 1, 2, 0, 12).label() == "(3,0,1)(1,2,0)[12]"
