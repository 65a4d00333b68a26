import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_series
from powercast.errors import (
    AllMissing,
    BadOrder,
    HeadMismatch,
    NoLogStep,
    NonPositiveAfterOffset,
    TooShort,
    WindowTooLarge,
)
from powercast.preprocess import (
    TransformChain,
    difference,
    difference_poly,
    integrate,
    interpolate_missing,
    invert_difference,
    invert_log,
    log_transform,
    preprocess,
    savgol_smooth,
)

NA = float("nan")


def fraction_lsq_center(values, polyorder):
    """Exact rational LSQ polynomial fit on offsets -h..h, evaluated at 0."""
    h = len(values) // 2
    xs = [Fraction(k) for k in range(-h, h + 1)]
    ys = [Fraction(v) for v in values]
    m = polyorder + 1
    A = [[sum(x ** (i + j) for x in xs) for j in range(m)] + [sum(y * x ** i for x, y in zip(xs, ys))]
         for i in range(m)]
    for c in range(m):
        piv = next(r for r in range(c, m) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        for r in range(m):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return A[0][m] / A[0][0]


# ---- interpolation ----

@pytest.mark.parametrize("vals, expected", [
    ([1, NA, 3], [1, 2, 3]),
    ([NA, 5, NA], [5, 5, 5]),
    ([0, NA, NA, 9], [0, 3, 6, 9]),
])
def test_interpolate_examples(vals, expected):
    assert interpolate_missing(make_series(vals)).values.tolist() == expected


def test_interpolate_all_missing():
    with pytest.raises(AllMissing):
        interpolate_missing(make_series([NA, NA]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.one_of(st.none(), st.floats(-1e4, 1e4)), min_size=1, max_size=40)
       .filter(lambda v: any(x is not None for x in v)))
def test_interpolate_idempotent_and_preserving(raw):
    vals = np.array([NA if v is None else v for v in raw])
    s = make_series(vals)
    out = interpolate_missing(s)
    assert not out.has_missing()
    ok = ~np.isnan(vals)
    assert np.array_equal(out.values[ok], vals[ok])
    assert interpolate_missing(out) == out


# ---- Savitzky-Golay ----

def test_savgol_reproduces_quadratic():
    t = np.arange(11.0)
    out = savgol_smooth(make_series(t ** 2), 5, 2)
    assert np.allclose(out.values, t ** 2, atol=1e-9, rtol=0)


def test_savgol_constant():
    assert np.allclose(savgol_smooth(make_series([7.0] * 5), 3, 1).values, 7.0, atol=1e-12)


def test_savgol_spike_matches_rational_oracle():
    out = savgol_smooth(make_series([0, 0, 10, 0, 0]), 5, 2)
    expected = fraction_lsq_center([0, 0, 10, 0, 0], 2)
    assert expected == Fraction(170, 35)
    assert out.values[2] < 10
    assert out.values[2] == pytest.approx(float(expected), abs=1e-12)


@pytest.mark.parametrize("window", [5, 7, 9, 11])
def test_savgol_interior_matches_rational_oracle(window):
    rng = np.random.default_rng(window)
    y = rng.integers(-50, 50, 40).astype(float)
    out = savgol_smooth(make_series(y), window, 3)
    h = window // 2
    for i in (h, 20, 39 - h):
        assert out.values[i] == pytest.approx(float(fraction_lsq_center(y[i - h:i + h + 1].tolist(), 3)), abs=1e-9)


def test_savgol_edge_uses_truncated_fit():
    y = np.array([3.0, -1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0])
    out = savgol_smooth(make_series(y), 5, 2)
    # first point: quadratic LSQ over offsets 0,1,2 is an exact interpolation
    assert out.values[0] == pytest.approx(y[0], abs=1e-12)
    # second point: offsets -1..2, evaluate at 0
    coef = np.polyfit(np.arange(-1, 3.0), y[:4], 2)
    assert out.values[1] == pytest.approx(np.polyval(coef, 0.0), abs=1e-9)


@pytest.mark.parametrize("window, order, err", [(9, 2, WindowTooLarge), (4, 2, WindowTooLarge), (5, 5, BadOrder)])
def test_savgol_errors(window, order, err):
    with pytest.raises(err):
        savgol_smooth(make_series(np.arange(8.0)), window, order)


# ---- log ----

def test_log_examples():
    assert log_transform(make_series([0.0])).values[0] == 0.0
    assert log_transform(make_series([math.e - 1])).values[0] == pytest.approx(1.0, abs=1e-15)
    mp = mpmath.mp
    mp.dps = 30
    assert log_transform(make_series([1442.0])).values[0] == pytest.approx(float(mpmath.log(1443)), abs=1e-12)
    # the oracle value is 7.27447955877...; a value of "7.2746" would not match it
    assert math.floor(float(mpmath.log(1443)) * 1e4) / 1e4 == 7.2744


def test_log_inverse_examples():
    chain = TransformChain().then("log", offset=0.0)
    assert invert_log(make_series([0.0]), chain).values[0] == 0.0
    assert invert_log(make_series([1.0]), chain).values[0] == pytest.approx(math.e - 1, rel=1e-15)
    s = make_series([1442.0, 200.0, 2106.0])
    back = invert_log(log_transform(s), chain)
    assert np.allclose(back.values, s.values, rtol=1e-9, atol=0)


def test_log_errors():
    with pytest.raises(NonPositiveAfterOffset):
        log_transform(make_series([-1.0]))
    with pytest.raises(NoLogStep):
        invert_log(make_series([1.0]), TransformChain())


def test_log_offset_recorded_and_inverted():
    s = make_series([-0.5, 3.0])
    out, chain = preprocess(s, interpolate=False, savgol=None, log_offset=2.0)
    assert chain.log_step == {"kind": "log", "offset": 2.0}
    assert np.allclose(chain.inverse(out.values), s.values, rtol=1e-12)


def test_chain_serialises():
    _, chain = preprocess(make_series(np.arange(1.0, 20.0)), savgol=(7, 2))
    assert TransformChain.from_dict(chain.to_dict()) == chain
    assert [st_["kind"] for st_ in chain.steps] == ["interpolate", "savgol", "log"]


# ---- differencing ----

def test_difference_examples():
    assert difference(np.array([1, 2, 3, 4, 5.0]), 1, 0).values.tolist() == [1, 1, 1, 1]
    assert difference(np.array([3, 1, 4, 1, 5.0]), 0, 1, 2).values.tolist() == [1, 0, 1]
    y = np.array([2.0, 7.0, 1.0])
    assert difference(y, 0, 0).values.tolist() == y.tolist()


def test_difference_length_and_too_short():
    ds = difference(np.arange(30.0), 2, 1, 7)
    assert ds.values.size == 30 - 2 - 7
    with pytest.raises(TooShort):
        difference(np.arange(3.0), 1, 1, 2)


def test_invert_difference_examples():
    assert integrate([5.0], [1.0, 1.0], 1, 0, 1).tolist() == [6, 7]
    assert integrate([10.0, 20.0], [3.0, 4.0], 0, 1, 2).tolist() == [13, 24]
    y = np.array([2, 7, 1, 8, 2, 8.0])
    ds = difference(y, 1, 1, 2)
    assert invert_difference(ds, ds.values).tolist() == y[3:].tolist()


def test_head_mismatch():
    with pytest.raises(HeadMismatch):
        integrate([1.0, 2.0], [1.0], 1, 0, 1)


def test_difference_poly():
    assert difference_poly(1, 0, 1).tolist() == [1, -1]
    assert difference_poly(2, 0, 1).tolist() == [1, -2, 1]
    assert difference_poly(0, 1, 3).tolist() == [1, 0, 0, -1]
    assert difference_poly(1, 1, 2).tolist() == [1, -1, -1, 1]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-1000, 1000), min_size=40, max_size=60),
       st.integers(0, 2), st.integers(0, 2), st.sampled_from([2, 7, 12]))
def test_difference_round_trip_exact_on_integers(vals, d, D, s):
    y = np.array(vals, dtype=float)
    ds = difference(y, d, D, s)
    assert ds.values.size == y.size - d - D * s
    assert np.array_equal(invert_difference(ds, ds.values), y[d + D * s:])
