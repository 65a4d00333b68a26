import numpy as np
import pytest

from powercast.core import Series
from powercast.synth import SynthConfig, generate_synthetic


@pytest.fixture(scope="session")
def synth_ds():
    return generate_synthetic(SynthConfig())


def make_series(values, start="2020-01-01", name="load", unit="MWh"):
    return Series(name, start, np.asarray(values, dtype=float), unit)


def simulate_arma(rng, n, ar=(), ma=(), burn=200, sigma=1.0):
    """Plain-loop ARMA simulator used as a generator oracle."""
    ar, ma = list(ar), list(ma)
    e = rng.standard_normal(n + burn) * sigma
    y = np.zeros(n + burn)
    for t in range(n + burn):
        acc = e[t]
        for i, phi in enumerate(ar, 1):
            if t - i >= 0:
                acc += phi * y[t - i]
        for j, theta in enumerate(ma, 1):
            if t - j >= 0:
                acc += theta * e[t - j]
        y[t] = acc
    return y[burn:]


ACCEPTANCE: dict = {}


def report(number: int, ok: bool, detail: str) -> None:
    """Record one acceptance criterion outcome for the terminal summary."""
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
