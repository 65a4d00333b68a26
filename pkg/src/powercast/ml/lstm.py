"""Single-layer LSTM regressor trained by backpropagation through time.

Gate equations (``z = [h_prev, x_t]``)::

    f = sigmoid(W_f z + b_f)      i = sigmoid(W_i z + b_i)
    g = tanh(W_c z + b_c)         o = sigmoid(W_o z + b_o)
    c = f * c_prev + i * g        h = o * tanh(c)

The head reads the last hidden state: ``yhat = w_out . relu(h_T) + b_out``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..core import Forecast, Series
from ..errors import EmptyData, NonFiniteLoss, ShapeMismatch
from ..preprocess import TransformChain
from .windows import Climatology, Scaler, SupervisedSet, WindowSpec, recursive_predict

GATES = ("f", "i", "c", "o")


def sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


@dataclass(eq=False)
class LstmParams:
    Wf: np.ndarray
    Wi: np.ndarray
    Wc: np.ndarray
    Wo: np.ndarray
    bf: np.ndarray
    bi: np.ndarray
    bc: np.ndarray
    bo: np.ndarray
    w_out: np.ndarray
    b_out: float

    @property
    def hidden(self) -> int:
        return self.bf.size

    @property
    def n_inputs(self) -> int:
        return self.Wf.shape[1] - self.hidden

    def check(self) -> None:
        H = self.hidden
        for name in ("Wf", "Wi", "Wc", "Wo"):
            W = getattr(self, name)
            if W.ndim != 2 or W.shape[0] != H or W.shape[1] <= H:
                raise ShapeMismatch(f"{name} has shape {W.shape}; expected ({H}, {H}+m)")
            if W.shape != self.Wf.shape:
                raise ShapeMismatch("gate matrices differ in shape")
        for name in ("bi", "bc", "bo", "w_out"):
            if getattr(self, name).shape != (H,):
                raise ShapeMismatch(f"{name} must have length {H}")

    @classmethod
    def init(cls, hidden: int, n_inputs: int, rng: np.random.Generator) -> "LstmParams":
        bound = 1.0 / math.sqrt(hidden)
        u = lambda *shape: rng.uniform(-bound, bound, size=shape)  # noqa: E731
        cols = hidden + n_inputs
        return cls(u(hidden, cols), u(hidden, cols), u(hidden, cols), u(hidden, cols),
                   u(hidden), u(hidden), u(hidden), u(hidden), u(hidden), float(u(1)[0]))

    @classmethod
    def constant(cls, hidden: int, n_inputs: int, weight: float = 0.0, bias: float = 0.0) -> "LstmParams":
        W = lambda: np.full((hidden, hidden + n_inputs), float(weight))  # noqa: E731
        b = lambda: np.full(hidden, float(bias))  # noqa: E731
        return cls(W(), W(), W(), W(), b(), b(), b(), b(), np.full(hidden, float(weight)), float(bias))

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        return np.vstack([self.Wf, self.Wi, self.Wc, self.Wo]), np.concatenate([self.bf, self.bi, self.bc, self.bo])

    def to_vector(self) -> np.ndarray:
        W, b = self.stacked()
        return np.concatenate([W.ravel(), b, self.w_out, [self.b_out]])

    def from_vector(self, vec: np.ndarray) -> "LstmParams":
        H, m = self.hidden, self.n_inputs
        nW = 4 * H * (H + m)
        W = vec[:nW].reshape(4 * H, H + m)
        b = vec[nW:nW + 4 * H]
        w_out = vec[nW + 4 * H:nW + 5 * H]
        return LstmParams(*(W[k * H:(k + 1) * H].copy() for k in range(4)),
                          *(b[k * H:(k + 1) * H].copy() for k in range(4)),
                          w_out.copy(), float(vec[-1]))

    def to_dict(self) -> dict:
        return {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in self.__dict__.items()}

    @classmethod
    def from_dict(cls, d) -> "LstmParams":
        kw = {k: np.array(v, dtype=float) for k, v in d.items() if k != "b_out"}
        return cls(**kw, b_out=float(d["b_out"]))


def lstm_cell_step(p: LstmParams, x_t, h_prev, c_prev) -> tuple[np.ndarray, np.ndarray]:
    """One literal application of the gate equations for a single input vector."""
    p.check()
    x_t = np.atleast_1d(np.asarray(x_t, dtype=float))
    h_prev = np.atleast_1d(np.asarray(h_prev, dtype=float))
    c_prev = np.atleast_1d(np.asarray(c_prev, dtype=float))
    if x_t.shape != (p.n_inputs,) or h_prev.shape != (p.hidden,) or c_prev.shape != (p.hidden,):
        raise ShapeMismatch("input or state shape does not match the parameters")
    z = np.concatenate([h_prev, x_t])
    f = sigmoid(p.Wf @ z + p.bf)
    i = sigmoid(p.Wi @ z + p.bi)
    c_tilde = np.tanh(p.Wc @ z + p.bc)
    c = f * c_prev + i * c_tilde
    o = sigmoid(p.Wo @ z + p.bo)
    h = o * np.tanh(c)
    return h, c


def to_sequences(Xn: np.ndarray, window: int) -> np.ndarray:
    """(N, w + k) feature rows -> (N, w, 1 + k): each step sees one lag plus the covariates."""
    Xn = np.atleast_2d(Xn)
    lags = Xn[:, :window, None]
    extra = Xn[:, window:]
    if extra.shape[1] == 0:
        return lags
    return np.concatenate([lags, np.repeat(extra[:, None, :], window, axis=1)], axis=2)


def _forward(p: LstmParams, seq: np.ndarray, keep: bool):
    N, T, _ = seq.shape
    H = p.hidden
    W, b = p.stacked()
    h = np.zeros((N, H))
    c = np.zeros((N, H))
    cache = []
    for t in range(T):
        z = np.hstack([h, seq[:, t, :]])
        a = z @ W.T + b
        f = sigmoid(a[:, :H])
        i = sigmoid(a[:, H:2 * H])
        g = np.tanh(a[:, 2 * H:3 * H])
        o = sigmoid(a[:, 3 * H:])
        c_prev = c
        c = f * c_prev + i * g
        tc = np.tanh(c)
        h = o * tc
        if keep:
            cache.append((z, f, i, g, o, c_prev, tc))
    r = np.maximum(h, 0.0)
    yhat = r @ p.w_out + p.b_out
    return yhat, h, r, cache


def predict_sequences(p: LstmParams, seq: np.ndarray) -> np.ndarray:
    return _forward(p, seq, keep=False)[0]


def loss_and_grad(p: LstmParams, seq: np.ndarray, y: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean squared error and its exact gradient (flattened like ``to_vector``)."""
    N = y.size
    H = p.hidden
    W, _ = p.stacked()
    yhat, hT, r, cache = _forward(p, seq, keep=True)
    err = yhat - y
    loss = float(err @ err) / N
    dy = 2.0 * err / N
    d_wout = r.T @ dy
    d_bout = dy.sum()
    dh = np.outer(dy, p.w_out) * (hT > 0)
    dc = np.zeros_like(dh)
    dW = np.zeros_like(W)
    db = np.zeros(4 * H)
    for z, f, i, g, o, c_prev, tc in reversed(cache):
        do = dh * tc
        dc = dc + dh * o * (1.0 - tc * tc)
        da = np.hstack([
            dc * c_prev * f * (1.0 - f),
            dc * g * i * (1.0 - i),
            dc * i * (1.0 - g * g),
            do * o * (1.0 - o),
        ])
        dW += da.T @ z
        db += da.sum(axis=0)
        dh = (da @ W)[:, :H]
        dc = dc * f
    return loss, np.concatenate([dW.ravel(), db, d_wout, [d_bout]])


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    batch_size: int | None = None
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    clip: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if self.lr <= 0 or self.clip <= 0:
            raise ValueError("step size and clip norm must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")
        if self.batch_size is not None and self.batch_size < 1:
            raise ValueError("batch_size must be positive")


class Adam:
    def __init__(self, size: int, cfg: TrainConfig):
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0
        self.cfg = cfg

    def step(self, grad: np.ndarray) -> np.ndarray:
        cfg = self.cfg
        self.t += 1
        self.m = cfg.beta1 * self.m + (1 - cfg.beta1) * grad
        self.v = cfg.beta2 * self.v + (1 - cfg.beta2) * grad * grad
        m_hat = self.m / (1 - cfg.beta1 ** self.t)
        v_hat = self.v / (1 - cfg.beta2 ** self.t)
        return -cfg.lr * m_hat / (np.sqrt(v_hat) + cfg.eps)


@dataclass(eq=False)
class LstmModel:
    params: LstmParams
    spec: WindowSpec
    scaler: Scaler
    config: TrainConfig
    trace: list = field(default_factory=list)
    chain: TransformChain = field(default_factory=TransformChain)
    climatology: Climatology | None = None
    name: str = "LSTM"

    def predict_normalized(self, Xn: np.ndarray) -> np.ndarray:
        return predict_sequences(self.params, to_sequences(Xn, self.spec.window))

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Raw feature rows in, predictions on the fit scale out."""
        return self.scaler.inverse_y(self.predict_normalized(self.scaler.transform_x(X)))

    def to_dict(self) -> dict:
        return {
            "kind": "lstm",
            "params": self.params.to_dict(),
            "spec": self.spec.to_dict(),
            "scaler": self.scaler.to_dict(),
            "config": asdict(self.config),
            "trace": list(self.trace),
            "chain": self.chain.to_dict(),
            "climatology": None if self.climatology is None else self.climatology.to_dict(),
            "name": self.name,
        }

    @classmethod
    def from_dict(cls, d) -> "LstmModel":
        clim = d.get("climatology")
        return cls(LstmParams.from_dict(d["params"]), WindowSpec.from_dict(d["spec"]),
                   Scaler.from_dict(d["scaler"]), TrainConfig(**d["config"]), list(d["trace"]),
                   TransformChain.from_dict(d["chain"]),
                   None if clim is None else Climatology.from_dict(clim), d.get("name", "LSTM"))


def lstm_fit(data: SupervisedSet, hidden: int, cfg: TrainConfig = TrainConfig(),
             chain: TransformChain | None = None, climatology: Climatology | None = None) -> LstmModel:
    """Full-sequence BPTT with Adam and global-norm gradient clipping."""
    if len(data) == 0:
        raise EmptyData("no training samples")
    if hidden < 1:
        raise ValueError("hidden size must be >= 1")
    rng = np.random.default_rng(cfg.seed)
    seq = to_sequences(data.Xn, data.spec.window)
    y = data.yn
    params = LstmParams.init(hidden, seq.shape[2], rng)
    params.b_out = float(np.mean(y))  # start the head at the target mean
    theta = params.to_vector()
    opt = Adam(theta.size, cfg)
    N = y.size
    batch = N if cfg.batch_size is None else min(cfg.batch_size, N)
    trace = []
    for _ in range(cfg.epochs):
        order = np.arange(N) if batch == N else rng.permutation(N)
        total = 0.0
        for lo in range(0, N, batch):
            idx = order[lo:lo + batch]
            loss, grad = loss_and_grad(params, seq[idx], y[idx])
            if not math.isfinite(loss):
                raise NonFiniteLoss(f"training diverged at epoch {len(trace) + 1}", trace)
            norm = float(np.sqrt(grad @ grad))
            if norm > cfg.clip:
                grad = grad * (cfg.clip / norm)
            theta = theta + opt.step(grad)
            params = params.from_vector(theta)
            total += loss * idx.size
        trace.append(total / N)
    return LstmModel(params, data.spec, data.scaler, cfg, trace, chain or TransformChain(), climatology)


def lstm_forecast(m: LstmModel, s: Series, horizon: int, future_exog=None) -> Forecast:
    """Recursive multi-step forecast continuing ``s`` (given on the model's scale)."""
    preds = recursive_predict(m.predict_normalized, m.spec, m.scaler, s.values, s.end + 1,
                              horizon, future_exog, m.climatology)
    return Forecast(s.end, m.chain.inverse(preds), preds, f"LSTM(H={m.params.hidden})")
