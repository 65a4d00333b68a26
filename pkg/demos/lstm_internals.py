"""Show the LSTM cell on a scalar example and check BPTT against finite differences."""
import numpy as np

from powercast.ml.lstm import LstmParams, lstm_cell_step, loss_and_grad

p = LstmParams.constant(1, 1, weight=0.5, bias=0.0)
h, c = lstm_cell_step(p, [1.0], [0.0], [0.0])
print(f"scalar cell, all weights 0.5, x=1: c_t={c[0]:.10f} h_t={h[0]:.10f}")

rng = np.random.default_rng(0)
params = LstmParams.init(3, 1, rng)
seq = rng.random((8, 4, 1))
y = rng.random(8)
loss, grad = loss_and_grad(params, seq, y)
theta = params.to_vector()
step = 1e-5
numeric = np.empty_like(theta)
for k in range(theta.size):
    up, dn = theta.copy(), theta.copy()
    up[k] += step
    dn[k] -= step
    numeric[k] = (loss_and_grad(params.from_vector(up), seq, y)[0]
                  - loss_and_grad(params.from_vector(dn), seq, y)[0]) / (2 * step)
rel = np.abs(grad - numeric) / np.maximum(np.maximum(np.abs(grad), np.abs(numeric)), 1e-8)
print(f"loss {loss:.6f}; {theta.size} partials, worst relative gap {rel.max():.2e}")
