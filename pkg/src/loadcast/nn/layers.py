"""Dense and LSTM layers with explicit forward passes and analytic gradients.

A dense unit computes act(sum_i w_ij * a_i + b_j) with ReLU or linear
activation. An LSTM unit runs the usual gate recurrences over the
concatenated [h_prev, x] input:

    f = sigmoid(Wf.[h,x] + bf)      i = sigmoid(Wi.[h,x] + bi)
    o = sigmoid(Wo.[h,x] + bo)      g = tanh(Wc.[h,x] + bc)
    c = f*c_prev + i*g              h = o*tanh(c)

Backward passes accumulate parameter gradients into dW/db buffers so a batch
can be split; call zero_grads() before each optimization step.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def sigmoid(z: np.ndarray) -> np.ndarray:
    # split by sign for numerical stability at large |z|
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _fan_in_uniform(rng: np.random.Generator, n_in: int, shape) -> np.ndarray:
    bound = 1.0 / np.sqrt(n_in)
    return rng.uniform(-bound, bound, size=shape)


class DenseLayer:
    """Fully connected layer, weights (n_in, n_out), ReLU or linear output."""

    def __init__(self, n_in: int, n_out: int, activation: str = "relu",
                 rng: np.random.Generator | None = None):
        if activation not in ("relu", "linear"):
            raise DataError(f"unknown activation {activation!r}")
        self.n_in, self.n_out = n_in, n_out
        self.activation = activation
        rng = rng or np.random.default_rng(0)
        self.W = _fan_in_uniform(rng, n_in, (n_in, n_out))
        self.b = np.zeros(n_out)
        self.dW = np.zeros_like(self.W)
        self.db = np.zeros_like(self.b)

    def parameters(self):
        return [("W", self.W), ("b", self.b)]

    def gradients(self):
        return [self.dW, self.db]

    def zero_grads(self):
        self.dW[...] = 0.0
        self.db[...] = 0.0

    def forward(self, inputs: np.ndarray):
        """inputs (batch, n_in) -> (outputs (batch, n_out), cache)."""
        A = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
        if A.shape[1] != self.n_in:
            raise DataError(f"expected {self.n_in} inputs, got {A.shape[1]}")
        Z = A @ self.W + self.b
        out = relu(Z) if self.activation == "relu" else Z
        return out, (A, Z)

    def backward(self, d_out: np.ndarray, cache) -> np.ndarray:
        A, Z = cache
        dZ = d_out * (Z > 0.0) if self.activation == "relu" else d_out
        self.dW += A.T @ dZ
        self.db += dZ.sum(axis=0)
        return dZ @ self.W.T


class LstmLayer:
    """One LSTM layer; gate matrices act on the concatenated [h_prev, x]."""

    GATES = ("f", "i", "o", "c")

    def __init__(self, n_in: int, units: int,
                 rng: np.random.Generator | None = None):
        self.n_in, self.units = n_in, units
        rng = rng or np.random.default_rng(0)
        width = units + n_in
        for gate in self.GATES:
            setattr(self, f"W{gate}", _fan_in_uniform(rng, width, (width, units)))
            setattr(self, f"b{gate}", np.zeros(units))
            setattr(self, f"dW{gate}", np.zeros((width, units)))
            setattr(self, f"db{gate}", np.zeros(units))
        # carried state for the step-by-step interface
        self.h = np.zeros(units)
        self.c = np.zeros(units)

    def parameters(self):
        out = []
        for gate in self.GATES:
            out.append((f"W{gate}", getattr(self, f"W{gate}")))
            out.append((f"b{gate}", getattr(self, f"b{gate}")))
        return out

    def gradients(self):
        out = []
        for gate in self.GATES:
            out.append(getattr(self, f"dW{gate}"))
            out.append(getattr(self, f"db{gate}"))
        return out

    def zero_grads(self):
        for gate in self.GATES:
            getattr(self, f"dW{gate}")[...] = 0.0
            getattr(self, f"db{gate}")[...] = 0.0

    def reset_state(self):
        self.h = np.zeros(self.units)
        self.c = np.zeros(self.units)

    def set_state(self, h: np.ndarray, c: np.ndarray):
        self.h = np.asarray(h, dtype=np.float64).copy()
        self.c = np.asarray(c, dtype=np.float64).copy()

    def _gates(self, z: np.ndarray):
        f = sigmoid(z @ self.Wf + self.bf)
        i = sigmoid(z @ self.Wi + self.bi)
        o = sigmoid(z @ self.Wo + self.bo)
        g = np.tanh(z @ self.Wc + self.bc)
        return f, i, o, g

    def step(self, x_t: np.ndarray) -> np.ndarray:
        """Advance the carried state by one input vector; returns h_t."""
        x = np.asarray(x_t, dtype=np.float64)
        if x.shape != (self.n_in,):
            raise DataError(f"expected input of shape ({self.n_in},)")
        z = np.concatenate([self.h, x])[None, :]
        f, i, o, g = self._gates(z)
        c = f[0] * self.c + i[0] * g[0]
        h = o[0] * np.tanh(c)
        self.h, self.c = h, c
        return h

    def forward_sequence(self, X: np.ndarray):
        """X (batch, steps, n_in) -> (H (batch, steps, units), cache).

        State starts at zero for every sample in the batch.
        """
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 3 or X.shape[2] != self.n_in:
            raise DataError(f"expected (batch, steps, {self.n_in}) input")
        batch, steps, _ = X.shape
        h = np.zeros((batch, self.units))
        c = np.zeros((batch, self.units))
        H = np.empty((batch, steps, self.units))
        cache = []
        for t in range(steps):
            z = np.concatenate([h, X[:, t, :]], axis=1)
            f, i, o, g = self._gates(z)
            c_prev = c
            c = f * c_prev + i * g
            tanh_c = np.tanh(c)
            h = o * tanh_c
            H[:, t, :] = h
            cache.append((z, f, i, o, g, c_prev, tanh_c))
        return H, cache

    def backward_sequence(self, dH: np.ndarray, cache) -> np.ndarray:
        """Backprop through time; dH (batch, steps, units) -> dX."""
        batch, steps, _ = dH.shape
        dX = np.empty((batch, steps, self.n_in))
        dh_next = np.zeros((batch, self.units))
        dc_next = np.zeros((batch, self.units))
        for t in range(steps - 1, -1, -1):
            z, f, i, o, g, c_prev, tanh_c = cache[t]
            dh = dH[:, t, :] + dh_next
            do = dh * tanh_c
            dc = dc_next + dh * o * (1.0 - tanh_c ** 2)
            df = dc * c_prev
            di = dc * g
            dg = dc * i
            dc_next = dc * f
            da_f = df * f * (1.0 - f)
            da_i = di * i * (1.0 - i)
            da_o = do * o * (1.0 - o)
            da_c = dg * (1.0 - g ** 2)
            self.dWf += z.T @ da_f
            self.dWi += z.T @ da_i
            self.dWo += z.T @ da_o
            self.dWc += z.T @ da_c
            self.dbf += da_f.sum(axis=0)
            self.dbi += da_i.sum(axis=0)
            self.dbo += da_o.sum(axis=0)
            self.dbc += da_c.sum(axis=0)
            dz = da_f @ self.Wf.T + da_i @ self.Wi.T \
                + da_o @ self.Wo.T + da_c @ self.Wc.T
            dh_next = dz[:, :self.units]
            dX[:, t, :] = dz[:, self.units:]
        return dX
