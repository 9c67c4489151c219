"""Pure-Python (numpy) fallback for the scaled pmf kernels.

Mirrors the semantics of the compiled module ``poissonk._ck`` exactly; used
when the extension is unavailable or when ``POISSONK_PURE`` is set.
"""

import math

import numpy as np


def scaled_pmf_fill(k: int, lam: float, h: np.ndarray) -> int:
    n_max = h.shape[0] - 1
    weights = np.arange(1.0, k + 1.0)
    h[0] = 1.0
    for n in range(1, n_max + 1):
        m = n if n < k else k
        # sum_{j=1}^{m} j * h[n-j], oldest term last
        s = np.dot(weights[:m], h[n - 1 : n - m - 1 if n > m else None : -1])
        h[n] = (lam / n) * s
        if not math.isfinite(h[n]):
            return n
    return 0


def scaled_pmf_log_fill(k: int, lam: float, out: np.ndarray, buf: np.ndarray) -> int:
    n_max = out.shape[0] - 1
    width = k + 1
    weights = np.arange(1.0, k + 1.0)
    offset = 0.0
    buf[0] = 1.0
    out[0] = 0.0
    for n in range(1, n_max + 1):
        m = n if n < k else k
        idx = (n - np.arange(1, m + 1)) % width
        g = (lam / n) * float(np.dot(weights[:m], buf[idx]))
        if g > 1e250:
            buf /= g
            offset += math.log(g)
            g = 1.0
        buf[n % width] = g
        out[n] = math.log(g) + offset if g > 0.0 else -math.inf
    return 0
