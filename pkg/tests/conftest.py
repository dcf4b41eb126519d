import numpy as np
import pytest

from sclera_hybrid import HybridState, NetworkParams
from sclera_hybrid.config import figure_config

# Figure captions, transcribed once.
CAPTIONS = {
    "s1": dict(params=dict(th1=0.4, th2=0.5, th3=0.6, th4=0.7),
               x=(0.15, 0.45, 0.8), q=(1, 1, 0, 1), h=0.01),
    "s3": dict(params=dict(k1=0.55, k3=0.9, th1=0.4, th2=0.5, th3=0.6, th4=0.7),
               x=(0.45, 0.6, 0.8), q=(1, 1, 0, 1), h=0.01),
    "s5": dict(params=dict(th1=0.4, th2=0.5, th3=0.6, th4=0.7),
               x=(0.45, 0.45, 0.8), q=(1, 1, 0, 1), h=0.01),
    "s7": dict(params=dict(th1=0.4, th2=0.5, th3=0.6, th4=0.7),
               x=(0.45, 0.45, 0.8), q=(1, 1, 0, 1), h=0.0),
}


@pytest.fixture(params=["s1", "s3", "s5", "s7"])
def preset(request):
    return request.param, figure_config(request.param)


def random_params(rng: np.random.Generator, allow_zero_h: bool = True) -> NetworkParams:
    k = rng.uniform(0.3, 2.0, 3)
    g = rng.uniform(0.3, 2.0, 3)
    th = rng.uniform(0.1, 1.2, 4)
    if allow_zero_h and rng.random() < 0.15:
        h = np.zeros(4)
    else:
        h = rng.uniform(0.0, 0.08, 4)
    h = np.minimum(h, 0.9 * th)
    kw = {}
    for i in range(3):
        kw[f"k{i + 1}"] = k[i]
        kw[f"g{i + 1}"] = g[i]
    for i in range(4):
        kw[f"th{i + 1}"] = th[i]
        kw[f"h{i + 1}"] = h[i]
    return NetworkParams(**kw)


def random_state(rng: np.random.Generator) -> HybridState:
    x = rng.uniform(0.0, 1.5, 3)
    q = rng.integers(0, 2, 4)
    return HybridState.from_parts(x, q)


def in_jump_sets(x: np.ndarray, q, p: NetworkParams) -> np.ndarray:
    """Vectorised restatement of the four jump sets; rows of x are states.

    Returns a boolean array of shape (n, 4).
    """
    x = np.atleast_2d(x)
    th, h = p.theta, p.h
    watched = (0, 1, 0, 2)
    out = np.zeros((len(x), 4), dtype=bool)
    for i in range(4):
        v = x[:, watched[i]]
        if q[i] == 1:
            out[:, i] = v <= th[i] - h[i]
        else:
            out[:, i] = v >= th[i] + h[i]
    return out
