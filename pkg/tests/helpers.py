import numpy as np


def unit(*xs):
    v = np.array(xs, dtype=float)
    return v / np.linalg.norm(v)
