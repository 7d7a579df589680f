import numpy as np


def abs_poly(re, im, exps, cre, cim):
    """``|f(z)|`` for every row ``z = re + i*im`` of the (N, n) sample block."""
    re = np.asarray(re, dtype=np.float64)
    im = np.asarray(im, dtype=np.float64)
    z = re + 1j * im
    nvars = z.shape[1]
    total = np.zeros(z.shape[0], dtype=np.complex128)
    powers = [{1: z[:, j]} for j in range(nvars)]
    for t in range(exps.shape[0]):
        term = np.full(z.shape[0], complex(cre[t], cim[t]))
        for j in range(nvars):
            e = int(exps[t, j])
            if e == 0:
                continue
            cache = powers[j]
            if e not in cache:
                top = max(k for k in cache if k < e)
                p = cache[top]
                for k in range(top + 1, e + 1):
                    p = p * z[:, j]
                    cache[k] = p
            term = term * cache[e]
        total += term
    return np.abs(total)
