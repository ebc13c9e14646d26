"""Pure-numpy twin of the compiled sum-rate kernel.

Same contract as pinchsim._sumrate.set_sum_rate; selected automatically when
the extension is unavailable.
"""

import numpy as np


def set_sum_rate(amp, sel, scale, noise, alpha):
    """Sum rate of one candidate activation.

    amp:   (N, L) complex matrix of per-(user, position) amplitude terms,
           power split and sqrt(P_t) excluded.
    sel:   indices of the activated positions (nonempty).
    scale: per-antenna power P_t / |S| in watts.
    noise: noise power in watts.
    alpha: power fractions indexed by SIC rank.
    """
    z = amp[:, sel].sum(axis=1)
    gains = scale * (z.real * z.real + z.imag * z.imag)
    gains.sort()
    rev = np.cumsum(alpha[::-1])
    tails = np.concatenate(((0.0,), rev[:-1]))[::-1]
    sinr = alpha * gains / (gains * tails + noise)
    return float(np.log2(1.0 + sinr).sum())
