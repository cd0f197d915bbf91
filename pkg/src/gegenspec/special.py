"""Gamma-family scalar functions and the coefficient sequences shared by all modules.

Everything here is a pure function of its arguments; ratios of Gamma values are
assembled in log space (or by multiplicative recurrences) so that nothing
overflows for large degree or index.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GegenbauerParam",
    "ln_gamma",
    "g_coeff",
    "g_coeff_sequence",
    "d_coeff",
    "d_coeff_sequence",
    "upper_incomplete_gamma_int",
    "h_norm",
    "total_mass",
]


@dataclass(frozen=True)
class GegenbauerParam:
    """Family index lam of the weight (1-x^2)^(lam-1/2); lam > -1/2 and lam != 0."""

    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not math.isfinite(lam) or lam <= -0.5:
            raise ValueError(f"lambda must satisfy lambda > -1/2, got {lam}")
        if lam == 0.0:
            raise ValueError("lambda = 0 is excluded (degenerate family)")
        object.__setattr__(self, "lam", lam)


def as_param(param) -> GegenbauerParam:
    """Coerce a float or GegenbauerParam to a validated GegenbauerParam."""
    if isinstance(param, GegenbauerParam):
        return param
    return GegenbauerParam(float(param))


def ln_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0.

    Raises ValueError for x <= 0.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def g_coeff(param, k: int) -> float:
    """Binomial-ratio coefficient Gamma(k+lam) / (k! Gamma(lam)).

    Computed by the multiplicative recurrence g_{k+1} = g_k (k+lam)/(k+1)
    from g_0 = 1; never via direct Gamma evaluation, so large k cannot
    overflow.  For lam < 0 the single sign flip at k = 1 emerges from the
    recurrence.
    """
    lam = as_param(param).lam
    if k < 0:
        raise ValueError("k must be a nonnegative integer")
    g = 1.0
    for j in range(int(k)):
        g *= (j + lam) / (j + 1)
    return g


def g_coeff_sequence(param, kmax: int) -> np.ndarray:
    """Array [g_0, g_1, ..., g_kmax] by the multiplicative recurrence."""
    lam = as_param(param).lam
    if kmax < 0:
        raise ValueError("kmax must be a nonnegative integer")
    g = np.empty(kmax + 1)
    g[0] = 1.0
    for j in range(kmax):
        g[j + 1] = g[j] * (j + lam) / (j + 1)
    return g


def d_coeff(param, n: int, k: int) -> float:
    """Relative coefficient defect 1 - g_{n-k}/g_n for 1 <= k <= n.

    The ratio g_{n-k}/g_n is accumulated multiplicatively; every
    intermediate stays O(poly(n)) for any lam > -1/2.
    """
    lam = as_param(param).lam
    if not (1 <= k <= n):
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    r = 1.0
    for j in range(1, int(k) + 1):
        r *= (n - j + 1) / (n - j + lam)
    return 1.0 - r


def d_coeff_sequence(param, n: int) -> np.ndarray:
    """Array [d_{n,1}, ..., d_{n,n}] in one multiplicative sweep."""
    lam = as_param(param).lam
    if n < 1:
        raise ValueError("n must be >= 1")
    d = np.empty(n)
    r = 1.0
    for k in range(1, n + 1):
        r *= (n - k + 1) / (n - k + lam)
        d[k - 1] = 1.0 - r
    return d


def upper_incomplete_gamma_int(n: int, x: float) -> float:
    """Upper incomplete Gamma value Gamma(n+1, x) for integer n >= 0, x >= 0.

    Uses the finite closed form n! e^{-x} sum_{k<=n} x^k/k!, evaluated by
    log-sum-exp so large n or x stay in range.
    """
    n = int(n)
    x = float(x)
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0.0:
        return math.exp(math.lgamma(n + 1))
    lognfac = math.lgamma(n + 1)
    logx = math.log(x)
    logterms = [lognfac - math.lgamma(k + 1) + k * logx - x for k in range(n + 1)]
    top = max(logterms)
    return math.exp(top) * math.fsum(math.exp(t - top) for t in logterms)


def h_norm(param, n: int) -> float:
    """Squared weighted norm of the degree-n polynomial of the family.

    h_n = 2^(1-2 lam) pi Gamma(n+2 lam) / (Gamma(lam)^2 n! (n+lam)),
    assembled in log space (the value is positive for every admissible lam).
    """
    lam = as_param(param).lam
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    # math.lgamma returns log|Gamma|; the sign factors of Gamma(n+2 lam) and
    # 1/(n+lam) cancel for every admissible (lam, n), so h_n = exp(log|h_n|).
    logh = (
        (1.0 - 2.0 * lam) * math.log(2.0)
        + math.log(math.pi)
        + math.lgamma(n + 2.0 * lam)
        - 2.0 * math.lgamma(lam)
        - math.lgamma(n + 1.0)
        - math.log(abs(n + lam))
    )
    return math.exp(logh)


def total_mass(param) -> float:
    """Integral of the weight (1-x^2)^(lam-1/2) over [-1, 1]."""
    lam = as_param(param).lam
    return math.exp(
        0.5 * math.log(math.pi) + math.lgamma(lam + 0.5) - math.lgamma(lam + 1.0)
    )
