"""Arbitrary-precision reference measurements (mpmath).

Spectral errors decay below the double-precision noise floor (which scales
like n^2 * 2.2e-16 for node differencing) long before the certified bounds
stop shrinking, so honest bound-versus-error comparisons at large n need a
measurement path whose own rounding floor is far lower.  Everything here
mirrors the double-precision operators with mpmath arithmetic; node starting
values come from the fast double path and are Newton-refined.
"""

import mpmath as mp

from . import nodes as _nodes
from .special import as_param

__all__ = [
    "gauss_nodes_mp",
    "lobatto_nodes_mp",
    "diff_error_mp",
    "interp_error_mp",
    "quad_error_mp",
    "expansion_error_mp",
]

DEFAULT_DPS = 35


def _geg(lam, n, x):
    """C_n at an mpmath point by the forward recurrence."""
    c_prev = mp.mpf(1)
    if n == 0:
        return c_prev
    c = 2 * lam * x
    for m in range(2, n + 1):
        c_prev, c = c, (2 * (m + lam - 1) * x * c - (m + 2 * lam - 2) * c_prev) / m
    return c


def _dgeg(lam, n, x):
    return 2 * lam * _geg(lam + 1, n - 1, x)


def gauss_nodes_mp(param, n: int, dps: int = DEFAULT_DPS):
    """Gauss nodes refined to dps digits (Newton from the double-path values)."""
    p = as_param(param)
    with mp.workdps(dps):
        lam = mp.mpf(p.lam)
        out = []
        for x0 in _nodes.gauss_nodes(p, n).nodes:
            x = mp.mpf(float(x0))
            for _ in range(5):
                x = x - _geg(lam, n + 1, x) / _dgeg(lam, n + 1, x)
            out.append(x)
    return out


def lobatto_nodes_mp(param, n: int, dps: int = DEFAULT_DPS):
    """Lobatto nodes: exact endpoints plus refined interior zeros."""
    p = as_param(param)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return [mp.mpf(-1), mp.mpf(1)]
    interior = gauss_nodes_mp(p.lam + 1.0, n - 2, dps)
    return [mp.mpf(-1)] + interior + [mp.mpf(1)]


def _nodes_mp(param, n, family, dps):
    if family == _nodes.GAUSS:
        return gauss_nodes_mp(param, n, dps)
    if family == _nodes.GAUSS_LOBATTO:
        return lobatto_nodes_mp(param, n, dps)
    raise ValueError(f"unknown family {family!r}")


def _bary_mp(xs):
    out = []
    for j, xj in enumerate(xs):
        prod = mp.mpf(1)
        for k, xk in enumerate(xs):
            if k != j:
                prod *= xj - xk
        out.append(1 / prod)
    return out


def diff_error_mp(param, n: int, family: str, u, du, dps: int = DEFAULT_DPS) -> float:
    """Exact max over the nodes of |interpolant derivative - u'|.

    u and du must accept mpmath arguments (plain rational expressions do).
    """
    with mp.workdps(dps):
        xs = _nodes_mp(param, n, family, dps)
        b = _bary_mp(xs)
        uv = [u(x) for x in xs]
        worst = mp.mpf(0)
        for j in range(len(xs)):
            row_sum = mp.mpf(0)
            acc = mp.mpf(0)
            for k in range(len(xs)):
                if k == j:
                    continue
                d_jk = (b[k] / b[j]) / (xs[j] - xs[k])
                row_sum += d_jk
                acc += d_jk * uv[k]
            acc += -row_sum * uv[j]      # negative-sum diagonal
            worst = max(worst, abs(acc - du(xs[j])))
        return float(worst)


def interp_error_mp(
    param, n: int, family: str, u, grid_size: int = 2001, dps: int = DEFAULT_DPS
) -> float:
    """Exact max over a uniform grid of |interpolant - u|."""
    with mp.workdps(dps):
        xs = _nodes_mp(param, n, family, dps)
        b = _bary_mp(xs)
        uv = [u(x) for x in xs]
        worst = mp.mpf(0)
        for i in range(grid_size):
            xg = mp.mpf(2 * i - (grid_size - 1)) / (grid_size - 1)
            num = mp.mpf(0)
            den = mp.mpf(0)
            hit = None
            for j in range(len(xs)):
                d = xg - xs[j]
                if d == 0:
                    hit = j
                    break
                t = b[j] / d
                num += t * uv[j]
                den += t
            val = uv[hit] if hit is not None else num / den
            worst = max(worst, abs(val - u(xg)))
        return float(worst)


def quad_error_mp(param, n: int, family: str, u, dps: int = DEFAULT_DPS) -> float:
    """Exact |integral of (u - interpolant) times the weight| over [-1, 1]."""
    p = as_param(param)
    with mp.workdps(dps):
        lam = mp.mpf(p.lam)
        xs = _nodes_mp(p, n, family, dps)
        b = _bary_mp(xs)
        uv = [u(x) for x in xs]

        def interpolant(x):
            num = mp.mpf(0)
            den = mp.mpf(0)
            for j in range(len(xs)):
                d = x - xs[j]
                if d == 0:
                    return uv[j]
                t = b[j] / d
                num += t * uv[j]
                den += t
            return num / den

        weight = lambda x: (1 - x * x) ** (lam - mp.mpf(1) / 2)
        err = mp.quad(
            lambda x: (u(x) - interpolant(x)) * weight(x), [-1, 0, 1]
        )
        return float(abs(err))


def expansion_error_mp(
    param, u, n: int, grid_size: int = 2001, dps: int = 30
) -> float:
    """Exact max-grid error of the degree-n truncated expansion of u.

    Coefficients use the same 2(n+1)-point quadrature as the double path, so
    the two agree wherever double precision can still resolve the error.
    """
    p = as_param(param)
    with mp.workdps(dps):
        lam = mp.mpf(p.lam)
        npts = 2 * (n + 1)
        ys = gauss_nodes_mp(p, npts - 1, dps)
        # classical weights: (k_{N}/k_{N-1}) h_{N-1} / (C_{N-1}(y) C'_N(y))
        nn = npts - 1
        lead_ratio = 2 * (nn + lam) / (nn + 1)
        h_prev = (
            2 ** (1 - 2 * lam)
            * mp.pi
            * mp.gamma(nn + 2 * lam)
            / (mp.gamma(lam) ** 2 * mp.factorial(nn) * (nn + lam))
        )
        ws = [
            lead_ratio * h_prev / (_geg(lam, nn, y) * _dgeg(lam, npts, y)) for y in ys
        ]
        uv = [u(y) for y in ys]
        coeffs = []
        for l in range(n + 1):
            h_l = (
                2 ** (1 - 2 * lam)
                * mp.pi
                * mp.gamma(l + 2 * lam)
                / (mp.gamma(lam) ** 2 * mp.factorial(l) * (l + lam))
            )
            s = mp.fsum(w * uy * _geg(lam, l, y) for w, uy, y in zip(ws, uv, ys))
            coeffs.append(s / h_l)
        worst = mp.mpf(0)
        for i in range(grid_size):
            xg = mp.mpf(2 * i - (grid_size - 1)) / (grid_size - 1)
            # one recurrence sweep accumulating all degrees
            acc = coeffs[0]
            c_prev = mp.mpf(1)
            if n >= 1:
                c = 2 * lam * xg
                acc += coeffs[1] * c
                for m in range(2, n + 1):
                    c_prev, c = c, (
                        2 * (m + lam - 1) * xg * c - (m + 2 * lam - 2) * c_prev
                    ) / m
                    acc += coeffs[m] * c
            worst = max(worst, abs(acc - u(xg)))
        return float(worst)
