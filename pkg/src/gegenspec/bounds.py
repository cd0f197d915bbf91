"""Bernstein-ellipse geometry and machine-evaluable maximum-norm error bounds.

The module provides the exact boundary remainder of the normalized polynomial,
its certified upper bounds, the tightness metric used by the large-n studies,
and the interpolation / differentiation / quadrature bounds for both node
families.  Every bound is returned as an itemized BoundBreakdown so reports
can show each constant next to the rate term.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .poly import calibrated_sup_scale, normalized_on_ellipse
from .special import as_param, d_coeff_sequence, h_norm

__all__ = [
    "EllipseSpec",
    "BoundBreakdown",
    "PoleOnContourError",
    "ellipse_points",
    "ellipse_axes",
    "interval_distance",
    "perimeter_estimate",
    "sup_on_ellipse",
    "remainder_exact",
    "remainder_bound",
    "e_n_metric",
    "interp_bound_gauss",
    "diff_bound_gauss",
    "interp_bound_lobatto",
    "diff_bound_lobatto",
    "quad_bound",
    "best_bound_over_rho",
]

FLAG_C_ONE = "c set to 1"
FLAG_CALIBRATED = "uses calibrated D_lambda"
FLAG_SKIPPED_RHO = "skipped rho values with non-finite max"


class PoleOnContourError(ArithmeticError):
    """The sampled function is not finite on the ellipse boundary."""


@dataclass(frozen=True)
class EllipseSpec:
    """Bernstein ellipse of radius rho > 1 with a boundary sampling count."""

    rho: float
    samples: int = 2048

    def __post_init__(self):
        if not self.rho > 1.0:
            raise ValueError(f"rho must be > 1, got {self.rho}")
        if self.samples < 4:
            raise ValueError("samples must be >= 4")


@dataclass(frozen=True)
class BoundBreakdown:
    """One evaluated upper bound: constant factor, rate factor, their product,
    the parameters that entered, and any caveat flags."""

    theorem_id: str
    constant_factor: float
    rate_factor: float
    total: float
    parameters: dict
    flags: list = field(default_factory=list)
    terms: dict | None = None

    def as_dict(self) -> dict:
        d = {
            "theorem_id": self.theorem_id,
            "constant_factor": self.constant_factor,
            "rate_factor": self.rate_factor,
            "total": self.total,
            "parameters": dict(self.parameters),
            "flags": list(self.flags),
        }
        if self.terms is not None:
            d["terms"] = dict(self.terms)
        return d


def ellipse_axes(rho: float) -> tuple[float, float]:
    """Major and minor semi-axes ((rho + 1/rho)/2, (rho - 1/rho)/2); foci +-1."""
    if not rho > 1.0:
        raise ValueError("rho must be > 1")
    return 0.5 * (rho + 1.0 / rho), 0.5 * (rho - 1.0 / rho)


def interval_distance(rho: float) -> float:
    """Distance from the ellipse boundary to the interval [-1, 1]."""
    a, _ = ellipse_axes(rho)
    return a - 1.0


def perimeter_estimate(rho: float) -> float:
    """Closed-form overestimate pi sqrt(rho^2 + rho^-2) of the perimeter."""
    if not rho > 1.0:
        raise ValueError("rho must be > 1")
    return math.pi * math.sqrt(rho * rho + rho ** -2.0)


def ellipse_points(spec: EllipseSpec) -> tuple[np.ndarray, np.ndarray]:
    """Boundary samples (w_j, z_j): w_j = rho e^{i theta_j} at the Fourier
    angles theta_j = 2 pi j / samples, z_j = (w_j + 1/w_j)/2."""
    theta = 2.0 * np.pi * np.arange(spec.samples) / spec.samples
    w = spec.rho * np.exp(1j * theta)
    return w, 0.5 * (w + 1.0 / w)


def sup_on_ellipse(u, spec: EllipseSpec) -> float:
    """Max of |u| over the sampled ellipse boundary.

    Raises PoleOnContourError if any sampled value is non-finite; a pole
    merely near the contour produces a huge finite value instead, which is
    the caller's concern.
    """
    _, z = ellipse_points(spec)
    vals = np.abs(np.asarray(u(z)))
    if not np.all(np.isfinite(vals)):
        raise PoleOnContourError(
            f"non-finite value on the rho={spec.rho} boundary sample"
        )
    return float(np.max(vals))


def remainder_exact(param, n: int, rho: float, rtol: float = 1e-17) -> float:
    """Exact boundary remainder: sum_{k=1..n} |d_{n,k}| |g_k| rho^{-2k} plus
    the tail sum_{k>n} |g_k| rho^{-2k}.

    Both sums run on multiplicative recurrences; the infinite tail stops when
    a term drops below rtol times the accumulated sum (geometric decay).
    """
    lam = as_param(param).lam
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    if not rho > 1.0:
        raise ValueError("rho must be > 1")
    q = rho ** -2.0
    total = 0.0
    g = 1.0
    ratio = 1.0          # g_{n-k}/g_n
    qk = 1.0
    for k in range(1, n + 1):
        ratio *= (n - k + 1.0) / (n - k + lam)
        g *= (k - 1.0 + lam) / k
        qk *= q
        total += abs(1.0 - ratio) * abs(g) * qk
    k = n
    while True:
        k += 1
        g *= (k - 1.0 + lam) / k
        qk *= q
        term = abs(g) * qk
        total += term
        if term < rtol * total:
            return total
        if k > n + 100_000_000:
            raise RuntimeError("tail failed to converge")


def _head_factor(lam: float, rho: float) -> float:
    """|(1 - rho^-2)^-lam - 1|, the closed form of the head sum."""
    return abs((1.0 - rho ** -2.0) ** (-lam) - 1.0)


def _m_condition_ok(lam: float, rho: float, m: int) -> bool:
    return m + 2.0 >= (lam - 1.0) * (1.0 / (2.0 * math.log(rho)) - 1.0)


_M_CONDITION_TEXT = "m + 2 >= (lambda - 1) (1/(2 ln rho) - 1)"


def remainder_bound(param, n: int, rho: float, m="auto") -> BoundBreakdown:
    """Certified upper bound for the exact boundary remainder.

    For lam > 1 the bound splits at an index m subject to the admissibility
    condition m + 2 >= (lambda-1)(1/(2 ln rho) - 1); for -1/2 < lam < 1
    (lam != 0, n >= 3) a three-term bound holds for every 1 <= m <= n.
    With m="auto" the total is minimized over all admissible m.
    """
    p = as_param(param)
    lam = p.lam
    if not rho > 1.0:
        raise ValueError("rho must be > 1")
    if lam == 1.0:
        raise ValueError(
            "lambda = 1 is covered by neither branch of the remainder bound "
            "(the remainder is exactly rho^(-2n)/(rho^2-1) there)"
        )
    if n < 1:
        raise ValueError("n must be >= 1")
    case_low = -0.5 < lam < 1.0
    if case_low and n < 3:
        raise ValueError("the -1/2 < lambda < 1 branch requires n >= 3")

    d = d_coeff_sequence(p, n)
    head = _head_factor(lam, rho)
    ms = np.arange(1, n + 1)

    if case_low:
        theorem_id = "T31ii"
        admissible = np.ones(n, dtype=bool)
        t_head = np.abs(d) * head
        t_geo = rho ** (-2.0 * ms.astype(float)) / (rho * rho - 1.0)
        t_end = np.full(n, 2.0 * rho ** (-2.0 * float(n)))
        totals = t_head + t_geo + t_end
        term_names = ("head", "geometric_tail", "endgame")
        term_cols = (t_head, t_geo, t_end)
    else:
        theorem_id = "T31i"
        admissible = np.array([_m_condition_ok(lam, rho, int(mm)) for mm in ms])
        fl = math.floor(lam)
        log_fact = math.lgamma(fl + 1.0)
        a_const = np.exp(
            -math.lgamma(lam)
            + 1.0 / (12.0 * (ms + 1.0 + lam))
            + lam / (2.0 * (ms + 1.0))
        )
        t_head = d * head
        t_tail = a_const * np.exp(
            log_fact
            - lam * math.log(2.0 * math.log(rho))
            + fl * np.log(ms + lam)
            - 2.0 * (ms - 1.0) * math.log(rho)
        )
        totals = t_head + t_tail
        term_names = ("head", "integral_tail")
        term_cols = (t_head, t_tail)

    flags = []
    if m == "auto":
        if not np.any(admissible):
            raise ValueError(
                f"no m in [1, {n}] satisfies the admissibility condition "
                f"{_M_CONDITION_TEXT}"
            )
        masked = np.where(admissible, totals, np.inf)
        idx = int(np.argmin(masked))
        flags.append("m auto-selected")
    else:
        m = int(m)
        if not (1 <= m <= n):
            raise ValueError(f"m must satisfy 1 <= m <= n, got m={m}")
        idx = m - 1
        if not admissible[idx]:
            raise ValueError(
                f"m={m} violates the admissibility condition {_M_CONDITION_TEXT}"
            )
    total = float(totals[idx])
    return BoundBreakdown(
        theorem_id=theorem_id,
        constant_factor=1.0,
        rate_factor=total,
        total=total,
        parameters={"lambda": lam, "n": n, "rho": rho, "m": int(ms[idx])},
        flags=flags,
        terms={name: float(col[idx]) for name, col in zip(term_names, term_cols)},
    )


def e_n_metric(param, n: int, spec: EllipseSpec) -> float:
    """Normalized sup discrepancy between the boundary series and its limit.

    E_n = max_z |(1-w^-2)^-lam - C_n(z)/(g_n w^n)| / A(rho, lam) with the
    normalization A = |1-lam| |(1-rho^-2)^-lam - 1|; lam = 1 degenerates
    (A = 0) and is rejected.
    """
    p = as_param(param)
    lam = p.lam
    if lam == 1.0:
        raise ValueError("normalization degenerates at lambda = 1 (A = 0)")
    w, _ = ellipse_points(spec)
    limit = (1.0 - w ** -2.0) ** (-lam)
    disc = np.max(np.abs(limit - normalized_on_ellipse(p, n, w)))
    a_norm = abs(1.0 - lam) * _head_factor(lam, spec.rho)
    return float(disc / a_norm)


def _rate(power: float, n: int, rho: float) -> float:
    """n^power / rho^n evaluated in log space."""
    return math.exp(power * math.log(n) - n * math.log(rho))


def _check_bound_args(n: int, rho: float, m_rho: float):
    if n < 1:
        raise ValueError("n must be >= 1")
    if not rho > 1.0:
        raise ValueError("rho must be > 1")
    if m_rho < 0:
        raise ValueError("M_rho must be >= 0")


def interp_bound_gauss(param, n: int, rho: float, m_rho: float) -> BoundBreakdown:
    """Max-norm interpolation error bound on the Gauss nodes.

    lam > 0 branch decays like n^lam / rho^n; the -1/2 < lam < 0 branch has
    no algebraic factor and uses the calibrated sup-norm constant.
    """
    p = as_param(param)
    lam = p.lam
    _check_bound_args(n, rho, m_rho)
    common = m_rho * math.sqrt(rho * rho + rho ** -2.0) / (rho - 1.0) ** 2
    flags = [FLAG_C_ONE]
    if lam > 0:
        const = (
            math.exp(math.lgamma(lam) - math.lgamma(2.0 * lam))
            * common
            * (1.0 + rho ** -2.0) ** lam
        )
        rate = _rate(lam, n, rho)
        theorem_id = "T41i"
    else:
        d_lam = calibrated_sup_scale(lam)
        const = (
            d_lam
            * math.exp(math.lgamma(lam))
            * common
            * (1.0 - rho ** -2.0) ** lam
        )
        rate = _rate(0.0, n, rho)
        theorem_id = "T41ii"
        flags.append(FLAG_CALIBRATED)
    return BoundBreakdown(
        theorem_id=theorem_id,
        constant_factor=const,
        rate_factor=rate,
        total=const * rate,
        parameters={"lambda": lam, "n": n, "rho": rho, "M_rho": m_rho},
        flags=flags,
    )


def diff_bound_gauss(param, n: int, rho: float, m_rho: float) -> BoundBreakdown:
    """Max node-differencing error bound on the Gauss nodes: Lambda n^(lam+2)/rho^n."""
    p = as_param(param)
    lam = p.lam
    _check_bound_args(n, rho, m_rho)
    branch = (1.0 + rho ** -2.0) ** lam if lam > 0 else (1.0 - rho ** -2.0) ** lam
    const = (
        2.0
        * math.exp(math.lgamma(lam + 1.0) - math.lgamma(2.0 * lam + 2.0))
        * m_rho
        * math.sqrt(rho * rho + rho ** -2.0)
        * branch
        / (rho - 1.0) ** 2
    )
    rate = _rate(lam + 2.0, n, rho)
    return BoundBreakdown(
        theorem_id="T42",
        constant_factor=const,
        rate_factor=rate,
        total=const * rate,
        parameters={"lambda": lam, "n": n, "rho": rho, "M_rho": m_rho},
        flags=[FLAG_C_ONE],
    )


def _lobatto_common(lam: float, rho: float, m_rho: float) -> float:
    return (
        m_rho
        * math.sqrt(rho * rho + rho ** -2.0)
        * (1.0 + rho ** -2.0) ** (lam + 1.0)
        / ((1.0 - 1.0 / rho) ** 2 * (rho - 1.0 / rho) ** 2)
    )


def interp_bound_lobatto(param, n: int, rho: float, m_rho: float) -> BoundBreakdown:
    """Max-norm interpolation error bound on the Lobatto nodes: rate n^(lam+1)/rho^n."""
    p = as_param(param)
    lam = p.lam
    _check_bound_args(n, rho, m_rho)
    const = (
        4.0
        * _lobatto_common(lam, rho, m_rho)
        * math.exp(math.lgamma(lam + 1.0) - math.lgamma(2.0 * lam + 2.0))
    )
    rate = _rate(lam + 1.0, n, rho)
    return BoundBreakdown(
        theorem_id="T43a",
        constant_factor=const,
        rate_factor=rate,
        total=const * rate,
        parameters={"lambda": lam, "n": n, "rho": rho, "M_rho": m_rho},
        flags=[FLAG_C_ONE],
    )


def diff_bound_lobatto(param, n: int, rho: float, m_rho: float) -> BoundBreakdown:
    """Max node-differencing error bound on the Lobatto nodes: rate n^(lam+3)/rho^n."""
    p = as_param(param)
    lam = p.lam
    _check_bound_args(n, rho, m_rho)
    const = (
        8.0
        * _lobatto_common(lam, rho, m_rho)
        * math.exp(math.lgamma(lam + 2.0) - math.lgamma(2.0 * lam + 4.0))
    )
    rate = _rate(lam + 3.0, n, rho)
    return BoundBreakdown(
        theorem_id="T43b",
        constant_factor=const,
        rate_factor=rate,
        total=const * rate,
        parameters={"lambda": lam, "n": n, "rho": rho, "M_rho": m_rho},
        flags=[FLAG_C_ONE],
    )


def quad_bound(param, interp_breakdown: BoundBreakdown) -> BoundBreakdown:
    """Weighted-integral error bound: total mass factor h_0 times an
    interpolation bound (Gauss or Lobatto)."""
    p = as_param(param)
    if interp_breakdown.theorem_id not in ("T41i", "T41ii", "T43a"):
        raise ValueError(
            "quad_bound needs an interpolation breakdown "
            f"(T41i/T41ii/T43a), got {interp_breakdown.theorem_id}"
        )
    h0 = h_norm(p, 0)
    params = dict(interp_breakdown.parameters)
    params["h0"] = h0
    return BoundBreakdown(
        theorem_id="Quad",
        constant_factor=h0 * interp_breakdown.constant_factor,
        rate_factor=interp_breakdown.rate_factor,
        total=h0 * interp_breakdown.constant_factor * interp_breakdown.rate_factor,
        parameters=params,
        flags=list(interp_breakdown.flags),
    )


_BOUND_DISPATCH = {
    "T41": interp_bound_gauss,
    "T41i": interp_bound_gauss,
    "T41ii": interp_bound_gauss,
    "T42": diff_bound_gauss,
    "T43a": interp_bound_lobatto,
    "T43b": diff_bound_lobatto,
}


def rho_scan_grid(rho_min: float, rho_max: float, count: int) -> np.ndarray:
    """count equally spaced rho values strictly inside (rho_min, rho_max).

    The grid lives on [rho_min + h, rho_max - h] with h = (rho_max -
    rho_min)/count, so a singularity sitting exactly on either endpoint's
    ellipse is never sampled and rho_min = 1 is allowed.
    """
    if not (1.0 <= rho_min < rho_max):
        raise ValueError("need 1 <= rho_min < rho_max")
    if count < 2:
        raise ValueError("count must be >= 2")
    h = (rho_max - rho_min) / count
    return np.linspace(rho_min + h, rho_max - h, count)


def scan_sups(u, rhos, samples: int = 2048):
    """Boundary sups of |u| for each rho; non-finite entries become NaN.

    Returns (sups, any_skipped).  The sups depend on u and rho only, so
    callers scanning many degrees should compute them once.
    """
    sups = np.empty(len(rhos))
    skipped = False
    for i, rho in enumerate(rhos):
        try:
            sups[i] = sup_on_ellipse(u, EllipseSpec(float(rho), samples))
        except PoleOnContourError:
            sups[i] = np.nan
            skipped = True
    if skipped and np.all(np.isnan(sups)):
        raise PoleOnContourError("every scanned rho had a non-finite boundary max")
    return sups, skipped


def minimize_bound_on_grid(
    param, n: int, which: str, rhos, sups, skipped: bool = False
) -> tuple[float, BoundBreakdown]:
    """Pick the rho from the precomputed (rhos, sups) grid minimizing a bound."""
    p = as_param(param)
    if which not in _BOUND_DISPATCH:
        raise ValueError(f"unknown bound id {which!r}")
    if which == "T41i" and p.lam < 0:
        raise ValueError("the n^lam branch requires lambda > 0")
    if which == "T41ii" and p.lam > 0:
        raise ValueError("the calibrated branch requires -1/2 < lambda < 0")
    fn = _BOUND_DISPATCH[which]
    best = None
    best_rho = None
    for rho, m_rho in zip(rhos, sups):
        if not math.isfinite(m_rho):
            continue
        bd = fn(p, n, float(rho), float(m_rho))
        if best is None or bd.total < best.total:
            best, best_rho = bd, float(rho)
    if best is None:
        raise PoleOnContourError("every scanned rho had a non-finite boundary max")
    if skipped:
        best = BoundBreakdown(
            theorem_id=best.theorem_id,
            constant_factor=best.constant_factor,
            rate_factor=best.rate_factor,
            total=best.total,
            parameters=best.parameters,
            flags=list(best.flags) + [FLAG_SKIPPED_RHO],
            terms=best.terms,
        )
    return best_rho, best


def best_bound_over_rho(
    param,
    n: int,
    u,
    rho_min: float,
    rho_max: float,
    count: int,
    which: str,
    samples: int = 2048,
) -> tuple[float, BoundBreakdown]:
    """Scan rho over the open interval and return the minimizing bound.

    The sup of |u| is recomputed for every rho via sup_on_ellipse; any rho
    where it is non-finite is skipped and the result flagged.
    """
    rhos = rho_scan_grid(rho_min, rho_max, count)
    sups, skipped = scan_sups(u, rhos, samples)
    return minimize_bound_on_grid(param, n, which, rhos, sups, skipped)
