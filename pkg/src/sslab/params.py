"""Closed-form exponent analysis of the low-space algorithm.

Everything here is plain double-precision arithmetic on the binary entropy
function.  ``verify_exponent_bounds`` and ``verify_wov_inequality`` certify
the maximum points numerically on a grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Callable

TOL = 1e-9
MIXER_BETA = 0.13
BETA_WINDOW = (0.45, 0.55)
T_BOUND = 0.5
S_BOUND = 0.246
_EDGE = 1e-12


def entropy(x: float) -> float:
    """Binary entropy in bits, with h(0) = h(1) = 0."""
    if x < -_EDGE or x > 1 + _EDGE or math.isnan(x):
        raise ValueError(f"entropy argument {x!r} outside [0, 1]")
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def lambda_exponent(alpha: float, beta: float) -> float:
    """Exponent of the probability that the solution meets exactly half of the three mixers."""
    if beta == 0:
        return 0.0
    if 3 * beta > 1 + _EDGE:
        raise ValueError("3*beta must be <= 1")
    if alpha <= 0 or alpha >= 1:
        raise ValueError(f"alpha={alpha} leaves no room for mixers with beta={beta}")
    return (entropy(3 * beta)
            - alpha * entropy(3 * beta / (2 * alpha))
            - (1 - alpha) * entropy(3 * beta / (2 * (1 - alpha))))


def gamma_density(alpha: float, beta: float) -> float:
    if 3 * beta >= 1:
        raise ValueError("3*beta must be < 1")
    return (alpha - 1.5 * beta) / (1 - 3 * beta)


def beta_schedule(alpha: float) -> float:
    lo, hi = BETA_WINDOW
    return MIXER_BETA if lo - _EDGE <= alpha <= hi + _EDGE else 0.0


def chi_balance(mu: float, gamma: float) -> float:
    hg = entropy(gamma)
    if hg == 0:
        return 0.0
    return (entropy(mu) - entropy(0.5 - mu)) / hg


def time_exponent(alpha: float, beta: float) -> float:
    hg = entropy(gamma_density(alpha, beta))
    lam = lambda_exponent(alpha, beta)
    return 0.5 * (hg - 3 * beta * hg + 3 * beta + 2 * lam)


def space_exponent(alpha: float, beta: float) -> float:
    hg = entropy(gamma_density(alpha, beta))
    lam = lambda_exponent(alpha, beta)
    return 0.25 * (3 * hg - 9 * beta * hg + 6 * beta * entropy(0.25) + 4 * beta - 2 + 4 * lam)


@dataclass(frozen=True)
class ParameterPoint:
    alpha: float
    beta: float
    gamma: float
    lambda_: float
    mu: float = 0.25
    eps: float = 0.0
    eps_L: float = 0.0
    eps_R: float = 0.0
    chi: float = 0.0
    T_exp: float = 0.0
    S_exp: float = 0.0


def parameter_point(alpha: float, beta: float | None = None, mu: float = 0.25,
                    eps: float = 0.0, eps_L: float | None = None,
                    eps_R: float | None = None) -> ParameterPoint:
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    if beta is None:
        beta = beta_schedule(alpha)
    gamma = gamma_density(alpha, beta)
    return ParameterPoint(
        alpha=alpha, beta=beta, gamma=gamma,
        lambda_=lambda_exponent(alpha, beta), mu=mu, eps=eps,
        eps_L=eps if eps_L is None else eps_L,
        eps_R=eps if eps_R is None else eps_R,
        chi=chi_balance(mu, gamma),
        T_exp=time_exponent(alpha, beta), S_exp=space_exponent(alpha, beta),
    )


@dataclass(frozen=True)
class PartitionPlan:
    mixer: int
    L: int
    R: int
    L_parts: tuple[int, int, int, int]
    R_parts: tuple[int, int, int, int]
    clamped: bool = False

    @property
    def n(self) -> int:
        return 3 * self.mixer + self.L + self.R


def largest_remainder(reals: list[float], total: int) -> list[int]:
    """Round non-negative reals to integers summing to ``total``, preserving proportions."""
    if total < 0:
        raise ValueError("total must be >= 0")
    s = sum(reals)
    if s <= 0:
        reals = [1.0] * len(reals)
        s = float(len(reals))
    scaled = [r * total / s for r in reals]
    base = [math.floor(x) for x in scaled]
    short = total - sum(base)
    order = sorted(range(len(reals)), key=lambda i: (-(scaled[i] - base[i]), i))
    for i in order[:short]:
        base[i] += 1
    return base


def _raw_part_sizes(point: ParameterPoint) -> tuple[list[float], list[float]]:
    """Real-valued |L_i| / n and |R_i| / n before clamping."""
    b, e = point.beta, point.eps
    hg = entropy(point.gamma)
    if hg == 0:
        return [0.25] * 4, [0.25] * 4
    hm, hc = entropy(point.mu), entropy(0.5 - point.mu)
    base = hg - 3 * b * hg
    common = base + 2 * b - 2 * e * b
    l1 = (base - 6 * b + 6 * e * b + b * hm + b * hc) / (8 * hg)
    l2 = (common + b * hm + b * hc) / (8 * hg)
    l4 = (common - 7 * b * hm + b * hc) / (8 * hg)
    r4 = (common + b * hm - 7 * b * hc) / (8 * hg)
    return [l1, l2, l2, l4], [l1, l2, l2, r4]


def partition_plan(n: int, point: ParameterPoint) -> PartitionPlan:
    """Integer sizes of the three mixers and the eight outer parts.

    Mixers get ``floor(beta * n)`` items each.  |L| and |R| follow the
    balancing rule; the parts follow the equal-family-size rule, with negative
    entries clamped to zero and the rest rescaled.  All rounding is by largest
    remainder so every total is exact.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    mixer = math.floor(point.beta * n + _EDGE)
    if 3 * mixer > n:
        raise ValueError("mixers do not fit")
    rest = n - 3 * mixer
    b = point.beta
    l_frac = (1 - 3 * b - point.chi * b) / 2
    r_frac = (1 - 3 * b + point.chi * b) / 2
    if l_frac < -_EDGE or r_frac < -_EDGE:
        raise ValueError(f"negative side size (|L|/n={l_frac:.4f}, |R|/n={r_frac:.4f})")
    L, R = largest_remainder([max(l_frac, 0.0), max(r_frac, 0.0)], rest)
    raw_l, raw_r = _raw_part_sizes(point)
    clamped = any(x < 0 for x in raw_l + raw_r)
    L_parts = largest_remainder([max(x, 0.0) for x in raw_l], L)
    R_parts = largest_remainder([max(x, 0.0) for x in raw_r], R)
    return PartitionPlan(mixer, L, R, tuple(L_parts), tuple(R_parts), clamped)


def binom_log_estimate(n: int, alpha: float) -> tuple[float, float]:
    """Bracket for log2 C(n, alpha*n): ``n*h(alpha) - log2(sqrt(2n))`` and ``n*h(alpha)``."""
    k = round(alpha * n)
    if k <= 0 or k >= n:
        return 0.0, 0.0
    upper = n * entropy(alpha)
    return upper + math.log2((1 / math.sqrt(2)) / math.sqrt(n)), upper


# ---------------------------------------------------------------------------
# grid certification
# ---------------------------------------------------------------------------


@dataclass
class ExponentReport:
    max_T: float
    argmax_T: float
    max_S: float
    argmax_S: float
    min_lambda: float
    grid_points: int
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def verify_exponent_bounds(grid_step: float = 0.001,
                           schedule: Callable[[float], float] = beta_schedule,
                           tol: float = TOL) -> ExponentReport:
    """Sweep alpha over [0, 1]; maxima of T and S under ``schedule``."""
    steps = round(1 / grid_step)
    ref_T = time_exponent(0.5, MIXER_BETA)
    ref_S = space_exponent(0.5, MIXER_BETA)
    best_T, arg_T = -math.inf, math.nan
    best_S, arg_S = -math.inf, math.nan
    min_lam = math.inf
    violations: list[str] = []
    for i in range(steps + 1):
        alpha = i / steps
        beta = schedule(alpha)
        try:
            T = time_exponent(alpha, beta)
            S = space_exponent(alpha, beta)
            lam = lambda_exponent(alpha, beta)
        except ValueError as exc:
            violations.append(f"alpha={alpha:.6f}: {exc}")
            continue
        if T > best_T:
            best_T, arg_T = T, alpha
        if S > best_S:
            best_S, arg_S = S, alpha
        min_lam = min(min_lam, lam)
        if lam < -tol:
            violations.append(f"alpha={alpha:.6f}: lambda={lam:.3e} < 0")
        if T > T_BOUND + tol:
            violations.append(f"alpha={alpha:.6f}: T={T:.12f} exceeds {T_BOUND}")
        if S > S_BOUND + tol:
            violations.append(f"alpha={alpha:.6f}: S={S:.12f} exceeds {S_BOUND}")
        if T > ref_T + tol:
            violations.append(f"alpha={alpha:.6f}: T above T(0.5, {MIXER_BETA})")
        if S > ref_S + tol:
            violations.append(f"alpha={alpha:.6f}: S above S(0.5, {MIXER_BETA})")
    return ExponentReport(best_T, arg_T, best_S, arg_S, min_lam, steps + 1, violations)


def wov_point(mu: float) -> float:
    """Evaluation point of the two OV exponents, ``1/2 + log2(3) * (mu - 1/4)``."""
    return 0.5 + math.log2(3) * (mu - 0.25)


def wov_exponents(mu: float) -> tuple[float, float]:
    x = wov_point(mu)
    shared = 0.5 * entropy(2 * x - 2 * mu)
    f1 = (1 - mu) * entropy((x - mu) / (1 - mu)) - shared
    f2 = (0.5 + mu) * entropy(2 * x / (1 + 2 * mu)) - shared
    return f1, f2


@dataclass
class WOVReport:
    wov_max: float
    argmax_mu: float
    bound: float
    f1_max: float
    f2_max: float
    grid_points: int
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def verify_wov_inequality(mu_step: float = 0.005, tol: float = TOL) -> WOVReport:
    steps = round(0.5 / mu_step)
    bound = 1 - entropy(0.25)
    best, arg = -math.inf, math.nan
    f1_max = f2_max = -math.inf
    violations: list[str] = []
    for i in range(steps + 1):
        mu = 0.5 * i / steps
        f1, f2 = wov_exponents(mu)
        f1_max, f2_max = max(f1_max, f1), max(f2_max, f2)
        v = max(f1, f2)
        if v > best:
            best, arg = v, mu
        if v > bound + tol:
            violations.append(f"mu={mu:.6f}: max(f1, f2)={v:.12f} exceeds {bound:.12f}")
    return WOVReport(best, arg, bound, f1_max, f2_max, steps + 1, violations)
