"""Recover a real spectrum from its power sums.

Newton's identities turn power sums p_m = sum_i x_i^m into the elementary
symmetric polynomials, whose monic polynomial has the x_i as roots.  Run
naively in float64 this is fragile twice over: repeated roots split through
the companion matrix as eps^(1/multiplicity), and tightly clustered spectra
lose their configuration signal to catastrophic cancellation when the
polynomial is centered.  The engine here therefore

1. performs the centering shift, a power-of-two rescale and the Newton
   recursion in exact rational arithmetic (inputs that are floats are exact
   binary rationals; callers with exactly known moments pass Fractions),
2. roots the standardized polynomial via the companion matrix,
3. selects a multiplicity structure by weighted least squares against the
   moments: candidate partitions of the sorted roots are refined with a
   multiplicity-constrained Gauss-Newton pass and the coarsest structure
   whose residual sits at the propagated rounding floor wins.

Moments that no real spectrum explains (finite-shot estimates) fall through
to the raw projected roots with flags, never an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

_EPS = float(np.finfo(float).eps)

#: input rounding slack, in units of eps * |p_m|, granted to float moments
_FLOAT_NOISE_FACTOR = 64.0

#: accepted residual, in units of the propagated noise floor
_ACCEPT_FACTOR = 8.0

#: below this relative spread all values are reported as their mean
_DEGENERATE_SPREAD = 1e-8

COMPLEX_ROOTS_FLAG = "complex-roots"


@dataclass(frozen=True)
class SpectrumRecovery:
    """Sorted (descending) recovered values plus diagnostic flags."""

    values: np.ndarray
    flags: tuple[str, ...]


def _centered_setup(psums):
    """Exact shift/scale/Newton chain.

    Returns (center, scale, monic coefficients highest-first, standardized
    moments as floats, per-moment noise floor).  scale == 0.0 signals the
    all-values-equal-to-center degenerate case.
    """
    n = len(psums)
    exact_input = all(isinstance(x, Fraction) for x in psums)
    p = [Fraction(n)] + [x if isinstance(x, Fraction) else Fraction(float(x)) for x in psums]
    c = p[1] / n
    cf = float(c)

    q = []
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(0, m + 1):
            acc += comb(m, j) * p[j] * (-c) ** (m - j)
        q.append(acc)

    q2 = float(q[1]) if n >= 2 else 0.0
    if q2 <= 0.0 or math.sqrt(q2 / n) < _DEGENERATE_SPREAD * max(1.0, abs(cf)):
        return cf, 0.0, None, None, None
    scale = Fraction(2) ** round(0.5 * math.log2(q2 / n))
    sf = float(scale)

    qs = np.array([float(q[m - 1] / scale**m) for m in range(1, n + 1)])

    # Rounding floor of the standardized moments: each float input p_j
    # carries ~eps relative error which the shift amplifies by the binomial
    # weights; exact Fraction inputs only pay the final float conversion.
    noise = np.empty(n)
    for m in range(1, n + 1):
        propagated = 0.0
        if not exact_input:
            for j in range(0, m + 1):
                propagated += comb(m, j) * abs(float(p[j])) * abs(cf) ** (m - j)
            propagated *= _FLOAT_NOISE_FACTOR * _EPS / sf**m
        noise[m - 1] = propagated + _FLOAT_NOISE_FACTOR * _EPS * max(1.0, abs(qs[m - 1]))

    e = [Fraction(1)]
    for k in range(1, n + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * (q[i - 1] / scale**i)
        e.append(acc / k)
    coeffs = [float((-1) ** k * e[k]) for k in range(n + 1)]
    return cf, sf, coeffs, qs, noise


def _power_sums(values: np.ndarray, mult: np.ndarray, n: int) -> np.ndarray:
    return np.array([np.sum(mult * values**m) for m in range(1, n + 1)])


def _gauss_newton(z0, mult, targets, weights, iters: int = 12):
    """Refine distinct values z (with multiplicities) against the moments."""
    z = z0.astype(float).copy()
    n = len(targets)
    best, best_res = z.copy(), math.inf
    for _ in range(iters):
        r = (_power_sums(z, mult, n) - targets) / weights
        res = float(np.max(np.abs(r)))
        if res < best_res:
            best_res, best = res, z.copy()
        if res < 0.5:
            break
        jac = np.empty((n, len(z)))
        for m in range(1, n + 1):
            jac[m - 1] = m * mult * z ** (m - 1)
        step, *_ = np.linalg.lstsq(jac / weights[:, None], r, rcond=None)
        if not np.all(np.isfinite(step)):
            break
        z = z - step
    r = (_power_sums(z, mult, n) - targets) / weights
    res = float(np.max(np.abs(r)))
    if res < best_res:
        best_res, best = res, z
    return best, best_res


def _compositions(n: int, parts: int):
    """All splits of n sorted items into `parts` contiguous groups."""
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def spectrum_from_power_sums(power_sums, imag_guard: float = 1e-6) -> SpectrumRecovery:
    """Invert p_m = sum_i x_i^m, m = 1..n, for the n real values x_i.

    Parameters
    ----------
    power_sums : sequence of float or Fraction
        The n power sums of the n sought values.  Fractions are treated as
        exact; floats carry a rounding-floor allowance.
    imag_guard : float
        Imaginary residual (in original units) above which the fall-through
        raw roots are flagged as complex.

    Returns
    -------
    SpectrumRecovery
        Values sorted descending.  Flags are empty whenever some real
        spectrum reproduces the moments at their precision floor.
    """
    psums = list(power_sums)
    n = len(psums)
    if n == 0:
        raise ValueError("need at least one power sum")
    if n == 1:
        return SpectrumRecovery(np.array([float(psums[0])]), ())

    center, scale, coeffs, targets, noise = _centered_setup(psums)
    if coeffs is None:
        return SpectrumRecovery(np.full(n, center), ())

    raw = np.roots(coeffs)
    y = np.sort(raw.real)
    ymax = max(1.0, float(np.max(np.abs(y))))
    weights = _ACCEPT_FACTOR * (noise + _FLOAT_NOISE_FACTOR * _EPS * n * ymax ** np.arange(1, n + 1))

    for n_clusters in range(1, n + 1):
        candidates = []
        for sizes in _compositions(n, n_clusters):
            bounds = np.cumsum((0,) + sizes)
            mult = np.array(sizes, dtype=float)
            z0 = np.array([y[bounds[i]:bounds[i + 1]].mean() for i in range(n_clusters)])
            # cheap screen: skip structures hopelessly far from the moments
            init = np.max(np.abs(_power_sums(z0, mult, n) - targets) / weights)
            if init > 1e6:
                continue
            z, res = _gauss_newton(z0, mult, targets, weights)
            if res <= 1.0:
                candidates.append((res, z, mult))
        if candidates:
            res, z, mult = min(candidates, key=lambda t: t[0])
            values = np.repeat(z, mult.astype(int))
            return SpectrumRecovery(np.sort(center + scale * values)[::-1], ())

    flags = []
    if scale * float(np.max(np.abs(raw.imag))) > imag_guard:
        flags.append(COMPLEX_ROOTS_FLAG)
    return SpectrumRecovery(np.sort(center + scale * y)[::-1], tuple(flags))
