"""Bessel functions of the first kind for integer order and real argument.

Three regimes are used, chosen per (n, x):

* ascending power series for small arguments,
* Miller's downward recurrence normalised with ``J_0 + 2 sum J_2k = 1``,
* Hankel's asymptotic expansion for ``x > 2n + 100``.

Everything that can overflow (powers, factorials) is carried in log form, so
orders up to 2000 work without scaling tricks at the call site.
"""

from __future__ import annotations

import math

import numpy as np

MAX_ORDER = 2000
MAX_ARG = 5000.0

# Rescaling step for the recurrence: 2**830 ~ 1e250.
_RESCALE_EXP = 830
_RESCALE = math.ldexp(1.0, _RESCALE_EXP)
_LOG_RESCALE = _RESCALE_EXP * math.log(2.0)

# Below this the table uses the leading series terms.
_TINY_ARG = 1e-6

# Series is abandoned when sum(|t_k|)/|sum t_k| exceeds this.
_SERIES_CANCELLATION_LIMIT = 1.0e4


def _check_envelope(n, x):
    if int(n) != n or n < 0:
        raise ValueError(f"order must be a non-negative integer, got {n!r}")
    if not np.isfinite(x) or x < 0:
        raise ValueError(f"argument must be finite and >= 0, got {x!r}")
    if n > MAX_ORDER or x > MAX_ARG:
        raise ValueError(
            f"(n={n}, x={x}) outside supported envelope n <= {MAX_ORDER}, x <= {MAX_ARG}"
        )


def _miller_start(n, x):
    """Even starting order for the downward recurrence."""
    top = max(float(n), float(x), 1.0)
    m = int(top + 30 + 15 * top ** (1.0 / 3.0))
    return m + (m % 2)


def _series(n, x):
    """Ascending series. Returns None when cancellation makes it unreliable."""
    half = 0.5 * x
    q = -half * half
    term = 1.0
    total = 1.0
    abs_total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * (n + k))
        total += term
        abs_total += abs(term)
        if abs(term) <= 1e-17 * abs(total) or k > 10000:
            break
    if total == 0.0 or abs_total / abs(total) > _SERIES_CANCELLATION_LIMIT:
        return None
    if n == 0:
        return total
    log_lead = n * (math.log(x) - math.log(2.0)) - math.lgamma(n + 1)
    return math.copysign(math.exp(log_lead + math.log(abs(total))), total)


def _hankel(n, x):
    """Hankel asymptotic expansion. Returns None if it does not converge."""
    mu = 4.0 * n * n
    p_sum = 1.0
    q_sum = 0.0
    term = 1.0
    prev = math.inf
    converged = False
    k = 0
    while k < 200:
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        size = abs(term)
        if size > prev:
            break
        prev = size
        # k odd -> Q, k even -> P; signs alternate in pairs.
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q_sum += sign * term
        else:
            p_sum += sign * term
        if size < 1e-17 or term == 0.0:
            converged = True
            break
    if not converged:
        return None
    # chi = x - (2n+1) pi/4, reduced exactly modulo 2 pi.
    shift = ((2 * n + 1) % 8) * (math.pi / 4.0)
    chi = x - shift
    return math.sqrt(2.0 / (math.pi * x)) * (p_sum * math.cos(chi) - q_sum * math.sin(chi))


def _miller(n, x):
    m = _miller_start(n, x)
    two_over_x = 2.0 / x
    j_next = 0.0
    j_cur = 1.0
    norm = 0.0
    answer = 0.0
    answer_shift = 0  # rescalings applied after the answer was stored
    stored = False
    for k in range(m, 0, -1):
        # j_cur holds J_k, compute J_{k-1}
        j_prev = k * two_over_x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if k - 1 == n:
            answer = j_cur
            stored = True
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
        if abs(j_cur) > _RESCALE:
            j_cur /= _RESCALE
            j_next /= _RESCALE
            norm /= _RESCALE
            if stored:
                answer_shift += 1
            else:
                answer /= _RESCALE
    norm += j_cur
    if n == 0:
        answer = j_cur
        answer_shift = 0
    if answer == 0.0:
        return 0.0
    log_mag = math.log(abs(answer)) - answer_shift * _LOG_RESCALE - math.log(abs(norm))
    sign = math.copysign(1.0, answer) * math.copysign(1.0, norm)
    if log_mag < -745.0:
        return 0.0
    return sign * math.exp(log_mag)


def bessel_j(n, x):
    """Bessel function of the first kind ``J_n(x)``.

    Parameters
    ----------
    n : int
        Order, ``0 <= n <= 2000``.
    x : float
        Argument, ``0 <= x <= 5000``.

    Returns
    -------
    float
        ``J_n(x)``; values below ~1e-308 underflow to 0.

    Raises
    ------
    ValueError
        If ``(n, x)`` lies outside the supported envelope.
    """
    _check_envelope(n, x)
    n = int(n)
    x = float(x)
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x > 2 * n + 100:
        value = _hankel(n, x)
        if value is not None:
            return value
    elif x < max(8.0, 0.5 * n):
        value = _series(n, x)
        if value is not None:
            return value
    return _miller(n, x)


def _lgamma_table(n_max):
    return np.array([math.lgamma(k + 1) for k in range(n_max + 1)])


def bessel_j_table(n_max, x):
    """All orders ``J_0 .. J_{n_max}`` for an array of arguments.

    Vectorised Miller recurrence, used where many orders are needed at many
    points (Floquet weights, harmonic signals). Stable for every ``x >= 0``
    in the supported envelope.

    Parameters
    ----------
    n_max : int
    x : array_like
        Non-negative arguments.

    Returns
    -------
    ndarray, shape (n_max + 1,) + x.shape
    """
    if int(n_max) != n_max or n_max < 0 or n_max > MAX_ORDER:
        raise ValueError(f"n_max must be an integer in [0, {MAX_ORDER}], got {n_max!r}")
    n_max = int(n_max)
    x = np.asarray(x, dtype=float)
    shape = x.shape
    flat = x.ravel()
    if flat.size and (np.any(~np.isfinite(flat)) or flat.min() < 0 or flat.max() > MAX_ARG):
        raise ValueError("arguments must be finite and within [0, 5000]")

    out = np.zeros((n_max + 1, flat.size))
    zero = flat == 0.0
    out[0, zero] = 1.0
    # Two series terms are exact to rounding here, and 2/x would overflow
    # the recurrence for the very smallest arguments.
    tiny = (flat > 0.0) & (flat < _TINY_ARG)
    if np.any(tiny):
        xt = flat[tiny]
        orders = np.arange(n_max + 1)[:, None]
        log_lead = orders * np.log(0.5 * xt)[None, :] - _lgamma_table(n_max)[:, None]
        out[:, tiny] = np.exp(log_lead) * (1.0 - 0.25 * xt * xt / (orders + 1.0))
    rest = ~(zero | tiny)
    xs = flat[rest]
    if xs.size == 0:
        return out.reshape((n_max + 1,) + shape)

    m = _miller_start(n_max, xs.max())
    two_over_x = 2.0 / xs
    j_next = np.zeros_like(xs)
    j_cur = np.ones_like(xs)
    norm = np.zeros_like(xs)
    mant = np.zeros((n_max + 1, xs.size))
    # rescale count at the moment each order was stored
    shift_at = np.zeros((n_max + 1, xs.size), dtype=np.int64)
    shifts = np.zeros(xs.size, dtype=np.int64)
    for k in range(m, 0, -1):
        j_prev = k * two_over_x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        order = k - 1
        if order <= n_max:
            mant[order] = j_cur
            shift_at[order] = shifts
        if order % 2 == 0 and order > 0:
            norm += 2.0 * j_cur
        big = np.abs(j_cur) > _RESCALE
        if np.any(big):
            j_cur[big] /= _RESCALE
            j_next[big] /= _RESCALE
            norm[big] /= _RESCALE
            shifts[big] += 1
    norm += j_cur
    # Orders stored before later rescalings must be scaled down accordingly.
    pending = shifts[None, :] - shift_at
    scaled = np.ldexp(mant, -_RESCALE_EXP * pending.astype(np.int32))
    out[:, rest] = scaled / norm[None, :]
    return out.reshape((n_max + 1,) + shape)


def bessel_remainder_bound(n, x):
    """Upper bound on ``|J_n(x) - x**n / (n! 2**n)|``.

    Taylor remainder with ``M = 1/sqrt(2)``:
    ``(1/sqrt(2)) x**(n+1) / (n+1)!``, evaluated in log form.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0:
        return 0.0
    log_b = (n + 1) * math.log(x) - math.lgamma(n + 2) - 0.5 * math.log(2.0)
    return math.exp(log_b) if log_b < 709.0 else math.inf


def bessel_lowest_order(n, x):
    """Leading Taylor term ``x**n / (n! 2**n)`` of ``J_n(x)``."""
    if x == 0:
        return 1.0 if n == 0 else 0.0
    log_t = n * math.log(0.5 * x) - math.lgamma(n + 1)
    return math.exp(log_t) if log_t < 709.0 else math.inf
