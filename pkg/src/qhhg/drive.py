"""Classical drive and intraband current.

The vector potential is ``A(t) = env(t) * 2 g0 |a| / sqrt(w0) * sin(w0 t - phi)``
with a flat-top envelope and ``sin^2`` ramps. The current of the occupied
band follows from ``j = -2a sum_l C_l sin(a l A)``, and its second time
derivative is formed analytically by the chain rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .band import c_coefficients

ENVELOPES = ("flat_top_sin2", "none")

# Evaluate at most this many (node, time) pairs at once.
_CHUNK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class PulseSpec:
    """Carrier, coupling and envelope of the drive.

    With ``envelope_kind="none"`` the field has constant amplitude over the
    whole ``(2 ramp + flat)`` cycle span, which is the Floquet limit.
    """

    omega0: float = 0.005
    g0: float = 4e-8
    flat_cycles: int = 10
    ramp_cycles: int = 3
    envelope_kind: str = "flat_top_sin2"

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError("omega0 must be positive")
        if self.g0 < 0:
            raise ValueError("g0 must be non-negative")
        for name in ("flat_cycles", "ramp_cycles"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a non-negative integer")
        if self.envelope_kind not in ENVELOPES:
            raise ValueError(f"envelope_kind must be one of {ENVELOPES}")
        if self.cycles < 1:
            raise ValueError("pulse must contain at least one cycle")

    @property
    def period(self):
        return 2.0 * math.pi / self.omega0

    @property
    def cycles(self):
        return 2 * self.ramp_cycles + self.flat_cycles

    @property
    def duration(self):
        return self.cycles * self.period

    @property
    def ramp_time(self):
        return self.ramp_cycles * self.period

    def amplitude(self, amp):
        """Peak vector potential ``2 g0 |a| / sqrt(w0)``."""
        return 2.0 * self.g0 * amp / math.sqrt(self.omega0)

    def flat_top(self):
        """``(start, end)`` of the constant-amplitude part."""
        if self.envelope_kind == "none":
            return 0.0, self.duration
        return self.ramp_time, self.duration - self.ramp_time


@dataclass(frozen=True)
class TimeGrid:
    """Uniform samples ``t_start + k dt`` for ``k = 0..n_intervals``."""

    t_start: float
    t_end: float
    samples_per_cycle: int
    times: np.ndarray

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])

    @property
    def n_intervals(self):
        return len(self.times) - 1


def time_grid(pulse, samples_per_cycle=512):
    """Grid spanning the whole pulse, both end points included."""
    if int(samples_per_cycle) != samples_per_cycle or samples_per_cycle < 64:
        raise ValueError("samples_per_cycle must be an integer >= 64")
    n = pulse.cycles * int(samples_per_cycle)
    times = np.arange(n + 1) * (pulse.duration / n)
    return TimeGrid(0.0, pulse.duration, int(samples_per_cycle), times)


@dataclass(frozen=True)
class CurrentTrace:
    grid: TimeGrid
    j: np.ndarray
    d2j: np.ndarray | None = None


def envelope_derivatives(pulse, t):
    """Envelope and its first two derivatives at ``t``."""
    t = np.asarray(t, dtype=float)
    env = np.zeros_like(t)
    d1 = np.zeros_like(t)
    d2 = np.zeros_like(t)
    T = pulse.duration
    inside = (t >= 0.0) & (t <= T)
    if pulse.envelope_kind == "none" or pulse.ramp_cycles == 0:
        env[inside] = 1.0
        return env, d1, d2
    tr = pulse.ramp_time
    k = math.pi / (2.0 * tr)
    up = inside & (t < tr)
    down = inside & (t > T - tr)
    flat = inside & ~up & ~down
    env[flat] = 1.0
    s = t[up]
    env[up] = np.sin(k * s) ** 2
    d1[up] = k * np.sin(2.0 * k * s)
    d2[up] = 2.0 * k * k * np.cos(2.0 * k * s)
    s = T - t[down]
    env[down] = np.sin(k * s) ** 2
    d1[down] = -k * np.sin(2.0 * k * s)
    d2[down] = 2.0 * k * k * np.cos(2.0 * k * s)
    return env, d1, d2


def envelope(pulse, t):
    """Envelope value in ``[0, 1]``; zero outside the pulse."""
    env = envelope_derivatives(pulse, t)[0]
    return env if env.ndim else float(env)


def vector_potential(pulse, amp, phase, t, derivatives=False):
    """``A(t)``, optionally with analytic ``A'(t)`` and ``A''(t)``.

    ``amp`` and ``phase`` may be arrays broadcasting against ``t``.
    """
    if np.any(np.asarray(amp) < 0):
        raise ValueError("amplitude must be >= 0")
    env, e1, e2 = envelope_derivatives(pulse, t)
    w = pulse.omega0
    a0 = pulse.amplitude(np.asarray(amp, dtype=float))
    arg = w * np.asarray(t) - np.asarray(phase)
    s, c = np.sin(arg), np.cos(arg)
    A = a0 * env * s
    if not derivatives:
        return A
    dA = a0 * (e1 * s + w * env * c)
    d2A = a0 * (e2 * s + 2.0 * w * e1 * c - w * w * env * s)
    return A, dA, d2A


def _response(band, pulse, amp, phase, t, with_accel):
    """Current (and acceleration) for 1-D arrays of nodes against times."""
    amp = np.atleast_1d(np.asarray(amp, dtype=float))
    phase = np.broadcast_to(np.atleast_1d(np.asarray(phase, dtype=float)), amp.shape)
    c = c_coefficients(band)
    ls = np.arange(1, len(c) + 1)
    active = [(l, cl) for l, cl in zip(ls, c) if cl != 0.0]
    j = np.zeros((amp.size, t.size))
    d2j = np.zeros_like(j) if with_accel else None
    step = max(1, _CHUNK_ELEMENTS // max(t.size, 1))
    pref = -2.0 * band.a
    # The envelope and carrier depend on t only; the phase enters through
    # sin(wt - phi) = sin(wt) cos(phi) - cos(wt) sin(phi).
    env, e1, e2 = envelope_derivatives(pulse, t)
    w = pulse.omega0
    swt, cwt = np.sin(w * t), np.cos(w * t)
    for lo in range(0, amp.size, step):
        sl = slice(lo, lo + step)
        a0 = pulse.amplitude(amp[sl])[:, None]
        cp, sp = np.cos(phase[sl])[:, None], np.sin(phase[sl])[:, None]
        s = swt * cp - cwt * sp
        c = cwt * cp + swt * sp
        A = a0 * env * s
        dA = a0 * (e1 * s + w * env * c)
        d2A = a0 * (e2 * s + 2.0 * w * e1 * c - w * w * env * s)
        # sin/cos(a l A) for all l by angle addition from l = 1
        x1 = band.a * A
        s1, c1 = np.sin(x1), np.cos(x1)
        sl_, cl_ = s1, c1
        level = 1
        for l, cl in active:
            while level < l:
                sl_, cl_ = sl_ * c1 + cl_ * s1, cl_ * c1 - sl_ * s1
                level += 1
            j[sl] += pref * cl * sl_
            if with_accel:
                al = band.a * l
                d2j[sl] += pref * cl * (-((al * dA) ** 2) * sl_ + al * d2A * cl_)
    return j, d2j


def current(band, pulse, amp, phase, grid):
    """Intraband current on ``grid`` for one field amplitude and phase."""
    j, _ = _response(band, pulse, amp, phase, grid.times, False)
    return CurrentTrace(grid=grid, j=j[0])


def current_accel(band, pulse, amp, phase, grid):
    """Current together with its analytic second time derivative."""
    j, d2j = _response(band, pulse, amp, phase, grid.times, True)
    return CurrentTrace(grid=grid, j=j[0], d2j=d2j[0])


def current_batch(band, pulse, amps, phases, grid, with_accel=False):
    """Currents for many ``(amp, phase)`` nodes at once, shape ``(nodes, times)``."""
    return _response(band, pulse, amps, phases, grid.times, with_accel)
