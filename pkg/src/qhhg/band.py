"""One-dimensional single-band crystal.

The band is a cosine series ``eps(q) = sum_l b_l cos(a l q)``. Occupied
states are held as an explicit list of crystal momenta, with a spin factor
applied on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# ZnO-like band in atomic units
ZNO_LATTICE = 5.32
ZNO_COEFFS = (-0.0814, -0.0024, -0.0048, -0.0003, -0.0009)


@dataclass(frozen=True)
class BandModel:
    """Single band with Fourier coefficients ``b[l-1]`` for ``l = 1..l_max``.

    Parameters
    ----------
    a : float
        Lattice constant in bohr.
    b : tuple of float
        Band coefficients in hartree.
    occupied_q : tuple of float
        Occupied crystal momenta; must be symmetric about zero and inside
        the first Brillouin zone.
    spin_degeneracy : int
    """

    a: float
    b: tuple
    occupied_q: tuple
    spin_degeneracy: int = 2
    _cos_sums: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "occupied_q", tuple(float(q) for q in self.occupied_q))
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError(f"lattice constant must be positive, got {self.a}")
        if len(self.b) < 1:
            raise ValueError("at least one band coefficient is required")
        if not all(math.isfinite(v) for v in self.b):
            raise ValueError("band coefficients must be finite")
        if int(self.spin_degeneracy) != self.spin_degeneracy or self.spin_degeneracy < 1:
            raise ValueError("spin_degeneracy must be a positive integer")
        zone = math.pi / self.a
        tol = 1e-12 * max(1.0, zone)
        for q in self.occupied_q:
            if not math.isfinite(q) or abs(q) > zone + tol:
                raise ValueError(f"occupied momentum {q} outside the first Brillouin zone")
            if not any(abs(p + q) <= tol for p in self.occupied_q):
                raise ValueError(f"occupied set is not symmetric: -{q} missing")
        sums = tuple(self._cos_sum(l) for l in range(len(self.b) + 1))
        object.__setattr__(self, "_cos_sums", sums)

    def _cos_sum(self, l):
        q = np.asarray(self.occupied_q)
        total = math.fsum(np.cos(self.a * l * q))
        # exact cancellations (e.g. l = 2 on the default set) leave ulp residue
        if abs(total) < 16 * np.finfo(float).eps * max(len(q), 1):
            total = 0.0
        return float(self.spin_degeneracy * total)

    @property
    def l_max(self):
        """Highest harmonic index with a nonzero coefficient."""
        nz = [l for l, v in enumerate(self.b, start=1) if v != 0.0]
        if not nz:
            raise ValueError("band has no nonzero coefficient")
        return nz[-1]

    @property
    def electron_count(self):
        return self.spin_degeneracy * len(self.occupied_q)


def symmetric_occupation(a, states=5):
    """Momenta ``{0, +-dq, +-2dq, ...}`` with ``dq = 2 pi / (10 a)``.

    ``states`` must be odd; the default gives five momenta, i.e. ten
    electrons with spin.
    """
    if states < 1 or states % 2 == 0:
        raise ValueError("states must be a positive odd integer")
    dq = 2.0 * math.pi / (10.0 * a)
    half = states // 2
    return tuple(k * dq for k in range(-half, half + 1))


def zno(spin_degeneracy=2):
    """The ZnO-like band with its default five-momentum occupation."""
    return BandModel(
        a=ZNO_LATTICE,
        b=ZNO_COEFFS,
        occupied_q=symmetric_occupation(ZNO_LATTICE),
        spin_degeneracy=spin_degeneracy,
    )


def dispersion(band, q):
    """Band energy ``sum_l b_l cos(a l q)`` in hartree (accepts arrays)."""
    q = np.asarray(q, dtype=float)
    out = np.zeros_like(q)
    for l, bl in enumerate(band.b, start=1):
        out = out + bl * np.cos(band.a * l * q)
    return out if out.ndim else float(out)


def occupied_cos_sum(band, l):
    """``spin * sum_q cos(a l q)`` over the occupied momenta."""
    if int(l) != l or l < 0:
        raise ValueError(f"l must be a non-negative integer, got {l}")
    l = int(l)
    if l < len(band._cos_sums):
        return band._cos_sums[l]
    return band._cos_sum(l)


def c_coefficient(band, l):
    """Geometric coefficient ``C_l = l b_l S_l``."""
    if int(l) != l or l < 1 or l > len(band.b):
        raise ValueError(f"l must lie in 1..{len(band.b)}, got {l}")
    l = int(l)
    return l * band.b[l - 1] * occupied_cos_sum(band, l)


def c_coefficients(band):
    """Array of all ``C_l`` for ``l = 1..len(b)``."""
    return np.array([c_coefficient(band, l) for l in range(1, len(band.b) + 1)])


def log_k_constant(band, n):
    """Natural log of ``K_n = (sum_l l**n C_l)**2``; ``-inf`` when it vanishes.

    The sum is rescaled by the largest ``l**n |C_l|`` so that large ``n`` does
    not overflow.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    c = c_coefficients(band)
    ls = np.arange(1, len(c) + 1, dtype=float)
    mask = c != 0.0
    if not np.any(mask):
        return -math.inf
    logs = n * np.log(ls[mask]) + np.log(np.abs(c[mask]))
    top = logs.max()
    terms = np.sign(c[mask]) * np.exp(logs - top)
    s = math.fsum(terms)
    if s == 0.0:
        return -math.inf
    return 2.0 * (top + math.log(abs(s)))


def k_constant(band, n):
    """Geometric constant ``K_n``."""
    log_k = log_k_constant(band, n)
    if log_k == -math.inf:
        return 0.0
    value = math.exp(log_k) if log_k < 709.7 else math.inf
    if not math.isfinite(value):
        raise OverflowError(f"K_{n} overflows double precision; use log_k_constant")
    return value


def lattice_coupling(band, g0, omega0):
    """Dimensionless Bessel-argument scale ``2 a g0 / sqrt(omega0)``."""
    if omega0 <= 0:
        raise ValueError("omega0 must be positive")
    if g0 < 0:
        raise ValueError("g0 must be non-negative")
    return 2.0 * band.a * g0 / math.sqrt(omega0)
