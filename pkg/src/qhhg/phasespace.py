"""Phase-space densities of the driving mode.

Four field kinds are supported:

``coherent``
    exact point mass at ``alpha_L``
``thermal``
    Gaussian P function
``fock``
    Husimi Q of ``|n>`` used as an approximate positive P
``bsv``
    Husimi Q of squeezed vacuum ``S(r)|0>``, likewise

Densities are evaluated in log form so that photon numbers around 1e12 do
not overflow. Quadrature over ``|alpha|`` is composite Gauss-Legendre,
spanning ``mu +- k sigma`` with ``k`` grown until the omitted tail mass is
below a requested tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

KINDS = ("coherent", "thermal", "fock", "bsv")

DEFAULT_RADIAL_NODES = 400
DEFAULT_REL_TAIL = 1e-12
DEFAULT_SPAN = 8.0
MAX_SPAN = 12.0

# Fock orders at or above this use the Stirling-centred log density.
_STIRLING_FROM = 20


@dataclass(frozen=True)
class DrivingField:
    """Single-mode driving field.

    Only the parameter belonging to ``kind`` is meaningful; use the
    constructors below rather than filling fields by hand.
    """

    kind: str
    alpha_abs: float = 0.0
    alpha_phase: float = 0.0
    mean_n: float = 0.0
    n: int = 0
    r: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "coherent" and not (self.alpha_abs >= 0 and math.isfinite(self.alpha_abs)):
            raise ValueError("coherent amplitude must be finite and >= 0")
        if self.kind == "thermal" and not (self.mean_n > 0 and math.isfinite(self.mean_n)):
            raise ValueError("thermal mean photon number must be positive")
        if self.kind == "fock" and (int(self.n) != self.n or self.n < 0):
            raise ValueError("Fock photon number must be a non-negative integer")
        if self.kind == "bsv" and not math.isfinite(self.r):
            raise ValueError("squeezing parameter must be finite")

    @classmethod
    def coherent(cls, alpha_abs, alpha_phase=0.0):
        return cls("coherent", alpha_abs=float(alpha_abs), alpha_phase=float(alpha_phase))

    @classmethod
    def thermal(cls, mean_n):
        return cls("thermal", mean_n=float(mean_n))

    @classmethod
    def fock(cls, n):
        return cls("fock", n=int(n))

    @classmethod
    def bsv(cls, r):
        return cls("bsv", r=float(r))

    @classmethod
    def from_mean_photons(cls, kind, mean_n):
        """Field of the given kind whose nominal photon number is ``mean_n``."""
        if kind == "coherent":
            return cls.coherent(math.sqrt(mean_n))
        if kind == "thermal":
            return cls.thermal(mean_n)
        if kind == "fock":
            return cls.fock(int(round(mean_n)))
        if kind == "bsv":
            return cls.bsv(math.asinh(math.sqrt(mean_n)))
        raise ValueError(f"unknown field kind {kind!r}")

    @property
    def is_point_mass(self):
        return self.kind == "coherent"

    def with_mean_photons(self, mean_n):
        return DrivingField.from_mean_photons(self.kind, mean_n)


def mean_photon_number(field):
    """Nominal photon number of the state (``<a^dag a>`` of the exact state)."""
    if field.kind == "coherent":
        return field.alpha_abs**2
    if field.kind == "thermal":
        return field.mean_n
    if field.kind == "fock":
        return float(field.n)
    return math.sinh(field.r) ** 2


def _require_density(field):
    if field.is_point_mass:
        raise ValueError("coherent field is a point mass; branch on is_point_mass")


def _log_cosh(r):
    r = abs(r)
    return r + math.log1p(math.exp(-2.0 * r)) - math.log(2.0)


def _bsv_variances(r):
    """Quadrature variances ``(s_x^2, s_y^2)`` of the squeezed-vacuum Q."""
    return 0.25 * (1.0 + math.exp(-2.0 * r)), 0.25 * (1.0 + math.exp(2.0 * r))


def _one_minus_tanh(r):
    r = abs(r)
    e = math.exp(-2.0 * r)
    return 2.0 * e / (1.0 + e)


def _fock_log_radial(n, amp):
    with np.errstate(divide="ignore"):
        log_amp = np.log(amp)
    if n < _STIRLING_FROM:
        return math.log(2.0) + (2 * n + 1) * log_amp - amp**2 - math.lgamma(n + 1)
    # Centre on |a|^2 = n: n log(a^2) - a^2 - n log n + n = n (log1p(t) - t)
    t = amp**2 / n - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        core = n * (np.log1p(t) - t)
    stirling_tail = 1.0 / (12.0 * n) - 1.0 / (360.0 * n**3) + 1.0 / (1260.0 * n**5)
    return math.log(2.0) + log_amp + core - 0.5 * math.log(2.0 * math.pi * n) - stirling_tail


def log_radial_density(field, amp):
    """Log of ``P(|a|) = |a| * integral dphi P(a)``; ``-inf`` where it vanishes."""
    _require_density(field)
    amp = np.asarray(amp, dtype=float)
    if np.any(amp < 0):
        raise ValueError("amplitude must be >= 0")
    with np.errstate(divide="ignore"):
        if field.kind == "thermal":
            N = field.mean_n
            out = np.log(2.0 * amp / N) - amp**2 / N
        elif field.kind == "fock":
            out = _fock_log_radial(field.n, amp)
        else:
            tr = abs(math.tanh(field.r))
            kappa = amp**2 * tr
            out = (
                np.log(2.0 * amp)
                - _log_cosh(field.r)
                - amp**2 * _one_minus_tanh(field.r)
                + np.log(special.i0e(kappa))
            )
    out = np.where(amp == 0.0, -np.inf, out)
    return out if out.ndim else float(out)


def radial_density(field, amp):
    """Radial distribution ``P(|a|)``; integrates to one over ``[0, inf)``."""
    return np.exp(log_radial_density(field, amp))


def log_density(field, alpha):
    """Log of the phase-space density at complex ``alpha``."""
    _require_density(field)
    alpha = np.asarray(alpha, dtype=complex)
    if field.kind == "bsv":
        sx2, sy2 = _bsv_variances(field.r)
        x, y = alpha.real, alpha.imag
        out = -math.log(math.pi) - _log_cosh(field.r) - x**2 / (2 * sx2) - y**2 / (2 * sy2)
    else:
        amp = np.abs(alpha)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = log_radial_density(field, amp) - np.log(2.0 * math.pi * amp)
        if field.kind == "thermal":
            out = np.where(amp == 0.0, -math.log(math.pi * field.mean_n), out)
        elif field.n == 0:
            out = np.where(amp == 0.0, -math.log(math.pi), out)
        else:
            out = np.where(amp == 0.0, -np.inf, out)
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def density(field, alpha):
    """P (thermal) or Husimi-as-P (Fock, BSV) density at ``alpha``."""
    return np.exp(log_density(field, alpha))


def analytic_moments(field):
    """Closed-form ``(mu_P, sigma_P)`` of the radial distribution.

    ``sigma_P**2`` is ``integral P |a|^2 - mu_P**2``, i.e. the variance of
    ``|a|`` under the density actually used.
    """
    if field.kind == "coherent":
        return field.alpha_abs, 0.0
    if field.kind == "thermal":
        N = field.mean_n
        return 0.5 * math.sqrt(math.pi * N), math.sqrt(N * (1.0 - math.pi / 4.0))
    if field.kind == "fock":
        n = field.n
        mu = float(special.poch(n + 1, 0.5))
        if n >= 1_000_000:
            var = 0.25 - 1.0 / (32.0 * n) + 1.0 / (128.0 * n**2)
        else:
            var = (n + 1) - mu * mu
        return mu, math.sqrt(max(var, 0.0))
    sx2, sy2 = _bsv_variances(abs(field.r))
    mu = math.sqrt(2.0 / math.pi) * math.sqrt(sy2) * float(special.ellipe(1.0 - sx2 / sy2))
    second = sx2 + sy2
    return mu, math.sqrt(max(second - mu * mu, 0.0))


def second_moment(field):
    """``integral P |a|^2`` in closed form.

    Differs from :func:`mean_photon_number` for the Husimi-based kinds
    (``n + 1`` and ``cosh^2 r``).
    """
    if field.kind == "coherent":
        return field.alpha_abs**2
    if field.kind == "thermal":
        return field.mean_n
    if field.kind == "fock":
        return field.n + 1.0
    return math.cosh(field.r) ** 2


@dataclass(frozen=True)
class RadialGrid:
    """Quadrature over ``|alpha|``; ``weights`` already include ``P(|alpha|)``."""

    nodes: np.ndarray
    weights: np.ndarray
    is_point_mass: bool
    span: float = 0.0
    tail_mass: float = 0.0
    lower: float = 0.0
    upper: float = 0.0

    @property
    def weight_sum(self):
        return math.fsum(self.weights)

    def __len__(self):
        return len(self.nodes)


def _gl_panels(edges, counts):
    xs, ws = [], []
    for (lo, hi), m in zip(zip(edges[:-1], edges[1:]), counts):
        x, w = np.polynomial.legendre.leggauss(int(m))
        half = 0.5 * (hi - lo)
        xs.append(lo + half * (x + 1.0))
        ws.append(half * w)
    return np.concatenate(xs), np.concatenate(ws)


def _panel_layout(field, lower, upper, nodes):
    """Panel edges and node counts for the composite rule."""
    n_main = max(1, min(8, nodes // 48))
    edges = list(np.linspace(lower, upper, n_main + 1))
    counts = [nodes // n_main] * n_main
    counts[-1] += nodes - sum(counts)
    if field.kind == "bsv" and lower == 0.0:
        # Grade the first panel toward zero, where the density has an O(1)
        # wide feature regardless of how large the bulk scale is.
        first_hi = edges[1]
        inner = [0.0]
        h = 1.0
        while h < first_hi / 4.0:
            inner.append(h)
            h *= 4.0
        inner.append(first_hi)
        edges = inner + edges[2:]
        counts = [16] * (len(inner) - 2) + [counts[0]] + counts[1:]
    return edges, counts


def _tail_mass(field, lower, upper):
    """Radial mass outside ``[lower, upper]``, integrated directly."""
    if field.kind == "thermal":
        N = field.mean_n
        return -math.expm1(-(lower**2) / N) + math.exp(-(upper**2) / N)
    if field.kind == "fock":
        k = field.n + 1
        return float(special.gammainc(k, lower**2) + special.gammaincc(k, upper**2))
    mu, sigma = analytic_moments(field)
    f = lambda a: float(radial_density(field, a))
    lo_part = 0.0
    if lower > 0.0:
        pts = [p for p in (1.0, 4.0, 16.0) if p < lower]
        lo_part = integrate.quad(f, 0.0, lower, points=pts or None, limit=200, epsabs=0.0, epsrel=1e-10)[0]
    hi_part = integrate.quad(f, upper, upper + 40.0 * sigma, limit=200, epsabs=0.0, epsrel=1e-10)[0]
    return lo_part + hi_part


def radial_grid(field, rel_tail=DEFAULT_REL_TAIL, nodes=DEFAULT_RADIAL_NODES, span=DEFAULT_SPAN):
    """Radial quadrature for ``field``.

    The interval is ``[max(0, mu - k sigma), mu + k sigma]`` with ``k``
    starting at ``span`` and raised in steps of 0.5 until the omitted mass
    is below ``rel_tail``.

    Raises
    ------
    ValueError
        If the tail condition needs ``k > 12`` or the arguments are invalid.
    """
    if field.is_point_mass:
        return RadialGrid(
            nodes=np.array([field.alpha_abs]),
            weights=np.array([1.0]),
            is_point_mass=True,
            lower=field.alpha_abs,
            upper=field.alpha_abs,
        )
    if nodes < 16:
        raise ValueError("at least 16 radial nodes are required")
    if not 0.0 < rel_tail < 1.0:
        raise ValueError("rel_tail must lie in (0, 1)")
    mu, sigma = analytic_moments(field)
    k = span
    while True:
        lower = max(0.0, mu - k * sigma)
        upper = mu + k * sigma
        tail = _tail_mass(field, lower, upper)
        if tail < rel_tail:
            break
        k += 0.5
        if k > MAX_SPAN + 1e-9:
            raise ValueError(
                f"tail mass {tail:.3g} exceeds rel_tail={rel_tail:g} even at k={MAX_SPAN}"
            )
    edges, counts = _panel_layout(field, lower, upper, nodes)
    x, w = _gl_panels(edges, counts)
    weights = w * radial_density(field, x)
    return RadialGrid(
        nodes=x,
        weights=weights,
        is_point_mass=False,
        span=k,
        tail_mass=tail,
        lower=lower,
        upper=upper,
    )


def log_radial_moment(field, power, grid=None):
    """Log of ``integral P(|a|) |a|**power d|a|`` by radial quadrature."""
    if field.is_point_mass:
        if field.alpha_abs == 0.0:
            return 0.0 if power == 0 else -math.inf
        return power * math.log(field.alpha_abs)
    grid = grid or radial_grid(field)
    with np.errstate(divide="ignore"):
        terms = np.log(grid.weights) + power * np.log(grid.nodes)
    value = float(special.logsumexp(terms))
    if not math.isfinite(value):
        raise ArithmeticError(f"radial moment of order {power} is not finite")
    return value


def moments(field, grid=None):
    """``(mu_P, sigma_P)`` from the radial quadrature.

    The variance is accumulated about the analytic centre, which keeps the
    subtraction benign when ``sigma_P << mu_P``.
    """
    if field.is_point_mass:
        return field.alpha_abs, 0.0
    grid = grid or radial_grid(field)
    centre, _ = analytic_moments(field)
    w = grid.weights
    norm = math.fsum(w)
    d = grid.nodes - centre
    shift = math.fsum(w * d) / norm
    var = math.fsum(w * d * d) / norm - shift * shift
    if var < -1e-10 * max(centre * centre, 1.0):
        raise ArithmeticError(f"negative variance {var:g}: quadrature failure")
    return centre + shift, math.sqrt(max(var, 0.0))


def correlation_g(field, order, grid=None):
    """Normalised correlation ``g^(n)(0) = M_n / M_1**n`` with ``M_k = <|a|^2k>``."""
    if int(order) != order or order < 1:
        raise ValueError("order must be a positive integer")
    return math.exp(log_correlation_g(field, order, grid))


def log_correlation_g(field, order, grid=None):
    if field.is_point_mass:
        return 0.0
    grid = grid or radial_grid(field)
    log_mn = log_radial_moment(field, 2 * order, grid) - log_radial_moment(field, 0, grid)
    log_m1 = log_radial_moment(field, 2, grid) - log_radial_moment(field, 0, grid)
    value = log_mn - order * log_m1
    if not math.isfinite(value):
        raise ArithmeticError("non-finite correlation function")
    return value


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Flattened 2-D nodes ``(|alpha|, phase)`` with weights summing to ~1."""

    amp: np.ndarray
    phase: np.ndarray
    weights: np.ndarray
    radial: RadialGrid

    def __len__(self):
        return len(self.amp)


# Concentration above which BSV phase nodes switch from uniform to
# mode-centred Gauss-Hermite.
_UNIFORM_KAPPA_LIMIT = 20.0
_HERMITE_NODES = 20


def _bsv_phase_nodes(kappa, n_uniform):
    """Nodes and normalised weights for ``exp(-kappa cos 2phi)`` on the circle."""
    if abs(kappa) <= _UNIFORM_KAPPA_LIMIT:
        phi = 2.0 * math.pi * np.arange(n_uniform) / n_uniform
        w = np.exp(-kappa * np.cos(2.0 * phi) - abs(kappa))
        return phi, w / math.fsum(w)
    # phi = mode + delta, s = sqrt(2 kappa) sin(delta) turns the factor
    # exp(-2 kappa sin^2 delta) into exp(-s^2) exactly.
    k = abs(kappa)
    s, ws = special.roots_hermite(_HERMITE_NODES)
    scale = math.sqrt(2.0 * k)
    keep = np.abs(s) < scale
    s, ws = s[keep], ws[keep]
    delta = np.arcsin(s / scale)
    wd = ws / (scale * np.cos(delta))
    first = 0.5 * math.pi if kappa > 0 else 0.0
    phi = np.concatenate([first + delta, first + math.pi + delta])
    w = np.concatenate([wd, wd])
    return np.mod(phi, 2.0 * math.pi), w / math.fsum(w)


def phase_space_grid(field, radial=None, angular_nodes=64):
    """Tensor-like grid over amplitude and phase for phase-sensitive averages.

    Phase-independent densities get ``angular_nodes`` uniform phases. For
    squeezed vacuum each radial node carries phase nodes adapted to its
    conditional phase distribution.
    """
    if angular_nodes < 2 or angular_nodes % 2:
        raise ValueError("angular_nodes must be an even integer >= 2")
    radial = radial or radial_grid(field)
    if field.is_point_mass:
        return PhaseSpaceGrid(
            amp=radial.nodes.copy(),
            phase=np.array([field.alpha_phase]),
            weights=np.array([1.0]),
            radial=radial,
        )
    if field.kind in ("thermal", "fock"):
        phi = 2.0 * math.pi * np.arange(angular_nodes) / angular_nodes
        amp = np.repeat(radial.nodes, angular_nodes)
        phase = np.tile(phi, len(radial.nodes))
        weights = np.repeat(radial.weights / angular_nodes, angular_nodes)
        return PhaseSpaceGrid(amp, phase, weights, radial)
    tr = math.tanh(field.r)
    amps, phases, weights = [], [], []
    for a, w in zip(radial.nodes, radial.weights):
        phi, pw = _bsv_phase_nodes(a * a * tr, angular_nodes)
        amps.append(np.full(len(phi), a))
        phases.append(phi)
        weights.append(w * pw)
    return PhaseSpaceGrid(np.concatenate(amps), np.concatenate(phases), np.concatenate(weights), radial)


def bsv_radial_density_trapezoid(field, amp, angular_nodes=256):
    """BSV radial density by periodic trapezoid over the phase.

    Cross-check for the closed form; only resolves the phase ridge while
    ``|a|^2 tanh r`` stays moderate.
    """
    if field.kind != "bsv":
        raise ValueError("only defined for squeezed vacuum")
    amp = np.atleast_1d(np.asarray(amp, dtype=float))
    phi = 2.0 * math.pi * np.arange(angular_nodes) / angular_nodes
    alpha = amp[:, None] * np.exp(1j * phi[None, :])
    vals = density(field, alpha)
    out = amp * vals.sum(axis=1) * (2.0 * math.pi / angular_nodes)
    return out
