"""Radial special functions for the oscillatory biharmonic Green's function.

The velocity kernels of the oscillatory Stokes equation are built from

    g(r) = (1/k^2) * ( log(r)/(2 pi) + (i/4) H0^(1)(k r) ),

the Green's function of Delta (Delta + k^2) in the plane, and its radial
derivatives through third order.  For small k*r the Laplace log and the
log hidden inside Y0 cancel; evaluating the two parts separately loses all
accuracy, so the small-argument branch sums a fused ascending series of the
combination instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

EULER_GAMMA = 0.5772156649015328606065

# |k r| below which the fused ascending series is used.  25 terms give
# ~1e-15 there; the direct Hankel branch is accurate above it.
SERIES_SWITCH = 1.0
SERIES_TERMS = 25


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


def bessel_j(n: int, x):
    """Bessel function J_n(x) for n in {0, 1, 2} and real x >= 0."""
    if n not in (0, 1, 2):
        raise DomainError(f"bessel_j supports orders 0, 1, 2, got {n}")
    return _sp.jv(n, x)


def hankel1(n: int, x):
    """Hankel function of the first kind H_n^(1)(x) for n in {0, 1}, x > 0.

    Diverges logarithmically (n=0) or like 1/x (n=1) as x -> 0+, so
    nonpositive arguments are rejected.
    """
    if n not in (0, 1):
        raise DomainError(f"hankel1 supports orders 0 and 1, got {n}")
    x = np.asarray(x)
    if np.any(np.real(x) <= 0) and np.any(np.imag(x) == 0):
        if np.any((np.real(x) <= 0) & (np.imag(x) == 0)):
            raise DomainError("hankel1 requires x > 0")
    return _sp.hankel1(n, x)


@dataclass(frozen=True)
class RadialKernelValues:
    """g(r) = G^BH at distance r and its first three r-derivatives.

    g0 carries dimension length^2 (times the dimensionless log/Hankel
    combination scaled by 1/k^2); each derivative drops one power of length.
    h0, h1 are the raw Hankel values H0^(1)(kr), H1^(1)(kr).
    """

    g0: complex
    g1: complex
    g2: complex
    g3: complex
    h0: complex
    h1: complex


@dataclass(frozen=True)
class RadialCombos:
    """Radial coefficient functions entering the kernel chain rule.

    With d = x - y, r = |d| and g the radial Green's function:

        grad_i grad_j g           = a2 * d_i d_j + b1 * delta_ij
        Delta g                   = lap
        grad_l (Delta g)          = c3 * d_l
        grad_i grad_j grad_l g    = a3 * d_i d_j d_l
                                    + a2 * (delta_ij d_l + delta_il d_j
                                            + delta_jl d_i)

    Fields are arrays over the input distances (None when not requested).
    Each combination is evaluated branch-wise so that no catastrophic
    cancellation occurs as r -> 0 (the individual derivatives grow like
    log r or faster while several of these combinations stay bounded
    relative to their kernel contractions).
    """

    b1: np.ndarray | None = None
    a2: np.ndarray | None = None
    lap: np.ndarray | None = None
    c3: np.ndarray | None = None
    a3: np.ndarray | None = None
    g0: np.ndarray | None = None
    h0: np.ndarray | None = None
    h1: np.ndarray | None = None


ALL_COMBOS = ("b1", "a2", "lap", "c3", "a3", "g0")

# Bessel order J_n entering each combination's smooth part
_J_ORDER = {"g0": 0, "b1": 1, "lap": 0, "a2": 2, "c3": 1, "a3": 3}


def _check_k(k: complex) -> complex:
    k = complex(k)
    if k == 0:
        raise DomainError("k = 0 is outside the oscillatory regime")
    if k.imag < 0:
        raise DomainError("Im k must be >= 0")
    return k


def radial_combos(
    k: complex,
    r: np.ndarray,
    needs: tuple = ALL_COMBOS,
    with_hankel: bool = False,
) -> RadialCombos:
    """Evaluate the requested radial kernel combinations at distances r > 0."""
    k = _check_k(k)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r must be positive")

    z = k * r
    small = np.abs(z) < SERIES_SWITCH
    large = ~small

    out = {name: np.empty(r.shape, dtype=complex) for name in needs}

    if with_hankel:
        out["h0"] = _sp.hankel1(0, z)
        out["h1"] = _sp.hankel1(1, z)

    if np.any(large):
        h0 = out["h0"][large] if with_hankel else _sp.hankel1(0, z[large])
        h1 = out["h1"][large] if with_hankel else _sp.hankel1(1, z[large])
        _direct_branch(k, r[large], h0, h1, out, large, needs)
    if np.any(small):
        _series_branch(k, r[small], out, small, needs)

    return RadialCombos(**out)


def _direct_branch(k, r, h0, h1, out, idx, needs):
    # Laplace part prefactor 1/(2 pi k^2); Hankel part prefactor i/(4 k^2).
    pl = 1.0 / (2.0 * np.pi * k * k)
    ph = 0.25j / (k * k)
    z = k * r
    k2, k4, k6 = k * k, k**4, k**6

    if "g0" in needs:
        out["g0"][idx] = pl * np.log(r) + ph * h0
    if "b1" in needs:
        out["b1"][idx] = pl / r**2 - ph * k2 * h1 / z
    if "lap" in needs:
        out["lap"][idx] = -ph * k2 * h0
    if "c3" in needs:
        out["c3"][idx] = ph * k4 * h1 / z
    if "a2" in needs or "a3" in needs:
        h2 = 2.0 * h1 / z - h0
        if "a2" in needs:
            out["a2"][idx] = -2.0 * pl / r**4 + ph * k4 * h2 / z**2
        if "a3" in needs:
            h3 = 4.0 * h2 / z - h1
            out["a3"][idx] = 8.0 * pl / r**6 - ph * k6 * h3 / z**3


def _series_branch(k, r, out, idx, needs):
    # Fused series of  log(r)/(2 pi) + (i/4) H0(kr):
    #   k^2 g(r) = c J0(kr) + (1/2pi) sum_{m>=1} a_m r^{2m} (log r - h_m),
    # with c = i/4 - (log(k/2) + gamma)/(2 pi),
    #      a_m = (-1)^{m+1} (k/2)^{2m} / (m!)^2,  h_m = 1 + 1/2 + ... + 1/m.
    # Each derivative combination is summed term-wise, so the cancellation
    # between the Laplace and Helmholtz logs is exact by construction.
    z = k * r
    inv_k2 = 1.0 / (k * k)
    c = 0.25j - (np.log(k / 2.0) + EULER_GAMMA) / (2.0 * np.pi)
    two_pi_inv = 1.0 / (2.0 * np.pi)

    L = np.log(r)
    m = np.arange(1, SERIES_TERMS + 1)
    # a_m via cumulative products to avoid overflow in factorials.
    ratio = -(k / 2.0) ** 2 / m**2
    a = -np.cumprod(ratio)  # a_1 = (k/2)^2, alternating afterwards
    h = np.cumsum(1.0 / m)
    p = (2 * m).astype(float)

    # powers r^{2m} shared by all combinations; shifted powers come from
    # dividing by r^2 etc.  Each combination is two matvecs against P.
    r2 = r * r
    P = np.empty((r.size, SERIES_TERMS), dtype=r2.dtype)
    P[:, 0] = r2
    for i in range(1, SERIES_TERMS):
        P[:, i] = P[:, i - 1] * r2
    inv_r2 = 1.0 / r2

    def term_sum(alpha, beta, shift):
        # sum_m a_m (alpha_m (log r - h_m) + beta_m) r^{2m - shift}
        s = L * (P @ (a * alpha)) + P @ (a * (beta - alpha * h))
        for _ in range(shift // 2):
            s = s * inv_r2
        return two_pi_inv * s

    one = np.ones_like(p)
    # term-wise (alpha, beta, power shift) per combination
    series = {
        "g0": (one, 0.0 * one, 0),
        "b1": (p, one, 2),
        "lap": (p**2, 2 * p, 2),
        "a2": (p * (p - 2), 2 * p - 2, 4),
        # c3: derivative of lap divided by r, term-wise
        "c3": (p**2 * (p - 2), p**2 + 2 * p * (p - 2), 4),
        # a3: derivative of a2 divided by r, term-wise
        "a3": (p * (p - 2) * (p - 4), p * (p - 2) + (2 * p - 2) * (p - 4), 6),
    }
    # smooth part: c times a Bessel expression per combination
    js = {n: _sp.jv(n, z) for n in {_J_ORDER[name] for name in needs}}
    k2, k4, k6 = k * k, k**4, k**6
    smooth = {
        "g0": lambda: js[0],
        "b1": lambda: -k2 * js[1] / z,
        "lap": lambda: -k2 * js[0],
        "a2": lambda: k4 * js[2] / z**2,
        "c3": lambda: k4 * js[1] / z,
        "a3": lambda: -k6 * js[3] / z**3,
    }
    for name in needs:
        out[name][idx] = inv_k2 * (
            c * smooth[name]() + term_sum(*series[name])
        )


def gbh_radial(k: complex, r: float) -> RadialKernelValues:
    """Oscillatory biharmonic Green's function and r-derivatives at r > 0.

    The first three radial derivatives are reconstructed from the
    cancellation-free combinations; the raw Hankel values ride along.
    """
    combos = radial_combos(k, np.asarray([float(r)]), with_hankel=True)
    rr = float(r)
    g1 = combos.b1[0] * rr
    g2 = combos.a2[0] * rr * rr + combos.b1[0]
    g3 = combos.a3[0] * rr**3 + 3.0 * combos.a2[0] * rr
    return RadialKernelValues(
        g0=complex(combos.g0[0]),
        g1=complex(g1),
        g2=complex(g2),
        g3=complex(g3),
        h0=complex(combos.h0[0]),
        h1=complex(combos.h1[0]),
    )
