"""Pointwise oscillatory Stokes kernels.

The velocity tensor (oscillatory Stokeslet), the stress tensor of a
Stokeslet field (stresslet), the double-layer kernel obtained by
contracting the stresslet with the source normal, and the rank-one
null-space correction along the boundary normal field.

All tensors are functions of d = x - y alone and are assembled from the
radial combinations in `special.radial_combos` via fixed chain-rule
tables; no per-call symbolic differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import BoundaryPanels
from .special import radial_combos

TWO_PI = 2.0 * np.pi

# A Kernel2x2 is a complex ndarray of shape (2, 2) mapping a source density
# vector to a velocity contribution.
Kernel2x2 = np.ndarray


class SingularityError(ValueError):
    """Kernel evaluated at coincident source and target."""


@dataclass(frozen=True)
class KernelContext:
    """Frequency, combined-field coupling, and formulation selector."""

    k: complex
    eta: float = 1.0
    formulation: str = "double_layer"  # | "combined_field"

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("k must be nonzero")
        if complex(self.k).imag < 0:
            raise ValueError("Im k must be >= 0")
        if self.formulation not in ("double_layer", "combined_field"):
            raise ValueError(f"unknown formulation {self.formulation!r}")
        if self.formulation == "combined_field" and not self.eta > 0:
            raise ValueError("combined_field requires eta > 0")


def _split(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    r = float(np.hypot(d[0], d[1]))
    if r == 0.0:
        raise SingularityError("x == y")
    return d, r


# ---------------------------------------------------------------------------
# batch kernel assembly (shared by the pointwise API and the quadrature)


_NEEDS = {"single": ("b1", "a2"), "double": ("a2", "c3", "a3")}


def stokeslet_batch(k: complex, d: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Velocity tensor G at displacements d (n, 2), |d| = r; returns (n,2,2).

    G = -I Delta g + grad grad g with g the oscillatory biharmonic kernel,
    which reduces to G_ij = a2 (d_i d_j - r^2 delta_ij) - b1 delta_ij.
    """
    c = radial_combos(k, r, needs=_NEEDS["single"])
    return stokeslet_from_combos(c, d, r)


def stokeslet_from_combos(c, d, r):
    out = np.empty(r.shape + (2, 2), dtype=complex)
    g2 = c.a2 * r * r + c.b1  # second radial derivative
    out[..., 0, 0] = c.a2 * d[..., 0] * d[..., 0] - g2
    out[..., 1, 1] = c.a2 * d[..., 1] * d[..., 1] - g2
    out[..., 0, 1] = c.a2 * d[..., 0] * d[..., 1]
    out[..., 1, 0] = out[..., 0, 1]
    return out


def stresslet_contract_from_combos(c, d, r, v):
    """(T v)_ij = T_ijl v_l: stress tensor of a Stokeslet field contracted on
    the stress index.  v broadcasts against d (shape (..., 2))."""
    dv = d[..., 0] * v[..., 0] + d[..., 1] * v[..., 1]
    lapl_grad = 2.0 * c.a2 - c.c3
    cauchy = 2.0 * c.a2 - 1.0 / (TWO_PI * r * r)
    out = np.empty(r.shape + (2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            out[..., i, j] = (
                lapl_grad * (dv * (i == j) + d[..., i] * v[..., j])
                + cauchy * d[..., j] * v[..., i]
                + 2.0 * c.a3 * dv * d[..., i] * d[..., j]
            )
    return out


def double_layer_batch(k, d, r, nu_src):
    c = radial_combos(k, r, needs=_NEEDS["double"])
    return double_layer_from_combos(c, d, r, nu_src)


def double_layer_from_combos(c, d, r, nu_src):
    """Double-layer kernel: transpose of the stresslet contracted with the
    source normal, with the stresslet oriented source-to-target (odd in d).

    This is the orientation under which the representation identity
    S[traction] - D[velocity] = velocity holds inside the domain together
    with the jump relations +-mu/2 (verified against finite-difference
    oracles)."""
    t = stresslet_contract_from_combos(c, d, r, nu_src)
    return -np.swapaxes(t, -1, -2)


def kernel_matrices(k, d, r, nu_src, kinds) -> dict:
    """Evaluate the requested layer kernels at once on shared radial values.

    kinds is an iterable drawn from {"single", "double"}; returns a dict of
    (n, 2, 2) arrays.
    """
    needs = tuple({name for kind in kinds for name in _NEEDS[kind]})
    c = radial_combos(k, r, needs=needs)
    out = {}
    for kind in kinds:
        if kind == "single":
            out[kind] = stokeslet_from_combos(c, d, r)
        elif kind == "double":
            out[kind] = double_layer_from_combos(c, d, r, nu_src)
        else:
            raise ValueError(f"unknown kernel kind {kind!r}")
    return out


# ---------------------------------------------------------------------------
# pointwise API


def stokeslet(ctx: KernelContext, x, y) -> Kernel2x2:
    """Oscillatory Stokeslet G(x, y); symmetric, function of x - y only."""
    d, r = _split(x, y)
    return stokeslet_batch(ctx.k, d[None, :], np.array([r]))[0]


def stresslet_normal(ctx: KernelContext, x, y, nu_y) -> Kernel2x2:
    """Double-layer kernel (T_{.,.,l}(x,y) nu_l(y))^T."""
    d, r = _split(x, y)
    nu = np.asarray(nu_y, dtype=float)
    return double_layer_batch(ctx.k, d[None, :], np.array([r]), nu[None, :])[0]


def stresslet_contract(ctx: KernelContext, x, y, v) -> Kernel2x2:
    """T_{ijl}(x, y) v_l.

    With v = nu(x) this is the traction kernel: the surface stress of the
    Stokeslet field (u, p) = (G f, grad G^L . f) is sigma . nu(x) =
    stresslet_contract(ctx, x, y, nu(x)) @ f.
    """
    d, r = _split(x, y)
    v = np.asarray(v, dtype=float)
    c = radial_combos(ctx.k, np.array([r]), needs=_NEEDS["double"])
    return stresslet_contract_from_combos(c, d[None, :], np.array([r]), v[None, :])[0]


def stokeslet_pressure(ctx: KernelContext, x, y) -> np.ndarray:
    """Pressure kernel of the Stokeslet: grad_x G^L(x, y), a 2-vector.

    The Stokeslet pair is (u, p) = (G f, stokeslet_pressure . f); the
    stresslet's pressure contribution is its -grad G^L delta term.
    """
    d, r = _split(x, y)
    return d / (TWO_PI * r * r)


def w_apply(panels: BoundaryPanels, mu: np.ndarray) -> np.ndarray:
    """Rank-one null-space correction along the normal field.

    W[mu](x) = nu(x) (1/|Gamma|) integral nu(y) . mu(y) dS(y), discretized
    with the panel weights.  mu is stacked component-major: (mu_1; mu_2).
    """
    mu = np.asarray(mu)
    n = panels.n_nodes
    if mu.shape[0] != 2 * n:
        raise ValueError(f"density must have length {2 * n}")
    nu = np.concatenate([panels.normals[:, 0], panels.normals[:, 1]])
    w = np.concatenate([panels.weights, panels.weights])
    coeff = np.dot(w * nu, mu) / panels.total_arclength
    return coeff * nu


def w_matrix(panels: BoundaryPanels) -> np.ndarray:
    """Dense (2N, 2N) matrix of w_apply."""
    nu = np.concatenate([panels.normals[:, 0], panels.normals[:, 1]])
    w = np.concatenate([panels.weights, panels.weights])
    return np.outer(nu, w * nu) / panels.total_arclength
