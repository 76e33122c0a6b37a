"""System matrix of the boundary integral formulation.

Double layer:    A(k) = I - 2 D_k - 2 W
Combined field:  A(k) = I - 2 D_k - 2 i eta S_k - 2 W

where hats over D, S denote weighted Nystrom matrices and W is the
rank-one null-space correction.  The double-layer determinant vanishes at
spurious inclusion resonances on multiply connected domains, so there the
combined field is required unless explicitly overridden.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .geometry import BoundaryPanels
from .potentials import KernelContext, w_matrix
from .quadrature import assemble_layer_matrices

# dense SVD up to this dimension; LU-based inverse subspace iteration above
_DENSE_SVD_MAX = 4200


class FormulationError(ValueError):
    """Double-layer formulation requested on a multiply connected domain."""


@dataclass
class SystemMatrix:
    """Dense 2N x 2N system matrix with a lazily cached LU factorization."""

    matrix: np.ndarray
    ctx: KernelContext
    panels: BoundaryPanels
    _lu: tuple | None = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def lu(self):
        with self._lock:
            if self._lu is None:
                self._lu = scipy.linalg.lu_factor(self.matrix, check_finite=False)
            return self._lu


def build_system(
    ctx: KernelContext,
    panels: BoundaryPanels,
    quad_tol: float = 1e-13,
    allow_double_layer_multiply_connected: bool = False,
    adjacency_radius: int = 1,
) -> SystemMatrix:
    """Assemble the BIE system matrix for the selected formulation."""
    if (
        ctx.formulation == "double_layer"
        and panels.n_components >= 2
        and not allow_double_layer_multiply_connected
    ):
        raise FormulationError(
            "double_layer has spurious inclusion resonances on multiply "
            "connected domains; use combined_field (or override explicitly "
            "to reproduce the spurious-resonance experiment)"
        )
    kinds = ("double",) if ctx.formulation == "double_layer" else ("double", "single")
    mats = assemble_layer_matrices(
        ctx, panels, kinds, quad_tol=quad_tol, adjacency_radius=adjacency_radius
    )
    n = 2 * panels.n_nodes
    A = np.eye(n, dtype=complex) - 2.0 * mats["double"] - 2.0 * w_matrix(panels)
    if ctx.formulation == "combined_field":
        A -= 2.0j * ctx.eta * mats["single"]
    return SystemMatrix(matrix=A, ctx=ctx, panels=panels)


def smallest_singular_values(
    sys: SystemMatrix, count: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """The `count` smallest singular values and right singular vectors.

    Dense SVD at desk scale; above _DENSE_SVD_MAX an LU-based inverse
    subspace iteration with a deterministic seed delivers the same
    contract.  An exactly singular matrix reports sigma_min = 0 with a
    null vector recovered from the factorization.
    """
    if count not in (1, 2):
        raise ValueError("count must be 1 or 2")
    A = sys.matrix
    n = A.shape[0]
    if n <= _DENSE_SVD_MAX:
        _, s, vh = np.linalg.svd(A)
        vals = s[-count:][::-1]
        vecs = vh[-count:][::-1].conj().T
        return vals, vecs

    try:
        lu = sys.lu()
    except scipy.linalg.LinAlgError:
        return _null_from_failed_lu(A, count)
    if not np.all(np.isfinite(lu[0])):
        return _null_from_failed_lu(A, count)

    rng = np.random.default_rng(0)
    m = count + 2
    V = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    V, _ = np.linalg.qr(V)
    prev = None
    for _ in range(300):
        # inverse iteration on A^H A: V <- A^{-1} A^{-H} V
        W = scipy.linalg.lu_solve(lu, V, trans=2, check_finite=False)
        W = scipy.linalg.lu_solve(lu, W, trans=0, check_finite=False)
        V, _ = np.linalg.qr(W)
        AV = A @ V
        B = AV.conj().T @ AV  # projected A^H A
        evals, evecs = np.linalg.eigh(B)
        sig = np.sqrt(np.maximum(evals.real, 0.0))[:count]
        if prev is not None and np.all(
            np.abs(sig - prev) <= 1e-10 * np.maximum(sig, 1e-300)
        ):
            V = V @ evecs
            return sig, V[:, :count]
        prev = sig
    V = V @ evecs
    return sig, V[:, :count]


def _null_from_failed_lu(A, count):
    # exactly singular to machine precision: recover a null vector from a
    # rank-revealing QR of A^H instead of the (non-finite) LU
    q, r, _ = scipy.linalg.qr(A.conj().T, pivoting=True)
    null = q[:, -1]
    vals = np.zeros(count)
    vecs = np.tile(null[:, None], (1, count))
    return vals, vecs
