"""Nystrom assembly of layer-potential boundary convolutions.

Far panel interactions use the native 16-point Gauss rule.  Self and
adjacent panels are handled by adaptively integrating kernel times the
panel's Lagrange basis on a dyadically graded subdivision toward the
singular (or nearest) point, with a coarse/fine error estimate per
subinterval.  The graded start depth is chosen by kernel type (the
velocity kernel is log-singular, the double-layer kernel much milder),
and the refinement loop guarantees the 1e-13 block tolerance either way.
"""

from __future__ import annotations

import numpy as np

from .geometry import BoundaryPanels
from .interp import GAUSS_NODES, GAUSS_WEIGHTS, PANEL_ORDER, lagrange_matrix
from .potentials import KernelContext, kernel_matrices

MAX_DEPTH = 40

# initial dyadic grading depth toward the singularity, per kernel kind: the
# velocity kernel integrand behaves like log t at the target, the
# double-layer one like t log t, so the latter needs a much shallower grade
_START_DEPTH = {"single": 33, "double": 16}

# subintervals are never split below this local width; the residual
# truncation error of such an interval is O(1e-15)
_WIDTH_FLOOR = 1e-11


class QuadratureError(RuntimeError):
    """Adaptive refinement failed to converge on a panel."""

    def __init__(self, panel: int, message: str):
        self.panel = panel
        super().__init__(f"panel {panel}: {message}")


def _osc_cap(k: complex, half_arclen: float) -> float:
    # keep k * (arc spanned by one subinterval) moderate for the smooth rule
    return min(2.0, 5.0 / max(1e-30, abs(k) * half_arclen))


def _graded_intervals(u0: float, eps: float, cap: float) -> np.ndarray:
    """Breakpoints of a dyadic subdivision of [-1, 1] graded toward u0.

    Interval widths start at eps next to u0 and double moving away, capped
    at `cap`.  u0 may lie outside [-1, 1] (grading toward the nearer end).
    """
    pts = [-1.0, 1.0]
    anchor = min(1.0, max(-1.0, u0))
    if -1.0 < anchor < 1.0:
        pts.append(anchor)
    # walk right from the anchor
    w = eps
    t = anchor
    while t < 1.0 - 1e-12:
        t = min(1.0, t + w)
        pts.append(t)
        w = min(2.0 * w, cap)
    # walk left
    w = eps
    t = anchor
    while t > -1.0 + 1e-12:
        t = max(-1.0, t - w)
        pts.append(t)
        w = min(2.0 * w, cap)
    pts = np.unique(np.clip(np.asarray(pts), -1.0, 1.0))
    return pts


def _interval_nodes(bounds: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes and weights on each [a,b] of a breakpoint array."""
    a = bounds[:-1]
    b = bounds[1:]
    mid = 0.5 * (a + b)[:, None]
    half = 0.5 * (b - a)[:, None]
    u = (mid + half * GAUSS_NODES[None, :]).ravel()
    w = (half * GAUSS_WEIGHTS[None, :]).ravel()
    return u, w


def _halved(bounds: np.ndarray) -> np.ndarray:
    mids = 0.5 * (bounds[:-1] + bounds[1:])
    return np.sort(np.concatenate([bounds, mids]))


class _PanelInterp:
    """Interpolated source geometry on one panel (positions, frame, jacobian)."""

    def __init__(self, panels: BoundaryPanels, j: int):
        sl = panels.panel_slice(j)
        self.coords = panels.nodes[sl]
        # dx/du vector at nodes: unit tangent times |dx/du|
        self.dxdu = panels.tangents[sl] * panels.jac[sl][:, None]
        self.half_arclen = 0.5 * panels.panel_arclen[j]

    def geom(self, u: np.ndarray, target: np.ndarray, self_node: int | None):
        """Basis rows, displacement target - y(u), |d|, jacobian, normal.

        When the target is the panel's own node `self_node`, the
        displacement is evaluated through the divided-difference polynomial
        R(u) = (y(u_t) - y(u)) / (u_t - u), so that d = (u_t - u) R(u)
        carries full relative accuracy arbitrarily close to the target (a
        plain coordinate difference loses all digits there, which the
        quadratically-vanishing normal component of d cannot tolerate).
        """
        L = lagrange_matrix(u)
        v = L @ self.dxdu
        jac = np.hypot(v[:, 0], v[:, 1])
        nu = np.column_stack([v[:, 1], -v[:, 0]]) / jac[:, None]
        if self_node is None:
            d = target[None, :] - (L @ self.coords)
        else:
            ut = GAUSS_NODES[self_node]
            du = GAUSS_NODES - ut
            du[self_node] = 1.0
            R = (self.coords - self.coords[self_node]) / du[:, None]
            R[self_node] = self.dxdu[self_node]
            d = (ut - u)[:, None] * (L @ R)
        r = np.hypot(d[:, 0], d[:, 1])
        return L, d, r, jac, nu


def _blocks_for_points(k, d, r, jac, nu, w, L, kinds):
    """Kernel x basis x weight contributions of a point set, per kind.

    Returns {kind: (npts, 2, 2, 16)} contributions, already multiplied by
    quadrature weight, jacobian, and basis row.
    """
    kmats = kernel_matrices(k, d, r, nu, kinds)
    out = {}
    wl = (w * jac)[:, None] * L  # (npts, 16)
    for kind, K in kmats.items():
        out[kind] = K[:, :, :, None] * wl[:, None, None, :]
    return out


def _near_block(k, target, interp, u0, dist_local, kinds, tol, cap, start_depth,
                panel_id, self_node=None, seed=None):
    """Adaptive (2, 2, 16) block of one target against one source panel.

    `seed` may carry precomputed interval records from a batched first
    sweep: (bounds, {kind: coarse blocks}, {kind: fine blocks})."""
    kinds = tuple(kinds)

    def eval_blocks(bnds):
        u, w = _interval_nodes(bnds)
        L, d, r, jac, nu = interp.geom(u, target, self_node)
        return _blocks_for_points(k, d, r, jac, nu, w, L, kinds)

    def per_interval(blocks, bnds_n, pts_per):
        return {
            kind: b.reshape(bnds_n, pts_per, 2, 2, PANEL_ORDER).sum(axis=1)
            for kind, b in blocks.items()
        }

    if seed is None:
        eps = max(2.0 ** (-start_depth), 0.5 * dist_local)
        bounds = _graded_intervals(u0, eps, cap)
        nint = len(bounds) - 1
        C = per_interval(eval_blocks(bounds), nint, PANEL_ORDER)
        F = per_interval(eval_blocks(_halved(bounds)), nint, 2 * PANEL_ORDER)
    else:
        bounds, C, F = seed
        nint = len(bounds) - 1

    # interval records: [a, b, coarse_blk, fine_blk]
    recs = []
    for i in range(nint):
        recs.append(
            [bounds[i], bounds[i + 1],
             {kd: C[kd][i] for kd in kinds},
             {kd: F[kd][i] for kd in kinds}]
        )

    for _ in range(200):
        total = {kd: sum(r[3][kd] for r in recs) for kd in kinds}
        errs = np.array([
            max(np.max(np.abs(r[3][kd] - r[2][kd])) for kd in kinds)
            for r in recs
        ])
        scale = max(1.0, max(np.max(np.abs(total[kd])) for kd in kinds))
        tol_abs = tol * scale
        if errs.sum() <= tol_abs:
            return total
        # split every interval contributing more than its share, down to the
        # width floor (spec depth cap 40 corresponds to width 2^-40, below
        # the floor, so the floor triggers first on genuine failures)
        cut = max(errs.max() * 0.25, tol_abs / (2.0 * len(recs)))
        new = []
        progressed = False
        for r, e in zip(recs, errs):
            width = r[1] - r[0]
            if e < cut or width <= _WIDTH_FLOOR:
                new.append(r)
                continue
            progressed = True
            mid = 0.5 * (r[0] + r[1])
            for a, b in ((r[0], mid), (mid, r[1])):
                bl = np.array([a, b])
                ch_coarse = per_interval(eval_blocks(bl), 1, PANEL_ORDER)
                ch_fine = per_interval(eval_blocks(_halved(bl)), 1,
                                       2 * PANEL_ORDER)
                new.append([a, b,
                            {kd: ch_coarse[kd][0] for kd in kinds},
                            {kd: ch_fine[kd][0] for kd in kinds}])
        if not progressed:
            raise QuadratureError(
                panel_id,
                f"singular quadrature stalled at depth {MAX_DEPTH} "
                f"(residual {errs.sum():.2e} > {tol_abs:.2e})",
            )
        recs = new
    raise QuadratureError(panel_id, "adaptive refinement did not converge")


def _near_pairs(panels: BoundaryPanels, adjacency_radius: int):
    """(source panel) -> list of target node indices treated adaptively."""
    npan = panels.n_panels
    near = {j: set() for j in range(npan)}
    for j in range(npan):
        ring = {j}
        lo = hi = j
        for _ in range(adjacency_radius):
            lo = int(panels.panel_prev[lo])
            hi = int(panels.panel_next[hi])
            ring.update((lo, hi))
        for src in ring:
            near[src].update(range(16 * j, 16 * (j + 1)))
    return {j: np.array(sorted(t)) for j, t in near.items()}


def _assemble_near(k, panels, kinds, mats, quad_tol, adjacency_radius):
    N = panels.n_nodes
    near = _near_pairs(panels, adjacency_radius)
    start = max(_START_DEPTH[kd] for kd in kinds)
    for j in range(panels.n_panels):
        interp = _PanelInterp(panels, j)
        cap = _osc_cap(k, interp.half_arclen)
        cols = np.arange(16 * j, 16 * (j + 1))
        sl = panels.panel_slice(j)

        # per-target grading specs
        specs = []
        for i in near[j]:
            target = panels.nodes[i]
            self_node = None
            if panels.node_panel[i] == j:
                self_node = i - 16 * j
                u0 = GAUSS_NODES[self_node]
                dist_local = 0.0
            else:
                dd = np.hypot(*(panels.nodes[sl] - target).T)
                q = int(np.argmin(dd))
                u0 = GAUSS_NODES[q]
                # extrapolate grading anchor to the shared endpoint side
                if q in (0, PANEL_ORDER - 1):
                    u0 = -1.0 if q == 0 else 1.0
                dist_local = dd[q] / interp.half_arclen
            eps = max(2.0 ** (-start), 0.5 * dist_local)
            bounds = _graded_intervals(u0, eps, cap)
            specs.append((int(i), target, self_node, u0, dist_local, bounds))

        seeds = _batched_interval_blocks(k, interp, specs, kinds)

        for (i, target, self_node, u0, dist_local, bounds), seed in zip(
            specs, seeds
        ):
            blocks = _near_block(
                k, target, interp, u0, dist_local, kinds, quad_tol, cap,
                start, j, self_node=self_node, seed=seed,
            )
            for kind in kinds:
                B = blocks[kind]
                for a in range(2):
                    for b in range(2):
                        mats[kind][a * N + i, b * N + cols] = B[a, b]


def _batched_interval_blocks(k, interp, specs, kinds):
    """Coarse and fine per-interval blocks for many targets in one kernel
    evaluation over the union of all quadrature points of one source panel."""
    kinds = tuple(kinds)
    u_parts, w_parts, layout = [], [], []
    for (_i, _tgt, _selfn, _u0, _dl, bounds) in specs:
        uc, wc = _interval_nodes(bounds)
        uf, wf = _interval_nodes(_halved(bounds))
        u_parts.extend((uc, uf))
        w_parts.extend((wc, wf))
        layout.append((len(bounds) - 1, len(uc), len(uf)))

    u_all = np.concatenate(u_parts)
    w_all = np.concatenate(w_parts)
    L = lagrange_matrix(u_all)
    v = L @ interp.dxdu
    jac = np.hypot(v[:, 0], v[:, 1])
    nu = np.column_stack([v[:, 1], -v[:, 0]]) / jac[:, None]
    y = L @ interp.coords

    # displacements per target (divided-difference on the own panel)
    d = np.empty((u_all.size, 2))
    pos = 0
    for (_i, target, self_node, _u0, _dl, _bounds), (nint, nc, nf) in zip(
        specs, layout
    ):
        slc = slice(pos, pos + nc + nf)
        if self_node is None:
            d[slc] = target[None, :] - y[slc]
        else:
            ut = GAUSS_NODES[self_node]
            du = GAUSS_NODES - ut
            du[self_node] = 1.0
            R = (interp.coords - interp.coords[self_node]) / du[:, None]
            R[self_node] = interp.dxdu[self_node]
            d[slc] = (ut - u_all[slc])[:, None] * (L[slc] @ R)
        pos += nc + nf

    r = np.hypot(d[:, 0], d[:, 1])
    kmats = kernel_matrices(k, d, r, nu, kinds)
    wl = (w_all * jac)[:, None] * L  # (npts, 16)

    seeds = []
    pos = 0
    for (_i, _t, _s, _u0, _dl, bounds), (nint, nc, nf) in zip(specs, layout):
        C, F = {}, {}
        for kind in kinds:
            K = kmats[kind]
            vc = K[pos : pos + nc, :, :, None] * wl[pos : pos + nc, None, None, :]
            vf = (
                K[pos + nc : pos + nc + nf, :, :, None]
                * wl[pos + nc : pos + nc + nf, None, None, :]
            )
            C[kind] = vc.reshape(nint, PANEL_ORDER, 2, 2, PANEL_ORDER).sum(axis=1)
            F[kind] = vf.reshape(nint, 2 * PANEL_ORDER, 2, 2, PANEL_ORDER).sum(
                axis=1
            )
        seeds.append((bounds, C, F))
        pos += nc + nf
    return seeds


def _assemble_far(k, panels, kinds, quad_tol):
    N = panels.n_nodes
    mats = {kd: np.empty((2 * N, 2 * N), dtype=complex) for kd in kinds}
    chunk = max(1, min(N, 1_000_000 // max(N, 1)))
    w = panels.weights
    for lo in range(0, N, chunk):
        hi = min(N, lo + chunk)
        d = panels.nodes[lo:hi, None, :] - panels.nodes[None, :, :]
        r = np.hypot(d[:, :, 0], d[:, :, 1])
        same = r == 0.0
        r[same] = 1.0  # placeholder; replaced by the near blocks
        nu = np.broadcast_to(panels.normals[None, :, :], d.shape)
        km = kernel_matrices(
            k,
            d.reshape(-1, 2),
            r.reshape(-1),
            nu.reshape(-1, 2),
            kinds,
        )
        m = hi - lo
        for kind, K in km.items():
            Kr = K.reshape(m, N, 2, 2)
            Kr[same] = 0.0
            Kw = Kr * w[None, :, None, None]
            for a in range(2):
                for b in range(2):
                    mats[kind][a * N + lo : a * N + hi, b * N : (b + 1) * N] = (
                        Kw[:, :, a, b]
                    )
    return mats


def assemble_layer_matrices(
    ctx: KernelContext,
    panels: BoundaryPanels,
    kinds=("double",),
    quad_tol: float = 1e-13,
    adjacency_radius: int = 1,
) -> dict:
    """Dense 2N x 2N Nystrom matrices for the requested layer kernels.

    Weights multiply from the right: row blocks applied to the density
    samples approximate the boundary convolution at each target node to
    quad_tol for panelwise polynomial densities.  Several kernels are
    assembled in one pass so the singular quadrature grids are shared.
    """
    kinds = tuple(kinds)
    mats = _assemble_far(ctx.k, panels, kinds, quad_tol)
    _assemble_near(ctx.k, panels, kinds, mats, quad_tol, adjacency_radius)
    return mats


def assemble_layer_matrix(
    ctx: KernelContext,
    panels: BoundaryPanels,
    which: str = "double",
    quad_tol: float = 1e-13,
    adjacency_radius: int = 1,
) -> np.ndarray:
    """Single dense Nystrom matrix; see assemble_layer_matrices."""
    return assemble_layer_matrices(
        ctx, panels, (which,), quad_tol, adjacency_radius
    )[which]


# ---------------------------------------------------------------------------
# off-surface evaluation


def eval_offsurface(
    ctx: KernelContext,
    panels: BoundaryPanels,
    mu: np.ndarray,
    targets: np.ndarray,
    which: str = "double",
    tol: float = 1e-9,
    near_panel_lengths: float = 5.0,
) -> np.ndarray:
    """Layer potential with density mu at off-boundary targets.

    Targets closer than `near_panel_lengths` panel lengths to a panel are
    integrated adaptively to `tol`; the rest use the native rule.  mu is
    stacked component-major (mu_1; mu_2) at the boundary nodes.
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    N = panels.n_nodes
    mu = np.asarray(mu)
    mu2 = np.column_stack([mu[:N], mu[N:]])  # (N, 2)

    out = np.zeros((targets.shape[0], 2), dtype=complex)
    for ti, p in enumerate(targets):
        acc = np.zeros(2, dtype=complex)
        for j in range(panels.n_panels):
            sl = panels.panel_slice(j)
            dd = np.hypot(*(panels.nodes[sl] - p).T)
            dmin = float(dd.min())
            if dmin == 0.0:
                raise ValueError(
                    "target lies on the boundary; use on-surface assembly"
                )
            if dmin > near_panel_lengths * panels.panel_arclen[j]:
                d = p[None, :] - panels.nodes[sl]
                r = dd
                K = kernel_matrices(
                    ctx.k, d, r, panels.normals[sl], (which,)
                )[which]
                acc += np.einsum(
                    "nab,n,nb->a", K, panels.weights[sl], mu2[sl]
                )
            else:
                interp = _PanelInterp(panels, j)
                q = int(np.argmin(dd))
                u0 = GAUSS_NODES[q]
                blocks = _near_block(
                    ctx.k, p, interp, u0, dmin / interp.half_arclen,
                    (which,), tol, _osc_cap(ctx.k, interp.half_arclen),
                    _START_DEPTH[which], j,
                )[which]
                acc += np.einsum("abp,pb->a", blocks, mu2[sl])
        out[ti] = acc
    return out
