"""Compactly supported C2 exponential spline basis over an augmented knot vector.

For ``n`` interior knots the basis has exactly ``n`` bell-shaped functions.
Each one spans four consecutive knot intervals of the augmented vector, is
represented per interval in the normalized segment basis (see
``space.segment_basis_eval``), vanishes with its first two derivatives at both
support endpoints, and is normalized to 1 at its central knot. The normalized
representation keeps the per-function linear systems well conditioned even
when neighboring knot gaps differ by orders of magnitude or are very small
relative to ``1/alpha``.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BasisConstructionError, DomainError, InvalidInputError
from .space import EXP_ARG_LIMIT, EXP_ARG_WARN, ExpSpace, segment_basis_eval

# Condition-number ceiling for the per-function 16x16 local systems
# (measured after row equilibration, i.e. on the system actually solved).
LOCAL_SYSTEM_COND_LIMIT = 1e12


@dataclass(frozen=True)
class AugmentedKnots:
    """Strictly increasing interior knots plus two extra knots at each end."""

    interior: np.ndarray
    extended: np.ndarray

    @property
    def n(self) -> int:
        return len(self.interior)

    @property
    def a(self) -> float:
        return float(self.interior[0])

    @property
    def b(self) -> float:
        return float(self.interior[-1])


def augment_knots(interior) -> AugmentedKnots:
    """Extend interior knots by mirroring the first and last gap twice.

    With interior knots ``x1 < ... < xn`` the extension appends ``x1 - g``,
    ``x1 - 2g`` on the left (``g = x2 - x1``) and symmetrically on the right
    with the last gap. The uniform-extension rule is deterministic; the
    interpolant is not very sensitive to the exact placement.
    """
    x = np.asarray(interior, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise InvalidInputError(f"need at least 2 interior knots, got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("interior knots must be finite")
    if np.any(np.diff(x) <= 0.0):
        raise InvalidInputError("interior knots must be strictly increasing and distinct")
    gl = x[1] - x[0]
    gr = x[-1] - x[-2]
    extended = np.concatenate(
        [[x[0] - 2.0 * gl, x[0] - gl], x, [x[-1] + gr, x[-1] + 2.0 * gr]]
    )
    return AugmentedKnots(interior=x, extended=extended)


@dataclass(frozen=True)
class GBSplineBasis:
    """The n basis functions over an augmented knot vector.

    ``coef[j, s, k]`` multiplies the ``k``-th normalized segment function on
    the ``s``-th interval of the support of basis function ``j``; the support
    of function ``j`` (0-based) is ``[extended[j], extended[j+4]]``.
    """

    knots: AugmentedKnots
    space: ExpSpace
    coef: np.ndarray

    @property
    def n(self) -> int:
        return self.knots.n

    @property
    def a(self) -> float:
        return self.knots.a

    @property
    def b(self) -> float:
        return self.knots.b

    def support(self, j: int) -> tuple[float, float]:
        """Closed support interval of basis function ``j``."""
        E = self.knots.extended
        return float(E[j]), float(E[j + 4])

    def segment_value(self, j: int, s: int, tau, deriv_order: int = 0):
        """Value of basis function ``j`` on its ``s``-th support interval.

        ``tau`` is the normalized coordinate in [0, 1]; derivatives are with
        respect to ``x``. Evaluating at ``tau`` 0/1 from both neighboring
        segments is how the smoothness tests probe continuity.
        """
        E = self.knots.extended
        h = E[j + s + 1] - E[j + s]
        g = segment_basis_eval(self.space.alpha * h, tau, deriv_order)
        return (g @ self.coef[j, s]) / h**deriv_order

    def evaluate(self, j: int, x, deriv_order: int = 0):
        """Value (or derivative) of basis function ``j`` at ``x``.

        Exactly zero outside the support. ``x`` may be a scalar or an array.
        """
        if not 0 <= j < self.n:
            raise InvalidInputError(f"basis index {j} out of range [0, {self.n})")
        E = self.knots.extended
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(xa)
        for s in range(4):
            lo, hi = E[j + s], E[j + s + 1]
            sel = (xa >= lo) & (xa < hi) if s < 3 else (xa >= lo) & (xa <= hi)
            if np.any(sel):
                out[sel] = self.segment_value(j, s, (xa[sel] - lo) / (hi - lo),
                                              deriv_order)
        return out if np.ndim(x) else float(out[0])

    def active_values(self, x, deriv_order: int = 0):
        """Values of the (at most 4) basis functions alive at each point.

        Returns
        -------
        values : numpy.ndarray, shape (m, 4)
        indices : numpy.ndarray, shape (m, 4)
            Basis indices matching ``values``; entries outside ``[0, n)`` mark
            slots with no active function (their value is set to 0).
        """
        E = self.knots.extended
        xa = np.asarray(x, dtype=float)
        i0 = np.clip(np.searchsorted(E, xa, side="right") - 1, 2, self.n)
        h = E[i0 + 1] - E[i0]
        tau = (xa - E[i0]) / h
        g = segment_basis_eval(self.space.alpha * h, tau, deriv_order)
        if deriv_order:
            g = g / h[..., None] ** deriv_order
        indices = i0[..., None] - np.arange(3, -1, -1)
        valid = (indices >= 0) & (indices < self.n)
        jc = np.clip(indices, 0, self.n - 1)
        seg = i0[..., None] - jc
        values = np.einsum("...k,...sk->...s", g, self.coef[jc, seg])
        values = np.where(valid, values, 0.0)
        return values, indices


def build_basis(knots, space: ExpSpace) -> GBSplineBasis:
    """Construct the basis by solving one 16x16 local system per function.

    Parameters
    ----------
    knots : AugmentedKnots or array_like
        Augmented knots, or raw interior knots (augmented automatically).
    space : ExpSpace

    Returns
    -------
    GBSplineBasis

    Raises
    ------
    DomainError
        If ``alpha`` times the longest knot interval exceeds the overflow
        limit. A warning is emitted already past the stability threshold.
    BasisConstructionError
        If any local system is singular or has condition number above 1e12.

    Notes
    -----
    Each local system imposes 15 homogeneous constraints (value and first two
    derivatives vanish at both support ends, C2 continuity across the three
    interior support knots) plus normalization to 1 at the central knot. The
    homogeneous part has a one-dimensional nullspace, so the normalized
    system is square and uniquely solvable. Derivative rows are rescaled by
    knot-gap powers and the system is row-equilibrated before solving.
    """
    if not isinstance(knots, AugmentedKnots):
        knots = augment_knots(knots)
    E = knots.extended
    n = knots.n
    scale = space.alpha * float(np.max(np.diff(E)))
    if scale > EXP_ARG_LIMIT:
        raise DomainError(
            f"alpha * longest interval = {scale:.3g} exceeds the overflow limit "
            f"{EXP_ARG_LIMIT:g}"
        )
    if scale > EXP_ARG_WARN:
        warnings.warn(
            f"alpha * longest interval = {scale:.3g} > {EXP_ARG_WARN:g}; "
            "basis construction may be inaccurate",
            stacklevel=2,
        )

    sup = np.lib.stride_tricks.sliding_window_view(E, 5)[:n]  # (n, 5) support knots
    h = np.diff(sup, axis=1)  # (n, 4) interval lengths
    z = space.alpha * h

    def beta(s, tau, d):
        return segment_basis_eval(z[:, s], tau, d)  # (n, 4)

    A = np.zeros((n, 16, 16))
    for d in range(3):
        # vanishing value/derivatives at both support ends
        # (chain factors 1/h^d absorbed into the row scaling)
        A[:, d, 0:4] = beta(0, 0.0, d)
        A[:, 12 + d, 12:16] = beta(3, 1.0, d)
    for m in range(1, 4):
        # C2 continuity at the m-th interior support knot; rows scaled by
        # min(h_left, h_right)^d so entries stay bounded
        h_min = np.minimum(h[:, m - 1], h[:, m])
        for d in range(3):
            r = 3 + 3 * (m - 1) + d
            left_scale = (h_min / h[:, m - 1]) ** d
            right_scale = (h_min / h[:, m]) ** d
            A[:, r, 4 * (m - 1): 4 * m] = beta(m - 1, 1.0, d) * left_scale[:, None]
            A[:, r, 4 * m: 4 * m + 4] = -beta(m, 0.0, d) * right_scale[:, None]
    # unit value at the central support knot (left end of the third interval)
    A[:, 15, 8:12] = beta(2, 0.0, 0)

    rhs = np.zeros((n, 16, 1))
    rhs[:, 15, 0] = 1.0
    row_scale = np.abs(A).max(axis=2, keepdims=True)
    if not np.all(row_scale > 0.0):
        raise BasisConstructionError("degenerate local system row")
    A /= row_scale
    rhs /= row_scale

    conds = np.linalg.cond(A)
    bad = np.flatnonzero(~(conds <= LOCAL_SYSTEM_COND_LIMIT))
    if len(bad):
        j = int(bad[0])
        raise BasisConstructionError(
            f"local system for basis function {j} is numerically rank-deficient "
            f"(condition estimate {conds[j]:.3g})"
        )
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise BasisConstructionError(f"singular local basis system: {exc}") from exc
    coef = sol[:, :, 0].reshape(n, 4, 4)
    return GBSplineBasis(knots=knots, space=space, coef=coef)
