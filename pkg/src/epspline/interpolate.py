"""Collocation interpolation, cardinal basis, and Lebesgue function.

The collocation matrix holds the basis values at the interior knots. With the
unit-center normalization it has unit diagonal, and compact support makes it
banded: values vanish beyond one off-diagonal, but bandwidth 2 is stored and
the outer band is asserted small in the test-suite rather than assumed.
"""

from dataclasses import dataclass

import numpy as np

from .banded import BandedLU, BandedMatrix, factorize
from .basis import GBSplineBasis
from .errors import DomainError, InvalidInputError

__all__ = [
    "BandedMatrix",
    "BandedLU",
    "factorize",
    "collocation_matrix",
    "Interpolant",
    "fit",
    "cardinal_values",
    "lebesgue_function",
    "lebesgue_constant",
]


def collocation_matrix(basis: GBSplineBasis) -> BandedMatrix:
    """Banded matrix of basis-function values at the interior knots."""
    n = basis.n
    mat = BandedMatrix(n, kl=2, ku=2)
    values, indices = basis.active_values(basis.knots.interior)
    rows = np.repeat(np.arange(n), 4)
    cols = indices.ravel()
    keep = (cols >= 0) & (cols < n) & (np.abs(rows - cols) <= 2)
    mat.bands[mat.ku + rows[keep] - cols[keep], cols[keep]] = values.ravel()[keep]
    return mat


def basis_matrix(basis: GBSplineBasis, x, deriv_order: int = 0) -> np.ndarray:
    """Dense (n, m) matrix of all basis functions evaluated at points ``x``."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    values, indices = basis.active_values(xa, deriv_order)
    out = np.zeros((basis.n, len(xa)))
    cols = np.repeat(np.arange(len(xa)), 4)
    rows = indices.ravel()
    keep = (rows >= 0) & (rows < basis.n)
    out[rows[keep], cols[keep]] = values.ravel()[keep]
    return out


@dataclass(frozen=True)
class Interpolant:
    """Spline interpolant: basis plus solved coefficient vector.

    At every interior knot the interpolant reproduces the data it was fitted
    to within roundoff of the collocation solve.
    """

    basis: GBSplineBasis
    coefficients: np.ndarray
    data: np.ndarray

    def __call__(self, x):
        """Evaluate at ``x`` in ``[a, b]`` using at most 4 local basis terms."""
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(xa < self.basis.a) or np.any(xa > self.basis.b):
            raise DomainError(
                f"evaluation outside [{self.basis.a:g}, {self.basis.b:g}]"
            )
        values, indices = self.basis.active_values(xa)
        jc = np.clip(indices, 0, self.basis.n - 1)
        out = np.sum(values * self.coefficients[jc], axis=-1)
        return out if np.ndim(x) else float(out[0])


def fit(basis: GBSplineBasis, y, lu: BandedLU | None = None, dense: bool = False) -> Interpolant:
    """Solve the collocation system for the coefficients interpolating ``y``.

    Parameters
    ----------
    basis : GBSplineBasis
    y : array_like
        Data values at the interior knots, length ``n``.
    lu : BandedLU, optional
        Reuse an existing factorization of the collocation matrix.
    dense : bool
        Solve against the dense collocation matrix instead (diagnostic
        fallback for moderate n).
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (basis.n,):
        raise InvalidInputError(f"expected {basis.n} data values, got shape {y.shape}")
    if dense:
        coef = np.linalg.solve(collocation_matrix(basis).to_dense(), y)
    else:
        if lu is None:
            lu = factorize(collocation_matrix(basis))
        coef = lu.solve(y)
    return Interpolant(basis=basis, coefficients=coef, data=y)


def cardinal_values(basis: GBSplineBasis, lu: BandedLU, x) -> np.ndarray:
    """Values of all n cardinal functions at ``x``.

    The cardinal functions interpolate the Kronecker data sets; their value
    vector at ``x`` solves the transposed collocation system against the
    sparse vector of basis values at ``x``.

    Returns shape ``(n,)`` for scalar ``x`` and ``(m, n)`` for an array.
    """
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa < basis.a) or np.any(xa > basis.b):
        raise DomainError(f"evaluation outside [{basis.a:g}, {basis.b:g}]")
    rhs = basis_matrix(basis, xa)
    u = lu.solve(rhs, transpose=True)
    return u[:, 0] if np.ndim(x) == 0 else u.T


def lebesgue_function(basis: GBSplineBasis, lu: BandedLU, grid) -> np.ndarray:
    """Sum of absolute cardinal values at each grid point."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    card = cardinal_values(basis, lu, grid)
    return np.abs(card).sum(axis=1)


def lebesgue_constant(basis: GBSplineBasis, lu: BandedLU, grid) -> float:
    """Maximum of the Lebesgue function over the grid.

    Grid resolution is the caller's responsibility; 400 equispaced points on
    ``[a, b]`` is the conventional default used by the CLI.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise InvalidInputError("empty evaluation grid")
    return float(lebesgue_function(basis, lu, grid).max())
