"""Thin-plate-spline kernel interpolation with residual-based greedy selection.

Comparison baseline for the spline node-selection experiments: a conditionally
positive definite kernel of order 2 with a linear polynomial tail, fitted
through the usual symmetric saddle-point system.
"""

import bisect
from dataclasses import dataclass

import numpy as np

from .diagnostics import cond2, sparsity
from .errors import InvalidInputError, SingularSystemError
from .greedy import GreedyStep, GreedyTrace

__all__ = ["tps_kernel", "KernelInterpolant", "tps_fit", "kernel_f_greedy"]


def tps_kernel(r):
    """Thin plate spline kernel r^2 * log(r), zero at r = 0."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    nz = r > 0.0
    out[nz] = r[nz] ** 2 * np.log(r[nz])
    return out


@dataclass(frozen=True)
class KernelInterpolant:
    """Kernel expansion over the centers plus a linear tail."""

    centers: np.ndarray
    weights: np.ndarray
    tail: np.ndarray  # (constant, slope)

    def __call__(self, x):
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        k = tps_kernel(np.abs(xa[:, None] - self.centers[None, :]))
        out = k @ self.weights + self.tail[0] + self.tail[1] * xa
        return out if np.ndim(x) else float(out[0])


def _saddle_matrix(x: np.ndarray) -> np.ndarray:
    n = len(x)
    a = np.zeros((n + 2, n + 2))
    a[:n, :n] = tps_kernel(np.abs(x[:, None] - x[None, :]))
    a[:n, n] = 1.0
    a[:n, n + 1] = x
    a[n, :n] = 1.0
    a[n + 1, :n] = x
    return a


def tps_fit(x, y) -> KernelInterpolant:
    """Interpolate ``y`` at ``x`` with moment constraints on the kernel part.

    Requires at least 3 distinct sorted points. The two extra equations force
    the kernel weights to be orthogonal to constants and linears, which makes
    the saddle system nonsingular and the tail reproduce linear data exactly.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or len(x) < 3:
        raise InvalidInputError(f"need at least 3 points, got {x.shape}")
    if y.shape != x.shape:
        raise InvalidInputError("x and y must have matching shapes")
    if np.any(np.diff(x) <= 0.0):
        raise InvalidInputError("points must be sorted, strictly increasing and distinct")
    a = _saddle_matrix(x)
    rhs = np.concatenate([y, [0.0, 0.0]])
    try:
        sol = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"singular kernel saddle system: {exc}") from exc
    n = len(x)
    return KernelInterpolant(centers=x, weights=sol[:n], tail=sol[n:])


def kernel_f_greedy(candidates, values, tau: float | None = None,
                    max_iter: int | None = None):
    """Residual-based greedy selection with the kernel model.

    Same loop contract as the spline residual greedy: initial set of the two
    smallest and two largest candidates, ties resolved to the smallest
    candidate index, ``max_iter`` capping the total selected count. The trace
    records the condition and sparsity of the saddle matrix.

    Returns
    -------
    (selected, trace)
    """
    cand = np.asarray(candidates, dtype=float)
    vals = np.asarray(values, dtype=float)
    if cand.ndim != 1 or len(cand) < 4:
        raise InvalidInputError("need at least 4 sorted candidates")
    if np.any(np.diff(cand) <= 0.0):
        raise InvalidInputError("candidates must be sorted, strictly increasing and distinct")
    if vals.shape != cand.shape:
        raise InvalidInputError("values must match candidates")
    if tau is not None and tau < 0.0:
        raise InvalidInputError(f"tau must be nonnegative, got {tau}")
    m = len(cand)
    if max_iter is not None and not 1 <= max_iter <= m:
        raise InvalidInputError(f"max_iter must be in [1, {m}], got {max_iter}")

    selected = [0, 1, m - 2, m - 1]
    in_selected = np.zeros(m, dtype=bool)
    in_selected[selected] = True
    trace = GreedyTrace()
    iteration = 0
    while True:
        x = cand[selected]
        model = tps_fit(x, vals[selected])
        saddle = _saddle_matrix(x)
        kappa2 = cond2(saddle)
        frac_zero = sparsity(saddle)
        n_nodes = len(selected)
        remaining = np.flatnonzero(~in_selected)
        if len(remaining) == 0:
            trace.steps.append(GreedyStep(iteration, n_nodes, None, kappa2, frac_zero,
                                          None, None))
            trace.stop_reason = "exhausted"
            break
        scores = np.abs(vals[remaining] - model(cand[remaining]))
        criterion = float(scores.max())
        if tau is not None and criterion <= tau:
            trace.steps.append(GreedyStep(iteration, n_nodes, criterion, kappa2,
                                          frac_zero, None, None))
            trace.stop_reason = "tau"
            break
        if max_iter is not None and n_nodes >= max_iter:
            trace.steps.append(GreedyStep(iteration, n_nodes, criterion, kappa2,
                                          frac_zero, None, None))
            trace.stop_reason = "max_iter"
            break
        pick = int(remaining[int(np.argmax(scores))])
        trace.steps.append(GreedyStep(iteration, n_nodes, criterion, kappa2, frac_zero,
                                      pick, float(cand[pick])))
        bisect.insort(selected, pick)
        in_selected[pick] = True
        iteration += 1
    return cand[selected], trace
