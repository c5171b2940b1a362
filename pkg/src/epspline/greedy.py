"""Greedy node selection for spline interpolation.

Two strategies share one loop skeleton. The residual-based strategy inserts
the candidate with the largest interpolation residual and therefore adapts to
one target function; the Lebesgue-based strategy inserts the candidate where
the Lebesgue function of the current node set is largest and never looks at
function values, so it yields reusable a-priori node sets.

Every iteration rebuilds the basis and refactorizes the collocation matrix
from scratch; at the intended scales correctness clarity beats incremental
updates.
"""

import bisect
from dataclasses import dataclass, field

import numpy as np

from .basis import AugmentedKnots, augment_knots, build_basis
from .diagnostics import cond2, sparsity
from .errors import InvalidInputError, SplineError
from .interpolate import collocation_matrix, factorize, fit, lebesgue_function
from .space import ExpSpace

DEFAULT_INIT_RULE = "two-smallest-and-two-largest"


@dataclass(frozen=True)
class GreedyConfig:
    """Knobs shared by both selection strategies.

    ``tau`` absent means run until ``max_iter`` nodes are selected or the
    candidates are exhausted. ``max_iter`` caps the total size of the
    selected set. The optional stagnation rule stops once the criterion's
    relative change stays below ``stagnation_rtol`` for ``stagnation_window``
    consecutive iterations. ``freeze_augmented`` keeps the boundary knots
    computed from the initial set instead of re-mirroring each iteration.
    """

    alpha: float
    tau: float | None = None
    max_iter: int | None = None
    init_rule: str | tuple[int, ...] = DEFAULT_INIT_RULE
    stagnation_window: int | None = None
    stagnation_rtol: float = 1e-2
    freeze_augmented: bool = False

    def __post_init__(self):
        if self.tau is not None and not (np.isfinite(self.tau) and self.tau >= 0.0):
            raise InvalidInputError(f"tau must be nonnegative, got {self.tau}")
        if self.max_iter is not None and self.max_iter < 1:
            raise InvalidInputError(f"max_iter must be positive, got {self.max_iter}")
        if self.stagnation_window is not None and self.stagnation_window < 1:
            raise InvalidInputError("stagnation_window must be positive")
        if self.stagnation_rtol <= 0.0:
            raise InvalidInputError("stagnation_rtol must be positive")


@dataclass(frozen=True)
class GreedyStep:
    """One loop iteration: state diagnostics plus the selection it made.

    ``selected_index`` is None on the terminal record, written when the loop
    decides to stop instead of inserting another point.
    """

    iteration: int
    n_nodes: int
    criterion: float | None
    kappa2: float
    sparsity: float
    selected_index: int | None
    selected_x: float | None


@dataclass
class GreedyTrace:
    steps: list[GreedyStep] = field(default_factory=list)
    stop_reason: str = ""

    def criteria(self) -> np.ndarray:
        return np.array([s.criterion for s in self.steps if s.criterion is not None])

    def kappa2_values(self) -> np.ndarray:
        return np.array([s.kappa2 for s in self.steps])

    def sparsity_values(self) -> np.ndarray:
        return np.array([s.sparsity for s in self.steps])

    def selected_indices(self) -> list[int]:
        return [s.selected_index for s in self.steps if s.selected_index is not None]


class GreedyError(SplineError):
    """Numerical failure mid-loop; carries the partial trace."""

    def __init__(self, message: str, trace: GreedyTrace):
        super().__init__(message)
        self.trace = trace


def _validated_candidates(candidates) -> np.ndarray:
    cand = np.asarray(candidates, dtype=float)
    if cand.ndim != 1 or len(cand) < 2:
        raise InvalidInputError(f"need a 1-d candidate vector of length >= 2, got {cand.shape}")
    if not np.all(np.isfinite(cand)):
        raise InvalidInputError("candidates must be finite")
    if np.any(np.diff(cand) <= 0.0):
        raise InvalidInputError("candidates must be sorted, strictly increasing and distinct")
    return cand


def _initial_indices(m: int, config: GreedyConfig) -> list[int]:
    rule = config.init_rule
    if isinstance(rule, str):
        if rule != DEFAULT_INIT_RULE:
            raise InvalidInputError(f"unknown init rule {rule!r}")
        if m < 4:
            raise InvalidInputError("default init rule needs at least 4 candidates")
        return [0, 1, m - 2, m - 1]
    idx = sorted(set(int(i) for i in rule))
    if len(idx) < 2:
        raise InvalidInputError("explicit initial set needs at least 2 indices")
    if idx[0] != 0 or idx[-1] != m - 1:
        raise InvalidInputError("initial set must contain the smallest and largest candidate")
    if any(i < 0 or i >= m for i in idx):
        raise InvalidInputError("initial index out of range")
    return idx


def _stagnated(history: list[float], config: GreedyConfig) -> bool:
    w = config.stagnation_window
    if w is None or len(history) < w + 1:
        return False
    tail = history[-(w + 1):]
    for prev, curr in zip(tail, tail[1:]):
        denom = max(abs(prev), 1e-300)
        if abs(curr - prev) / denom >= config.stagnation_rtol:
            return False
    return True


def _greedy_loop(candidates, values, config: GreedyConfig, use_residual: bool):
    cand = _validated_candidates(candidates)
    m = len(cand)
    if use_residual:
        values = np.asarray(values, dtype=float)
        if values.shape != (m,):
            raise InvalidInputError(f"values must match candidates, got shape {values.shape}")
    if config.max_iter is not None and config.max_iter > m:
        raise InvalidInputError(f"max_iter {config.max_iter} exceeds candidate count {m}")
    space = ExpSpace(config.alpha)

    selected = _initial_indices(m, config)
    in_selected = np.zeros(m, dtype=bool)
    in_selected[selected] = True

    frozen_outer = None
    if config.freeze_augmented:
        frozen_outer = augment_knots(cand[selected]).extended[[0, 1, -2, -1]]

    trace = GreedyTrace()
    history: list[float] = []
    interp = None
    iteration = 0
    while True:
        knot_x = cand[selected]
        try:
            if frozen_outer is None:
                knots = augment_knots(knot_x)
            else:
                knots = AugmentedKnots(
                    interior=knot_x,
                    extended=np.concatenate(
                        [frozen_outer[:2], knot_x, frozen_outer[2:]]
                    ),
                )
            basis = build_basis(knots, space)
            phi = collocation_matrix(basis)
            lu = factorize(phi)
            if use_residual:
                interp = fit(basis, values[selected], lu=lu)
        except SplineError as exc:
            trace.stop_reason = "error"
            raise GreedyError(f"iteration {iteration}: {exc}", trace) from exc

        dense = phi.to_dense()
        kappa2 = cond2(dense)
        frac_zero = sparsity(dense)
        n_nodes = len(selected)
        remaining = np.flatnonzero(~in_selected)

        if len(remaining) == 0:
            trace.steps.append(GreedyStep(iteration, n_nodes, None, kappa2, frac_zero,
                                          None, None))
            trace.stop_reason = "exhausted"
            break

        if use_residual:
            scores = np.abs(values[remaining] - interp(cand[remaining]))
        else:
            scores = lebesgue_function(basis, lu, cand[remaining])
        criterion = float(scores.max())
        history.append(criterion)

        def terminal(reason: str):
            trace.steps.append(GreedyStep(iteration, n_nodes, criterion, kappa2,
                                          frac_zero, None, None))
            trace.stop_reason = reason

        if config.tau is not None and criterion <= config.tau:
            terminal("tau")
            break
        if config.max_iter is not None and n_nodes >= config.max_iter:
            terminal("max_iter")
            break
        if _stagnated(history, config):
            terminal("stagnation")
            break

        # ties resolve to the smallest candidate index (first max)
        pick = int(remaining[int(np.argmax(scores))])
        trace.steps.append(GreedyStep(iteration, n_nodes, criterion, kappa2, frac_zero,
                                      pick, float(cand[pick])))
        bisect.insort(selected, pick)
        in_selected[pick] = True
        iteration += 1

    return cand[selected], interp, trace


def f_greedy(candidates, values, config: GreedyConfig):
    """Residual-based selection tailored to one sampled target function.

    Parameters
    ----------
    candidates : array_like
        Sorted distinct candidate points containing their own min and max.
    values : array_like
        Target function values matching ``candidates``.
    config : GreedyConfig

    Returns
    -------
    (selected, interpolant, trace)
        Sorted selected points, the interpolant on them, and the per-iteration
        trace. On stop reason "tau" the residual over all remaining
        candidates is at most ``config.tau``.
    """
    return _greedy_loop(candidates, values, config, use_residual=True)


def lambda_greedy(candidates, config: GreedyConfig):
    """Lebesgue-function-based selection; consumes no function values.

    The selected sequence is a pure function of the candidate set and the
    configuration, which makes the resulting nodes reusable across target
    functions.

    Returns
    -------
    (selected, trace)
    """
    selected, _, trace = _greedy_loop(candidates, None, config, use_residual=False)
    return selected, trace
