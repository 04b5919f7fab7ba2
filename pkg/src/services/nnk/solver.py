"""Active-set solver for min_{theta >= 0} 1 - 2 theta^T k + theta^T K theta.

Lawson-Hanson style: the working set holds the strictly positive coordinates, each
subproblem is the equality-constrained minimizer on the working set (Cholesky of the
principal submatrix), coordinates driven negative leave through the step-length rule.
Every working-set change refactorizes from scratch; with k <= 50 the O(k^3) cost is negligible.
"""

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from src.core.logger import get_logger
from src.exceptions import ConvergenceError, SolverError
from src.services.nnk.models import NnkProblem, NnkSolution

logger = get_logger(__name__)

JITTER_RETRIES = 2
JITTER_GROWTH = 10.0
BASE_JITTER = 1e-8
ITERATIONS_PER_NEIGHBOR = 10


def objective_value(problem: NnkProblem, theta: np.ndarray) -> float:
    return float(1.0 - 2.0 * theta @ problem.similarities + theta @ problem.gram @ theta)


def kkt_residual(problem: NnkProblem, theta: np.ndarray) -> float:
    """Largest violation of: theta >= 0, gradient >= 0 on zeros, gradient == 0 on positives.

    ``gradient`` here is ``K theta - k``, half the gradient of the objective.
    """
    gradient = problem.gram @ theta - problem.similarities
    positive = theta > 0
    violations = [
        float(np.max(-theta, initial=0.0)),
        float(np.max(np.abs(gradient[positive]), initial=0.0)),
        float(np.max(-gradient[~positive], initial=0.0)),
    ]
    return max(violations)


def _solve_working_set(problem: NnkProblem, working: list[int]) -> np.ndarray:
    submatrix = problem.gram[np.ix_(working, working)]
    rhs = problem.similarities[working]
    extra = 0.0
    for attempt in range(JITTER_RETRIES + 1):
        try:
            factor = cho_factor(submatrix + extra * np.eye(len(working)), lower=True, check_finite=False)
        except LinAlgError:
            extra = BASE_JITTER * JITTER_GROWTH ** (attempt + 1)
            logger.warning('Cholesky breakdown, escalating jitter', working_set=working, jitter=extra)
            continue
        solution = cho_solve(factor, rhs, check_finite=False)
        # one step of iterative refinement keeps the working-set gradient at round-off level
        residual = rhs - submatrix @ solution
        return solution + cho_solve(factor, residual, check_finite=False)

    raise SolverError(f'Cholesky failed on working set {working} after jitter escalation', working_set=working)


def solve_nnqp(problem: NnkProblem, tolerance: float = 1e-9, tau_edge: float = 1e-10) -> NnkSolution:
    size = problem.size
    theta = np.zeros(size)
    working: list[int] = []
    rejected: set[int] = set()
    iteration_cap = ITERATIONS_PER_NEIGHBOR * size
    iterations = 0

    while True:
        gradient = problem.similarities - problem.gram @ theta
        candidates = np.full(size, -np.inf)
        free = [index for index in range(size) if index not in working and index not in rejected]
        candidates[free] = gradient[free]
        entering = int(np.argmax(candidates))
        if not free or candidates[entering] <= tolerance:
            break
        working.append(entering)

        while True:
            iterations += 1
            if iterations > iteration_cap:
                residual = kkt_residual(problem, theta)
                raise ConvergenceError(
                    f'Active-set solver exceeded {iteration_cap} iterations (KKT residual {residual:.3e})',
                    kkt_residual=residual,
                )

            trial = np.zeros(size)
            trial[working] = _solve_working_set(problem, working)
            if np.all(trial[working] > 0):
                theta = trial
                rejected.clear()
                break

            blocking = [index for index in working if trial[index] <= 0]
            if entering in blocking and theta[entering] == 0:
                # round-off made the entering coordinate non-positive: the step would be zero
                working.remove(entering)
                rejected.add(entering)
                logger.warning('Entering coordinate rejected by round-off', index=entering)
                break

            ratios = [theta[index] / (theta[index] - trial[index]) for index in blocking]
            step = min(ratios)
            theta = theta + step * (trial - theta)
            leaving = blocking[int(np.argmin(ratios))]
            theta[leaving] = 0.0
            working = [index for index in working if theta[index] > 0]
            theta[[index for index in range(size) if index not in working]] = 0.0

    theta = np.maximum(theta, 0.0)
    residual = kkt_residual(problem, theta)
    if residual > tolerance:
        logger.warning(
            'Solver stopped above the KKT tolerance',
            kkt_residual=residual,
            tolerance=tolerance,
            rejected=sorted(rejected),
        )

    theta[theta <= tau_edge] = 0.0
    active = np.flatnonzero(theta)
    weights = theta[active] / theta[active].sum() if active.size else np.zeros(0)

    return NnkSolution(
        theta=theta,
        active_set=active,
        weights=weights,
        objective=objective_value(problem, theta),
        neighbor_labels=problem.neighbor_labels,
        iterations=iterations,
        kkt_residual=residual,
    )
