from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

import numpy as np

from src.core.logger import get_logger
from src.exceptions import EmptyActiveSetError, InvalidInput, NumericError, UndefinedRatioError
from src.services.neighbors.models import NeighborIndex, NeighborList
from src.services.neighbors.service import query
from src.services.nnk.kernels import kernel_matrix
from src.services.nnk.models import Explanation, KernelSpec, NeighborAttribution, NnkDecision, NnkProblem, NnkSolution
from src.services.nnk.solver import solve_nnqp

logger = get_logger(__name__)


def build_problem(
    spec: KernelSpec,
    query_vector: np.ndarray,
    neighbors: NeighborList,
    index: NeighborIndex,
) -> NnkProblem:
    if len(neighbors) == 0:
        raise InvalidInput('NNK problem needs at least one neighbor')

    rows = neighbors.ids
    candidates = index.vectors[rows]
    try:
        gram = kernel_matrix(spec, candidates, candidates)
        similarities = kernel_matrix(spec, np.asarray(query_vector).reshape(1, -1), candidates)[0]
    except NumericError as error:
        zero_rows = np.flatnonzero(np.linalg.norm(candidates, axis=1) == 0)
        culprit = f'neighbor graph {int(index.graph_ids[rows[zero_rows[0]]])}' if zero_rows.size else 'query'
        raise NumericError(f'Kernel evaluation failed for {culprit}: {error.message}') from error

    gram = (gram + gram.T) / 2.0
    np.fill_diagonal(gram, 1.0 + spec.jitter)
    return NnkProblem(
        gram=gram,
        similarities=similarities,
        neighbor_rows=rows.copy(),
        neighbor_graph_ids=index.graph_ids[rows].copy(),
        neighbor_labels=index.labels[rows].copy(),
    )


def nnk_predict(solution: NnkSolution, num_classes: int) -> np.ndarray:
    """Convex combination of the one-hot labels of the active neighbors."""
    if solution.num_active == 0:
        raise EmptyActiveSetError
    labels = solution.neighbor_labels[solution.active_set]
    return np.bincount(labels, weights=solution.weights, minlength=num_classes)


def kri_check(k_ij: float, k_ik: float, k_jk: float) -> bool:
    """Kernel ratio interval: ``K_jk < K_ij / K_ik < 1 / K_jk`` (strict).

    ``i`` is the query and ``j``, ``k`` two candidates; true when both may stay active together.
    """
    for value in (k_ij, k_ik, k_jk):
        if not 0.0 <= value <= 1.0:
            raise InvalidInput(f'Kernel values must lie in [0, 1], got {value}')
    if k_ik == 0:
        raise UndefinedRatioError('K_ik is zero, the kernel ratio is undefined')
    ratio = k_ij / k_ik
    upper = np.inf if k_jk == 0 else 1.0 / k_jk
    return bool(k_jk < ratio < upper)


def kri_diagnostics(problem: NnkProblem, solution: NnkSolution) -> tuple[int, int]:
    """Count active pairs and how many of them fail the kernel ratio interval."""
    pairs = violations = 0
    for j, k in combinations(solution.active_set.tolist(), 2):
        if problem.similarities[k] == 0:
            continue
        pairs += 1
        if not kri_check(problem.similarities[j], problem.similarities[k], problem.gram[j, k]):
            violations += 1
    return pairs, violations


def explain(
    query_id: int,
    solution: NnkSolution,
    problem: NnkProblem,
    num_classes: int,
    fallback: bool = False,
) -> Explanation:
    if fallback or solution.num_active == 0:
        # nearest neighbor stands in for an empty active set
        probabilities = np.zeros(num_classes)
        probabilities[problem.neighbor_labels[0]] = 1.0
        entries = [(0, 1.0)]
        fallback = True
    else:
        probabilities = nnk_predict(solution, num_classes)
        entries = list(zip(solution.active_set.tolist(), solution.weights.tolist(), strict=True))

    entries.sort(key=lambda entry: (-entry[1], int(problem.neighbor_graph_ids[entry[0]])))
    return Explanation(
        query_id=query_id,
        predicted=int(np.argmax(probabilities)),
        probs=probabilities.tolist(),
        neighbors=[
            NeighborAttribution(
                id=int(problem.neighbor_graph_ids[position]),
                label=int(problem.neighbor_labels[position]),
                weight=weight,
                similarity=float(problem.similarities[position]),
            )
            for position, weight in entries
        ],
        fallback=fallback,
    )


class NnkClassifier:
    """Nearest-neighbor retrieval followed by the NNK solve for every query."""

    def __init__(  # noqa: PLR0913
        self,
        index: NeighborIndex,
        kernel: KernelSpec,
        num_classes: int,
        k: int = 50,
        tolerance: float = 1e-9,
        tau_edge: float = 1e-10,
    ):
        self._index = index
        self._kernel = kernel
        self._num_classes = num_classes
        self._k = k
        self._tolerance = tolerance
        self._tau_edge = tau_edge

    @property
    def index(self) -> NeighborIndex:
        return self._index

    def classify(self, query_id: int, vector: np.ndarray) -> NnkDecision:
        neighbors = query(self._index, vector, self._k)
        problem = build_problem(self._kernel, vector, neighbors, self._index)
        solution = solve_nnqp(problem, self._tolerance, self._tau_edge)

        fallback = False
        try:
            probabilities = nnk_predict(solution, self._num_classes)
        except EmptyActiveSetError:
            logger.warning('Empty NNK active set, falling back to the nearest neighbor', query_id=query_id)
            probabilities = np.zeros(self._num_classes)
            probabilities[problem.neighbor_labels[0]] = 1.0
            fallback = True

        pairs, violations = kri_diagnostics(problem, solution)
        return NnkDecision(
            query_id=query_id,
            problem=problem,
            solution=solution,
            probabilities=probabilities,
            predicted=int(np.argmax(probabilities)),
            fallback=fallback,
            kri_pairs=pairs,
            kri_violations=violations,
        )

    def classify_many(self, query_ids: list[int], vectors: np.ndarray, workers: int = 1) -> list[NnkDecision]:
        """Per-query solves are independent; results come back in input order."""
        jobs = list(zip(query_ids, vectors, strict=True))
        if workers <= 1:
            return [self.classify(query_id, vector) for query_id, vector in jobs]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda job: self.classify(*job), jobs))

    def explain(self, decision: NnkDecision) -> Explanation:
        return explain(decision.query_id, decision.solution, decision.problem, self._num_classes, decision.fallback)
