import numpy as np
from pydantic import BaseModel

from src.services.gin.models import GinModel
from src.services.gin.network import GinNetwork, GraphBatch
from src.services.graphs.models import Graph


class GradientCheckReport(BaseModel):
    max_relative_error: float
    worst_parameter: str | None = None
    checked: int = 0
    skipped_flat: int = 0
    skipped_kinks: int = 0


def gradient_check(  # noqa: PLR0913
    model: GinModel,
    graph: Graph,
    label: int,
    step: float = 1e-5,
    flat_threshold: float = 1e-12,
    error_floor: float = 1e-6,
) -> GradientCheckReport:
    """Compare backprop gradients of the cross-entropy loss with central differences.

    Coordinates where both gradients are below ``flat_threshold`` are excluded. The relative
    error denominator is ``max(|analytic|, |numeric|, error_floor)``. A coordinate whose ``±step``
    perturbation changes the ReLU activation pattern straddles a kink, where finite
    differences do not approximate the derivative; it is skipped and counted.
    """
    network = GinNetwork(model.model_copy(update={'config': model.config.model_copy(update={'dropout': 0.0})}))
    batch = GraphBatch.from_graphs([graph], model.config.pooling, labels=[label])
    _, grads, forward = network.loss_and_gradients(batch)
    base_pattern = forward.activation_pattern()

    def _perturbed_loss() -> tuple[float, list[np.ndarray]]:
        perturbed = network.forward(batch)
        return network.loss(batch, perturbed), perturbed.activation_pattern()

    report = GradientCheckReport(max_relative_error=0.0)
    for name, param in network.model.parameters.items():
        for index in np.ndindex(param.shape):
            original = param[index]
            param[index] = original + step
            loss_plus, pattern_plus = _perturbed_loss()
            param[index] = original - step
            loss_minus, pattern_minus = _perturbed_loss()
            param[index] = original

            crosses_kink = any(
                not np.array_equal(base, other)
                for base, plus, minus in zip(base_pattern, pattern_plus, pattern_minus, strict=True)
                for other in (plus, minus)
            )
            if crosses_kink:
                report.skipped_kinks += 1
                continue

            numeric = (loss_plus - loss_minus) / (2.0 * step)
            analytic = float(grads[name][index])
            scale = max(abs(analytic), abs(numeric))
            if scale < flat_threshold:
                report.skipped_flat += 1
                continue

            report.checked += 1
            error = abs(analytic - numeric) / max(scale, error_floor)
            if error > report.max_relative_error:
                report.max_relative_error = error
                report.worst_parameter = f'{name}{list(index)}'

    return report
