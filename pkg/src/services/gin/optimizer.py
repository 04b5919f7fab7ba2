import numpy as np

from src.services.gin.models import AdamState, GinModel


class AdamOptimizer:
    """Adam with bias-corrected moments, updating model parameters in place."""

    def __init__(  # noqa: PLR0913
        self,
        model: GinModel,
        learning_rate: float,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
        state: AdamState | None = None,
    ):
        self._model = model
        self._learning_rate = learning_rate
        self._beta1 = beta1
        self._beta2 = beta2
        self._eps = eps
        self._names = model.trainable_names()
        self._state = state or AdamState(
            first_moments={name: np.zeros_like(model.parameters[name]) for name in self._names},
            second_moments={name: np.zeros_like(model.parameters[name]) for name in self._names},
        )

    @property
    def state(self) -> AdamState:
        return self._state

    def step(self, grads: dict[str, np.ndarray]) -> None:
        self._state.step += 1
        t = self._state.step
        correction1 = 1.0 - self._beta1**t
        correction2 = 1.0 - self._beta2**t
        for name in self._names:
            grad = grads[name]
            m = self._state.first_moments[name]
            v = self._state.second_moments[name]
            m *= self._beta1
            m += (1.0 - self._beta1) * grad
            v *= self._beta2
            v += (1.0 - self._beta2) * grad**2
            m_hat = m / correction1
            v_hat = v / correction2
            self._model.parameters[name] -= self._learning_rate * m_hat / (np.sqrt(v_hat) + self._eps)
