from collections.abc import Sequence

import numpy as np
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support

from src.exceptions import InvalidInput
from src.services.metrics.models import ClassifierMetrics


def compute_metrics(
    predictions: Sequence[int] | np.ndarray,
    labels: Sequence[int] | np.ndarray,
    num_classes: int,
) -> ClassifierMetrics:
    """Confusion matrix, accuracy and per-class / macro F1; 0/0 ratios count as 0."""
    predictions = np.asarray(predictions, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if len(predictions) != len(labels):
        raise InvalidInput(f'{len(predictions)} predictions for {len(labels)} labels')
    if len(labels) == 0:
        raise InvalidInput('Cannot compute metrics on an empty set')

    classes = list(range(num_classes))
    confusion = confusion_matrix(labels, predictions, labels=classes)
    precision, recall, f1, support = precision_recall_fscore_support(
        labels, predictions, labels=classes, average=None, zero_division=0
    )
    return ClassifierMetrics(
        accuracy=float(np.trace(confusion) / confusion.sum()),
        macro_f1=float(np.mean(f1)),
        precision=[float(value) for value in precision],
        recall=[float(value) for value in recall],
        f1=[float(value) for value in f1],
        support=[int(value) for value in support],
        confusion=confusion.tolist(),
    )
