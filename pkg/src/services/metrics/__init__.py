from src.services.metrics.models import CheckpointComparison, ClassifierMetrics, MetricsReport, TimingReport
from src.services.metrics.service import compute_metrics

__all__ = [
    'CheckpointComparison',
    'ClassifierMetrics',
    'MetricsReport',
    'TimingReport',
    'compute_metrics',
]
