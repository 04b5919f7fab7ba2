from src.services.pipeline.models import CheckpointSelector, RunConfig
from src.services.pipeline.rendering import render_explanation, render_metrics, render_summary
from src.services.pipeline.service import PipelineService

__all__ = [
    'CheckpointSelector',
    'PipelineService',
    'RunConfig',
    'render_explanation',
    'render_metrics',
    'render_summary',
]
