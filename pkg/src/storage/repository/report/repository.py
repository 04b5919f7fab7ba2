from pathlib import Path

from pydantic import BaseModel

from src.services.gin.models import EpochRecord
from src.services.graphs.models import DatasetSummary
from src.services.metrics.models import MetricsReport, TimingReport
from src.storage.repository.base import BaseArtifactRepository


class ReportRepository(BaseArtifactRepository[str, MetricsReport]):
    """Metrics, timings, training curve and dataset summary under ``reports/``; keys are file names."""

    def path_for(self, key: str) -> Path:
        return self._layout.reports_dir / key

    def save(self, key: str, entity: BaseModel) -> Path:
        return self._write_text(self.path_for(key), entity.model_dump_json(indent=2) + '\n')

    def load(self, key: str) -> MetricsReport:
        return MetricsReport.model_validate_json(self.path_for(key).read_text(encoding='utf-8'))

    def save_metrics(self, report: MetricsReport) -> Path:
        return self.save(self._layout.metrics_file.name, report)

    def load_metrics(self) -> MetricsReport:
        return self.load(self._layout.metrics_file.name)

    def save_timings(self, timings: TimingReport) -> Path:
        return self.save(self._layout.timings_file.name, timings)

    def save_summary(self, summary: DatasetSummary) -> Path:
        return self.save(self._layout.summary_file.name, summary)

    def save_curve(self, history: list[EpochRecord]) -> Path:
        return self._write_text(self._layout.curve_file, ''.join(f'{record.model_dump_json()}\n' for record in history))

    def load_curve(self) -> list[EpochRecord]:
        lines = self._layout.curve_file.read_text(encoding='utf-8').splitlines()
        return [EpochRecord.model_validate_json(line) for line in lines if line.strip()]
