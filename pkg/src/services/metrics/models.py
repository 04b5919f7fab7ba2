from pydantic import BaseModel, Field


class ClassifierMetrics(BaseModel):
    accuracy: float
    macro_f1: float
    precision: list[float]
    recall: list[float]
    f1: list[float]
    support: list[int]
    confusion: list[list[int]]


class CheckpointComparison(BaseModel):
    checkpoint: str
    test_size: int
    supervised: ClassifierMetrics
    nnk: ClassifierMetrics
    accuracy_gap: float
    macro_f1_gap: float
    mean_active_neighbors: float
    fallback_count: int
    kri_violation_rate: float | None = None
    embedding_checksum: str


class MetricsReport(BaseModel):
    dataset: str
    seed: int
    k_neighbors: int
    config: dict
    checkpoints: dict[str, CheckpointComparison] = Field(default_factory=dict)


class TimingReport(BaseModel):
    seconds: dict[str, float] = Field(default_factory=dict)
