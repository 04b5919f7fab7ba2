from src.storage.repository.report.repository import ReportRepository

__all__ = [
    'ReportRepository',
]
