from src.services.graphs.models import DatasetSummary
from src.services.metrics.models import MetricsReport
from src.services.nnk.models import Explanation


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(cell) for cell in column) for column in zip(header, *rows, strict=True)]
    line = '+'.join('-' * (width + 2) for width in widths)

    def render(cells: list[str]) -> str:
        return ' | '.join(cell.ljust(width) for cell, width in zip(cells, widths, strict=True))

    return '\n'.join([render(header), line, *(render(row) for row in rows)])


def render_metrics(report: MetricsReport) -> str:
    rows = []
    for name, comparison in report.checkpoints.items():
        for classifier, metrics in (('supervised', comparison.supervised), ('nnk', comparison.nnk)):
            rows.append([
                name,
                classifier,
                f'{metrics.accuracy:.4f}',
                f'{metrics.macro_f1:.4f}',
                f'{comparison.mean_active_neighbors:.2f}' if classifier == 'nnk' else '-',
            ])
    gaps = [
        f'{name}: accuracy gap (nnk - supervised) {comparison.accuracy_gap:+.4f}, '
        f'macro-F1 gap {comparison.macro_f1_gap:+.4f}, fallbacks {comparison.fallback_count}'
        for name, comparison in report.checkpoints.items()
    ]
    table = _table(['checkpoint', 'classifier', 'accuracy', 'macro_f1', 'mean_k_hat'], rows)
    return '\n'.join([f'{report.dataset} (seed {report.seed}, k={report.k_neighbors})', table, *gaps])


def render_summary(summary: DatasetSummary) -> str:
    rows = [
        ['graphs', str(summary.num_graphs)],
        ['nodes', str(summary.num_nodes)],
        ['edges', str(summary.num_edges)],
        ['classes', str(summary.num_classes)],
        ['class histogram', ', '.join(f'{label}: {count}' for label, count in summary.class_histogram.items())],
        ['max degree', str(summary.max_degree)],
        ['feature dim', str(summary.feature_dim)],
    ]
    if summary.split_counts is not None:
        rows.append(['split', ', '.join(f'{split}: {count}' for split, count in summary.split_counts.items())])
    return _table(['statistic', summary.name], rows)


def render_explanation(explanation: Explanation) -> str:
    rows = [
        [str(neighbor.id), str(neighbor.label), f'{neighbor.weight:.6f}', f'{neighbor.similarity:.6f}']
        for neighbor in explanation.neighbors
    ]
    probabilities = ', '.join(f'{value:.4f}' for value in explanation.probs)
    title = f'graph {explanation.query_id}: predicted {explanation.predicted} [{probabilities}]'
    if explanation.fallback:
        title += ' (nearest-neighbor fallback)'
    return '\n'.join([title, _table(['neighbor', 'label', 'weight', 'similarity'], rows)])
