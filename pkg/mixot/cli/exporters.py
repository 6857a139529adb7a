"""Writers for grid CSV files and the barycenter-path workbook."""

from __future__ import annotations

from io import BytesIO
from pathlib import Path
from typing import Iterator, List, Sequence, Tuple

import numpy as np
from openpyxl import Workbook
from openpyxl.styles import Alignment, Font

from ..grid import GridDensity
from .schema import MixtureSpec

NUMBER_COLUMN_WIDTH = 24


def _format_float(value: float) -> str:
    return f'{value:.17g}'


def grid_csv(density: GridDensity) -> str:
    """Header ``x[,y],value`` then one row per node in row-major order."""
    axes = ['x', 'y'][: density.spec.dim]
    lines = [','.join(axes + ['value'])]
    for row in density.rows():
        lines.append(','.join(_format_float(value) for value in row))
    return '\n'.join(lines) + '\n'


def write_grid_csv(density: GridDensity, path: Path) -> Path:
    path.write_text(grid_csv(density), encoding='utf-8')
    return path


def _component_headers(dim: int) -> List[str]:
    means = [f'mean_{i + 1}' for i in range(dim)]
    scatters = [f'scatter_{i + 1}{j + 1}' for i in range(dim) for j in range(i, dim)]
    return ['Label', 'Component', 'Weight'] + means + scatters


def _component_rows(path_specs: Sequence[Tuple[str, MixtureSpec]]) -> Iterator[List]:
    for label, spec in path_specs:
        for idx, (weight, atom) in enumerate(spec.mixture.components()):
            upper = atom.scatter[np.triu_indices(atom.dim)]
            yield [label, idx, float(weight)] + atom.mean.tolist() + upper.tolist()


def _write_components(ws, path_specs: Sequence[Tuple[str, MixtureSpec]]) -> None:
    """One row per component, mean and upper scatter triangle in separate numeric columns."""
    ws.append(_component_headers(path_specs[0][1].mixture.dim))
    for cell in ws[1]:
        cell.font = Font(bold=True)
        cell.alignment = Alignment(horizontal='center')
    for row in _component_rows(path_specs):
        ws.append(row)
    for cell in ws[1][3:]:
        ws.column_dimensions[cell.column_letter].width = NUMBER_COLUMN_WIDTH
    ws.freeze_panes = 'A2'


def build_path_xlsx(path_specs: Sequence[Tuple[str, MixtureSpec]], summary: Sequence[Tuple[str, object]]) -> bytes:
    """Workbook with a run summary sheet and one row per barycenter component."""
    wb = Workbook()
    summary_ws = wb.active
    summary_ws.title = 'Summary'
    for row in summary:
        summary_ws.append(list(row))
    for cell in summary_ws['A']:
        cell.font = Font(bold=True)
    summary_ws.column_dimensions['A'].width = 22
    summary_ws.column_dimensions['B'].width = 40

    _write_components(wb.create_sheet('Components'), path_specs)

    buffer = BytesIO()
    wb.save(buffer)
    buffer.seek(0)
    return buffer.getvalue()


__all__ = ['build_path_xlsx', 'grid_csv', 'write_grid_csv']
