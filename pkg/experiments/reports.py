"""
Rendering of experiment reports as aligned text, JSON or CSV.

Reports carry no timestamps or run ids, so identical inputs render to
identical bytes. Text and CSV reports open with '#' provenance lines.
"""
import csv
import io
import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Optional

from django.conf import settings
from rest_framework.renderers import JSONRenderer

from .models import OutputFormat
from .serializers import ProvenanceSerializer


@dataclass
class Report:
    """
    `body` is the nested JSON payload, `rows` the flat records written as
    CSV and `text` the human-readable rendering. A set `violation` makes
    the command exit with the invariant-violation status after the report
    is written.
    """
    command: str
    config: dict[str, Any]
    body: dict[str, Any]
    rows: list[dict[str, Any]] = field(default_factory=list)
    text: str = ''
    violation: Optional[str] = None

    def provenance(self) -> dict[str, Any]:
        return ProvenanceSerializer({
            'tool': settings.TOOL_NAME,
            'version': settings.TOOL_VERSION,
            'command': self.command,
            'seed': self.config.get('seed'),
            'config': self.config,
        }).data


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, float):
        return f'{value:.6f}'
    if value is None:
        return '-'
    return str(value)


def format_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [[format_value(v) for v in row] for row in rows]
    widths = [max([len(h)] + [len(row[k]) for row in cells]) for k, h in enumerate(headers)]
    lines = ['  '.join(h.rjust(w) for h, w in zip(headers, widths))]
    lines.append('  '.join('-' * w for w in widths))
    lines.extend('  '.join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)
    return '\n'.join(lines)


def provenance_lines(report: Report) -> list[str]:
    provenance = report.provenance()
    return [
        f"# tool={provenance['tool']} version={provenance['version']} "
        f"command={provenance['command']} seed={provenance['seed']}",
        f"# config={json.dumps(provenance['config'], sort_keys=True)}",
    ]


def render_json(report: Report) -> str:
    payload = {'provenance': report.provenance(), **report.body}
    return JSONRenderer().render(payload, renderer_context={'indent': 2}).decode('utf-8') + '\n'


def render_csv(report: Report) -> str:
    buffer = io.StringIO()
    buffer.writelines(line + '\n' for line in provenance_lines(report))
    if report.rows:
        writer = csv.DictWriter(buffer, fieldnames=list(report.rows[0]), lineterminator='\n')
        writer.writeheader()
        writer.writerows(report.rows)
    return buffer.getvalue()


def render_report(report: Report, output: str) -> str:
    if output == OutputFormat.JSON:
        return render_json(report)
    if output == OutputFormat.CSV:
        return render_csv(report)
    return '\n'.join(provenance_lines(report) + [report.text.rstrip('\n')]) + '\n'
