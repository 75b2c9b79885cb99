"""
Plain-text channel files.

    name=channel-two inputs=4,4 outputs=3,3 erasure=yes epsilon=0.3
    <probabilities for x1=0, x2=0 in lexicographic (y1, y2) order>
    <probabilities for x1=0, x2=1>
    ...

One line per input pair in lexicographic (x1, x2) order. Lines starting
with '#' are comments, so a saved `channel` report loads as is. Reals are
written with 12 significant digits; rows are renormalized on load so
that rounding does not trip the row-stochastic check.
"""
import numpy as np

from core.exceptions import InvalidDistributionError

from .channels import build_channel
from .models import ChannelSpec

# Rows written with 12 significant digits are within this of 1.
LOAD_ROW_TOL = 1e-9


def format_real(value: float) -> str:
    return f'{value:.12g}'


def dump_channel(spec: ChannelSpec) -> str:
    nx1, nx2 = spec.input_alphabet_sizes
    ny1, ny2 = spec.output_alphabet_sizes
    epsilon = '-' if spec.epsilon is None else format_real(spec.epsilon)
    header = (
        f'name={spec.name} inputs={nx1},{nx2} outputs={ny1},{ny2} '
        f"erasure={'yes' if spec.erasure else 'no'} epsilon={epsilon}"
    )
    lines = [header]
    for x1 in range(nx1):
        for x2 in range(nx2):
            lines.append(' '.join(format_real(p) for p in spec.pmf[x1, x2].ravel()))
    return '\n'.join(lines) + '\n'


def _parse_header(line: str) -> dict[str, str]:
    fields = {}
    for token in line.split():
        key, sep, value = token.partition('=')
        if not sep:
            raise InvalidDistributionError(f'Malformed header token {token!r}')
        fields[key] = value

    missing = {'name', 'inputs', 'outputs', 'erasure', 'epsilon'} - fields.keys()
    if missing:
        raise InvalidDistributionError(f"Channel header is missing {', '.join(sorted(missing))}")
    return fields


def _parse_sizes(value: str) -> tuple[int, int]:
    try:
        first, second = (int(part) for part in value.split(','))
    except ValueError as exc:
        raise InvalidDistributionError(f'Bad alphabet sizes {value!r}') from exc
    return first, second


def load_channel(text: str) -> ChannelSpec:
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith('#')]
    if not lines:
        raise InvalidDistributionError('Empty channel file')

    header = _parse_header(lines[0])
    nx1, nx2 = _parse_sizes(header['inputs'])
    ny1, ny2 = _parse_sizes(header['outputs'])
    rows = lines[1:]
    if len(rows) != nx1 * nx2:
        raise InvalidDistributionError(f'Expected {nx1 * nx2} probability rows, found {len(rows)}')

    try:
        table = np.array([[float(v) for v in row.split()] for row in rows], dtype=np.float64)
    except ValueError as exc:
        raise InvalidDistributionError('Non-numeric probability in channel file') from exc
    if table.shape != (nx1 * nx2, ny1 * ny2):
        raise InvalidDistributionError(f'Each row needs {ny1 * ny2} probabilities')

    sums = table.sum(axis=1, keepdims=True)
    if np.any(np.abs(sums - 1.0) > LOAD_ROW_TOL):
        raise InvalidDistributionError('Channel file rows do not sum to 1')
    table = table / sums

    epsilon = None if header['epsilon'] == '-' else float(header['epsilon'])
    return build_channel(
        header['name'],
        table.reshape(nx1, nx2, ny1, ny2),
        epsilon=epsilon,
        erasure=header['erasure'] == 'yes',
    )
