"""
Report rows and their TSV / JSON renderings.

Every command that computes heights emits ReportRow objects; the renderers
are deterministic (fixed column order, no timestamps) so that a parsed table
re-renders byte for byte.

Usage:
    from qfs_heights.report import ReportRow, render

    rows = [ReportRow('dieudonne', p=3, e=3, n=6, query='h=2', result='4',
                      route='dieudonne+closed-form', agree=True)]
    print(render(rows, 'tsv'), end='')
"""

import logging
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Iterable, List, Optional

import orjson

logger = logging.getLogger(__name__)

FORMATS = ('tsv', 'json')
MISSING = '-'


@dataclass(frozen=True)
class ReportRow:
    """
    One computed query.

    Attributes:
        mode: dieudonne, abelian, logcy, verify, search, table, vanishing, uniform or direct
        p: Characteristic, None where the answer does not depend on it
        e: Frobenius exponent
        n: Witt length for verify, search bound for searches
        query: Divisor literal or parameters such as 'h=2'
        result: Height ('4', '>3', 'inf'), 'split'/'not split', or a route report
        route: Routes used, joined with '+'
        agree: Whether the routes agree; None for single-route rows
    """
    mode: str
    p: Optional[int]
    e: Optional[int]
    n: Optional[int]
    query: str
    result: str
    route: str
    agree: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ReportRow':
        return cls(**{f.name: data.get(f.name) for f in fields(cls)})

    @property
    def disagrees(self) -> bool:
        return self.agree is False


COLUMNS = tuple(f.name for f in fields(ReportRow))
_INT_COLUMNS = ('p', 'e', 'n')


def _cell(value: Any) -> str:
    if value is None:
        return MISSING
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    return str(value)


def _parse_cell(column: str, text: str) -> Any:
    if text == MISSING:
        return None
    if column in _INT_COLUMNS:
        return int(text)
    if column == 'agree':
        return text == 'yes'
    return text


def render_tsv(rows: Iterable[ReportRow]) -> str:
    """Header row and one tab-separated line per row."""
    lines = ['\t'.join(COLUMNS)]
    for row in rows:
        lines.append('\t'.join(_cell(getattr(row, c)) for c in COLUMNS))
    return '\n'.join(lines) + '\n'


def parse_tsv(text: str) -> List[ReportRow]:
    """
    Raises:
        ValueError: If the header does not match COLUMNS
    """
    lines = text.rstrip('\n').split('\n')
    if tuple(lines[0].split('\t')) != COLUMNS:
        raise ValueError(f"unexpected header: {lines[0]!r}")
    rows = []
    for line in lines[1:]:
        cells = line.split('\t')
        rows.append(ReportRow(**{c: _parse_cell(c, v) for c, v in zip(COLUMNS, cells)}))
    return rows


def render_json(rows: Iterable[ReportRow]) -> str:
    """One JSON object per line, keys in column order."""
    return ''.join(orjson.dumps(row.to_dict()).decode() + '\n' for row in rows)


def parse_json(text: str) -> List[ReportRow]:
    return [ReportRow.from_dict(orjson.loads(line)) for line in text.splitlines() if line.strip()]


def render(rows: Iterable[ReportRow], fmt: str = 'tsv') -> str:
    """
    Raises:
        ValueError: For an unknown format
    """
    if fmt == 'tsv':
        return render_tsv(rows)
    if fmt == 'json':
        return render_json(rows)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def parse(text: str, fmt: str = 'tsv') -> List[ReportRow]:
    if fmt == 'tsv':
        return parse_tsv(text)
    if fmt == 'json':
        return parse_json(text)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def summarize(rows: List[ReportRow]) -> Dict[str, int]:
    """Counts of rows, checked rows and disagreements."""
    checked = [r for r in rows if r.agree is not None]
    summary = {
        'rows': len(rows),
        'checked': len(checked),
        'disagreements': sum(1 for r in checked if r.disagrees),
    }
    if summary['disagreements']:
        logger.warning("%d of %d checked rows disagree", summary['disagreements'], summary['checked'])
    return summary
