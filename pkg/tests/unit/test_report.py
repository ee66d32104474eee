"""
Tests for report rows and their renderings.

These tests verify:
- TSV and JSON rendering and parsing
- Missing values and booleans in cells
- Disagreement summaries
"""

import pytest
from pathlib import Path
import sys

import orjson

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from qfs_heights.report import COLUMNS, ReportRow, parse, render, render_tsv, summarize

ROWS = [
    ReportRow('dieudonne', 3, 3, 6, 'h=2', '4', 'dieudonne+closed-form', True),
    ReportRow('abelian', None, 2, None, 'g=2,f=0', 'inf', 'abelian+cy', True),
    ReportRow('logcy', 5, 1, None, '2/3:0,2/3:1,2/3:inf', '2', 'table'),
    ReportRow('search', 5, 1, 3, '2/3:0,2/3:1,2/3:inf', '2', 'direct+table', False),
]


class TestTsv:
    """Tests for the TSV rendering."""

    @pytest.mark.unit
    def test_header(self):
        text = render([], 'tsv')

        assert text == '\t'.join(COLUMNS) + '\n'
        assert COLUMNS == ('mode', 'p', 'e', 'n', 'query', 'result', 'route', 'agree')

    @pytest.mark.unit
    def test_cells(self):
        lines = render_tsv(ROWS).splitlines()

        assert lines[1] == 'dieudonne\t3\t3\t6\th=2\t4\tdieudonne+closed-form\tyes'
        assert lines[2].split('\t')[1] == '-'
        assert lines[3].endswith('\ttable\t-')
        assert lines[4].endswith('\tno')

    @pytest.mark.unit
    def test_round_trip(self):
        text = render(ROWS, 'tsv')

        assert parse(text, 'tsv') == ROWS
        assert render(parse(text, 'tsv'), 'tsv') == text

    @pytest.mark.unit
    def test_bad_header(self):
        with pytest.raises(ValueError):
            parse('mode\tp\n', 'tsv')


class TestJson:
    """Tests for the JSON-lines rendering."""

    @pytest.mark.unit
    def test_one_object_per_line(self):
        lines = render(ROWS, 'json').splitlines()

        assert len(lines) == len(ROWS)
        first = orjson.loads(lines[0])
        assert list(first) == list(COLUMNS)
        assert first['agree'] is True
        assert orjson.loads(lines[1])['p'] is None

    @pytest.mark.unit
    def test_round_trip(self):
        text = render(ROWS, 'json')

        assert parse(text, 'json') == ROWS

    @pytest.mark.unit
    def test_blank_lines_skipped(self):
        text = render(ROWS[:1], 'json') + '\n\n'

        assert parse(text, 'json') == ROWS[:1]


class TestFormats:
    """Tests for format dispatch."""

    @pytest.mark.unit
    @pytest.mark.parametrize("fn", [render, parse])
    def test_unknown_format(self, fn):
        with pytest.raises(ValueError):
            fn([] if fn is render else '', 'csv')


class TestSummarize:
    """Tests for summarize."""

    @pytest.mark.unit
    def test_counts(self):
        assert summarize(ROWS) == {'rows': 4, 'checked': 3, 'disagreements': 1}

    @pytest.mark.unit
    def test_empty(self):
        assert summarize([]) == {'rows': 0, 'checked': 0, 'disagreements': 0}

    @pytest.mark.unit
    def test_disagrees(self):
        assert ROWS[3].disagrees
        assert not ROWS[2].disagrees
