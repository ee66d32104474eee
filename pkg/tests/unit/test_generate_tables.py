"""Tests for generate_tables.py"""

import pytest
import sys
from pathlib import Path

# Add scripts to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "scripts"))
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from generate_tables import CASES, generate
from qfs_heights.report import parse


class TestGenerate:
    """Tests for generate function."""

    @pytest.mark.unit
    def test_writes_every_case_and_format(self, tmp_path):
        written = generate(tmp_path, p_max=7, e_values=(1,), route='table')

        assert len(written) == len(CASES) * 2
        assert (tmp_path / "logcy_ii_e1.tsv").exists()
        assert (tmp_path / "logcy_iv_e1.json").exists()

    @pytest.mark.unit
    def test_tables_parse_back(self, tmp_path):
        generate(tmp_path, p_max=7, e_values=(2,), route='table')

        rows = parse((tmp_path / "logcy_ii_e2.tsv").read_text())
        assert {r.p: r.result for r in rows} == {2: 'inf', 3: '3', 5: '1', 7: '3'}

    @pytest.mark.unit
    def test_creates_output_dir(self, tmp_path):
        target = tmp_path / "nested" / "out"

        generate(target, p_max=3, e_values=(1,), route='table')

        assert target.is_dir()
