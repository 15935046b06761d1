import json

import pytest
from mpmath import mp

from src.errors import InvalidInput
from src.models.results import CurveSample, Table1Row, format_real
from src.services.report import render, render_blocks, render_csv, render_json, render_svg


def _curve():
    return [CurveSample(k=mp.mpf(k), E0=mp.mpf(e), digits=12) for k, e in [("0.01", "0.5"), ("0.1", "1.336"), ("0.25", "2")]]


class TestCsv:
    """Header plus comma-separated rows with '\\n' endings."""

    def test_header_and_rows(self):
        """Keys of the first record become the header."""
        text = render_csv([{"k": "0.25", "E0": "2.0"}, {"k": "0.01", "E0": "0.5"}])
        assert text == "k,E0\n0.25,2.0\n0.01,0.5\n"

    def test_booleans_and_lists(self):
        """Booleans print lower case, lists space separated."""
        text = render_csv([{"ok": True, "orders": [2, 3, 4]}, {"ok": False, "orders": []}])
        assert text.splitlines() == ["ok,orders", "true,2 3 4", "false,"]

    def test_late_columns_appended(self):
        """Columns first seen in later records extend the header; earlier rows leave them empty."""
        text = render_csv([{"k": "0.25", "E0": "2.0"}, {"k": "-1", "E0": "", "status": "InvalidK"}])
        assert text.splitlines() == ["k,E0,status", "0.25,2.0,", "-1,,InvalidK"]

    def test_explicit_fieldnames(self):
        """A given header order wins."""
        assert render_csv([{"a": 1, "b": 2}], ["b", "a"]) == "b,a\n2,1\n"


class TestJson:
    """JSON mirror of the CSV records."""

    def test_records(self):
        """A list of records round-trips through json."""
        text = render([{"k": "0.25", "ok": True}], "json")
        assert text.endswith("\n")
        assert json.loads(text) == [{"k": "0.25", "ok": True}]

    def test_unknown_format(self):
        """Only csv and json are written."""
        with pytest.raises(InvalidInput):
            render([{"k": "0.25"}], "xml")

    def test_render_json_object(self):
        """Objects keep their nesting."""
        assert json.loads(render_json({"spectrum": [{"j": 0}]})) == {"spectrum": [{"j": 0}]}


class TestBlocks:
    """Several tables in one document."""

    def test_csv_blank_line(self):
        """CSV blocks are separated by one blank line."""
        text = render_blocks({"a": [{"x": 1}], "b": [{"y": 2}]}, "csv")
        assert text == "x\n1\n\ny\n2\n"

    def test_json_named(self):
        """JSON nests each block under its name."""
        text = render_blocks({"a": [{"x": 1}], "b": [{"y": 2}]}, "json")
        assert json.loads(text) == {"a": [{"x": 1}], "b": [{"y": 2}]}


class TestSvg:
    """E0(k) drawn with labeled axes."""

    def test_single_curve(self):
        """One root element, one solid polyline, 5 ticks per axis and two axis labels."""
        text = render_svg(_curve())
        assert text.count("<svg") == 1
        assert text.strip().endswith("</svg>")
        assert text.count("<polyline") == 1
        assert "stroke-dasharray" not in text
        assert text.count("<text") == 12
        assert ">k</text>" in text and ">E0</text>" in text

    def test_overlay_dashed(self):
        """An overlay adds a dashed polyline on the same axes."""
        text = render_svg(_curve(), [(0.01, 0.55), (0.3, 2.2)])
        assert text.count("<polyline") == 2
        assert text.count('stroke-dasharray="6,4"') == 1
        # The x range stretches to the overlay's last point
        assert ">0.3</text>" in text

    def test_points_inside_canvas(self):
        """Every plotted point lies inside the 640 x 480 canvas."""
        text = render_svg(_curve())
        points = text.split('points="')[1].split('"')[0].split()
        for pair in points:
            x, y = (float(v) for v in pair.split(","))
            assert 0 <= x <= 640
            assert 0 <= y <= 480


class TestGoldenRows:
    """Certified values print at full length so golden files compare digit for digit."""

    def test_table1_row_keeps_trailing_digits(self):
        """A 20-digit E0 keeps its trailing zero; k prints as given."""
        row = Table1Row(k=mp.mpf("0.0013"), E0=mp.mpf("0.216898176374508582803"), certified_digits=20)
        assert render_csv([row.to_record()]) == "k,E0,certified_digits\n0.0013,0.21689817637450858280,20\n"

    def test_exact_value_zero_padded(self):
        """E0 = 2 certified to 20 digits prints 20 significant digits."""
        row = Table1Row(k=mp.mpf("0.25"), E0=mp.mpf(2), certified_digits=20)
        assert render_csv([row.to_record()]).splitlines()[1] == "0.25,2.0000000000000000000,20"

    def test_missing_value_empty(self):
        """A failed row leaves E0 empty."""
        assert format_real(None, 20) == ""
