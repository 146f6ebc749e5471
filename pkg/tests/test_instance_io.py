from fractions import Fraction

import pytest

from affeq.embedding import Configuration
from affeq.errors import InstanceFormatError
from affeq.instance_io import (
    format_number,
    load_document,
    parse_document,
    parse_number,
    render_document,
)
from affeq.system import Assignment, Instance

K3_TEXT = """\
# right triangle scaled by two
dim 2
vertices 3
edge 0 1 3 6
edge 0 2 4 8
edge 1 2 5 10
"""

ASSIGNED_TEXT = """\
dim 2
vertices 3
edge 0 1 3 6
edge 0 2 4 8

z 1 2 25
z_prime 1 2 100
alpha 16
"""


class TestNumbers:
    def test_rational_forms(self):
        assert parse_number("7") == 7
        assert isinstance(parse_number("7"), int)
        assert parse_number("3/4") == Fraction(3, 4)
        assert parse_number("-5/2") == Fraction(-5, 2)

    def test_float_forms(self):
        assert parse_number("2.5") == 2.5
        assert parse_number("1e-3") == 1e-3
        assert isinstance(parse_number("2.5"), float)

    def test_rejects_junk(self):
        for token in ("abc", "1/0", "inf", "nan", "-inf", ""):
            with pytest.raises((ValueError, ZeroDivisionError)):
                parse_number(token)

    def test_format_roundtrips(self):
        for value in (7, Fraction(3, 4), Fraction(-5, 2), 2.5, 0.1, 1e-17):
            token = format_number(value)
            back = parse_number(token)
            assert back == value and type(back) is type(value)


class TestParse:
    def test_basic_instance(self):
        doc = parse_document(K3_TEXT)
        inst = doc.instance()
        assert (inst.n, inst.d) == (3, 2)
        assert inst.edges == ((0, 1), (0, 2), (1, 2))
        assert inst.lam == (3, 4, 5)
        assert inst.lam_prime == (6, 8, 10)
        assert inst.exact
        assert doc.configuration() is None
        assert not doc.has_assignment()

    def test_comments_and_blanks_ignored(self):
        doc = parse_document("# header\n\ndim 1\nvertices 2 # trailing\n")
        assert (doc.dim, doc.n) == (1, 2)

    def test_points_parse(self):
        text = K3_TEXT + "point 0 0\npoint 3 0\npoint 0 4\n"
        doc = parse_document(text)
        config = doc.configuration()
        assert isinstance(config, Configuration)
        assert config.points == ((0, 0), (3, 0), (0, 4))
        assert doc.configuration_prime() is None

    def test_assignment_defaults_pinned_entries(self):
        doc = parse_document(ASSIGNED_TEXT)
        a = doc.assignment()
        assert isinstance(a, Assignment)
        assert a.z.entry(0, 1) == 9 and a.z.entry(0, 2) == 16
        assert a.z.entry(1, 2) == 25
        assert a.z_prime.entry(1, 2) == 100
        assert a.alpha == 16

    def test_missing_nonedge_entry(self):
        text = ASSIGNED_TEXT.replace("z_prime 1 2 100\n", "")
        doc = parse_document(text)
        with pytest.raises(InstanceFormatError, match="z_prime.*\\(1, 2\\)"):
            doc.assignment()

    def test_assignment_without_alpha(self):
        with pytest.raises(InstanceFormatError, match="alpha"):
            parse_document(ASSIGNED_TEXT.replace("alpha 16\n", ""))

    def test_no_assignment_accessor(self):
        doc = parse_document(K3_TEXT)
        with pytest.raises(InstanceFormatError, match="alpha"):
            doc.assignment()


class TestParseErrors:
    @pytest.mark.parametrize("text,line,match", [
        ("dim 2\ndim 3\n", 2, "duplicate dim"),
        ("dim 2\nvertices 3\nvertices 3\n", 3, "duplicate vertices"),
        ("dim 2 2\n", 1, "dim takes one field"),
        ("dim 2\nvertices 3\nedge 0 1 3\n", 3, "edge takes fields"),
        ("dim 2\nvertices 3\nedge 0 0 3 6\n", 3, "self-loop"),
        ("dim 2\nvertices 3\nedge 0 1 3 6\nedge 1 0 3 6\n", 4, "duplicate edge"),
        ("dim 2\nvertices 3\nedge 0 1 x 6\n", 3, "bad number 'x'"),
        ("dim 2\nvertices 3\nedge 0 1 1/0 6\n", 3, "bad number"),
        ("dim 2\nvertices 3\nedge q 1 3 6\n", 3, "bad vertex index"),
        ("dim 2\nvertices 2\npoint 0\n", 3, "needs 2 coordinates"),
        ("dim 2\nvertices 3\nz 0 0 4\nalpha 1\n", 3, "diagonal"),
        ("dim 2\nvertices 3\nz 0 1 4\nz 1 0 5\nalpha 1\n", 4, "duplicate z entry"),
        ("dim 2\nvertices 3\nalpha 1\nalpha 2\n", 4, "duplicate alpha"),
        ("dim 2\nvertices 3\nfoo 1\n", 3, "unknown record kind 'foo'"),
    ])
    def test_line_diagnostics(self, text, line, match):
        with pytest.raises(InstanceFormatError, match=match) as info:
            parse_document(text)
        assert info.value.line_no == line
        assert f"line {line}:" in str(info.value)

    @pytest.mark.parametrize("text,match", [
        ("vertices 3\n", "missing dim"),
        ("dim 2\n", "missing vertices"),
        ("dim 2\nvertices 3\npoint 0 0\n", "1 point records for 3"),
        ("dim 1\nvertices 2\nz 0 5 1\nalpha 1\n", "out of range"),
        ("dim 2\nvertices 3\nz 0 1 4\n", "without an alpha"),
        ("dim 2\nvertices 3\nedge 0 7 3 6\n", "out of range"),
        ("dim 2\nvertices 3\nedge 0 1 -3 6\n", "positive"),
    ])
    def test_document_level_diagnostics(self, text, match):
        with pytest.raises(InstanceFormatError, match=match):
            parse_document(text)

    def test_unreadable_path(self, tmp_path):
        with pytest.raises(InstanceFormatError, match="cannot read"):
            load_document(tmp_path / "missing.txt")


class TestRender:
    def test_instance_roundtrip_exact(self):
        inst = parse_document(K3_TEXT).instance()
        doc = parse_document(render_document(inst))
        again = doc.instance()
        assert again.edges == inst.edges
        assert again.lam == inst.lam and again.lam_prime == inst.lam_prime

    def test_float_values_roundtrip_bit_exact(self):
        inst = Instance(2, 1, ((0, 1),), (0.1,), (0.30000000000000004,))
        again = parse_document(render_document(inst)).instance()
        assert again.lam == inst.lam and again.lam_prime == inst.lam_prime

    def test_full_document_roundtrip(self):
        doc = parse_document(ASSIGNED_TEXT)
        inst = doc.instance()
        points = Configuration(2, ((0, 0), (3, 0), (0, 4)))
        points_prime = Configuration(2, ((0, 0), (6, 0), (0, 8)))
        text = render_document(inst, points=points, points_prime=points_prime,
                               assignment=doc.assignment())
        back = parse_document(text)
        assert back.configuration().points == points.points
        assert back.configuration_prime().points == points_prime.points
        a, b = back.assignment(), doc.assignment()
        assert a.z == b.z and a.z_prime == b.z_prime and a.alpha == b.alpha

    def test_rational_tokens_survive(self):
        inst = Instance(2, 1, ((0, 1),), (Fraction(3, 4),), (Fraction(3, 2),))
        text = render_document(inst)
        assert "3/4" in text and "3/2" in text
        again = parse_document(text).instance()
        assert again.lam == (Fraction(3, 4),)
