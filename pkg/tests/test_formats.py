import json

import pytest

from shelves.core import ShelfTable, classify
from shelves.data import CORPUS_ORDERS, appendix_index_map, appendix_tables, corpus_lines
from shelves.errors import InputError
from shelves.formats import (
    RECORD_KEYS,
    emit,
    parse_bracket,
    parse_bracket_lines,
    parse_record,
    to_bracket,
    to_record,
)
from shelves.iso import canonical_form


class TestParseBracket:
    def test_basic(self):
        t = parse_bracket("[[0,1],[0,1]]")
        assert t == ShelfTable([[0, 1], [0, 1]])

    def test_ragged(self):
        with pytest.raises(InputError, match="row 1"):
            parse_bracket("[[0,1],[0]]")

    def test_out_of_range_reports_column(self):
        with pytest.raises(InputError, match="column 5"):
            parse_bracket("[[0,3],[0,1]]")

    @pytest.mark.parametrize("text", ["[[0,1],[0,1]", "[[0,1] ,[0,1]]", "[[0,1],[0,1]]x", "[[0,-1],[0,1]]",
                                      "[[00,1],[0,1]]", "", "[]", "[[]]"])
    def test_syntax_errors(self, text):
        with pytest.raises(InputError, match="line 3"):
            parse_bracket(text, line_no=3)

    def test_does_not_check_shelf_axiom(self):
        assert parse_bracket("[[0,1],[1,0]]").order == 2

    def test_multi_line(self):
        ts = parse_bracket_lines("[[0]]\n\n[[0,1],[0,1]]\n")
        assert [t.order for t in ts] == [1, 2]
        with pytest.raises(InputError, match="line 2"):
            parse_bracket_lines("[[0]]\n[[1]]\n")


class TestCorpus:
    def test_sizes(self):
        assert [len(corpus_lines(n)) for n in CORPUS_ORDERS] == [2, 5, 18, 165]

    def test_byte_roundtrip(self):
        for n in CORPUS_ORDERS:
            for line in corpus_lines(n):
                assert to_bracket(parse_bracket(line)) == line

    def test_index_map(self):
        m = appendix_index_map(3)
        assert m[canonical_form([[0, 2, 1], [2, 1, 0], [1, 0, 2]])] == 3
        assert sorted(m.values()) == [1, 2, 3, 4, 5]

    def test_all_corpus_tables_are_connected_shelves(self):
        for n in CORPUS_ORDERS:
            for t in appendix_tables(n):
                r = classify(t)
                assert r.is_shelf and r.is_connected


class TestRecords:
    def test_key_order(self):
        line = to_record(ShelfTable([[0, 1], [0, 1]]))
        assert tuple(json.loads(line)) == RECORD_KEYS

    def test_roundtrip(self):
        t = ShelfTable([[0, 2, 1], [2, 1, 0], [1, 0, 2]])
        rec = parse_record(emit([t], "records").strip())
        assert rec["table"] == t
        assert rec["group"] == "D₃"
        assert rec["canonical"] is True
        assert rec["flags"]["is_quandle"]
        assert rec["polynomial"].render() == "3·t·s"

    def test_non_shelf(self):
        rec = parse_record(to_record([[0, 1], [1, 0]]))
        assert rec["flags"]["is_shelf"] is False
        assert rec["group"] is None

    def test_strict(self):
        obj = json.loads(to_record([[0]]))
        obj["extra"] = 1
        with pytest.raises(InputError, match="unknown"):
            parse_record(json.dumps(obj))
        obj = json.loads(to_record([[0]]))
        del obj["group"]
        with pytest.raises(InputError):
            parse_record(json.dumps(obj))
        with pytest.raises(InputError):
            parse_record("{not json")


class TestEmit:
    def test_bracket(self):
        ts = appendix_tables(3)
        assert emit(ts, "bracket").splitlines() == corpus_lines(3)

    def test_csv_summary(self):
        text = emit(appendix_tables(4) + appendix_tables(5), "csv-summary")
        lines = text.splitlines()
        assert lines[0] == "order,tables,connected,connected_racks,connected_quandles,unital"
        assert lines[1].startswith("4,18,18,2,1,")
        assert lines[2].startswith("5,165,165,4,3,")

    def test_unknown_format(self):
        with pytest.raises(InputError):
            emit([], "yaml")
