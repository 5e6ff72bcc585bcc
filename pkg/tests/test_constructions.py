import pytest

from frcode import (
    FormatError,
    FrCode,
    GraphSpec,
    complete_graph_code,
    dual,
    fixture,
    from_regular_graph,
    is_simple,
    load_database,
    petersen_graph,
)
from frcode.constructions import (
    EXAMPLE2_DUAL_MATRIX,
    EXAMPLE2_MATRIX,
    EXAMPLE3_EDGES,
    EXAMPLE3_MATRIX,
    DatabaseError,
    dump_database,
    format_database,
    parse_database,
)
from frcode.incidence import RegularityReport, to_text


def test_petersen_graph_code():
    code = from_regular_graph(petersen_graph())
    assert code.params == (15, 2, 10, 3)
    assert is_simple(code.structure)


def test_example3_edge_order_reproduces_fixture():
    code = from_regular_graph(GraphSpec(10, EXAMPLE3_EDGES))
    assert code.params == (15, 2, 10, 3)
    assert code.structure.to_matrix() == EXAMPLE3_MATRIX


def test_triangle():
    code = from_regular_graph(GraphSpec(3, ((0, 1), (0, 2), (1, 2))))
    assert code.params == (3, 2, 3, 2)
    assert code.structure == complete_graph_code(3).structure


def test_double_edge():
    code = from_regular_graph(GraphSpec(2, ((0, 1), (0, 1))))
    assert code.params == (2, 2, 2, 2)
    assert not is_simple(code.structure)


def test_non_regular_graph_rejected():
    with pytest.raises(ValueError, match="vertex 1 has degree 3"):
        from_regular_graph(GraphSpec(3, ((0, 1), (1, 2), (0, 1))))


def test_self_loop_rejected():
    with pytest.raises(ValueError, match="self-loop"):
        from_regular_graph(GraphSpec(2, ((0, 0), (1, 1))))


def test_complete_graph_example2():
    code = complete_graph_code(5)
    assert code.params == (5, 4, 10, 2)
    assert code.structure.to_matrix() == EXAMPLE2_MATRIX
    assert dual(code.structure).to_matrix() == EXAMPLE2_DUAL_MATRIX


@pytest.mark.parametrize("t", range(3, 10))
def test_complete_graph_family(t):
    code = complete_graph_code(t)
    n, alpha, v, rho = code.params
    assert (n, alpha, v, rho) == (t, t - 1, t * (t - 1) // 2, 2)
    assert n * alpha == v * rho
    assert is_simple(code.structure)


def test_complete_graph_small_t():
    with pytest.raises(ValueError):
        complete_graph_code(2)


def test_graph_codes_column_sums():
    # circulant graphs C_t(1, 2) are 4-regular for t >= 5
    for t in range(5, 9):
        edges = {tuple(sorted((i, (i + d) % t))) for i in range(t) for d in (1, 2)}
        code = from_regular_graph(GraphSpec(t, tuple(sorted(edges))))
        assert set(code.structure.column_sums()) == {4}
        assert set(code.structure.row_sums()) == {2}


def test_fixtures():
    assert fixture("example2").to_matrix() == EXAMPLE2_MATRIX
    assert fixture("example2-dual") == dual(fixture("example2"))
    assert fixture("example3-petersen").shape == (15, 10)
    with pytest.raises(KeyError):
        fixture("nope")


def _db_text():
    return (
        "# label: example2\n" + to_text(fixture("example2")) + "\n"
        "# label: example3\n" + to_text(fixture("example3-petersen"))
    )


def test_load_database(tmp_path):
    path = tmp_path / "db.txt"
    path.write_text(_db_text())
    recs = load_database(path)
    assert [r.label for r in recs] == ["example2", "example3"]
    assert all(isinstance(r.validation, FrCode) for r in recs)
    assert recs[1].validation.params == (15, 2, 10, 3)


def test_empty_database(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    assert load_database(path) == []


def test_ragged_record_names_record():
    text = _db_text() + "\n# label: bad\n2 3\n101\n01\n"
    with pytest.raises(DatabaseError) as exc:
        parse_database(text)
    assert exc.value.record == 2
    assert exc.value.line == text.splitlines().index("01") + 1


def test_lenient_skips_bad_record():
    text = "# label: bad\n1 2\n1\n\n" + _db_text()
    errors = []
    recs = parse_database(text, lenient=True, errors=errors)
    assert [r.label for r in recs] == ["example2", "example3"]
    assert len(errors) == 1 and errors[0].record == 0


def test_missing_label_is_an_error():
    with pytest.raises(FormatError):
        parse_database("1 1\n1\n")


def test_irregular_record_is_kept_with_report():
    recs = parse_database("# label: odd\n2 2\n11\n10\n")
    assert isinstance(recs[0].validation, RegularityReport)


def test_database_round_trip(tmp_path):
    text = _db_text()
    assert format_database(parse_database(text)) == text
    path = tmp_path / "out.txt"
    dump_database(parse_database(text), path)
    assert path.read_bytes() == text.encode()


def test_database_round_trip_normalises_comments():
    text = "# label: a\n# extra comment\n1 1\n1\n"
    assert format_database(parse_database(text)) == "# label: a\n1 1\n1\n"
