from torsion_forge.summary import EXPECTED, build_table, render_table


def test_table_matches_reference_rows():
    rows = build_table()
    assert len(rows) == len(EXPECTED)
    for row in rows:
        assert row.ok, (row.cells(), row.mismatches)
        assert row.evidence
    text = render_table(rows)
    assert text.count("PASS") == len(EXPECTED)
    assert "FAIL" not in text
