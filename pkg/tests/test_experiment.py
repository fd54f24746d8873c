import json

from qcqp_tight import COMPLEX, REAL, markdown_table, run_experiment
from qcqp_tight.fixtures import complex_gap_instance
from qcqp_tight.jsonio import summary_to_json


def test_partition_invariant_and_ordering():
    summary = run_experiment(REAL, [3, 2], 6, 99)
    assert [r.n for r in summary.per_n] == [2, 3]
    for row in summary.per_n:
        assert row.total == 6
        assert row.recovered + row.gap_or_infeasible \
            + row.solver_failures == row.total
        # every test failure that got solved was recovered, and only those
        assert row.recovered <= row.test_failed
        assert row.gap_or_infeasible == \
            row.total - row.test_failed - row.solver_failures


def test_byte_identical_reruns():
    a = run_experiment(COMPLEX, [2, 3], 4, 123)
    b = run_experiment(COMPLEX, [2, 3], 4, 123)
    assert json.dumps(summary_to_json(a)) == json.dumps(summary_to_json(b))


def test_fixture_injection_row():
    # a sweep fed the bundled gap instance must classify it as a gap
    inst = complex_gap_instance()
    summary = run_experiment(COMPLEX, [2], 1, 0,
                             source=lambda n, index: inst)
    row = summary.per_n[0]
    assert row.test_failed == 0
    assert row.gap_or_infeasible == 1
    assert row.recovered == 0 and row.solver_failures == 0


def test_markdown_layout():
    summary = run_experiment(REAL, [2], 3, 7)
    text = markdown_table(summary)
    assert "| n |" in text and "| k |" in text
    assert "test failed" in text
    # one headline column per dimension plus the label column
    header = [ln for ln in text.splitlines() if ln.startswith("| n |")][0]
    assert header.count("|") == 4
