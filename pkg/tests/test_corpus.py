import pytest

from mmlcost.corpus import corpus_manifest, data_path, load
from mmlcost.errors import MMLError

from _helpers import fragment, run_entry

ENTRIES = corpus_manifest()


def test_manifest_covers_required_programs():
    names = {e.name for e in ENTRIES}
    for required in ("p4_overlapping", "p5_sum", "p6_free_head_variable", "p7", "p8_even",
                     "reach_t1", "reach_t6", "deck_fair", "graph_extensional", "case_2_2"):
        assert required in names


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.name)
def test_files_parse(entry):
    for filename, role in ((entry.program, "program"), (entry.evidence, "evidence"),
                           (entry.kb, "knowledge-base")):
        if filename is not None:
            assert data_path(filename).is_file()
            load(filename, role)


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.name)
def test_expected_fragments(entry):
    if entry.error_code is not None:
        with pytest.raises(MMLError) as info:
            run_entry(entry)
        assert info.value.code == entry.error_code
        return
    a = run_entry(entry)
    for key, (value, tol) in entry.expected.items():
        assert float(fragment(a, key)) == pytest.approx(float(value), abs=tol), key
