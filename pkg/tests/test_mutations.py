import pytest

from berezin_kit.algebra import DEFAULT_GRID
from berezin_kit.mutations import failing_items, mutations

CATALOGUE = mutations()
REQUIRED = {"corrupted-bracket", "dropped-hat-term", "wrong-adjoint", "missing-half-shift", "wrong-pde-coefficient"}


def test_catalogue_covers_required_kinds():
    names = {m.name for m in CATALOGUE}
    assert REQUIRED <= names
    assert len(CATALOGUE) >= 5
    assert len(names) == len(CATALOGUE)


@pytest.mark.parametrize("mutation", CATALOGUE, ids=lambda m: m.name)
def test_mutation_trips_its_suite_at_the_predicted_locus(mutation):
    bad = failing_items(mutation.run())
    assert bad, f"{mutation.name} went unnoticed"
    assert any(mutation.locus in item for item in bad), bad[:5]


@pytest.mark.parametrize("mutation", CATALOGUE, ids=lambda m: m.name)
def test_unmutated_control_passes(mutation):
    assert failing_items(mutation.control()) == []


@pytest.mark.parametrize("params", DEFAULT_GRID, ids=str)
def test_mutations_detected_across_grid(params):
    for mutation in mutations(params):
        assert failing_items(mutation.run()), (mutation.name, params)
