import itertools

import pytest

from blobkit.alcove import rank1_orbit
from blobkit.errors import InadmissibleSpecialization
from blobkit.linkage import (
    blob_specialization,
    contents,
    induced_group,
    linkage_classes,
    linkage_classes_by_orbit,
    predicted_homs,
    same_walk_orbit,
)
from blobkit.ring import Specialization
from blobkit.walks import Hyperplane, Multipartition, Walk, project_weight, walk_orbit

MP = Multipartition.parse
DEGENERATE = Specialization(2, 0, ((1, 0), (1, 2)))
SPECS = [
    DEGENERATE,
    Specialization(3, 0, ((1, 4), (1, 2), (1, 0))),
    blob_specialization(3, 1),
    Specialization(3, 6, ((1, 0), (2, 1), (1, 3))),
    Specialization(2, 8, ((1, 1), (1, -1))),
]


def test_induced_group_generators():
    G = induced_group(DEGENERATE)
    assert G.generators == (Hyperplane(1, 2, 1),)  # l1 - q^-2 l2 vanishes
    assert induced_group(Specialization.generic_lambdas(2)).is_trivial
    with pytest.raises(InadmissibleSpecialization):
        induced_group(Specialization(2, 0, ((1, 0), (1, 0))))


def test_degenerate_classes():
    got = [[str(m) for m in c] for c in linkage_classes(2, 2, DEGENERATE, "all")]
    assert sorted(got) == sorted([["((),(1^2))", "((1),(1))", "((2),())"], ["((),(2))"], ["((1^2),())"]])


def test_contents_are_specialized():
    # l2 = q^2 l1: the box of ((),(1)) has the content of the second box of ((2),())
    assert set(contents(MP("((),(1))"), DEGENERATE)) <= set(contents(MP("((2),())"), DEGENERATE))
    assert len(contents(MP("((2),(1))"), DEGENERATE)) == 3


@pytest.mark.parametrize("k", SPECS, ids=lambda k: f"d{k.d}l{k.l}")
def test_divisibility_matches_orbits(k):
    G = induced_group(k, bound=8)
    d = k.d
    for n in range(1, 5 if d == 2 else 4):
        words = [Walk(w) for w in itertools.product(range(1, d + 1), repeat=n)]
        for w in words:
            orbit = walk_orbit(w, G.generators, bound=8)
            for v in words:
                assert same_walk_orbit(w, v, G) == (v in orbit)


@pytest.mark.parametrize("l,m", [(3, 1), (4, 1), (5, 2), (4, 3)])
def test_blob_classes_are_rank1_orbits(l, m):
    k = blob_specialization(l, m)
    for n in range(1, 8):
        classes = linkage_classes(n, 2, k)
        by_orbit = linkage_classes_by_orbit(n, 2, k)
        assert sorted(list(map(str, c)) for c in classes) == sorted(list(map(str, c)) for c in by_orbit)
        for c in classes:
            ws = sorted(project_weight(mu) for mu in c)
            assert ws == [w for w in rank1_orbit(ws[0], l, m, -n, n) if w in ws]
            assert set(ws) <= set(rank1_orbit(ws[0], l, m, -n, n))


def test_predicted_homs_degenerate_point():
    homs = predicted_homs(2, 2, DEGENERATE)
    pairs = {(str(h.mu), str(h.nu)) for h in homs}
    assert pairs
    for h in homs:
        assert h.kappa_status == "rewriting"
        assert h.kappa_value != "0"
    assert predicted_homs(3, 2, Specialization.generic_lambdas(2)) == []
