from decimal import Decimal
from fractions import Fraction

import pytest

from p5lab import (
    CapabilityError,
    complement,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
    petersen_graph,
)
from p5lab.experiments import (
    Caps,
    chain_check,
    corpus_classes,
    estimate_exponent,
    induction_grid,
    instance_record,
    labelled_sample,
    parallel_map,
    random_comb_instance,
    suite_blowup_equiv,
    suite_chain,
    suite_comb,
    suite_cutset,
    suite_induction_step,
    suite_phi,
    suite_trichotomy,
    tightness_family,
)
from p5lab.generators import p5_free_codes
from p5lab.structure import find_induced_p5


def test_caps_parse():
    assert Caps.parse("") == Caps()
    assert Caps.parse("hall=12, blockade=10") == Caps(hall=12, blockade=10)
    with pytest.raises(ValueError):
        Caps.parse("speed=3")
    with pytest.raises(CapabilityError):
        Caps.parse("corpus=8")


def test_instance_record_examples():
    c5 = instance_record(cycle_graph(5), 1)
    assert (c5["alpha"], c5["omega"], c5["chi"]) == (2, 2, 3)
    assert c5["chi_star"] == "5/2" and c5["hall_ratio"] == "5/2"
    assert c5["d_hat"] == pytest.approx(1.3219, abs=1e-4)
    k1 = instance_record(complete_graph(1), 2)
    assert (k1["alpha"], k1["omega"], k1["chi_star"], k1["d_hat"]) == (1, 1, "1/1", None)


def test_instance_record_respects_hall_cap():
    rec = instance_record(empty_graph(5), 1, Caps(hall=4))
    assert rec["hall_ratio"] is None and "hall cap" in rec["hall_ratio_reason"]


def test_parallel_map_preserves_order():
    items = list(range(20))
    assert parallel_map(abs, items, jobs=2) == items
    assert parallel_map(abs, items, jobs=1) == items


def test_corpus_classes_cover_labelled_corpus():
    total = sum(size for _, size in corpus_classes(6))
    assert total == sum(len(p5_free_codes(n)) for n in range(7))
    assert all(g.n >= 1 for g, _ in corpus_classes(4, connected_only=True))


def test_labelled_sample_is_seeded():
    a = labelled_sample(6, 12, seed=3)
    assert a == labelled_sample(6, 12, seed=3)
    assert a != labelled_sample(6, 12, seed=4)
    assert all(find_induced_p5(g) is None for g in a)


def test_chain_check_flags_nothing_on_named_graphs():
    for g in (cycle_graph(5), petersen_graph(), complement(petersen_graph()), path_graph(6)):
        assert chain_check(g) is None


def test_small_suites_pass():
    for res in (suite_chain(n_max=5, sample=20, random=5),
                suite_blowup_equiv(n_max=5, random=10, random_n_max=8),
                suite_blowup_equiv(n_max=4, random=0, exhaustive_labelled=True),
                suite_trichotomy(n_max=5, sample=20),
                suite_cutset(n_max=5),
                suite_comb(count=60),
                suite_phi(),
                suite_induction_step(points=50)):
        assert res.passed, res.failures[:3]
        assert res.instances > 0
        assert res.to_json()["pass"] is True


def test_chain_instances_count_labelled_corpus():
    res = suite_chain(n_max=6, sample=10)
    assert res.instances == sum(len(p5_free_codes(n)) for n in range(7))
    assert res.details["extra_checked"] == 10


def test_induction_grid_shape():
    grid = induction_grid(1000)
    assert len(grid) == 1000 and grid[-1] == Fraction(1, 4) and grid[0] > 0
    assert len(set(grid)) == 1000


def test_random_comb_instances_meet_preconditions():
    for i in range(50):
        g, anchors, b, delta, gamma = random_comb_instance(0, i)
        assert all(bin(g.adj[a] >> len(anchors)).count("1") <= delta for a in anchors)
        assert all(any(g.has_edge(a, v) for a in anchors) for v in b)
        assert gamma > 0


def test_estimate_exponent_examples():
    pc = estimate_exponent([(1, complement(petersen_graph()))])
    assert abs(float(pc.max_d_hat) - 1.16096404744) < 1e-10
    assert pc.argmax["n"] == 10 and pc.all_within_two
    # cliques have d_hat = 1; only K1 and stable sets are trivial
    trivial = estimate_exponent([(1, complete_graph(1)), (2, empty_graph(3))])
    assert trivial.nontrivial == 0 and trivial.to_json()["note"] == "no nontrivial instances"
    skipped = estimate_exponent([(7, path_graph(5))])
    assert skipped.skipped == [{"id": 7, "reason": "contains an induced P5"}]


def test_tightness_family_is_deterministic():
    fam = tightness_family(5, seed=0)
    assert [g.n for g in fam] == [12, 13, 14, 15, 16]
    assert fam == tightness_family(5, seed=0)
    summary = estimate_exponent(enumerate(fam))
    assert summary.max_d_hat >= Decimal("1")
