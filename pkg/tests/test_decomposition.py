import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p5lab import (
    CapabilityError,
    Graph,
    NotP5FreeError,
    PartitionError,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    is_connected,
    join,
    path_graph,
)
from p5lab.bitset import mask_of
from p5lab.decomposition import (
    AnticompletePair,
    CompleteBlockade,
    CompletePair,
    Partition,
    anti_decompose,
    certificate_from_json,
    certificate_to_json,
    check_pq_sparse,
    induction_step_inequality,
    phi,
    phi_lower_bound_check,
    rho_of_set,
    trichotomy_search,
    validate_certificate,
    validate_partition,
)
from p5lab.experiments import corpus_classes
from p5lab.generators import random_p5_free
from p5lab.structure import Blockade

HALF, QUARTER = Fraction(1, 2), Fraction(1, 4)


# -- arithmetic ----------------------------------------------------------------

def test_phi_examples():
    assert phi(0, 0) == 1
    assert phi(0, 1) == Fraction(15, 16)
    assert phi(1, 2) == Fraction(255, 256)
    assert phi(0, 3) == Fraction(15, 16) * Fraction(255, 256) * Fraction(65535, 65536)
    with pytest.raises(ValueError):
        phi(2, 1)


@pytest.mark.parametrize("r,s", [(0, 0), (0, 3), (2, 5)])
def test_phi_lower_bound_examples(r, s):
    assert phi_lower_bound_check(r, s)


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_phi_multiplicative(a, b, c):
    r, s, t = sorted((a, b, c))
    assert phi(r, s) * phi(s, t) == phi(r, t)


def test_induction_step_examples():
    assert induction_step_inequality(QUARTER)
    assert Fraction(3, 4) ** 9 == Fraction(19683, 262144)
    assert induction_step_inequality(Fraction(1, 1024))
    for bad in (HALF, 0, -QUARTER):
        with pytest.raises(ValueError):
            induction_step_inequality(bad)


@given(st.fractions(min_value=Fraction(1, 10**6), max_value=QUARTER))
def test_induction_step_holds_on_range(y):
    assert induction_step_inequality(y)


# -- (p, q)-sparsity -----------------------------------------------------------

def test_pq_sparse_examples():
    assert not check_pq_sparse(complete_graph(4), 1, 1)
    assert check_pq_sparse(cycle_graph(6), 2, 3)      # vacuous: rho(C6) = 2
    assert check_pq_sparse(cycle_graph(5), 1, Fraction(15, 16) * Fraction(5, 2))
    # a single vertex is an induced subgraph with rho = 1 >= q and holds no pair
    assert not check_pq_sparse(empty_graph(4), 1, 1)
    assert check_pq_sparse(empty_graph(4), 1, 2)


def test_pq_sparse_errors():
    with pytest.raises(ValueError):
        check_pq_sparse(cycle_graph(5), 2, 1)
    with pytest.raises(CapabilityError):
        check_pq_sparse(empty_graph(15), 1, 2)


# -- certificates and the validator -------------------------------------------

def test_trichotomy_c5():
    r = trichotomy_search(cycle_graph(5), HALF)
    c = r.certificate
    assert isinstance(c, CompletePair)
    assert (c.x, c.y, c.y_param) == ({0}, {1, 4}, QUARTER)
    v = validate_certificate(cycle_graph(5), c, Fraction(5, 2), 9)
    assert v.passed
    lhs = {chk.inequality: chk.lhs for chk in v.checks}
    assert lhs["rho(X) >= y^9 rho(G)"] == 1 and lhs["rho(Y) >= (1-3y) rho(G)"] == 1


def test_trichotomy_two_triangles_anticomplete_shape():
    g = disjoint_union(complete_graph(3), complete_graph(3))
    ap = trichotomy_search(g, HALF).anticomplete
    assert ap.valid and ap.constants["size_fraction"] == HALF
    assert {len(ap.certificate.a), len(ap.certificate.b)} == {3}


def test_trichotomy_star():
    star = join(complete_graph(1), empty_graph(3))
    c = trichotomy_search(star, HALF).certificate
    assert isinstance(c, CompletePair) and c.x == {0} and c.y == {1, 2, 3}
    assert validate_certificate(star, c).passed


def test_trichotomy_preconditions():
    with pytest.raises(NotP5FreeError) as info:
        trichotomy_search(path_graph(5), HALF)
    assert info.value.witness == (0, 1, 2, 3, 4)
    with pytest.raises(ValueError):
        trichotomy_search(complete_graph(1), HALF)
    with pytest.raises(ValueError):
        trichotomy_search(cycle_graph(5), Fraction(3, 4))


def test_k4_singleton_blockade_passes_at_d9():
    blk = Blockade(tuple(frozenset({v}) for v in range(4)))
    c = CompleteBlockade(blk, (Fraction(1),) * 4)
    v = validate_certificate(complete_graph(4), c, 4, 9)
    assert v.passed
    assert Fraction(1) >= Fraction(4, 4 ** 9)


def test_blockade_power_check_with_fractional_d():
    blk = Blockade(tuple(frozenset({v}) for v in range(4)))
    c = CompleteBlockade(blk, (Fraction(1),) * 4)
    # ratio 1/4 against 4^-d: passes exactly for d >= 1
    assert validate_certificate(complete_graph(4), c, 4, 1).passed
    assert validate_certificate(complete_graph(4), c, 4, Fraction(3, 2)).passed
    assert not validate_certificate(complete_graph(4), c, 4, Fraction(99, 100)).passed


def test_validator_names_offending_pair():
    g = cycle_graph(5)
    bad = CompletePair(frozenset({0}), frozenset({1, 2}), Fraction(1), Fraction(2), QUARTER)
    v = validate_certificate(g, bad)
    assert not v.passed
    assert any("offending pair 0,2" in chk.inequality for chk in v.failures())


def test_validator_detects_wrong_rho_claim():
    g = cycle_graph(5)
    bad = AnticompletePair(frozenset({0}), frozenset({2, 3}), Fraction(1), Fraction(1))
    assert [chk.inequality for chk in validate_certificate(g, bad).failures()] == ["rho(B) matches claim"]


def _edge_flips(g):
    for u in range(g.n):
        for v in range(u + 1, g.n):
            yield Graph.from_edges(g.n, set(g.edges()) ^ {(u, v)})


@pytest.mark.parametrize("g", [cycle_graph(5), join(complete_graph(1), empty_graph(3)), complete_graph(4),
                               join(cycle_graph(5), complete_graph(1))])
def test_single_edge_corruption_is_detected(g):
    r = trichotomy_search(g, HALF)
    c = r.certificate
    sets = [c.x, c.y] if isinstance(c, CompletePair) else (
        [c.a, c.b] if isinstance(c, AnticompletePair) else list(c.blockade.blocks))
    for h in _edge_flips(g):
        # only flips that touch a cross pair of the certificate change its structure
        cross = any(h.has_edge(u, v) != g.has_edge(u, v)
                    for i, x in enumerate(sets) for y in sets[i + 1:] for u in x for v in y)
        if cross:
            assert not validate_certificate(h, c, r.rho_g).passed


def test_certificate_json_round_trip():
    g = join(cycle_graph(5), cycle_graph(5))
    certs = [trichotomy_search(cycle_graph(5), HALF).certificate,
             trichotomy_search(disjoint_union(complete_graph(3), complete_graph(3)), HALF).anticomplete.certificate,
             CompleteBlockade(Blockade((frozenset(range(5)), frozenset(range(5, 10)))),
                              (Fraction(5, 2), Fraction(5, 2)), min_k=2)]
    for c in certs:
        obj = json.loads(json.dumps(certificate_to_json(c)))
        assert certificate_from_json(obj) == c
    blk = certificate_to_json(certs[2])
    assert blk == {"kind": "complete_blockade", "blocks": [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]],
                   "per_block_rho": ["5/2", "5/2"], "min_k": 2}
    assert validate_certificate(g, certs[2]).passed


def test_verdict_json_shape():
    v = validate_certificate(cycle_graph(5), trichotomy_search(cycle_graph(5), HALF).certificate)
    rows = v.to_json()
    assert all(set(row) == {"inequality", "lhs", "rhs", "pass"} for row in rows)
    assert any(row["rhs"] == "5/8" for row in rows)


def test_complete_pair_rejects_bad_y():
    with pytest.raises(ValueError):
        CompletePair(frozenset({0}), frozenset({1}), Fraction(1), Fraction(1), y_param=HALF)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_trichotomy_on_random_p5_free(seed):
    (g,) = random_p5_free(1, 10, seed, n_min=2)
    if not is_connected(g) or g.edge_count() == 0:
        return
    r = trichotomy_search(g, HALF)
    assert r.certificate is not None
    assert validate_certificate(g, r.certificate, r.rho_g, 9).passed


# -- cutset decomposition ------------------------------------------------------

def test_anti_decompose_c5():
    q = Fraction(15, 16) * Fraction(5, 2)
    res = anti_decompose(cycle_graph(5), QUARTER, 1, q)
    assert res.outcome == 2
    c = res.certificate
    assert isinstance(c, CompletePair) and (c.x, c.y) == ({2, 4}, {3})
    assert validate_certificate(cycle_graph(5), c, d=8).passed
    assert [s.step for s in res.trace] == ["cutset", "outcome"]


def test_anti_decompose_preconditions():
    with pytest.raises(ValueError):
        anti_decompose(empty_graph(3), HALF, 1, 1)                      # disconnected
    with pytest.raises(ValueError):
        anti_decompose(path_graph(4), HALF, 1, 2)                       # q above (1-eps^2) rho
    with pytest.raises(ValueError, match="sparse"):
        anti_decompose(path_graph(4), HALF, 1, Fraction(3, 2))          # an edge has no pair
    with pytest.raises(NotP5FreeError):
        anti_decompose(path_graph(5), HALF, 1, 1)


def test_anti_decompose_traces_validate_on_corpus():
    reached = 0
    for g, _ in corpus_classes(7, connected_only=True):
        if g.n < 2:
            continue
        rho_g = rho_of_set(g, g.full_mask)
        for eps in (HALF, QUARTER):
            for p in (Fraction(1), Fraction(3, 2)):
                q = (1 - eps ** 2) * rho_g
                if q < p:
                    continue
                try:
                    res = anti_decompose(g, eps, p, q)
                except ValueError:
                    continue
                reached += 1
                assert validate_certificate(g, res.certificate, rho_g, 8).passed
                for step in res.trace:
                    if step.partition is not None:
                        validate_partition(g, step.partition, p, max(p, q - 2 * eps ** 8 * rho_g))
    assert reached >= 19


# -- partition validator ------------------------------------------------------

def _p7_partition(**override):
    # path 0-1-2-3-4-5-6 cut at 3: A = {0,1,2}, D = {3}, B = ({4,5,6},)
    parts = dict(a=mask_of({0, 1, 2}), d=mask_of({3}), blocks=(mask_of({4, 5, 6}),), e=0)
    parts.update(override)
    return Partition(**parts)


def test_validate_partition_accepts_good_partition():
    validate_partition(path_graph(7), _p7_partition(), Fraction(1), Fraction(1))


@pytest.mark.parametrize("override,prop", [
    (dict(d=0), "nonempty"),
    (dict(blocks=(mask_of({3, 4, 5, 6}),)), "disjoint"),
    (dict(blocks=(mask_of({4, 5}),)), "covering"),
    (dict(a=mask_of({0, 1}), d=mask_of({2})), "covering"),
    (dict(a=mask_of({0, 1}), d=mask_of({3}), e=mask_of({2})), "cutset"),
    (dict(a=mask_of({0, 2}), d=mask_of({1, 3})), "connected"),
])
def test_validate_partition_names_violation(override, prop):
    with pytest.raises(PartitionError) as info:
        validate_partition(path_graph(7), _p7_partition(**override), Fraction(1), Fraction(1))
    assert info.value.prop == prop


def test_validate_partition_rho_bounds():
    with pytest.raises(PartitionError) as info:
        validate_partition(path_graph(7), _p7_partition(), Fraction(3), Fraction(1))
    assert info.value.prop == "rho"
    with pytest.raises(PartitionError) as info:
        validate_partition(path_graph(7), _p7_partition(), Fraction(1), Fraction(3))
    assert info.value.prop == "rho"
