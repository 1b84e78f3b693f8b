import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_hall, graphs, has_induced_p5, subsets
from p5lab import (
    CapabilityError,
    Graph,
    InvariantViolation,
    Relation,
    Sparsity,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    hall_ratio,
    induced,
    is_connected,
    join,
    pair_relation,
    path_graph,
    sparsity_class,
)
from p5lab.bitset import mask_of
from p5lab.structure import (
    Attachment,
    Blockade,
    CombOutcome,
    Mode,
    comb,
    cutset_attachment_split,
    find_anticomplete_pair,
    find_complete_blockade,
    find_eps_restricted_subgraph,
    find_induced_p5,
    minimal_cutset,
    separates,
    validate_comb,
)


def rho(g, s):
    return hall_ratio(induced(g, s)).value


# -- P5 detection --------------------------------------------------------------

@pytest.mark.parametrize("g,want", [
    (path_graph(5), (0, 1, 2, 3, 4)),
    (cycle_graph(5), None),
    (path_graph(6), (0, 1, 2, 3, 4)),
    (cycle_graph(6), (0, 1, 2, 3, 4)),
    (join(cycle_graph(5), cycle_graph(5)), None),
])
def test_find_induced_p5_examples(g, want):
    assert find_induced_p5(g) == want


@settings(max_examples=80)
@given(graphs(max_n=8))
def test_find_induced_p5_matches_brute_force(g):
    w = find_induced_p5(g)
    assert (w is not None) == has_induced_p5(g)
    if w is not None:
        assert induced(g, w).edge_count() == 4
        assert all(g.has_edge(w[i], w[i + 1]) for i in range(4))


# -- anticomplete pairs --------------------------------------------------------

def test_anticomplete_pair_examples():
    two_triangles = disjoint_union(complete_graph(3), complete_graph(3))
    found = find_anticomplete_pair(two_triangles, 3, 3)
    assert found.pair == ({0, 1, 2}, {3, 4, 5})
    assert found.note == "exhaustive search"
    assert not find_anticomplete_pair(complete_graph(4), 1, 1)
    a, b = find_anticomplete_pair(cycle_graph(6), 2, 2).pair
    assert pair_relation(cycle_graph(6), a, b) is Relation.ANTICOMPLETE
    assert rho(cycle_graph(6), a) >= 2 and rho(cycle_graph(6), b) >= 2


def test_anticomplete_pair_cap_and_heuristic_label():
    with pytest.raises(CapabilityError):
        find_anticomplete_pair(empty_graph(21), 1, 1)
    h = find_anticomplete_pair(empty_graph(21), 1, 1, mode=Mode.HEURISTIC)
    assert h and h.note == "incomplete search"


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7), st.sampled_from([1, Fraction(3, 2), 2, Fraction(5, 2), 3]))
def test_anticomplete_pair_is_complete_search(g, r):
    found = find_anticomplete_pair(g, r, r)
    exists = any(
        not (mask_of(a) & mask_of(b))
        and pair_relation(g, a, b) is Relation.ANTICOMPLETE
        and rho(g, a) >= r and rho(g, b) >= r
        for a in subsets(g.n, 1) for b in subsets(g.n, 1)
        if not set(a) & set(b)
    )
    assert bool(found) == exists
    if found:
        a, b = found.pair
        assert pair_relation(g, a, b) is Relation.ANTICOMPLETE
        assert rho(g, a) >= r and rho(g, b) >= r


# -- minimal cutsets -----------------------------------------------------------

@pytest.mark.parametrize("g,a,b,want", [
    (path_graph(3), {0}, {2}, {1}),
    (cycle_graph(4), {0}, {2}, {1, 3}),
    (path_graph(5), {0}, {4}, {1}),
])
def test_minimal_cutset_examples(g, a, b, want):
    assert minimal_cutset(g, a, b) == want


@pytest.mark.parametrize("g,a,b", [
    (path_graph(3), {0}, {1}),          # not anticomplete
    (path_graph(3), {0}, {0, 2}),       # overlapping
    (empty_graph(3), {0}, {2}),         # disconnected graph
    (path_graph(3), set(), {2}),
])
def test_minimal_cutset_preconditions(g, a, b):
    with pytest.raises(ValueError):
        minimal_cutset(g, a, b)


@settings(max_examples=60)
@given(graphs(max_n=8, min_n=3), st.data())
def test_minimal_cutset_postconditions(g, data):
    if not is_connected(g):
        return
    a = data.draw(st.integers(0, g.n - 1))
    far = [v for v in range(g.n) if v != a and not g.has_edge(a, v)]
    if not far:
        return
    b = data.draw(st.sampled_from(far))
    s = mask_of(minimal_cutset(g, {a}, {b}))
    assert separates(g, s, 1 << a, 1 << b)
    for v in range(g.n):
        if s >> v & 1:
            assert not separates(g, s & ~(1 << v), 1 << a, 1 << b)


def test_attachment_split_examples():
    p3 = cutset_attachment_split(path_graph(3), {1}, {0}, {2})
    assert p3[1].kind is Attachment.COMPLETE_TO_A and p3[1].complete_to_b
    c4 = cutset_attachment_split(cycle_graph(4), {1, 3}, {0}, {2})
    assert all(att.complete_to_a and att.complete_to_b for att in c4.values())
    c5 = cutset_attachment_split(cycle_graph(5), {1, 4}, {0}, {2, 3})
    assert c5[1].kind is Attachment.COMPLETE_TO_A and c5[4].kind is Attachment.COMPLETE_TO_A
    assert c5[1].mixed_on_b and c5[4].mixed_on_b


def test_attachment_split_reports_p5_witness():
    # in P7 the middle vertex separates {1,2} from {4,5} but is complete to neither
    g = path_graph(7)
    with pytest.raises(InvariantViolation) as info:
        cutset_attachment_split(g, {3}, {1, 2}, {4, 5})
    assert info.value.witness == find_induced_p5(g)
    split = cutset_attachment_split(g, {3}, {1, 2}, {4, 5}, assume_p5_free=False)
    assert split[3].kind is Attachment.MIXED_ON_BOTH


def test_attachment_split_rejects_non_minimal_cutset():
    with pytest.raises(ValueError):
        cutset_attachment_split(path_graph(4), {1, 2}, {0}, {3})


# -- comb ----------------------------------------------------------------------

def test_comb_single_anchor():
    g = join(complete_graph(1), empty_graph(3))
    out = comb(g, {0}, {1, 2, 3}, delta=3, gamma=1)
    assert not out.small and out.k == 1 and out.blocks == ({1, 2, 3},)


def test_comb_perfect_matching():
    g = Graph.from_edges(8, [(i, i + 4) for i in range(4)])
    out = comb(g, range(4), range(4, 8), delta=1, gamma=Fraction(1, 16))
    assert out.k == 4
    assert sorted(map(sorted, out.blocks)) == [[4], [5], [6], [7]]
    assert validate_comb(g, out, Fraction(1, 16)) == []


def test_comb_small_b_only_below_threshold():
    g = Graph.from_edges(8, [(i, i + 4) for i in range(4)])
    # gamma so large that no comb exists; |B|^2 = 16 < 400 * 100 * 1
    assert comb(g, range(4), range(4, 8), delta=1, gamma=100).small


def test_comb_preconditions():
    g = Graph.from_edges(4, [(0, 2), (0, 3)])
    with pytest.raises(ValueError):
        comb(g, {0}, {2, 3}, delta=1, gamma=1)          # degree exceeds delta
    with pytest.raises(ValueError):
        comb(g, {0, 1}, {1, 2}, delta=2, gamma=1)       # overlap
    with pytest.raises(ValueError):
        comb(Graph.from_edges(3, [(0, 1)]), {0}, {1, 2}, delta=2, gamma=1)


def test_validate_comb_detects_corruption():
    g = Graph.from_edges(8, [(i, i + 4) for i in range(4)])
    bad = CombOutcome(False, (0, 1), (frozenset({4}), frozenset({4, 5})))
    problems = validate_comb(g, bad, Fraction(1, 16))
    assert any("overlap" in p for p in problems)
    assert any("not complete" in p for p in problems)


# -- complete blockades --------------------------------------------------------

def test_blockade_examples():
    k4 = find_complete_blockade(complete_graph(4), 4, 1)
    assert k4.blockade.blocks == tuple(frozenset({v}) for v in range(4))
    assert not find_complete_blockade(empty_graph(5), 2, 1)
    jc = join(cycle_graph(5), cycle_graph(5))
    found = find_complete_blockade(jc, 2, Fraction(5, 2)).blockade
    assert found.blocks == (frozenset(range(5)), frozenset(range(5, 10)))
    assert found.kind(jc) is Relation.COMPLETE


def test_blockade_validation_and_heuristic():
    with pytest.raises(ValueError):
        Blockade((frozenset({0}), frozenset({0, 1})))
    with pytest.raises(ValueError):
        Blockade((frozenset(),))
    h = find_complete_blockade(complete_graph(15), 3, 1, mode=Mode.HEURISTIC)
    assert h.note == "incomplete search" and h.blockade.k == 15
    with pytest.raises(CapabilityError):
        find_complete_blockade(complete_graph(15), 3, 1)


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=7), st.integers(2, 3), st.sampled_from([1, Fraction(3, 2), 2]))
def test_blockade_search_is_complete(g, k, m):
    found = find_complete_blockade(g, k, m)
    # brute force over k-tuples of disjoint, pairwise complete vertex sets
    good = [s for s in subsets(g.n, 1) if brute_hall(induced(g, s)) >= m]
    exists = any(
        all(not set(x) & set(y) and pair_relation(g, x, y) is Relation.COMPLETE
            for x, y in itertools.combinations(combo, 2))
        for combo in itertools.combinations(good, k)
    )
    assert bool(found) == exists
    if found:
        b = found.blockade
        assert b.k == k and b.kind(g) is Relation.COMPLETE
        assert all(rho(g, x) >= m for x in b.blocks)


# -- eps-restricted subgraphs --------------------------------------------------

@pytest.mark.parametrize("g,size,kind", [
    (complete_graph(5), 5, {Sparsity.DENSE}),
    (empty_graph(5), 5, {Sparsity.SPARSE}),
    (cycle_graph(5), 2, {Sparsity.SPARSE, Sparsity.DENSE}),
])
def test_eps_restricted_examples(g, size, kind):
    s, cls = find_eps_restricted_subgraph(g, Fraction(1, 4))
    assert len(s) == size and cls in kind
    assert sparsity_class(induced(g, s), Fraction(1, 4)) is cls


@settings(max_examples=40)
@given(graphs(max_n=7, min_n=1))
def test_eps_restricted_is_maximum(g):
    eps = Fraction(1, 3)
    s, cls = find_eps_restricted_subgraph(g, eps)
    assert cls.restricted
    best = max(len(t) for t in subsets(g.n, 1) if sparsity_class(induced(g, t), eps).restricted)
    assert len(s) == best
