"""The cutset machinery behind the decomposition lemma, step by step."""

from fractions import Fraction

from p5lab import Graph, cycle_graph, path_graph
from p5lab.decomposition import anti_decompose, check_pq_sparse
from p5lab.structure import comb, cutset_attachment_split, minimal_cutset

# 1. Minimal cutsets.  Start from every neighbour of A and drop vertices in
#    ascending order while A and B stay separated.
print("P5, A={0}, B={4}: cutset", sorted(minimal_cutset(path_graph(5), {0}, {4})))
print("C5, A={0}, B={2,3}: cutset", sorted(minimal_cutset(cycle_graph(5), {0}, {2, 3})))

# 2. In a P5-free graph every vertex of a minimal cutset between two connected
#    anticomplete sides is complete to one of them.
split = cutset_attachment_split(cycle_graph(5), {1, 4}, {0}, {2, 3})
for v, att in split.items():
    print(f"  vertex {v}: {att.kind.value}")

# Long paths break this, and the split says why by returning an induced P5.
try:
    cutset_attachment_split(path_graph(7), {3}, {1, 2}, {4, 5})
except Exception as exc:  # InvariantViolation carries the witness
    print("  P7:", exc, "| witness", exc.witness)

# 3. The comb: anchors with private, large blocks.
matching = Graph.from_edges(8, [(i, i + 4) for i in range(4)])
out = comb(matching, range(4), range(4, 8), delta=1, gamma=Fraction(1, 16))
print("\ncomb on a perfect matching: anchors", out.anchors, "blocks", [sorted(b) for b in out.blocks])

# 4. The full decomposition on C5.  The precondition is (p, q)-sparsity, which
#    is checked exhaustively before anything else happens.
eps, p = Fraction(1, 4), Fraction(1)
q = (1 - eps ** 2) * Fraction(5, 2)
print(f"\nC5 is ({p},{q})-sparse:", check_pq_sparse(cycle_graph(5), p, q))
res = anti_decompose(cycle_graph(5), eps, p, q)
print("outcome", res.outcome, "certificate", res.certificate)
for step in res.trace:
    print("  ", step.to_json())
