"""Searching for and checking structural certificates.

A connected P5-free graph with a clique of size two or more should have one
of three shapes: a heavy complete pair, a complete blockade, or a large
anticomplete pair.  ``trichotomy_search`` finds the best of each shape and
``validate_certificate`` re-derives every claim from scratch.
"""

import json

from p5lab import complete_graph, cycle_graph, disjoint_union, empty_graph, join
from p5lab.decomposition import (
    CompletePair,
    certificate_to_json,
    trichotomy_search,
    validate_certificate,
)

examples = {
    "C5": cycle_graph(5),
    "star K1,3": join(complete_graph(1), empty_graph(3)),
    "two triangles": disjoint_union(complete_graph(3), complete_graph(3)),
    "C5 joined to C5": join(cycle_graph(5), cycle_graph(5)),
}

for name, g in examples.items():
    r = trichotomy_search(g, "1/2")
    print(f"== {name}: rho(G) = {r.rho_g}")
    for label, cand in (("complete pair", r.complete_pair), ("blockade", r.blockade),
                        ("anticomplete", r.anticomplete)):
        if cand is None:
            print(f"   {label:13s} none")
            continue
        consts = {k: str(v) for k, v in cand.constants.items()}
        print(f"   {label:13s} valid={cand.valid} {consts}")
    print("   chosen:", json.dumps(certificate_to_json(r.certificate)))

# Every inequality in a verdict carries exact left and right sides.
g = cycle_graph(5)
cert = trichotomy_search(g, "1/2").certificate
print("\nverdict for C5:")
for row in validate_certificate(g, cert).to_json():
    print("  ", row)

# Tampering is caught: swap a vertex of Y for a non-neighbour of X.
forged = CompletePair(cert.x, frozenset({1, 2}), cert.rho_x, cert.rho_y, cert.y_param)
print("\nforged certificate:")
for chk in validate_certificate(g, forged).failures():
    print("   FAIL", chk.inequality, "| got", chk.lhs, "| need", chk.rhs)
