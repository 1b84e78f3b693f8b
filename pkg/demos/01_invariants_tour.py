"""A short tour of the exact invariants.

Run with ``python demos/01_invariants_tour.py``.  Every number printed is an
exact rational; nothing here uses floating point except the exponent.
"""

from p5lab import (
    alpha,
    blow_up,
    chi,
    chi_star,
    complement,
    cycle_graph,
    dual_weights,
    empirical_exponent,
    hall_ratio,
    omega,
    petersen_graph,
    psi,
    to_graph6,
)
from p5lab.structure import find_induced_p5

# The five-cycle is the smallest graph where the chain omega <= rho <= chi* <= chi
# is not all equalities: cliques have size 2, yet three colours are needed.
c5 = cycle_graph(5)
print("C5 as graph6:", to_graph6(c5))
print(f"omega={omega(c5)}  rho={hall_ratio(c5).value}  chi*={chi_star(c5).value}  chi={chi(c5)}")

# chi* comes from an exact LP over maximal stable sets.  The primal side is a
# fractional colouring: weights on stable sets that cover every vertex.
for s, w in sorted(chi_star(c5).weights.items(), key=lambda kv: sorted(kv[0])):
    print(f"  stable set {sorted(s)} gets weight {w}")

# The dual side gives integer vertex weights f.  Blowing each vertex up into a
# stable set of size f(v) yields a graph J whose psi = |J| / alpha(J) equals chi*.
# This is how fractional colouring reduces to the Hall-ratio statement.  The
# identity holds for any graph; C7 itself contains a P5, so its blow-up does too.
c7 = cycle_graph(7)
dw = dual_weights(c7)
j = blow_up(c7, dw.f)
print(f"\nC7: chi* = {dw.value}, dual weights {dw.f}, blow-up has {j.n} vertices")
print(f"psi(blow-up) = {psi(j)}; C7 P5-free: {find_induced_p5(c7) is None}")

# Non-uniform weights make the point clearer: a C5 with a heavy vertex.
lopsided = blow_up(c5, (3, 1, 1, 1, 1))
print(f"\nC5 blown up by (3,1,1,1,1): n={lopsided.n}, alpha={alpha(lopsided)}, "
      f"psi={psi(lopsided)}, chi*={chi_star(lopsided).value}")

# The complement of the Petersen graph has alpha = 2 and omega = 4.  Its
# empirical exponent d_hat solves alpha * omega**d = n.
pc = complement(petersen_graph())
est = empirical_exponent(pc)
print(f"\nPetersen complement: n={est.n}, alpha={est.alpha}, omega={est.omega}, d_hat={est.d_hat}")
print("contains an induced P5:", find_induced_p5(pc))
