"""A group outside N^3 whose Sylow normalizers are all N^3-subnormal.

G = [U]S4 with U the 3-dimensional deleted permutation module of S4 over
GF(3).  G has nilpotent length 4, every maximal subgroup has nilpotent
length at most 3, and each Sylow normalizer reaches G by a maximal chain
with the residual condition.  So the Sylow-normalizer class built from N^3
is strictly larger than N^3.

    python3 demos/wstar_larger_than_f.py
"""
from fsubnormal import ALL_PRIMES, in_w_star, maximal_subgroups, named_example, nilpotent_length, parse_formation, pi

F = parse_formation("N^3")
G = named_example("ex21-s4-f3")
print(f"|G| = {G.order}, pi(G) = {pi(G)}, nilpotent length {nilpotent_length(G)}")
print("G in N^3:", F.contains(G))
maxes = maximal_subgroups(G)
print(f"all {len(maxes)} maximal subgroups in N^3:", all(F.contains(M) for M in maxes))

flag, witnesses = in_w_star(F, ALL_PRIMES, G)
print("Sylow normalizers N^3-subnormal:", flag)
for w in witnesses:
    chain = [H.order for H in w.certificate.chain]
    print(f"  p={w.prime}: |P| = {w.subgroup.order}, |N_G(P)| = {w.tested.order}, chain {chain}, valid={w.certificate.validate()}")
