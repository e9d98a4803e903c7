"""A subgroup that is K-subnormal for supersolubility but whose normalizer is not.

G = [U]S3 with U = GF(7)^2 carrying the faithful irreducible 2-dimensional
representation of S3.  Q, a Sylow 3-subgroup, reaches G through the
supersoluble subgroup UQ, yet its normalizer (a copy of S3) cannot be joined
to G by a maximal chain with the residual condition.

    python3 demos/k_subnormal_not_strong.py
"""
from fsubnormal import (
    is_f_subnormal,
    is_kf_subnormal,
    is_normal,
    is_strongly_kf_subnormal,
    join,
    named_example,
    normalizer,
    parse_formation,
    quotient,
    residual,
    sylow,
)

U_ = parse_formation("supersoluble")
G = named_example("intro-s3-f7")
U = residual(U_, G)
Q = sylow(G, 3)
S = normalizer(G, Q)
UQ = join(U, Q)

print(f"|G| = {G.order}, |U| = {U.order}, |UQ| = {UQ.order}, |N_G(Q)| = {S.order}")
print("G supersoluble:          ", U_.contains(G))
print("G/U supersoluble:        ", U_.contains(quotient(G, U).group))
print("UQ supersoluble:         ", U_.contains(UQ))

ok, cert = is_kf_subnormal(U_, G, Q)
print("Q K-U-subnormal:         ", ok, "via chain of orders", [H.order for H in cert.chain], cert.steps)
print("N_G(Q) normal:           ", is_normal(S, G))
print("N_G(Q) U-subnormal:      ", is_f_subnormal(U_, G, S)[0])
print("Q strongly K-U-subnormal:", is_strongly_kf_subnormal(U_, G, Q)[0])
