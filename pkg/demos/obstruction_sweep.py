"""Which n are ruled out by the sum-of-squares argument, and where the PDS route survives."""

from collections import Counter

from leekit.obstruct import pds_route_check, quadratic_sum_obstruction, verify_certificate

kinds = Counter()
for n in range(3, 201):
    c = quadratic_sum_obstruction(n)
    if c is None:
        kinds["open"] += 1
        continue
    assert verify_certificate(c)
    kinds[c.kind] += 1
    if n < 60:
        print(n, c.evidence["modulus"], c.evidence["modulus_factorization"])
print(dict(kinds))

# 2n^2+1 and 8n-7 both powers of 3 happens once below a million
print([n for n in range(3, 10**6) if pds_route_check(n).holds])
