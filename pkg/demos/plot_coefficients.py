"""
Exact q-expansions of D5 and its companions
===========================================

Every coefficient below is an exact Python integer; no floating point is
involved until a series is evaluated.
"""

from d5mock import expansion
from d5mock.qexpand import d5_decomposition_residual

# D5, h1 and h2 up to q^12
for name in ("d5", "h1", "h2"):
    print(f"{name:8s}", list(expansion(name, 13).coeffs))

# D5* is supported on the numbers n(n+1) with alternating signs
print("d5-star ", expansion("d5-star", 60).nonzero_terms())

# D5 splits into 2 h1 minus an eta-quotient multiple of omega; the difference
# vanishes coefficient by coefficient
residual = d5_decomposition_residual(200)
print("decomposition residual through q^199 is zero:", residual.valuation() is None)

# coefficients grow quickly, which is why they are never machine integers
big = expansion("h1", 400).coeffs[-1]
print(f"h1 coefficient of q^399 has {len(str(big))} digits")
