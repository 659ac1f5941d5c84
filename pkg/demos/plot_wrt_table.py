"""
WRT invariant of the prism manifold M(2,2,2)
============================================

At q = exp(pi i/N) the D5* sum terminates, and tau_N follows from it.
"""

import numpy as np

from d5mock import d5_star_at_root, d5_star_radial_limit, wrt_table

# tau_N for small N
table = wrt_table(2, 24)
tau = np.array([complex(e.tau) for e in table])
for e, t in zip(table, tau):
    print(f"N={e.N:2d}  tau={t.real:+.12f} {t.imag:+.12f}i")

# approaching the root of unity radially from inside the disc
for N in (3, 5, 7):
    limit = d5_star_radial_limit(N)
    print(f"N={N}: radial limit {limit:.8f}, finite sum {complex(d5_star_at_root(N)):.8f}")
