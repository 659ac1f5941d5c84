"""
The Mordell integral and its q-series side
==========================================

The integral of exp(-alpha x^2)/cosh(alpha x) equals a combination of h1 at
q = exp(-alpha) and of h2 and an eta quotient at the dual nome.
"""

import numpy as np

from d5mock import check_main_theorem, check_watson, mordell_integral

# one integral, with its error estimate and the trapezoid size
r = mordell_integral(1.0)
print("integral at alpha=1:", complex(r.value), "err", float(r.err_estimate), "nodes", r.nodes_used)

# both sides of the transformation along a line of real alpha
for alpha in np.linspace(0.25, 4.0, 6):
    rep = check_main_theorem(float(alpha))
    print(f"alpha={alpha:5.2f}  lhs={complex(rep.lhs).real:.15f}  rel residual={float(rep.rel_residual):.1e}")

# complex alpha keeps the contour on the real axis
rep = check_main_theorem(complex(1.0, 0.6))
print("alpha=1+0.6i rel residual", float(rep.rel_residual))

# the companion formula for omega and f
for alpha in (0.5, 1.0, 2.0):
    print(f"watson alpha={alpha}: rel residual {float(check_watson(alpha).rel_residual):.1e}")
