"""Optional numba-compiled kernel for the pairwise energy tables.

The tables are small (candidates x candidates) but rebuilt every tick, so
numpy per-call overhead dominates; one fused pass removes it. The math
mirrors ``psi_attract_repulse`` and ``psi_align`` exactly; without numba the
controller falls back to the vectorized numpy assembly of the same formulas.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    HAVE_NUMBA = False

if HAVE_NUMBA:

    @njit(cache=True)
    def pair_tables(pa, pb, va, vb, na, nb, dia, dib, amp_a, amp_b, k_a, k_r, k_l, eps):
        """Directed energy tables for unordered agent pairs.

        fwd[s, c, d]: energy of (candidate c of agent a[s], candidate d of
        agent b[s]) seen from a; rev is the same pair seen from b.
        """
        n_pairs, width = pa.shape[0], pa.shape[1]
        fwd = np.empty((n_pairs, width, width))
        rev = np.empty((n_pairs, width, width))
        for s in range(n_pairs):
            for c in range(width):
                for d in range(width):
                    dx = pa[s, c, 0] - pb[s, d, 0]
                    dy = pa[s, c, 1] - pb[s, d, 1]
                    dist = np.sqrt(dx * dx + dy * dy)
                    spacing = -amp_a * np.exp(-dist / k_a) + amp_b * np.exp(-dist / k_r)
                    n1 = na[s, c]
                    n2 = nb[s, d]
                    if n1 < eps or n2 < eps:
                        cos = 1.0
                    else:
                        cos = (va[s, c, 0] * vb[s, d, 0] + va[s, c, 1] * vb[s, d, 1]) / (
                            n1 * n2
                        )
                        if cos > 1.0:
                            cos = 1.0
                        elif cos < -1.0:
                            cos = -1.0
                    angle = np.arccos(cos)
                    fwd[s, c, d] = spacing + np.exp(dia[s, c] * angle / k_l)
                    rev[s, d, c] = spacing + np.exp(dib[s, d] * angle / k_l)
        return fwd, rev

else:
    pair_tables = None
