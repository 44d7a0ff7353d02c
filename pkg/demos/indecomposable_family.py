"""Walk through the bidiagonal family over GF(p)[x,y]/m^2.

Each member is a single relation chain ``x e_i + y e_{i+1}``. It has no
column blocks, and the exhaustive idempotent search confirms that no
change of basis produces any. The polynomial identity behind every
chain length is checked as well.

Run with ``python3 demos/indecomposable_family.py``.
"""

from __future__ import annotations

import time

from dekomp.category import reduce_object, to_module
from dekomp.family import build_example, kernel_vector, verify_indecomposable, verify_kernel_span
from dekomp.matrix import block_number
from dekomp.modules import search_idempotent
from dekomp.rings import parse_ring


def main() -> None:
    ring = parse_ring("GF(2)[x,y]/m^2")
    for n in range(1, 5):
        inst = build_example(n, ring)
        t0 = time.perf_counter()
        certified = verify_indecomposable(inst)
        M = to_module(reduce_object(inst.matrix))
        search = search_idempotent(M)
        print(f"n = {n}: {inst.matrix}")
        print(f"  |M| = 2^{M.dim}, top dimension {M.top_dim}, bn = {block_number(inst.matrix)}")
        print(f"  indecomposable: {certified} ({search.candidates_checked} top candidates, "
              f"{time.perf_counter() - t0:.3f}s)")

    print()
    for n in range(1, 4):
        w = kernel_vector(n, 3)
        R = parse_ring("GF(3)[X,Y]")
        print(f"kernel over GF(3)[X,Y], n = {n}: ({', '.join(R.format(a) for a in w)})"
              f"  verified = {verify_kernel_span(n, 3)}")


if __name__ == "__main__":
    main()
