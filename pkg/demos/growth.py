"""Growth of decomposition numbers under simple additive functors.

Prints the sequence ``dn(F^n(M))``, the slope estimates ``log2(a_n)/n``
and the fitted rational generating function for three functors.
"""

from __future__ import annotations

from dekomp.conjecture import direct_sum_with, explore, self_power, tensor_with
from dekomp.matrix import RingMatrix
from dekomp.rings import parse_ring


def show(label: str, report) -> None:
    d = report.to_dict()
    print(label)
    print("  sequence:", " ".join(map(str, d["sequence"])))
    if d["last_k_average"] is not None:
        print(f"  last slopes average: {d['last_k_average']:.4f}")
    gf = d["generating_function"]
    if gf:
        print(f"  generating function: {gf['numerator']} / {gf['denominator']}")
        print(f"  limit: {d['exact_limit']} (exact: {d['limit_is_exact']})")
    print("  verdict:", d["verdict"])


def main() -> None:
    R = parse_ring("GF(2)[x,y]/m^2")
    M = RingMatrix.from_rows(R, [["x", "0"], ["0", "y"]])
    show("self power m = 2 on R/(x) + R/(y)", explore(self_power(2), M, 12))
    show("direct sum with R/(x)", explore(direct_sum_with(RingMatrix.from_rows(R, [["x"]])), M, 12))
    Z = parse_ring("Z")
    show("tensor with Z/2 on Z/4", explore(tensor_with(RingMatrix.from_rows(Z, [[2]])),
                                           RingMatrix.from_rows(Z, [[4]]), 10))


if __name__ == "__main__":
    main()
