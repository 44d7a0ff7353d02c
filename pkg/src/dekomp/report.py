"""Decomposition reports and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .matrix import InvertibleMatrix, RingMatrix, block_number, direct_sum
from .rings import Ring


class CertificationError(RuntimeError):
    """A search budget ran out before a certified answer was reached."""


@dataclass(frozen=True)
class Summand:
    presentation: RingMatrix
    multiplicity: int
    size: int | None  # None for infinite modules

    def sort_key(self):
        return _summand_key(self.presentation, self.size)


def _summand_key(presentation: RingMatrix, size: int | None):
    from .matrix import format_matrix_text

    return (size is None, size or 0, format_matrix_text(presentation))


@dataclass(frozen=True)
class Certificate:
    """``P · minimized · Q == W`` with ``W`` block diagonal, one block per summand."""

    minimized: RingMatrix
    P: InvertibleMatrix
    Q: InvertibleMatrix
    W: RingMatrix

    def verify(self) -> bool:
        return self.P.matrix @ self.minimized @ self.Q.matrix == self.W

    @property
    def bn(self) -> int:
        return block_number(self.W)


@dataclass(frozen=True)
class DecompositionReport:
    ring: Ring
    input: RingMatrix
    engine: str
    dn: int
    summands: tuple[Summand, ...]
    certificate: Certificate | None = None
    certified: bool = True
    notes: tuple[str, ...] = field(default=())

    def summand_list(self) -> list[RingMatrix]:
        """Summand presentations repeated by multiplicity."""
        return [s.presentation for s in self.summands for _ in range(s.multiplicity)]

    def direct_sum(self) -> RingMatrix:
        parts = self.summand_list()
        if not parts:
            return RingMatrix.zeros(self.ring, 0, 0)
        return direct_sum(*parts)

    def to_dict(self) -> dict:
        out = {
            "ring": str(self.ring),
            "input": matrix_to_dict(self.input),
            "engine": self.engine,
            "dn": self.dn,
            "certified": self.certified,
            "summands": [
                {"presentation": matrix_to_dict(s.presentation),
                 "multiplicity": s.multiplicity,
                 "size": s.size}
                for s in self.summands
            ],
            "certificate": None,
        }
        if self.certificate is not None:
            c = self.certificate
            out["certificate"] = {
                "minimized": matrix_to_dict(c.minimized),
                "P": matrix_to_dict(c.P.matrix),
                "Q": matrix_to_dict(c.Q.matrix),
                "W": matrix_to_dict(c.W),
                "bn": c.bn,
            }
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def plain(self) -> str:
        lines = [f"ring: {self.ring}", f"engine: {self.engine}", f"dn = {self.dn}"]
        for s in self.summands:
            lines.append(f"  {s.multiplicity} x {s.presentation}  (size {s.size if s.size is not None else 'infinite'})")
        if self.certificate is not None:
            c = self.certificate
            lines.append(f"certificate: W = {c.W}, bn(W) = {c.bn}")
            lines.append(f"  P = {c.P.matrix}")
            lines.append(f"  Q = {c.Q.matrix}")
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines)


def matrix_to_dict(A: RingMatrix) -> dict:
    return {"rows": A.nrows, "cols": A.ncols, "entries": A.entries_text()}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"
