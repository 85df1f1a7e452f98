"""Numerical criteria ruling out twisting or surgery on a fixed piece W as the
source of a family with divergent adjunction n-genera.

The ``*_condition`` helpers are plain integer arithmetic and broadcast over
numpy arrays; the ``*_applies`` functions wrap them into reports.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

TWIST = "twist_3_1"
SURGERY = "surgery_3_3"
EMBEDDING = "embedding_3_5"


class ObstructionError(ValueError):
    pass


@dataclass(frozen=True)
class CutData:
    b2_X: int
    b2_W: int
    b1_dW: int
    m: int
    n: int
    b2_complement: Optional[int] = None

    def __post_init__(self) -> None:
        for name in ("b2_X", "b2_W", "b1_dW", "m"):
            if getattr(self, name) < 0:
                raise ObstructionError(f"{name} must be non-negative")
        if self.n < 1:
            raise ObstructionError("n must be positive")
        if self.b2_complement is not None:
            if self.b2_complement < 0:
                raise ObstructionError("b2_complement must be non-negative")
            if not mv_consistent(self.b2_X, self.b2_W, self.b1_dW, self.b2_complement):
                raise ObstructionError(
                    "b2(W) + b2(X - int W) < b2(X) - b1(dW): inconsistent with Mayer-Vietoris"
                )


@dataclass(frozen=True)
class ObstructionReport:
    theorem: str
    applies: bool
    threshold_value: int
    inputs_echo: CutData
    narrative: str

    def to_dict(self) -> dict:
        d = asdict(self)
        d["inputs_echo"] = {k: v for k, v in d["inputs_echo"].items()}
        return d


def mv_consistent(b2_X, b2_W, b1_dW, b2_complement):
    return b2_W + b2_complement >= b2_X - b1_dW


# -- conditions -----------------------------------------------------------


def twist_condition(n, b1_dW):
    return b1_dW < n


def surgery_threshold(m, b2_X, b2_W, b1_dW):
    return m - b2_X + b2_W + 3 * b1_dW


def surgery_condition(m, b2_X, b2_W, b1_dW, n):
    return surgery_threshold(m, b2_X, b2_W, b1_dW) < n


def embedding_condition(m, n, b2_W, b1_dW):
    return m - n < b2_W - 4 * b1_dW


def twist_finiteness_threshold(b1_dW):
    """Least n for which twisting W leaves finitely many adjunction n-genus values."""
    return b1_dW + 1


def surgery_finiteness_threshold(m, b2_complement, b1_dW):
    """Least n for which surgery on W leaves finitely many adjunction n-genus values."""
    return m - b2_complement + 2 * b1_dW + 1


def reglued_b2_bound(m, b2_complement, b1_dW):
    """Upper bound on b2 of any piece glued in by surgery, for members with b2 = m."""
    return m - b2_complement + b1_dW


def complement_b2_bound(b2_X, b2_W, b1_dW):
    """Upper bound on b2(X - int W) for an embedded copy of W."""
    return b2_X - b2_W + b1_dW


# -- reports ----------------------------------------------------------------


def twist_applies(n: int, b1_dW: int) -> ObstructionReport:
    if n < 1 or b1_dW < 0:
        raise ObstructionError("need n >= 1 and b1(dW) >= 0")
    ok = bool(twist_condition(n, b1_dW))
    rel = "<" if ok else ">="
    text = (
        f"Twist obstruction: b1(dW) = {b1_dW} {rel} n = {n}; "
        + ("the family cannot be generated by twisting W." if ok
           else "hypothesis fails (strict inequality required); no conclusion.")
    )
    return ObstructionReport(TWIST, ok, n, CutData(0, 0, b1_dW, 0, n), text)


def surgery_applies(m: int, b2_X: int, b2_W: int, b1_dW: int, n: int, b2_complement: int | None = None) -> ObstructionReport:
    data = CutData(b2_X, b2_W, b1_dW, m, n, b2_complement)
    t = surgery_threshold(m, b2_X, b2_W, b1_dW)
    ok = bool(t < n)
    text = (
        f"Surgery obstruction: m - b2(X) + b2(W) + 3 b1(dW) = {m} - {b2_X} + {b2_W} + 3*{b1_dW} = {t}"
        f" {'<' if ok else '>='} n = {n}; "
        + ("the family cannot be generated by surgeries on W." if ok
           else "hypothesis fails (strict inequality required); no conclusion.")
    )
    if b2_complement is not None:
        text += (
            f" Finiteness holds for n >= {surgery_finiteness_threshold(m, b2_complement, b1_dW)};"
            f" any reglued piece has b2 <= {reglued_b2_bound(m, b2_complement, b1_dW)}."
        )
    return ObstructionReport(SURGERY, ok, t, data, text)


def embedding_applies(m: int, n: int, b2_W: int, b1_dW: int, b2_X: int | None = None) -> ObstructionReport:
    if n < 1 or m < 0 or b2_W < 0 or b1_dW < 0:
        raise ObstructionError("need n >= 1 and non-negative Betti numbers")
    ok = bool(embedding_condition(m, n, b2_W, b1_dW))
    rhs = b2_W - 4 * b1_dW
    text = (
        f"Embedding obstruction: m - n = {m - n} {'<' if ok else '>='} b2(W) - 4 b1(dW) = {rhs}; "
        + ("the family cannot be generated by twisting re-embedded copies of W." if ok
           else "hypothesis fails (strict inequality required); no conclusion.")
    )
    data = CutData(b2_X if b2_X is not None else m, b2_W, b1_dW, m, n)
    return ObstructionReport(EMBEDDING, ok, m - n, data, text)


@dataclass(frozen=True)
class MVCheck:
    consistent: bool
    upper_slack: int
    lower_slack: int


def mv_rank_check(b2_A: int, b2_B: int, b1_dW: int, b2_glued: int) -> MVCheck:
    """Both Mayer-Vietoris bounds on b2 of ``A ∪ B`` glued along a 3-manifold with the given b1."""
    upper = b2_A + b2_B + b1_dW - b2_glued
    lower = b2_glued - (b2_A + b2_B - b1_dW)
    return MVCheck(upper >= 0 and lower >= 0, upper, lower)


def component_orientation_count(components: int) -> int:
    """Orientation choices for the reglued copy of a W with this many components."""
    if components < 1:
        raise ObstructionError("need at least one component")
    return 2 ** components
