"""Structured inequality reports and deterministic JSON serialization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


def format_float(x: float) -> str:
    """17 significant digits: enough to round-trip IEEE doubles."""
    if x != x:
        return "NaN"
    if x in (float("inf"), float("-inf")):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(float(x), ".17g")


def to_json_text(obj: Any, indent: int = 0) -> str:
    """JSON with floats rendered at 17 significant digits, keys in insertion order."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{escaped}"'
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{inner}"{k}": {to_json_text(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(f"{inner}{to_json_text(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    # numpy scalars and anything float-like
    try:
        return format_float(float(obj))
    except (TypeError, ValueError):
        raise TypeError(f"cannot serialize {type(obj)!r}")


@dataclass
class DeficitReport:
    """Result of one inequality check.

    ``deficit`` is lhs - rhs; the expected sign is per operation
    (``orientation`` +1 when the contract is deficit >= -tolerance, -1 for
    reversed inequalities). Verdicts: "equality" when |deficit| <= tolerance,
    "pass" when the oriented inequality holds beyond that, "fail" otherwise.
    """

    op: str
    inputs: dict
    lhs: float
    rhs: float
    deficit: float
    tolerance: float
    verdict: str
    notes: list[str] = field(default_factory=list)

    @classmethod
    def from_sides(
        cls,
        op: str,
        inputs: dict,
        lhs: float,
        rhs: float,
        tolerance: float,
        orientation: float = 1.0,
        notes: list[str] | None = None,
    ) -> "DeficitReport":
        deficit = lhs - rhs
        if abs(deficit) <= tolerance:
            verdict = "equality"
        elif orientation * deficit >= -tolerance:
            verdict = "pass"
        else:
            verdict = "fail"
        return cls(op, inputs, float(lhs), float(rhs), float(deficit),
                   float(tolerance), verdict, notes or [])

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    def to_dict(self) -> dict:
        out = {
            "op": self.op,
            "inputs": self.inputs,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "deficit": self.deficit,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self) -> str:
        return to_json_text(self.to_dict())
