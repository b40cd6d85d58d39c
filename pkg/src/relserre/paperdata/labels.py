"""2-adic labels A.B.C.D, the S_G label sets and the bundled appendix table."""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ..ellq.curves import CurveModel
from ..errors import DataIntegrityError, ParseError

OBSTRUCTIONS = ("2Cs", "2B", "2Cn")

S_G = {
    "2Cs": (
        "2.6.0.1", "8.12.0.2", "4.12.0.2", "8.12.0.1", "4.12.0.1", "8.12.0.3",
        "8.24.0.5", "8.24.0.7", "8.24.0.2", "8.24.0.1", "8.12.0.4", "8.24.0.6",
        "8.24.0.8", "8.24.0.3", "8.24.0.4",
    ),
    "2B": ("2.3.0.1", "8.6.0.2", "8.6.0.4", "8.6.0.1", "8.6.0.6", "8.6.0.3", "8.6.0.5"),
    "2Cn": ("2.2.0.1", "4.4.0.2", "8.4.0.1"),
}

# k with H(2^k) in M(G-hat(2^k)), and the adelic index
M_SET_EXPONENT = {"2Cs": 3, "2B": 2, "2Cn": 2}
ADELIC_INDEX = {"2Cs": 48, "2B": 12, "2Cn": 12}
COMMUTATOR_INDEX = {"2Cs": 48, "2B": 12, "2Cn": 12}


def obstruction_of_label(label: str) -> str:
    for g, labels in S_G.items():
        if label in labels:
            return g
    raise ParseError(f"{label!r} is not in any S_G")


@dataclass(frozen=True)
class TwoAdicLabel:
    A: int
    B: int
    C: int
    D: int

    @classmethod
    def parse(cls, text: str) -> TwoAdicLabel:
        parts = text.strip().split(".")
        if len(parts) != 4:
            raise ParseError(f"2-adic label {text!r} is not of the form A.B.C.D")
        try:
            A, B, C, D = (int(x) for x in parts)
        except ValueError as exc:
            raise ParseError(f"2-adic label {text!r} has non-integer parts") from exc
        if A < 1 or A & (A - 1):
            raise ParseError(f"level {A} of {text!r} is not a power of 2")
        return cls(A, B, C, D)

    @property
    def level(self) -> int:
        return self.A

    @property
    def index(self) -> int:
        return self.B

    def __str__(self):
        return f"{self.A}.{self.B}.{self.C}.{self.D}"


def data_dir(override: str | os.PathLike | None = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get("RELSERRE_DATA")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent.parent / "data"


@dataclass(frozen=True)
class AppendixRow:
    obstruction: str
    label: str
    name: str
    coefficients: tuple
    m_E: int
    correction: Fraction | None

    @property
    def curve(self) -> CurveModel:
        return CurveModel(*self.coefficients, name=self.name)


def load_appendix(directory=None) -> list:
    path = data_dir(directory) / "appendix.csv"
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            corr = None
            if rec["corr_num"]:
                corr = Fraction(int(rec["corr_num"]), int(rec["corr_den"]))
            row = AppendixRow(
                rec["G"], rec["label"], rec["name"],
                tuple(int(rec[k]) for k in ("a1", "a2", "a3", "a4", "a6")),
                int(rec["mE"]), corr,
            )
            lab = TwoAdicLabel.parse(row.label)
            if row.m_E % lab.A:
                raise DataIntegrityError(f"appendix row {row.name}: m_E={row.m_E} not divisible by level {lab.A}")
            if obstruction_of_label(row.label) != row.obstruction:
                raise DataIntegrityError(f"appendix row {row.name}: label {row.label} not in S_{row.obstruction}")
            rows.append(row)
    return rows
