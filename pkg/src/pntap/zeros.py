"""Zero-ordinate datasets and exact weighted sums over them.

A ZeroTable holds the positive ordinates of non-trivial zeros, either of
the zeta function or of one Dirichlet L-function.  Tables are the ground
truth against which every estimator in this package is checked.  Zeta
tables sum over positive ordinates only; Dirichlet tables count each
stored ordinate twice because zeros come in conjugate pairs.

File formats
------------
zeta:      plain text, one decimal ordinate per line, ascending.
dirichlet: CSV with header ``q,index,gamma``; gamma > 0 ascending within
           each (q, index) group.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import CoverageError, DomainError, ParseError, ValidationError

OMEGA_DEFAULT = 21.664472  # max over primitive characters mod q <= 10^4 of the low-zero sum


@dataclass(frozen=True)
class CharacterLabel:
    """Conrey-style label (modulus, index) of a Dirichlet character."""

    q: int
    index: int

    def __post_init__(self):
        if self.q < 3:
            raise ValidationError(f"modulus must be >= 3, got {self.q}")
        if math.gcd(self.index, self.q) != 1:
            raise ValidationError(f"index {self.index} is not coprime to modulus {self.q}")


@dataclass(frozen=True, eq=False)
class ZeroTable:
    """Ascending positive zero ordinates with provenance metadata."""

    kind: str  # "zeta" | "dirichlet"
    ordinates: np.ndarray
    max_height: float
    label: Optional[CharacterLabel] = None
    source: str = ""

    def __post_init__(self):
        if self.kind not in ("zeta", "dirichlet"):
            raise ValidationError(f"unknown table kind {self.kind!r}")
        ords = np.asarray(self.ordinates, dtype=np.float64)
        if ords.ndim != 1:
            raise ValidationError("ordinates must be a flat sequence")
        if ords.size and ords[0] <= 0.0:
            raise ValidationError("ordinates must be positive")
        if ords.size > 1 and not np.all(np.diff(ords) > 0.0):
            raise ValidationError("ordinates must be strictly increasing")
        object.__setattr__(self, "ordinates", ords)
        if self.max_height < (ords[-1] if ords.size else 0.0):
            raise ValidationError("max_height is below the last ordinate")

    def __len__(self) -> int:
        return int(self.ordinates.size)


def load_zero_table(
    path,
    kind: str = "zeta",
    label: Optional[CharacterLabel] = None,
    source: str = "",
) -> ZeroTable:
    """Load and validate a zero table from disk.

    For kind="dirichlet" with a label, only rows matching the label's
    (q, index) are kept; without a label the file must contain a single
    group.  Malformed lines raise ParseError with their line number.
    """
    if kind == "zeta":
        ords = []
        with open(path) as fh:
            for i, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    v = float(line)
                except ValueError:
                    raise ParseError(f"not a decimal ordinate: {line!r}", line_number=i)
                if not math.isfinite(v) or v <= 0.0:
                    raise ParseError(f"ordinate must be a positive real: {line!r}", line_number=i)
                ords.append(v)
        arr = np.array(ords, dtype=np.float64)
        if arr.size > 1 and not np.all(np.diff(arr) > 0.0):
            bad = int(np.nonzero(np.diff(arr) <= 0.0)[0][0]) + 2
            raise ValidationError(f"ordinates not strictly ascending near line {bad}")
        return ZeroTable(
            kind="zeta",
            ordinates=arr,
            max_height=float(arr[-1]) if arr.size else 0.0,
            source=source or str(path),
        )

    if kind != "dirichlet":
        raise ValidationError(f"unknown table kind {kind!r}")
    groups: dict[tuple[int, int], list[float]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty dirichlet zeros file (expected header q,index,gamma)", line_number=1)
        if [h.strip().lower() for h in header] != ["q", "index", "gamma"]:
            raise ParseError(f"expected header q,index,gamma, got {header!r}", line_number=1)
        for i, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", line_number=i)
            try:
                q, idx, gamma = int(row[0]), int(row[1]), float(row[2])
            except ValueError:
                raise ParseError(f"could not parse row {row!r}", line_number=i)
            if gamma <= 0.0 or not math.isfinite(gamma):
                raise ParseError(f"gamma must be a positive real, got {row[2]!r}", line_number=i)
            groups.setdefault((q, idx), []).append(gamma)
    if label is not None:
        key = (label.q, label.index)
        if key not in groups:
            groups[key] = []
        chosen = groups[key]
    else:
        if len(groups) > 1:
            raise ValidationError(
                f"file holds {len(groups)} character groups; pass a label to select one"
            )
        key, chosen = next(iter(groups.items())) if groups else ((0, 0), [])
        if label is None and groups:
            label = CharacterLabel(q=key[0], index=key[1])
    arr = np.array(chosen, dtype=np.float64)
    if arr.size > 1 and not np.all(np.diff(arr) > 0.0):
        raise ValidationError(f"ordinates for group {key} not strictly ascending")
    return ZeroTable(
        kind="dirichlet",
        ordinates=arr,
        max_height=float(arr[-1]) if arr.size else 0.0,
        label=label,
        source=source or str(path),
    )


def dump_zero_table(table: ZeroTable, path, decimals: int = 10) -> None:
    """Serialize a table back to its file format at the declared precision."""
    if table.kind == "zeta":
        with open(path, "w") as fh:
            for g in table.ordinates:
                fh.write(f"{g:.{decimals}f}\n")
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["q", "index", "gamma"])
        q = table.label.q if table.label else 0
        idx = table.label.index if table.label else 0
        for g in table.ordinates:
            writer.writerow([q, idx, f"{g:.{decimals}f}"])


def exact_weighted_sum(
    table: ZeroTable,
    phi: Callable[[float], float],
    U: float,
    V: float,
    endpoint_half_weight: bool = True,
) -> float:
    """Sum phi over the table's ordinates in [U, V].

    Endpoint hits are weighted 1/2 when the flag is set.  Dirichlet tables
    double each term (stored positive ordinates stand for conjugate pairs).
    Raises CoverageError when V exceeds the table's certified height.
    """
    if U > V:
        raise DomainError(f"need U <= V, got U={U}, V={V}")
    if V > table.max_height:
        raise CoverageError(
            f"V={V} exceeds table max_height={table.max_height}; the sum cannot be certified"
        )
    ords = table.ordinates
    lo = np.searchsorted(ords, U, side="left")
    hi = np.searchsorted(ords, V, side="right")
    sel = ords[lo:hi]
    if sel.size == 0:
        return 0.0
    weights = np.ones(sel.size)
    if endpoint_half_weight:
        weights[sel == U] = 0.5
        weights[sel == V] = 0.5
    total = math.fsum(w * phi(g) for w, g in zip(weights, sel))
    if table.kind == "dirichlet":
        total *= 2.0
    return total


def omega_low_sum(table: ZeroTable) -> float:
    """Sum of (1/4 + gamma^2)^(-1/2) over |gamma| <= 200 for a Dirichlet table."""
    if table.kind != "dirichlet":
        raise DomainError("omega_low_sum is defined for dirichlet tables")
    if table.max_height < 200.0:
        raise CoverageError(
            f"table certifies heights only to {table.max_height}; need 200"
        )
    return exact_weighted_sum(table, lambda t: 1.0 / math.sqrt(0.25 + t * t), 0.0, 200.0)
