"""Compare the two candidate cos(beta) choices for the Gisin construction.

``python -m chshkit.bounds`` prints the markdown table kept in
docs/bound_comparison.md.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chsh import chsh_value, gisin_predicted_value, gisin_settings, printed_bound
from .optimizer import maximize_chsh

TABLE_C1_SQUARED = (0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999)


@dataclass(frozen=True)
class BoundRow:
    c1: float
    c2: float
    s_squared: float  # S at x* = (1 + 4 c1^2 c2^2)^(-1/2)
    s_printed: float  # S at x* = (1 + 4 |c1 c2|)^(-1/2)
    printed_bound: float
    predicted: float
    optimizer: float


def comparison_row(c1: float, c2: float, seed: int = 0) -> BoundRow:
    return BoundRow(
        c1=c1,
        c2=c2,
        s_squared=chsh_value(c1, c2, gisin_settings(c1, c2, variant="squared")).s_value,
        s_printed=chsh_value(c1, c2, gisin_settings(c1, c2, variant="printed")).s_value,
        printed_bound=printed_bound(c1, c2),
        predicted=gisin_predicted_value(c1, c2),
        optimizer=maximize_chsh(c1, c2, seed=seed).best_s,
    )


def comparison_rows(c1_squared=TABLE_C1_SQUARED, seed: int = 0) -> list[BoundRow]:
    return [comparison_row(math.sqrt(q), math.sqrt(1.0 - q), seed) for q in c1_squared]


def markdown_table(rows: list[BoundRow]) -> str:
    lines = [
        "| c1^2 | c1 c2 | S, x* = (1+4c1²c2²)^-1/2 | S, x* = (1+4\\|c1c2\\|)^-1/2 "
        "| 2(1+4\\|c1c2\\|)^-1/2 | 2√(1+4c1²c2²) | optimizer max |",
        "|---|---|---|---|---|---|---|",
    ]
    for r in rows:
        lines.append(
            f"| {r.c1 * r.c1:.3f} | {r.c1 * r.c2:.6f} | {r.s_squared:.10f} | {r.s_printed:.10f} "
            f"| {r.printed_bound:.10f} | {r.predicted:.10f} | {r.optimizer:.10f} |"
        )
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    print(markdown_table(comparison_rows()), end="")
