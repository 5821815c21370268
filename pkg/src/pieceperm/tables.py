"""Reference tables for the subfield-modified Gold and Bracken-Leander maps.

Each row is ``f = A o Inv`` on the subfield with the listed affine ``A``.
Golden values are stored verbatim; ``run_table`` recomputes every cell.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import funcrep, spectra
from .cache import Cache
from .gf2n import make_field
from .recipe import parse_piecewise
from .constructions import materialize


@dataclass(frozen=True)
class TableDef:
    table_id: str
    n: int
    s: int
    g: str
    maps: tuple[str, ...]
    labels: tuple[str, ...]
    columns: tuple[str, ...]
    expected: tuple[tuple[int, ...], ...]

    def recipes(self) -> list[str]:
        return [f"piecewise(f=affine_inv({A});g={self.g};s={self.s})" for A in self.maps]


_SMALL_MAPS = ("x", "x+w", "w*x^2+w", "w*x", "w^2*x^2+w")
_SMALL_LABELS = ("x", "x+ω", "ωx²+ω", "ωx", "ω²x²+ω")

TABLES: dict[str, TableDef] = {
    "T2": TableDef("T2", 6, 2, "gold(k=2)", _SMALL_MAPS, _SMALL_LABELS, ("degree", "nl", "delta"),
                   ((2, 24, 4), (4, 20, 6), (5, 20, 6), (5, 22, 6), (5, 22, 6))),
    "T3": TableDef("T3", 10, 2, "gold(k=2)", _SMALL_MAPS, _SMALL_LABELS, ("degree", "nl", "delta"),
                   ((2, 480, 4), (8, 476, 6), (9, 476, 6), (9, 478, 6), (9, 478, 6))),
    "T4": TableDef("T4", 12, 4, "bracken_leander(k=3)",
                   ("x^2", "x^2+1", "w^2*x^2+w", "x+w", "w*x^2"),
                   ("x²", "x²+1", "ω²x²+ω", "x+ω", "ωx²"), ("degree", "nl", "delta"),
                   ((3, 1984, 4), (8, 1976, 6), (11, 1976, 6), (11, 1978, 6), (11, 1980, 6))),
    "T5": TableDef("T5", 6, 2, "gold(k=2)", _SMALL_MAPS, _SMALL_LABELS, ("beta",),
                   ((4,), (12,), (12,), (16,), (12,))),
    "T6": TableDef("T6", 10, 2, "gold(k=2)", _SMALL_MAPS, _SMALL_LABELS, ("beta",),
                   ((4,), (8,), (8,), (8,), (8,))),
}


@dataclass
class RowResult:
    label: str
    recipe: str
    values: dict[str, int]
    expected: dict[str, int]

    @property
    def mismatches(self) -> dict[str, tuple[int, int]]:
        return {c: (self.values[c], e) for c, e in self.expected.items() if self.values[c] != e}


@dataclass
class TableReport:
    table_id: str
    rows: list[RowResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(not r.mismatches for r in self.rows)

    def to_json(self) -> dict:
        return {
            "table": self.table_id,
            "pass": self.ok,
            "rows": [{"label": r.label, "recipe": r.recipe, "computed": r.values, "expected": r.expected,
                      "mismatch": sorted(r.mismatches)} for r in self.rows],
        }

    def render(self) -> str:
        cols = list(self.rows[0].expected) if self.rows else []
        lines = [f"{self.table_id}: " + ("PASS" if self.ok else "FAIL"),
                 f"  {'A':<10}" + "".join(f"{c:>10}" for c in cols)]
        for r in self.rows:
            cells = []
            for c in cols:
                got, want = r.values[c], r.expected[c]
                cells.append(f"{got:>10}" if got == want else f"{f'{got}!={want}':>10}")
            lines.append(f"  {r.label:<10}" + "".join(cells))
        return "\n".join(lines)


def metrics(lut, columns, threads: int = 1, cache: Cache | None = None) -> dict[str, int]:
    cache = cache or Cache(enabled=False)
    out = {}
    for c in columns:
        hit = cache.get(lut, c)
        if hit is None:
            if c == "degree":
                hit = funcrep.algebraic_degree(lut)
            elif c == "nl":
                hit = spectra.walsh(lut, threads=threads).nonlinearity
            elif c == "delta":
                hit = spectra.ddt(lut, threads=threads).uniformity
            elif c == "beta":
                hit = spectra.bct(lut, threads=threads).uniformity
            else:
                raise KeyError(c)
            cache.put(lut, c, hit)
        out[c] = int(hit)
    return out


def table_pieces(table_id: str):
    t = TABLES[table_id]
    spec = make_field(t.n, s=t.s)
    return [(label, recipe, parse_piecewise(spec, recipe)) for label, recipe in zip(t.labels, t.recipes())]


def run_table(table_id: str, threads: int = 1, cache: Cache | None = None) -> TableReport:
    t = TABLES[table_id]
    report = TableReport(table_id)
    for (label, recipe, piece), exp in zip(table_pieces(table_id), t.expected):
        F = materialize(piece).renamed(recipe)
        report.rows.append(RowResult(label, recipe, metrics(F, t.columns, threads, cache), dict(zip(t.columns, exp))))
    return report
