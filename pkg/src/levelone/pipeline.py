"""Weight grids, the on-disk cache of invariant dimensions and the count-table pipeline."""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

from . import arthur, rootsys
from .basecounts import CountTables
from .degwcf import engine
from .groupdata import data_dir

log = logging.getLogger(__name__)

# which class dataset computes m(w) for which group
GROUP_DATASET = {"SO7": "E7+", "SO8": "E8+", "SO9": "E8so9", "G2": "G2"}


@dataclass
class PipelineLimits:
    """Ranges of the grids feeding the count extraction."""
    so7_max_w1: int = 31
    so8_max_w1: int = 34
    so8_zero_max_w1: int = 36  # grid rows with w4 = 0 go a little further
    so9_max_w1: int = 27
    g2_max_sum: int = 60


def hodge_grid(group: str, max_w1: int) -> list:
    """All Hodge tuples for the group with largest weight at most max_w1 (w+v for G2)."""
    if group == "G2":
        return [(w, v) for w in range(4, max_w1 + 1, 2) for v in range(2, w - 1, 2) if w + v <= max_w1]
    spec = arthur.group_spec(group)
    r = spec.rank
    parity = 1 if spec.sign == -1 else 0
    lo = 1 if parity else 0
    out = []

    def rec(prefix, bound):
        if len(prefix) == r:
            out.append(tuple(prefix))
            return
        for x in range(bound, lo - 1, -1):
            if x % 2 == parity:
                rec(prefix + [x], x - 2)

    rec([], max_w1)
    return sorted(out)


def weight_of(group: str, w) -> tuple:
    return rootsys.weight_from_hodge(rootsys.for_group(group), w)


def cache_path(group: str, directory: Path | None = None) -> Path:
    return Path(directory or data_dir()) / "cache" / f"m_{group}.csv"


def read_cache(path: Path) -> dict:
    if not path.exists():
        return {}
    with path.open(newline="") as fh:
        rows = csv.DictReader(fh)
        return {tuple(int(x) for x in row["weights"].split()): int(row["value"]) for row in rows}


def write_cache(path: Path, values: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["weights", "value"])
        for w in sorted(values):
            out.writerow([" ".join(map(str, w)), values[w]])


def m_grid(group: str, hodges, method: str = "auto", cache_dir: Path | None = None,
           recompute: bool = False) -> dict:
    """m(w) = dim V_w^G for the given Hodge tuples, reading and extending the CSV cache."""
    path = cache_path(group, cache_dir)
    cached = {} if recompute else read_cache(path)
    todo = [tuple(w) for w in hodges if tuple(w) not in cached]
    if todo:
        eng = engine(GROUP_DATASET[group])
        vals = eng.dims([weight_of(group, w) for w in todo], method)
        cached.update(zip(todo, vals))
        try:
            write_cache(path, cached)
        except OSError as exc:  # read-only data directories are fine
            log.warning("could not write cache %s: %s", path, exc)
    return {tuple(w): cached[tuple(w)] for w in hodges}


def so8_hodges(limits: PipelineLimits) -> list:
    grid = hodge_grid("SO8", limits.so8_zero_max_w1)
    return [w for w in grid if w[0] <= limits.so8_max_w1 or w[-1] == 0]


def build_tables(limits: PipelineLimits | None = None, cache_dir: Path | None = None,
                 recompute: bool = False, groups=("SO7", "SO8", "SO9", "G2")) -> CountTables:
    """Extract all counts in dependency order: SO7, SO8, SO9 (needs SO7), G2."""
    limits = limits or PipelineLimits()
    tables = CountTables()
    for group in groups:
        if group == "SO7":
            hodges = hodge_grid("SO7", limits.so7_max_w1)
        elif group == "SO8":
            hodges = so8_hodges(limits)
        elif group == "SO9":
            hodges = hodge_grid("SO9", limits.so9_max_w1)
        else:
            hodges = hodge_grid("G2", limits.g2_max_sum)
        dims = m_grid(group, hodges, cache_dir=cache_dir, recompute=recompute)
        log.info("%s: %d weights", group, len(dims))
        if group == "G2":
            arthur.extract_g2(dims, tables)
        else:
            arthur.extract_counts(arthur.group_spec(group), dims, tables)
    return tables
