"""Two global searches: SO25 parameters with the infinitesimal character of the trivial
representation, and tempered parameters with consecutive half-integral eigenvalues."""
from __future__ import annotations

from collections import Counter
from importlib import resources

from . import arthur
from .basecounts import (ORTHOGONAL, SYMPLECTIC, TRIVIAL_LABEL, CountTables, CuspidalLabel,
                         MissingCount, s1, s2, small_orthogonal)


def _small_rank_labels(max_weight: int) -> list:
    """Labels of rank <= 5 whose counts follow from S(w) and S(w, v)."""
    out = [TRIVIAL_LABEL]
    odd = range(1, max_weight + 1, 2)
    even = range(0, max_weight + 1, 2)
    out += [CuspidalLabel(2, SYMPLECTIC, (w,)) for w in odd]
    out += [CuspidalLabel(4, SYMPLECTIC, (w, v)) for w in odd for v in odd if v < w]
    out += [CuspidalLabel(3, ORTHOGONAL, (w,)) for w in even if w > 0]
    out += [CuspidalLabel(4, ORTHOGONAL, (w, v)) for w in even for v in even if v < w]
    out += [CuspidalLabel(5, ORTHOGONAL, (w, v)) for w in even for v in even if 0 < v < w]
    return out


def known_labels(tables: CountTables, max_weight: int) -> list:
    """All labels of motivic weight <= max_weight with a known nonzero count."""
    labels = set(_small_rank_labels(max_weight))
    labels.update(l for l, v in tables.counts.items() if v and l.motivic_weight <= max_weight)
    out = []
    for lab in sorted(labels):
        try:
            c = tables.count(lab)
        except MissingCount:
            continue
        if c:
            out.append(lab)
    return out


def borcherds_blocks(tables: CountTables, max_weight: int = 23) -> list:
    """Labels of motivic weight <= max_weight, repeated according to their count."""
    out = []
    for lab in known_labels(tables, max_weight):
        out += [lab] * tables.count(lab)
    return out


def enumerate_so25_trivial(blocks) -> list:
    """Parameters for SO25 with Hodge weights 23, 21, ..., 1 made of the given labels."""
    w = tuple(range(23, 0, -2))
    return arthur.enumerate_from_labels(arthur.SO25, w, set(blocks))


def parameter_lines(params, tables: CountTables) -> list:
    """Names with the number of choices as superscript, one per parameter shape."""
    return [arthur.render(p, tables) for p in params]


def total_choices(params, tables: CountTables) -> int:
    return sum(arthur.choice_count(p, tables) for p in params)


def multiplicities_so25(params) -> list:
    return [arthur.multiplicity(p) for p in params]


def reference_so25() -> list:
    """Reference list shipped with the package, one parameter per line."""
    text = (resources.files("levelone") / "data" / "so25_reference.txt").read_text()
    return [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]


def search_tempered(n: int, tables: CountTables, labels=None) -> list:
    """Multisets of known labels, all with d = 1, whose eigenvalues are (n-1)/2, ..., -(n-1)/2."""
    target = Counter(range(n - 1, -n, -2))
    if labels is None:
        labels = known_labels(tables, n - 1)
    by_top = {}
    for lab in labels:
        by_top.setdefault(lab.motivic_weight, []).append((lab, Counter(lab.eigenvalues2())))
    found = []

    def rec(remaining: Counter, chosen: list):
        if not remaining:
            found.append(tuple(chosen))
            return
        for lab, need in by_top.get(max(remaining), []):
            if any(remaining[k] < v for k, v in need.items()):
                continue
            rest = remaining.copy()
            rest.subtract(need)
            rec(+rest, chosen + [lab])

    rec(target, [])
    return [tuple(arthur.Block(l) for l in sol) for sol in found]


def search_tempered_28(tables: CountTables) -> list:
    """Solutions at n = 28 (the expected answer is unique)."""
    return search_tempered(28, tables)


def tempered_name(blocks, tables: CountTables | None = None) -> str:
    blocks = sorted(blocks, key=lambda b: -b.top)
    parts = []
    for b in blocks:
        c = tables.count(b.label) if tables is not None else 1
        parts.append(arthur.render_block(b, c))
    return " ⊕ ".join(parts)


def tempered_gaps(tables: CountTables, upto: int = 27) -> dict:
    """n -> number of solutions, for 1 < n <= upto."""
    return {n: len(search_tempered(n, tables)) for n in range(2, upto + 1)}


__all__ = ["borcherds_blocks", "enumerate_so25_trivial", "multiplicities_so25", "search_tempered_28",
           "search_tempered", "known_labels", "reference_so25", "parameter_lines", "total_choices",
           "tempered_gaps", "tempered_name", "s1", "s2", "small_orthogonal"]
