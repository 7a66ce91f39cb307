"""Base counts S(w), S(w,v), small-rank orthogonal counts and the archimedean sign calculus."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from math import comb
from pathlib import Path

SYMPLECTIC, ORTHOGONAL, TRIVIAL = "symplectic", "orthogonal", "trivial"

# S(w, v) is tabulated completely for w <= 43 and partially (v <= 27) at w = 45
S2_COMPLETE_MAX = 43
S2_PARTIAL = {45: 27}


class MissingCount(LookupError):
    """A count outside the range of the available tables."""


def s1(w: int) -> int:
    """Number of level one cusp forms of weight w + 1 for SL2(Z)."""
    if w % 2 == 0:
        raise ValueError(f"S(w) needs odd w, got {w}")
    if w < 1:
        return 0
    return (w + 1) // 12 - (1 if w % 12 == 1 and w > 1 else 0)


@lru_cache(maxsize=None)
def _s2_table(path: str | None = None) -> dict:
    if path is None:
        text = (resources.files("levelone") / "data" / "s2.dat").read_text()
    else:
        text = Path(path).read_text()
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].split()
        if line:
            w, v, val = map(int, line)
            out[w, v] = val
    return out


_s2_provider = None


def set_s2_provider(func) -> None:
    """Install an external S(w, v) source (e.g. a closed formula) used outside the table range."""
    global _s2_provider
    _s2_provider = func


def s2(w: int, v: int) -> int:
    """Number of level one cuspidal pi of PGL4 with symplectic parameter and Hodge weights w > v."""
    if w % 2 == 0 or v % 2 == 0 or not (w > v > 0):
        raise ValueError(f"S(w,v) needs odd w > v > 0, got {(w, v)}")
    if w <= S2_COMPLETE_MAX or (w in S2_PARTIAL and v <= S2_PARTIAL[w]):
        return _s2_table().get((w, v), 0)
    if _s2_provider is not None:
        return _s2_provider(w, v)
    raise MissingCount(f"S({w},{v}) is outside the tabulated range")


def parity_ok(weights) -> bool:
    """Vanishing criterion for orthogonal counts: half the weight sum must match floor((r+1)/2) mod 2."""
    r = len(weights)
    return (sum(weights) // 2) % 2 == ((r + 1) // 2) % 2


def small_orthogonal(kind: str, weights) -> int:
    """O*(w), O(w, v) and O*(w, v) in terms of symplectic counts."""
    weights = tuple(weights)
    if any(x % 2 for x in weights):
        raise ValueError("orthogonal Hodge weights are even")
    if not parity_ok(weights):
        return 0
    if kind == "Ostar1":
        (w,) = weights
        return s1(w // 2) if w > 0 else 0
    if kind == "O2":
        w, v = weights
        if v == 0:
            s = s1(w // 2)
            return s * (s - 1) // 2
        return s1((w + v) // 2) * s1((w - v) // 2)
    if kind == "Ostar2":
        w, v = weights
        return s2((w + v) // 2, (w - v) // 2)
    raise ValueError(f"unknown kind {kind}")


# ----------------------------------------------------------------- labels

@dataclass(frozen=True, order=True)
class CuspidalLabel:
    """A selfdual cuspidal representation shape: rank, duality type and Hodge weights."""
    n: int
    duality: str
    hodge: tuple = ()

    def __post_init__(self):
        h = self.hodge
        if any(h[i] <= h[i + 1] for i in range(len(h) - 1)):
            raise ValueError(f"Hodge weights must decrease strictly: {h}")
        if self.duality == TRIVIAL:
            ok = self.n == 1 and not h
        elif self.duality == SYMPLECTIC:
            ok = self.n % 2 == 0 and len(h) == self.n // 2 and all(x % 2 == 1 for x in h)
        elif self.duality == ORTHOGONAL:
            ok = len(h) == self.n // 2 and all(x % 2 == 0 and x >= 0 for x in h) and self.n > 1
            if self.n % 2:
                ok = ok and (not h or h[-1] > 0)
        else:
            ok = False
        if not ok:
            raise ValueError(f"invalid label {self.n} {self.duality} {h}")

    @property
    def sign(self) -> int:
        """+1 for orthogonal (and trivial), -1 for symplectic."""
        return -1 if self.duality == SYMPLECTIC else 1

    @property
    def motivic_weight(self) -> int:
        return self.hodge[0] if self.hodge else 0

    def eigenvalues2(self) -> list:
        """Doubled eigenvalues of the infinitesimal character."""
        out = [x for w in self.hodge for x in (w, -w)]
        if self.n % 2:
            out.append(0)
        return sorted(out, reverse=True)


TRIVIAL_LABEL = CuspidalLabel(1, TRIVIAL)


def symplectic(*hodge) -> CuspidalLabel:
    return CuspidalLabel(2 * len(hodge), SYMPLECTIC, tuple(hodge))


def orthogonal(n: int, *hodge) -> CuspidalLabel:
    return CuspidalLabel(n, ORTHOGONAL, tuple(hodge))


# ------------------------------------------------- archimedean calculus

@dataclass(frozen=True)
class ArchRep:
    """Direct sum of I_w (w > 0), copies of 1 and of the sign character eps."""
    iw: tuple = ()  # sorted multiset of positive w
    triv: int = 0
    sign: int = 0

    @staticmethod
    def build(iws=(), triv=0, sign=0) -> "ArchRep":
        iw = []
        for w in iws:
            if w == 0:
                triv, sign = triv + 1, sign + 1
            else:
                iw.append(abs(w))
        return ArchRep(tuple(sorted(iw, reverse=True)), triv, sign)

    @property
    def dimension(self) -> int:
        return 2 * len(self.iw) + self.triv + self.sign

    def __add__(self, other: "ArchRep") -> "ArchRep":
        return ArchRep.build(self.iw + other.iw, self.triv + other.triv, self.sign + other.sign)


def arch_rep(label: CuspidalLabel) -> ArchRep:
    if label.duality == TRIVIAL:
        return ArchRep.build(triv=1)
    rep = ArchRep.build(label.hodge)
    if label.n % 2:
        k = (label.n - 1) // 2
        rep = rep + (ArchRep.build(sign=1) if k % 2 else ArchRep.build(triv=1))
    return rep


def tensor(a: ArchRep, b: ArchRep) -> ArchRep:
    iws = []
    triv = a.triv * b.triv + a.sign * b.sign
    sign = a.triv * b.sign + a.sign * b.triv
    for w in a.iw:
        for v in b.iw:
            iws += [w + v, abs(w - v)]
        iws += [w] * (b.triv + b.sign)
    for v in b.iw:
        iws += [v] * (a.triv + a.sign)
    return ArchRep.build(iws, triv, sign)


# fourth roots of unity i^k are encoded by k mod 4

def epsilon_exponent(a: ArchRep) -> int:
    """k with epsilon(a) = i^k."""
    return (sum(w + 1 for w in a.iw) + a.sign) % 4


def epsilon(a: ArchRep) -> complex:
    return (1, 1j, -1, -1j)[epsilon_exponent(a)]


def epsilon_pair(p: CuspidalLabel, q: CuspidalLabel) -> int:
    """epsilon(p x q) in {+1, -1}, from the archimedean components."""
    k = epsilon_exponent(tensor(arch_rep(p), arch_rep(q)))
    if k % 2:
        raise AssertionError(f"non-real epsilon factor for {p} x {q}")
    return 1 - k


def epsilon_label(p: CuspidalLabel) -> int:
    return epsilon_pair(p, TRIVIAL_LABEL)


# ------------------------------------------------------------ count tables

@dataclass
class CountTables:
    """Counts of cuspidal labels: closed formulas for small rank plus extracted entries."""
    counts: dict = field(default_factory=dict)  # CuspidalLabel -> int, zeros included
    combined: dict = field(default_factory=dict)  # (w1,w2,w3) -> 2 O(w1,w2,w3,0) + O*(w1,w2,w3)
    g2: dict = field(default_factory=dict)  # (w, v) -> G2 count
    m: dict = field(default_factory=dict)  # group -> {hodge: dim V^G}

    def set(self, label: CuspidalLabel, value: int) -> None:
        if value < 0:
            raise ValueError(f"negative count for {label}")
        self.counts[label] = value

    def count(self, label: CuspidalLabel) -> int:
        if label in self.counts:
            return self.counts[label]
        v = _formula_count(label)
        if v is None:
            raise MissingCount(f"no count for {label_key(label)}")
        return v

    def covered(self, label: CuspidalLabel) -> bool:
        try:
            self.count(label)
        except MissingCount:
            return False
        return True

    def bounds(self, label: CuspidalLabel) -> tuple:
        """(low, high) for a count that may be only partially resolved."""
        try:
            v = self.count(label)
            return v, v
        except MissingCount:
            c = self.combined.get(label.hodge) if label.n == 7 else None
            if c is None:
                raise
            return c % 2, c

    def labels(self, rank: int, duality: str) -> list:
        """Extracted labels of the given type with nonzero count."""
        return sorted(l for l, v in self.counts.items() if v and l.n == rank and l.duality == duality)


def _formula_count(label: CuspidalLabel):
    h = label.hodge
    if label.duality == TRIVIAL:
        return 1
    if label.duality == SYMPLECTIC:
        if label.n == 2:
            return s1(h[0])
        if label.n == 4:
            try:
                return s2(*h)
            except MissingCount:
                return None
        return None
    if label.n % 4 == 2:
        return 0  # even orthogonal with an odd number of Hodge weights never occurs
    if label.n == 3:
        return small_orthogonal("Ostar1", h)
    if label.n == 4:
        return small_orthogonal("O2", h)
    if label.n == 5:
        try:
            return small_orthogonal("Ostar2", h)
        except MissingCount:
            return None
    if not parity_ok(h):
        return 0
    return None


def label_key(label: CuspidalLabel) -> str:
    return f"{label.duality[0].upper()}{label.n}{list(label.hodge)}"


def parity_vanishes(label: CuspidalLabel) -> bool:
    """True when the orthogonal parity criterion forces the count to vanish."""
    return label.duality == ORTHOGONAL and not parity_ok(label.hodge)


def choose(c: int, k: int) -> int:
    return comb(c, k)


def multiset_count(counts: Counter) -> int:
    """Number of ways to pick distinct representatives for repeated identical shapes."""
    out = 1
    for c, k in counts.items():
        out *= comb(c, k)
    return out
