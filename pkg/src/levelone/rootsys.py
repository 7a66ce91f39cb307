"""Root data of types B_l, D_l and G2 in integer character-lattice coordinates.

Weights live in X coordinates: e-coordinates for B/D, (alpha, beta)
coordinates for G2 where alpha is the short simple root.  Half-integral
vectors such as rho are stored doubled so that everything stays integral.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

G2_GRAM = ((2, -3), (-3, 6))
G2_COROOTS = ((2, -3), (-1, 2))  # alpha-check, beta-check as functionals
G2_OMEGA1 = (2, 1)  # 2 alpha + beta, the 7-dimensional representation
G2_OMEGA2 = (3, 2)  # highest root, the adjoint representation


@dataclass(frozen=True)
class RootDatum:
    kind: str
    rank: int
    positive_roots: tuple
    gram: tuple
    rho2: tuple  # 2 * rho
    weyl: np.ndarray = field(compare=False, repr=False)  # |W| x l x l, acting on column vectors
    weyl_det: np.ndarray = field(compare=False, repr=False)

    @property
    def label(self) -> str:
        return "G2" if self.kind == "G2" else f"{self.kind}{self.rank}"

    @property
    def weyl_order(self) -> int:
        return len(self.weyl)

    @property
    def positive_coroots(self) -> tuple:
        """Coroots as integer functionals: 2 (a, .) / (a, a)."""
        out = []
        for a in self.positive_roots:
            norm = self.pair(a, a)
            row = [sum(a[i] * self.gram[i][j] for i in range(self.rank)) for j in range(self.rank)]
            assert all(2 * x % norm == 0 for x in row)
            out.append(tuple(2 * x // norm for x in row))
        return tuple(out)

    def pair(self, x, y):
        """W-invariant bilinear form; accepts any consistent scaling."""
        g = self.gram
        return sum(x[i] * g[i][j] * y[j] for i in range(self.rank) for j in range(self.rank))

    def is_dominant(self, lam) -> bool:
        if self.kind == "G2":
            a, b = lam
            return 2 * a - 3 * b >= 0 and 2 * b - a >= 0
        if self.kind == "B":
            return all(lam[i] >= lam[i + 1] for i in range(self.rank - 1)) and lam[-1] >= 0
        l = self.rank
        return all(lam[i] >= lam[i + 1] for i in range(l - 2)) and lam[l - 2] >= abs(lam[l - 1])

    def weyl_dimension(self, lam) -> int:
        v = [2 * x + r for x, r in zip(lam, self.rho2)]
        num = den = 1
        for a in self.positive_roots:
            num *= self.pair(a, v)
            den *= self.pair(a, self.rho2)
        q = Fraction(num, den)
        assert q.denominator == 1
        return q.numerator


def _signed_permutations(l: int, even_only: bool):
    mats, dets = [], []
    for perm in itertools.permutations(range(l)):
        psign = _perm_sign(perm)
        for signs in itertools.product((1, -1), repeat=l):
            neg = signs.count(-1)
            if even_only and neg % 2:
                continue
            m = np.zeros((l, l), dtype=np.int64)
            for i, j in enumerate(perm):
                m[j, i] = signs[i]
            mats.append(m)
            dets.append(psign * (-1) ** neg)
    return np.array(mats), np.array(dets, dtype=np.int64)


def _perm_sign(perm) -> int:
    s, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, c = i, 0
            while not seen[j]:
                seen[j] = True
                j, c = perm[j], c + 1
            s *= (-1) ** (c - 1)
    return s


def _g2_weyl():
    def refl(root, coroot):
        # x -> x - <x, coroot> root
        return np.eye(2, dtype=np.int64) - np.outer(root, coroot)

    gens = [refl((1, 0), G2_COROOTS[0]), refl((0, 1), G2_COROOTS[1])]
    seen = {tuple(np.eye(2, dtype=np.int64).ravel())}
    out = [np.eye(2, dtype=np.int64)]
    frontier = list(out)
    while frontier:
        new = []
        for m in frontier:
            for g in gens:
                p = g @ m
                key = tuple(p.ravel())
                if key not in seen:
                    seen.add(key)
                    out.append(p)
                    new.append(p)
        frontier = new
    mats = np.array(out)
    dets = np.rint(np.linalg.det(mats)).astype(np.int64)
    return mats, dets


@lru_cache(maxsize=None)
def root_datum(kind: str, rank: int | None = None) -> RootDatum:
    """Build the root datum of type 'B', 'D' (with rank) or 'G2'."""
    if kind == "G2":
        roots = ((1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2))
        mats, dets = _g2_weyl()
        return RootDatum("G2", 2, roots, G2_GRAM, (10, 6), mats, dets)
    l = rank
    if kind not in ("B", "D") or l is None or l < (1 if kind == "B" else 3):
        raise ValueError(f"unsupported root datum {kind}{rank}")
    roots = []
    for i in range(l):
        for j in range(i + 1, l):
            for s in (-1, 1):
                v = [0] * l
                v[i], v[j] = 1, s
                roots.append(tuple(v))
        if kind == "B":
            v = [0] * l
            v[i] = 1
            roots.append(tuple(v))
    if kind == "B":
        rho2 = tuple(2 * l - 1 - 2 * i for i in range(l))
    else:
        rho2 = tuple(2 * (l - 1 - i) for i in range(l))
    gram = tuple(tuple(int(i == j) for j in range(l)) for i in range(l))
    mats, dets = _signed_permutations(l, even_only=(kind == "D"))
    return RootDatum(kind, l, tuple(roots), gram, rho2, mats, dets)


def for_group(name: str) -> RootDatum:
    """Root datum of SO7 / SO8 / SO9 / SO(2l+1) / SO(2l) / G2."""
    if name == "G2":
        return root_datum("G2")
    n = int(name[2:])
    return root_datum("B", n // 2) if n % 2 else root_datum("D", n // 2)


# Hodge weights: for B and D, lambda + rho = w / 2.

def hodge_from_weight(datum: RootDatum, lam) -> tuple:
    if datum.kind == "G2":
        return g2_hodge_from_weight(lam)
    return tuple(2 * x + r for x, r in zip(lam, datum.rho2))


def weight_from_hodge(datum: RootDatum, w) -> tuple:
    if datum.kind == "G2":
        return g2_weight_from_hodge(*w)
    lam = []
    for x, r in zip(w, datum.rho2):
        if (x - r) % 2:
            raise ValueError(f"Hodge weights {w} have the wrong parity for {datum.label}")
        lam.append((x - r) // 2)
    lam = tuple(lam)
    if not datum.is_dominant(lam):
        raise ValueError(f"Hodge weights {w} are not strictly decreasing")
    return lam


def g2_weight_from_hodge(w: int, v: int) -> tuple:
    """Highest weight (alpha, beta coordinates) of U_{w,v}: ((w-v-2)/2) omega1 + ((v-2)/2) omega2."""
    if w % 2 or v % 2 or not (w > v >= 2):
        raise ValueError("G2 Hodge weights need even w > v >= 2")
    c1, c2 = (w - v - 2) // 2, (v - 2) // 2
    return (c1 * G2_OMEGA1[0] + c2 * G2_OMEGA2[0], c1 * G2_OMEGA1[1] + c2 * G2_OMEGA2[1])


def g2_hodge_from_weight(lam) -> tuple:
    a, b = lam
    # a = 2 c1 + 3 c2, b = c1 + 2 c2
    c2 = 2 * b - a
    c1 = b - 2 * c2
    if c1 < 0 or c2 < 0:
        raise ValueError(f"{lam} is not dominant")
    v = 2 * c2 + 2
    return (2 * c1 + 2 + v, v)


def dominant_weights(datum: RootDatum, max_first: int) -> list:
    """Dominant weights with first coordinate at most max_first (B/D only)."""
    l = datum.rank

    def rec(prefix, bound):
        if len(prefix) == l - 1:
            lo = -bound if datum.kind == "D" else 0
            for x in range(lo, bound + 1):
                yield prefix + (x,)
            return
        for x in range(bound + 1):
            yield from rec(prefix + (x,), x)

    return sorted(rec((), max_first))


def build_root_datum(family: str, rank: int | None = None) -> RootDatum:
    return root_datum(family, None if family == "G2" else rank)


@lru_cache(maxsize=None)
def weyl_inverses(datum: RootDatum) -> np.ndarray:
    inv = np.rint(np.linalg.inv(datum.weyl.astype(np.float64))).astype(np.int64)
    assert np.all(np.einsum("wij,wjk->wik", inv, datum.weyl) == np.eye(datum.rank, dtype=np.int64))
    return inv


@dataclass(frozen=True)
class LeviData:
    mask: np.ndarray = field(compare=False)  # over datum.positive_roots
    roots: tuple  # positive roots of M
    rho2: tuple  # 2 rho_M
    coset_reps: tuple  # indices into datum.weyl of W^M = {w : w^-1 Phi_M+ > 0}
    levi_order: int  # |W_M|


def levi_data(datum: RootDatum, mu) -> LeviData:
    """Levi subsystem of roots integral on mu, and the minimal coset representatives."""
    mu = [Fraction(x) for x in mu]
    roots = np.array(datum.positive_roots, dtype=np.int64)
    mask = np.array([sum(Fraction(int(a)) * m for a, m in zip(r, mu)).denominator == 1 for r in roots])
    levi = roots[mask]
    positive = {tuple(r) for r in roots.tolist()}
    reps = tuple(i for i, winv in enumerate(weyl_inverses(datum))
                 if all(tuple(winv @ a) in positive for a in levi))
    rho2 = tuple(int(x) for x in levi.sum(axis=0)) if len(levi) else (0,) * datum.rank
    order = len(datum.weyl) // len(reps)
    assert order * len(reps) == len(datum.weyl)
    return LeviData(mask, tuple(map(tuple, levi.tolist())), rho2, reps, order)
