"""Finite subgroups of compact groups given by characteristic-polynomial buckets.

A dataset lists, for a finite group G inside SO_n (or G2 inside SO_7), the
multiset of characteristic polynomials of its elements in the standard
representation.  Conjugacy in the compact group is detected by the
characteristic polynomial, so this is all that averaging a character needs.
"""
from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .cyclo import cyclotomic_poly, poly_divmod, poly_mul

DATA_ENV = "LEVELONE_DATA_DIR"

# Bourbaki labelling: 1-3-4-5-6-7(-8) chain with 2 attached to 4.
_E_EDGES = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]


class DataError(ValueError):
    pass


@dataclass
class ClassDataset:
    name: str
    ambient: str  # 'B', 'D' or 'G2'
    rank: int
    order: int
    buckets: list = field(default_factory=list)  # (charpoly tuple low->high, size)

    @property
    def dimension(self) -> int:
        """Dimension of the standard representation."""
        if self.ambient == "G2":
            return 7
        return 2 * self.rank + (1 if self.ambient == "B" else 0)

    def to_text(self) -> str:
        lines = [f"group {self.name} ambient {self.ambient} {self.rank} order {self.order}"]
        for i, (cp, size) in enumerate(self.buckets, 1):
            lines.append(f"class {i} size {size} charpoly " + ",".join(map(str, cp)))
        return "\n".join(lines) + "\n"

    @property
    def conductor(self) -> int:
        """lcm of the orders of the torus representatives."""
        n = 1
        for cp, _ in self.buckets:
            for mu in class_representatives(self, cp):
                m = element_order(mu)
                n = n * m // int(np.gcd(n, m))
        return n

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())


def parse_dataset(text: str) -> ClassDataset:
    ds = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "group":
                if ds is not None or tok[2] != "ambient" or tok[5] != "order":
                    raise DataError
                ds = ClassDataset(tok[1], tok[3], int(tok[4]), int(tok[6]))
            elif tok[0] == "class":
                if ds is None or tok[2] != "size" or tok[4] != "charpoly":
                    raise DataError
                cp = tuple(int(c) for c in tok[5].split(","))
                ds.buckets.append((cp, int(tok[3])))
            else:
                raise DataError
        except (DataError, IndexError, ValueError):
            raise DataError(f"line {lineno}: cannot parse {raw!r}") from None
    if ds is None:
        raise DataError("missing group header")
    if ds.ambient not in ("B", "D", "G2"):
        raise DataError(f"unknown ambient type {ds.ambient}")
    for cp, _ in ds.buckets:
        if len(cp) != ds.dimension + 1 or cp[-1] != 1:
            raise DataError(f"charpoly {cp} has the wrong degree for dimension {ds.dimension}")
    return ds


def data_dir() -> Path:
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("levelone") / "data"))


DATASET_FILES = {"E7+": "e7plus.cls", "E8+": "e8plus.cls", "E8so9": "e8so9.cls",
                 "E8": "e8.cls", "G2": "g2.cls"}


@lru_cache(maxsize=None)
def _load(name: str, directory: str) -> ClassDataset:
    fname = DATASET_FILES.get(name, name)
    path = Path(directory) / fname
    if not path.exists():
        # fall back to the packaged copy when an override directory lacks it
        path = Path(str(resources.files("levelone") / "data")) / fname
    return parse_dataset(path.read_text())


def load_dataset(name: str) -> ClassDataset:
    return _load(name, str(data_dir()))


# ---------------------------------------------------------------- polynomials

def cyclotomic_factorization(cp) -> dict:
    """Multiplicities {d: k} with cp = prod Phi_d^k; raises if cp is not a product of cyclotomics."""
    rem = list(cp)
    out = {}
    d = 1
    while len(rem) > 1:
        phi = list(cyclotomic_poly(d))
        if len(phi) - 1 <= len(rem) - 1:
            while True:
                q, r = poly_divmod(rem, phi)
                if r != [0]:
                    break
                rem = q
                out[d] = out.get(d, 0) + 1
        d += 1
        if d > 4 * len(cp) ** 2 + 8:
            raise DataError(f"{cp} is not a product of cyclotomic polynomials")
    if rem != [1]:
        raise DataError(f"{cp} is not a product of cyclotomic polynomials")
    return out


def eigen_angles(cp) -> list:
    """Multiset of eigenvalue angles k/d in [0, 1) as Fractions."""
    out = []
    for d, k in sorted(cyclotomic_factorization(cp).items()):
        for j in range(d):
            if np.gcd(j, d) == 1:
                out += [Fraction(j, d)] * k
    return sorted(out)


def charpoly_from_angles(angles) -> tuple:
    """Inverse of eigen_angles for Galois-stable multisets."""
    counts = Counter(angles)
    p = [1]
    while counts:
        a = next(iter(counts))
        d = a.denominator
        p = poly_mul(p, list(cyclotomic_poly(d)))
        for j in range(d):
            if np.gcd(j, d) == 1:
                counts[Fraction(j, d)] -= 1
                if counts[Fraction(j, d)] < 0:
                    raise ValueError("angle multiset is not Galois stable")
                if counts[Fraction(j, d)] == 0:
                    del counts[Fraction(j, d)]
    return tuple(p)


def charpoly_batch(mats, scale: int = 1) -> np.ndarray:
    """Characteristic polynomials det(X - M/scale) of a batch of integer matrices.

    Evaluates the determinant at n+1 integer points and interpolates; the
    result is checked to be an exact integer solution.
    """
    mats = np.asarray(mats)
    b, n, _ = mats.shape
    xs = np.arange(n + 1) - n // 2
    real = mats.astype(np.float64) / scale
    eye = np.eye(n)
    vals = np.stack([np.linalg.det(x * eye - real) for x in xs], axis=1)
    ivals = np.rint(vals)
    if np.max(np.abs(vals - ivals), initial=0.0) > 1e-6:
        raise DataError("non-integral characteristic polynomial")
    ivals = ivals.astype(np.int64)
    vander = np.vander(xs, n + 1, increasing=True).astype(np.float64)
    coeffs = np.rint(np.linalg.solve(vander, ivals.T.astype(np.float64))).astype(np.int64).T
    if not np.array_equal(coeffs @ np.vander(xs, n + 1, increasing=True).T, ivals):
        raise DataError("charpoly interpolation failed")
    return coeffs


# ------------------------------------------------------------ enumeration

def bfs_elements(gens, key_vector=None, key_form=None, key_bound: int = 0, scale: int = 1,
                 chunk: int = 200_000, max_elements: int = 10 ** 9):
    """All elements of the group generated by integer matrices gens/scale.

    With key_vector, elements are identified by key_form @ M @ key_vector,
    which must separate group elements (e.g. a regular vector for a Weyl
    group) and stay within +-key_bound.  Without it, whole matrices are compared.  Yields batches.
    """
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    n = gens[0].shape[0]
    ident = np.eye(n, dtype=np.int64)[None] * scale
    if key_vector is not None:
        kv = np.asarray(key_vector, dtype=np.int64)
        kf = np.eye(n, dtype=np.int64) if key_form is None else np.asarray(key_form, dtype=np.int64)
        bits = (2 * key_bound + 1).bit_length()
        if bits * n > 62:
            raise DataError("key vector too large to pack into int64")

        def keyfn(batch):
            raw = np.einsum("ij,bjk,k->bi", kf, batch, kv)
            if np.abs(raw).max(initial=0) > key_bound:
                raise DataError("key outside the declared bound")
            out = np.zeros(len(batch), dtype=np.int64)
            for j in range(n):
                out = (out << bits) | (raw[:, j] + key_bound)
            return out
    else:
        keyfn = None

    def mul(a, b):
        p = np.matmul(a, b)
        if scale != 1:
            if np.any(p % scale):
                raise DataError("product left the chosen denominator")
            p //= scale
        return p

    if keyfn is not None:
        seen = np.sort(keyfn(ident))
    else:
        seen_set = {ident[0].tobytes()}
    frontier = ident
    total = 1
    yield ident
    while len(frontier):
        new_parts = []
        for start in range(0, len(frontier), chunk):
            block = frontier[start:start + chunk]
            cand = np.concatenate([mul(g[None], block) for g in gens])
            if keyfn is not None:
                keys = keyfn(cand)
                keys, idx = np.unique(keys, return_index=True)
                fresh = ~np.isin(keys, seen, assume_unique=True)
                cand, keys = cand[idx[fresh]], keys[fresh]
                seen = np.union1d(seen, keys)
                new_parts.append(cand)
            else:
                keep = []
                for i, m in enumerate(cand):
                    k = m.tobytes()
                    if k not in seen_set:
                        seen_set.add(k)
                        keep.append(i)
                new_parts.append(cand[keep])
        frontier = np.concatenate(new_parts) if new_parts else np.zeros((0, n, n), dtype=np.int64)
        total += len(frontier)
        if total > max_elements:
            raise DataError(f"closure exceeded {max_elements} elements")
        if len(frontier):
            yield frontier


def census(batches, scale: int = 1) -> tuple:
    """(order, Counter charpoly -> count) over batches of matrices."""
    counts = Counter()
    total = 0
    for batch in batches:
        total += len(batch)
        for row in map(tuple, charpoly_batch(batch, scale)):
            counts[tuple(int(c) for c in row)] += 1
    return total, counts


def dataset_from_census(name, ambient, rank, order, counts) -> ClassDataset:
    buckets = sorted(counts.items(), key=lambda kv: (kv[0][::-1], kv[1]))
    return ClassDataset(name, ambient, rank, order, [(cp, n) for cp, n in buckets])


def cartan_matrix_e(n: int) -> np.ndarray:
    c = 2 * np.eye(n, dtype=np.int64)
    for i, j in _E_EDGES:
        if i <= n and j <= n:
            c[i - 1, j - 1] = c[j - 1, i - 1] = -1
    return c


def simple_reflections(cartan) -> list:
    """Simple reflections acting on root coordinates (columns are images of simple roots)."""
    c = np.asarray(cartan, dtype=np.int64)
    n = len(c)
    out = []
    for i in range(n):
        s = np.eye(n, dtype=np.int64)
        # s_i(alpha_j) = alpha_j - <alpha_j, alpha_i^vee> alpha_i
        s[i, :] -= c[i, :]
        out.append(s)
    return out


def e7_plus_generators() -> list:
    s = simple_reflections(cartan_matrix_e(7))
    return [s[0] @ s[i] for i in range(1, 7)]


def e7_rho2() -> np.ndarray:
    """2 rho in simple-root coordinates: the key vector used for W(E7)."""
    c = cartan_matrix_e(7)
    return np.rint(np.linalg.solve(c.astype(float), 2 * np.ones(7))).astype(np.int64)


# G2(Z) acting on L[1/2], scaled by 2.
G2_GENERATORS_HALF = (
    ((0, 1, -1, 0, 0, 1, -1), (0, -1, 0, -1, -1, 1, 0), (0, -1, 0, 1, 1, 1, 0),
     (0, 1, 1, 0, 0, 1, 1), (-2, 0, 0, 0, 0, 0, 0), (0, 0, 1, 1, -1, 0, -1),
     (0, 0, -1, 1, -1, 0, 1)),
    tuple(tuple(2 * x for x in row) for row in (
        (0, 0, 0, 0, 0, -1, 0), (0, 1, 0, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0, 0),
        (0, 0, 0, 0, 0, 0, 1), (0, 0, 0, 0, 1, 0, 0), (1, 0, 0, 0, 0, 0, 0),
        (0, 0, 0, -1, 0, 0, 0))),
)


def enumerate_g2() -> ClassDataset:
    order, counts = census(bfs_elements(G2_GENERATORS_HALF, scale=2), scale=2)
    return dataset_from_census("G2", "G2", 2, order, counts)


def enumerate_e7_plus() -> ClassDataset:
    c = cartan_matrix_e(7)
    batches = bfs_elements(e7_plus_generators(), key_vector=e7_rho2(), key_form=c, key_bound=34)
    order, counts = census(batches)
    return dataset_from_census("E7+", "B", 3, order, counts)


# --------------------------------------------------------- derived datasets

def plus_part(ds: ClassDataset, name: str) -> ClassDataset:
    """Determinant-one subgroup (index 2 assumed)."""
    n = ds.dimension
    sign = (-1) ** n
    buckets = [(cp, s) for cp, s in ds.buckets if cp[0] * sign == 1]
    order = sum(s for _, s in buckets)
    if 2 * order != ds.order:
        raise DataError("determinant-one part is not of index 2")
    return ClassDataset(name, ds.ambient, ds.rank, order, buckets)


def so_odd_twist(ds: ClassDataset, name: str) -> ClassDataset:
    """Embed G in O_n into SO_{n+1} by g -> (g, det g); n must be even."""
    n = ds.dimension
    if n % 2:
        raise DataError("twist needs an even-dimensional source")
    counts = Counter()
    for cp, s in ds.buckets:
        det = cp[0]  # det(-g) = det(g) for even n
        counts[tuple(poly_mul(list(cp), [-det, 1]))] += s
    return dataset_from_census(name, "B", n // 2, ds.order, counts)


# ----------------------------------------------------------- verification

def expected_average_charpoly(ds: ClassDataset) -> tuple:
    """Average of det(X - g): X^n + (-1)^n inside SO_n, except for G2 (invariant 3-form)."""
    n = ds.dimension
    p = [0] * (n + 1)
    p[n] = 1
    if all(cp[0] == (-1) ** n for cp, _ in ds.buckets):
        p[0] += (-1) ** n
    if ds.ambient == "G2":
        p[4] -= 1
        p[3] += 1
    return tuple(p)


def verify_dataset(ds: ClassDataset) -> dict:
    """Check a dataset; the report lists every check with its outcome."""
    n = ds.dimension
    total = sum(s for _, s in ds.buckets)
    acc = [0] * (n + 1)
    for cp, s in ds.buckets:
        for i, c in enumerate(cp):
            acc[i] += s * c
    avg = tuple(a // ds.order for a in acc) if all(a % ds.order == 0 for a in acc) else None
    exp = expected_average_charpoly(ds)
    checks = [(f"sizes sum to the order {ds.order}", total == ds.order, f"got {total}"),
              ("average characteristic polynomial", avg == exp, f"got {avg}, expected {exp}")]
    if all(cp[0] == (-1) ** n for cp, _ in ds.buckets):
        # torus representatives only exist for determinant one
        for cp, s in ds.buckets:
            try:
                reps = class_representatives(ds, cp)
                ok, why = not (len(reps) == 2 and s % 2), f"split bucket of odd size {s}"
            except DataError as exc:
                ok, why = False, str(exc)
            checks.append((f"representatives for {cp}", ok, why))
    problems = [f"{name}: {why}" for name, ok, why in checks if not ok]
    return {"name": ds.name, "order": ds.order, "buckets": len(ds.buckets),
            "size_sum": total, "average_charpoly": avg, "expected": exp,
            "checks": [(name, ok) for name, ok, _ in checks],
            "ok": not problems, "problems": problems}


def harmonic_series_from_classes(ds: ClassDataset, nterms: int) -> list:
    """Coefficients of sum_m dim H_m^G t^m via the Molien series, m < nterms."""
    n = ds.dimension
    acc = [0] * nterms
    for cp, s in ds.buckets:
        rev = list(cp[::-1])  # det(1 - t g), constant term 1
        inv = [0] * nterms
        inv[0] = 1
        for k in range(1, nterms):
            inv[k] = -sum(rev[j] * inv[k - j] for j in range(1, min(k, n) + 1))
        for k in range(nterms):
            acc[k] += s * inv[k]
    harm = [acc[k] - (acc[k - 2] if k >= 2 else 0) for k in range(nterms)]
    if any(h % ds.order for h in harm):
        raise DataError("Molien series is not integral")
    return [h // ds.order for h in harm]


# --------------------------------------------------------- torus elements

def class_representatives(ds: ClassDataset, cp) -> list:
    return class_representatives_cached(ds.ambient, ds.rank, tuple(cp))


@lru_cache(maxsize=None)
def class_representatives_cached(ambient: str, rank: int, cp: tuple) -> tuple:
    """Torus elements mu (functional on X, as Fractions) with charpoly cp.

    For SO_{2l} without eigenvalue +-1 there are two classes, related by an
    outer automorphism; both are returned and share the bucket equally.
    """
    angles = eigen_angles(cp)
    if ambient == "G2":
        return (_g2_torus(angles),)
    counts = Counter(angles)
    half = Fraction(1, 2)
    if ambient == "B":
        counts[Fraction(0)] -= 1
        if counts[Fraction(0)] < 0:
            raise DataError(f"{cp}: no eigenvalue 1 in odd dimension")
    if counts[Fraction(0)] % 2 or counts[half] % 2:
        raise DataError(f"{cp} is not the charpoly of a special orthogonal element")
    mu = [Fraction(0)] * (counts[Fraction(0)] // 2) + [half] * (counts[half] // 2)
    for a in sorted(counts):
        if 0 < a < half:
            if counts[a] != counts[1 - a]:
                raise DataError(f"{cp}: eigenvalues not closed under inversion")
            mu += [a] * counts[a]
    if len(mu) != rank:
        raise DataError(f"{cp}: wrong rank")
    mu = tuple(sorted(mu, reverse=True))
    if ambient == "D" and Fraction(0) not in mu and half not in mu:
        return (mu, mu[:-1] + (-mu[-1],))
    return (mu,)


def _g2_torus(angles) -> tuple:
    """mu = (<alpha, mu>, <beta, mu>) so that the short roots give the angles."""
    rest = list(angles)
    rest.remove(Fraction(0))
    target = sorted(rest)
    thetas = {a for a in rest}
    for a in thetas:
        for b in thetas:
            # short roots alpha, alpha+beta, 2alpha+beta take values a, b, a+b
            vals = [a, b, a + b]
            multiset = sorted(x % 1 for v in vals for x in (v, -v))
            if multiset == target:
                return (a, (b - a) % 1)
    raise DataError(f"angles {angles} do not come from a G2 torus element")


def element_order(mu) -> int:
    n = 1
    for x in mu:
        d = Fraction(x).denominator
        n = n * d // int(np.gcd(n, d))
    return n


# ------------------------------------------------------------- E8 census

def e8_census(progress=None) -> ClassDataset:
    """Charpoly census of W(E8) from the 240 cosets of W(E7) = Stab(highest root).

    Conjugation by W(E7) permutes the cosets g W(E7) according to the orbit
    of g(theta), so one coset per W(E7)-orbit on roots suffices.
    """
    c8 = cartan_matrix_e(8)
    s8 = simple_reflections(c8)
    theta = np.array([2, 3, 4, 6, 5, 4, 3, 2], dtype=np.int64)
    # W(E7)-orbit representatives among roots, keyed by (beta, theta)
    words = {tuple(theta): ()}
    frontier = [tuple(theta)]
    while frontier:
        nxt = []
        for r in frontier:
            for i, s in enumerate(s8):
                img = tuple(int(x) for x in s @ np.array(r))
                if img not in words:
                    words[img] = (i,) + words[r]
                    nxt.append(img)
        frontier = nxt
    assert len(words) == 240
    by_pairing = {}
    for r, w in words.items():
        p = int(np.array(r) @ c8 @ theta)
        by_pairing.setdefault(p, []).append((r, w))
    s7 = s8[:7]
    key_form = c8
    rho2 = np.rint(np.linalg.solve(c8.astype(float), 2 * np.ones(8))).astype(np.int64)
    w7 = np.concatenate(list(bfs_elements(s7, key_vector=rho2, key_form=key_form, key_bound=58)))
    assert len(w7) == 2903040, len(w7)
    w7 = w7.astype(np.int8)
    counts = Counter()
    total = 0
    for p, members in sorted(by_pairing.items()):
        _, word = members[0]
        g = np.eye(8, dtype=np.int64)
        for i in word:
            g = s8[i] @ g
        sub = Counter()
        for start in range(0, len(w7), 250_000):
            block = np.matmul(g[None], w7[start:start + 250_000].astype(np.int64))
            for row in map(tuple, charpoly_batch(block)):
                sub[tuple(int(x) for x in row)] += 1
        for cp, k in sub.items():
            counts[cp] += k * len(members)
        total += len(w7) * len(members)
        if progress:
            progress(f"coset orbit (beta,theta)={p}: {len(members)} cosets")
    return dataset_from_census("E8", "D", 4, total, counts)


def enumerate_group(generators, name: str, ambient: str, rank: int, scale: int = 1,
                    max_elements: int = 10 ** 7) -> ClassDataset:
    """Closure of integer matrices generators/scale, bucketed by characteristic polynomial."""
    order, counts = census(bfs_elements(generators, scale=scale, max_elements=max_elements), scale=scale)
    return dataset_from_census(name, ambient, rank, order, counts)


def ingest_carter_data(path) -> ClassDataset:
    """Read a class-data file and reject it unless every check passes."""
    ds = parse_dataset(Path(path).read_text())
    report = verify_dataset(ds)
    if not report["ok"]:
        raise DataError("; ".join(report["problems"]))
    return ds


def class_reps_from_charpoly(poly, ambient: str, rank: int) -> tuple:
    return class_representatives_cached(ambient, rank, tuple(poly))


def g2_torus_rep(poly) -> tuple:
    return class_representatives_cached("G2", 2, tuple(poly))[0]


so9_twist = so_odd_twist
verify_class_data = verify_dataset


def all_datasets_from_e8(e8: ClassDataset) -> dict:
    return {"E8": e8, "E8+": plus_part(e8, "E8+"), "E8so9": so_odd_twist(e8, "E8so9")}
