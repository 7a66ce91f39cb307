"""Characters at torsion torus elements and invariant dimensions dim V_lambda^G.

The character of V_lambda at a torus element t is evaluated with the
degenerate form of the Weyl character formula: roots alpha with
t^alpha = 1 form a Levi subsystem M, the alternating sum runs over the
minimal coset representatives W^M and each term carries the Weyl dimension
polynomial of M.  Nothing ever divides by zero.

Two evaluation routes are provided.  The exact route works in Q(zeta_m)
for each element of order m.  The numeric route is vectorised over weights
and rounds each bucket total with an a priori error bound, falling back to
the exact route whenever the bound is not good enough.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import rootsys
from .cyclo import NonIntegral, field
from .groupdata import ClassDataset, class_representatives, element_order, load_dataset

log = logging.getLogger(__name__)

UNIT_ROUNDOFF = 2.0 ** -53


@dataclass
class PreparedElement:
    mu: tuple
    order: int
    kvec: np.ndarray  # order * mu, integral
    levi_mask: np.ndarray  # positive roots alpha with t^alpha = 1
    coset_reps: np.ndarray  # indices into datum.weyl of W^M
    signs: np.ndarray
    levi_norm: int  # prod over Levi roots of (alpha, 2 rho_M)
    outside_exps: tuple  # alpha . kvec for roots outside the Levi

    _den_exact = None
    _den_complex = None

    def den_inverse(self):
        if self._den_exact is None:
            fld = field(self.order)
            den = fld.one()
            for e in self.outside_exps:
                den = den * (fld.one() - fld.zeta(-e))
            self._den_exact = den.inverse()
        return self._den_exact

    def den_complex(self) -> complex:
        if self._den_complex is None:
            val = 1.0 + 0j
            for e in self.outside_exps:
                val *= 1 - np.exp(-2j * np.pi * e / self.order)
            self._den_complex = val
        return self._den_complex


def _root_arrays(datum):
    roots = np.array(datum.positive_roots, dtype=np.int64)
    gram = np.array(datum.gram, dtype=np.int64)
    return roots, roots @ gram  # rows: alpha and the functional (alpha, .)


def prepare(datum, mu) -> PreparedElement:
    mu = tuple(Fraction(x) for x in mu)
    m = element_order(mu)
    kvec = np.array([int(x * m) for x in mu], dtype=np.int64)
    roots, dual = _root_arrays(datum)
    exps = roots @ kvec
    levi = rootsys.levi_data(datum, mu)
    mask = levi.mask
    assert np.array_equal(mask, exps % m == 0)
    norm = 1
    for f in dual[mask]:
        norm *= int(f @ np.array(levi.rho2, dtype=np.int64))
    assert norm > 0
    reps = np.array(levi.coset_reps, dtype=np.int64)
    return PreparedElement(mu, m, kvec, mask, reps, datum.weyl_det[reps], norm,
                           tuple(int(e) for e in exps[~mask]))


def char_value(datum, lam, mu, prepared: PreparedElement | None = None):
    """Exact character of V_lambda at exp(2 pi i mu), as an element of Q(zeta_m)."""
    p = prepared or prepare(datum, mu)
    fld = field(p.order)
    v2 = 2 * np.array(lam, dtype=np.int64) + np.array(datum.rho2, dtype=np.int64)
    _, dual = _root_arrays(datum)
    levi_dual = dual[p.levi_mask]
    rho_shift = int(np.array(datum.rho2) @ p.kvec)
    bins = [0] * p.order
    for idx, sgn in zip(p.coset_reps, p.signs):
        wv = datum.weyl[idx] @ v2
        twice = int(wv @ p.kvec) - rho_shift
        assert twice % 2 == 0
        coeff = int(sgn)
        for f in levi_dual:
            coeff *= int(f @ wv)
        bins[(twice // 2) % p.order] += coeff
    num = fld.element(bins)
    return num * p.den_inverse() / p.levi_norm


def char_value_complex(datum, lam, mu) -> complex:
    return char_value(datum, lam, mu).to_complex()


def weyl_dimension(datum, lam) -> int:
    return datum.weyl_dimension(lam)


weyl_dim = weyl_dimension


class InvariantEngine:
    """Computes dim V_lambda^G for one class dataset."""

    def __init__(self, dataset: ClassDataset, datum=None):
        self.dataset = dataset
        if datum is None:
            datum = rootsys.root_datum("G2") if dataset.ambient == "G2" else \
                rootsys.root_datum(dataset.ambient, dataset.rank)
        self.datum = datum
        self.buckets = []  # (size, [PreparedElement])
        for cp, size in dataset.buckets:
            reps = [prepare(datum, mu) for mu in class_representatives(dataset, cp)]
            if size % len(reps):
                raise ValueError(f"bucket {cp} of size {size} cannot split evenly")
            self.buckets.append((size, reps))
        self.cache = {}
        self.fallbacks = 0

    # exact route -----------------------------------------------------
    def bucket_total_exact(self, lam, b: int) -> int:
        size, reps = self.buckets[b]
        val = None
        for p in reps:
            x = char_value(self.datum, lam, p.mu, p)
            val = x if val is None else val + x
        try:
            return val.to_integer()
        except NonIntegral:
            raise NonIntegral(f"bucket {b} character sum {val} is not an integer") from None

    def exact(self, lam) -> int:
        lam = tuple(int(x) for x in lam)
        total = 0
        for b, (size, reps) in enumerate(self.buckets):
            total += (size // len(reps)) * self.bucket_total_exact(lam, b)
        if total % self.dataset.order:
            raise NonIntegral(f"average over {self.dataset.name} is not an integer")
        return total // self.dataset.order

    # numeric route ---------------------------------------------------
    def bucket_totals_numeric(self, lams):
        """Per-bucket character sums for a batch: (values complex, error bounds)."""
        d = self.datum
        lams = np.asarray(lams, dtype=np.int64).reshape(-1, d.rank)
        v2 = 2 * lams + np.array(d.rho2, dtype=np.int64)
        wv = np.einsum("wij,bj->wbi", d.weyl, v2)
        _, dual = _root_arrays(d)
        pairings = (wv @ dual.T).astype(np.float64)
        rho2 = np.array(d.rho2, dtype=np.int64)
        nroots = len(d.positive_roots)
        slack = 4.0 * (nroots + 8) * UNIT_ROUNDOFF
        vals = np.zeros((len(self.buckets), len(lams)), dtype=np.complex128)
        bounds = np.zeros((len(self.buckets), len(lams)))
        for b, (size, reps) in enumerate(self.buckets):
            for p in reps:
                sel = p.coset_reps
                prod = np.prod(pairings[sel][:, :, p.levi_mask], axis=2)
                twice = wv[sel] @ p.kvec - int(rho2 @ p.kvec)
                phase = np.exp(2j * np.pi * ((twice // 2) % p.order) / p.order)
                terms = p.signs[:, None] * prod * phase / (p.levi_norm * p.den_complex())
                vals[b] += terms.sum(axis=0)
                bounds[b] += slack * np.abs(terms).sum(axis=0) + 1e-300
        return vals, bounds

    def dims(self, lams, method: str = "auto") -> list:
        """dim V_lambda^G for each weight; method is 'auto', 'exact' or 'numeric'."""
        lams = [tuple(int(x) for x in lam) for lam in lams]
        todo = [lam for lam in dict.fromkeys(lams) if (lam, method) not in self.cache]
        if method == "exact":
            for lam in todo:
                self.cache[lam, method] = self.exact(lam)
        elif todo:
            for start in range(0, len(todo), 256):
                chunk = todo[start:start + 256]
                vals, bounds = self.bucket_totals_numeric(chunk)
                for j, lam in enumerate(chunk):
                    total = 0
                    for b, (size, reps) in enumerate(self.buckets):
                        x, err = vals[b, j], bounds[b, j]
                        r = round(x.real)
                        if err < 0.25 and abs(x - r) <= err + 1e-9:
                            total += (size // len(reps)) * int(r)
                        elif method == "numeric":
                            raise NonIntegral(f"numeric bound {err:.3g} too weak at {lam}")
                        else:
                            self.fallbacks += 1
                            total += (size // len(reps)) * self.bucket_total_exact(lam, b)
                    if total % self.dataset.order:
                        raise NonIntegral(f"average over {self.dataset.name} at {lam} is not integral")
                    self.cache[lam, method] = total // self.dataset.order
        return [self.cache[lam, method] for lam in lams]

    def dim(self, lam, method: str = "auto") -> int:
        return self.dims([lam], method)[0]


@lru_cache(maxsize=None)
def engine(name: str) -> InvariantEngine:
    return InvariantEngine(load_dataset(name))


def invariant_dimension(name: str, lam, method: str = "auto") -> int:
    return engine(name).dim(lam, method)


# closed forms for the invariant harmonic polynomials
HARMONIC_CLOSED_FORMS = {
    "E7+": (63, (6, 8, 10, 12, 14, 18)),
    "E8+": (120, (8, 12, 14, 18, 20, 24, 30)),
    "E8so9": (121, (2, 8, 12, 14, 18, 20, 24, 30)),
}


def harmonic_closed_form(name: str, nterms: int) -> list:
    """Coefficients of (1 + t^top) / prod (1 - t^d) below t^nterms."""
    top, degrees = HARMONIC_CLOSED_FORMS[name]
    series = [0] * nterms
    series[0] = 1
    if top < nterms:
        series[top] += 1
    for d in degrees:
        for k in range(d, nterms):
            series[k] += series[k - d]
    return series


def harmonic_weight(rank: int, m: int) -> tuple:
    """Highest weight of the harmonic polynomials of degree m on the standard representation."""
    return (m,) + (0,) * (rank - 1)


_SERIES_NAMES = {"E7": "E7+", "E8": "E8+", "E8+A1": "E8so9"}


def harmonic_invariant_series(root_system: str, max_degree: int) -> list:
    """Closed-form coefficients of the invariant harmonic series, degrees 0..max_degree.

    root_system is 'E7' or 'E8' (determinant-one part of the Weyl group) or
    'E8+A1' (W(E8) acting on the reflection module plus the sign character).
    """
    name = _SERIES_NAMES.get(root_system, root_system)
    return harmonic_closed_form(name, max_degree + 1)
