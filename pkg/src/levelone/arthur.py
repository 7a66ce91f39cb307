"""Global Arthur parameters, the multiplicity formula and extraction of cuspidal counts.

Eigenvalues of infinitesimal characters are handled doubled, so that a
Hodge weight w contributes the integers +-w.  A parameter is a tuple of
blocks pi[d]; pi[d] contributes h + (d - 1 - 2k) for every doubled
eigenvalue h of pi and k = 0..d-1.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .basecounts import (ORTHOGONAL, SYMPLECTIC, TRIVIAL, TRIVIAL_LABEL, CountTables,
                         CuspidalLabel, MissingCount, epsilon_pair, parity_ok, s1)


@dataclass(frozen=True)
class GroupSpec:
    """A split group over Z through its dual: n = dimension of the dual standard representation."""
    name: str
    n: int
    sign: int  # -1 when the dual group is symplectic, +1 when it is orthogonal

    @property
    def rank(self) -> int:
        return self.n // 2


SO7 = GroupSpec("SO7", 6, -1)
SO8 = GroupSpec("SO8", 8, 1)
SO9 = GroupSpec("SO9", 8, -1)
SO25 = GroupSpec("SO25", 24, -1)


def odd_so(dim: int) -> GroupSpec:
    return GroupSpec(f"SO{dim}", dim - 1, -1)


def group_spec(name: str) -> GroupSpec:
    n = int(name[2:])
    return odd_so(n) if n % 2 else GroupSpec(name, n, 1)


@dataclass(frozen=True, order=True)
class Block:
    label: CuspidalLabel
    d: int = 1

    @property
    def n(self) -> int:
        return self.label.n * self.d

    @property
    def top(self) -> int:
        return self.label.motivic_weight + self.d - 1

    def eigenvalues2(self) -> list:
        return sorted((h + self.d - 1 - 2 * k for h in self.label.eigenvalues2() for k in range(self.d)),
                      reverse=True)


@dataclass(frozen=True)
class ArthurParameter:
    group: GroupSpec
    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, key=_block_order)))

    def inf_char2(self) -> list:
        return sorted((x for b in self.blocks for x in b.eigenvalues2()), reverse=True)

    def hodge(self) -> tuple:
        """Doubled nonnegative half of the infinitesimal character."""
        ev = self.inf_char2()
        pos = [x for x in ev if x > 0]
        zeros = ev.count(0)
        return tuple(pos + [0] * (zeros // 2))

    @property
    def name(self) -> str:
        return render(self)

    def is_stable(self) -> bool:
        return len(self.blocks) == 1

    def is_tempered(self) -> bool:
        return all(b.d == 1 for b in self.blocks)


def _block_order(b: Block):
    return (-b.top, -b.n, b.label.duality, b.label.hodge, b.d)


def inf_char(psi: ArthurParameter) -> list:
    """Infinitesimal character as a sorted list of half-integers (Fractions)."""
    from fractions import Fraction
    return [Fraction(x, 2) for x in psi.inf_char2()]


def check_parameter(psi: ArthurParameter) -> list:
    """Violations of the parameter constraints (empty when valid)."""
    g = psi.group
    problems = []
    if sum(b.n for b in psi.blocks) != g.n:
        problems.append("ranks do not add up")
    for b in psi.blocks:
        if b.label.sign * (-1) ** (b.d + 1) != g.sign:
            problems.append(f"sign condition fails for {render_block(b)}")
        if g.sign == 1 and b.n % 2 == 0 and b.n % 4:
            problems.append(f"even block {render_block(b)} of rank not divisible by 4")
    if len(set(psi.blocks)) != len(psi.blocks):
        problems.append("repeated block")
    return problems


# ------------------------------------------------------------- enumeration

MAX_STRUCTURAL_RANK = 12


def target_eigenvalues2(group: GroupSpec, w) -> Counter:
    ev = Counter()
    for x in w:
        ev[x] += 1
        ev[-x] += 1
    if sum(ev.values()) != group.n:
        raise ValueError(f"{w} does not give {group.n} eigenvalues")
    if group.sign == -1 and 0 in ev:
        raise ValueError("weight 0 is only supported for even orthogonal groups")
    return ev


def _block_candidates(group: GroupSpec, remaining: Counter, size: int):
    """Blocks whose top eigenvalue is the largest remaining one and that fit in remaining."""
    x = max(remaining)
    out = []
    for d in range(1, size + 1):
        s_pi = group.sign * (-1) ** (d + 1)
        if s_pi == 1 and d == x + 1:
            out.append(Block(TRIVIAL_LABEL, d))
        h1 = x - (d - 1)
        if h1 < 1:
            continue
        parity = 1 if s_pi == -1 else 0
        if h1 % 2 != parity:
            continue
        lower = [y for y in range(parity, h1, 2)]
        max_m = size // d
        ranks = []
        for m in range(1, max_m // 2 + 1):
            if s_pi == -1:
                ranks.append((2 * m, m, False))
            else:
                ranks.append((2 * m, m, False))
                ranks.append((2 * m + 1, m, True))
        for n_pi, m, odd in ranks:
            if n_pi * d > size:
                continue
            for rest in combinations(reversed(lower), m - 1):
                hodge = (h1,) + rest
                if odd and hodge[-1] == 0:
                    continue
                if s_pi == 1 and not odd and n_pi == 2:
                    continue  # rank-2 orthogonal never occurs at level one
                try:
                    label = CuspidalLabel(n_pi, SYMPLECTIC if s_pi == -1 else ORTHOGONAL, hodge)
                except ValueError:
                    continue
                blk = Block(label, d)
                need = Counter(blk.eigenvalues2())
                if all(remaining[k] >= v for k, v in need.items()):
                    out.append(blk)
    return out


def enumerate_shapes(group: GroupSpec, w) -> list:
    """All parameter shapes (ignoring counts) with the given doubled infinitesimal character.

    Every label shape is tried, which is only practical in small rank; large
    groups go through enumerate_from_labels.
    """
    if group.n > MAX_STRUCTURAL_RANK:
        raise ValueError(f"{group.name}: use enumerate_from_labels above rank {MAX_STRUCTURAL_RANK}")
    target = target_eigenvalues2(group, w)
    results = []

    def rec(remaining: Counter, chosen: list):
        size = sum(remaining.values())
        if size == 0:
            psi = ArthurParameter(group, tuple(chosen))
            if not check_parameter(psi):
                results.append(psi)
            return
        for blk in _block_candidates(group, remaining, size):
            if group.sign == 1 and blk.n % 2 == 0 and blk.n % 4:
                continue
            if blk in chosen:
                continue
            rest = remaining.copy()
            rest.subtract(Counter(blk.eigenvalues2()))
            rest = +rest
            rec(rest, chosen + [blk])

    rec(target, [])
    return sorted(set(results), key=lambda p: render(p))


def enumerate_from_labels(group: GroupSpec, w, labels, max_d: int | None = None) -> list:
    """Parameter shapes built only from the given labels (each with any admissible d)."""
    target = target_eigenvalues2(group, w)
    labels = sorted(set(labels))
    by_top = {}
    for lab in labels:
        for d in range(1, (max_d or group.n) + 1):
            blk = Block(lab, d)
            if blk.n > group.n or lab.sign * (-1) ** (d + 1) != group.sign:
                continue
            if group.sign == 1 and blk.n % 2 == 0 and blk.n % 4:
                continue
            by_top.setdefault(blk.top, []).append((blk, Counter(blk.eigenvalues2())))
    results = []

    def rec(remaining: Counter, chosen: list):
        if not remaining:
            psi = ArthurParameter(group, tuple(chosen))
            if not check_parameter(psi):
                results.append(psi)
            return
        for blk, need in by_top.get(max(remaining), []):
            if blk in chosen or any(remaining[k] < v for k, v in need.items()):
                continue
            rest = remaining.copy()
            rest.subtract(need)
            rec(+rest, chosen + [blk])

    rec(target, [])
    return sorted(set(results), key=render)


def enumerate_parameters(group: GroupSpec, target, tables: CountTables) -> list:
    """(shape, number of parameters of that shape) for every shape with the given Hodge weights."""
    out = []
    for psi in enumerate_shapes(group, target):
        try:
            out.append((psi, choice_count(psi, tables)))
        except MissingCount as exc:
            raise MissingCount(f"{group.name}{tuple(target)}: {render(psi)} needs {exc}") from None
    return out


def choice_count(psi: ArthurParameter, tables: CountTables) -> int:
    """Number of parameters of this shape: product of label counts, binomial for repeats."""
    groups = Counter(psi.blocks)
    out = 1
    for blk, k in groups.items():
        c = tables.count(blk.label)
        if k > 2:
            raise AssertionError("three identical blocks cannot occur")
        out *= comb(c, k)
    return out


# --------------------------------------------------------- multiplicities

def block_positions(psi: ArthurParameter, w) -> list:
    """For each block, the positions (1-based, in decreasing Hodge order) it occupies."""
    w = list(w)
    pos = {x: j + 1 for j, x in enumerate(w) if x > 0}
    r = len(w)
    out = []
    for b in psi.blocks:
        ev = b.eigenvalues2()
        p = [pos[x] for x in ev if x > 0]
        p += [r] * (ev.count(0) // 2)
        out.append(p)
    return out


def rho_vee_signs(psi: ArthurParameter, w=None) -> list:
    """rho-check(s_i) for each block, from the parity of the positions it occupies."""
    if w is None:
        w = psi.hodge()
    r = len(w)
    parity = r % 2 if psi.group.sign == -1 else (r - 1) % 2
    return [(-1) ** sum(1 for j in p if j % 2 == parity) for p in block_positions(psi, w)]


def epsilon_psi_signs(psi: ArthurParameter) -> list:
    out = []
    for i, bi in enumerate(psi.blocks):
        e = 1
        for j, bj in enumerate(psi.blocks):
            if i == j or bi.label.sign == bj.label.sign:
                continue
            if min(bi.d, bj.d) % 2:
                e *= epsilon_pair(bi.label, bj.label)
        out.append(e)
    return out


def multiplicity(psi: ArthurParameter, w=None) -> int:
    """Multiplicity (m', the sum over an outer class, for even orthogonal groups)."""
    if w is None:
        w = psi.hodge()
    rho = rho_vee_signs(psi, w)
    eps = epsilon_psi_signs(psi)
    if psi.group.sign == -1:
        relevant = range(len(psi.blocks))
    else:
        relevant = [i for i, b in enumerate(psi.blocks) if b.n % 2 == 0]
    if any(rho[i] != eps[i] for i in relevant):
        return 0
    if psi.group.sign == 1 and all(b.n % 2 == 0 for b in psi.blocks):
        return 1 if w[-1] > 0 else 2
    return 1


# ---------------------------------------------------------------- naming

def render_block(b: Block, count: int = 1) -> str:
    lab = b.label
    sup = f"^{count}" if count > 1 else ""
    if lab.duality == TRIVIAL:
        return f"[{b.d}]"
    if lab.duality == SYMPLECTIC:
        core = "Δ_{" + ",".join(map(str, lab.hodge)) + "}" + sup
    elif lab.n == 3 and lab.hodge[0] % 4 == 2:
        core = "Sym²Δ_{" + str(lab.hodge[0] // 2) + "}" + sup
    else:
        star = "*" if lab.n % 2 else ""
        core = f"O{star}_{{" + ",".join(map(str, lab.hodge)) + "}" + sup
    return core + (f"[{b.d}]" if b.d > 1 else "")


def render(psi: ArthurParameter, tables: CountTables | None = None) -> str:
    parts = []
    for b in psi.blocks:
        c = 1
        if tables is not None:
            try:
                c = tables.count(b.label)
            except MissingCount:
                c = 1
        parts.append(render_block(b, c))
    return " ⊕ ".join(parts)


_LATEX = [(r"\{\\rm\s*Sym\}\^2", "Sym²"), (r"\\Delta", "Δ"), (r"\\oplus", "⊕"), (r"\$", "")]
_BLOCK = re.compile(
    r"^(?:(?P<sym>Sym²)?Δ\s*_\{?(?P<h>[\d,\s]+)\}?|O(?P<star>\*)?_\{(?P<oh>[\d,\s]+)\})?"
    r"(?:\^\{?(?P<k>\d+)\}?)?(?:\[(?P<d>\d+)\])?$")


def parse_name(text: str, group: GroupSpec | None = None):
    """Parse a parameter written with Δ_{..}, Sym²Δ_{..}, O_{..}, O*_{..}, [d] and ⊕ (LaTeX accepted).

    Returns a list of (Block, k) where k is the superscript multiplicity
    (1 when absent); with a group, returns an ArthurParameter and the list of k.
    """
    s = text
    for pat, rep in _LATEX:
        s = re.sub(pat, rep, s)
    out = []
    for part in s.split("⊕"):
        part = part.strip().replace(" ", "")
        m = _BLOCK.match(part)
        if not part or not m:
            raise ValueError(f"cannot parse block {part!r} in {text!r}")
        d = int(m.group("d") or 1)
        k = int(m.group("k") or 1)
        if m.group("h"):
            h = tuple(int(x) for x in m.group("h").split(","))
            if m.group("sym"):
                label = CuspidalLabel(3, ORTHOGONAL, (2 * h[0],))
            else:
                label = CuspidalLabel(2 * len(h), SYMPLECTIC, h)
        elif m.group("oh"):
            h = tuple(int(x) for x in m.group("oh").split(","))
            n = 2 * len(h) + (1 if m.group("star") else 0)
            label = CuspidalLabel(n, ORTHOGONAL, h)
        else:
            if m.group("d") is None:
                raise ValueError(f"cannot parse block {part!r}")
            label = TRIVIAL_LABEL
        out.append((Block(label, d), k))
    if group is None:
        return out
    return ArthurParameter(group, tuple(b for b, _ in out)), [k for _, k in out]


def canonical_name(text: str) -> str:
    """Re-render a name in canonical block order (superscripts kept)."""
    parsed = parse_name(text)
    parsed.sort(key=lambda bk: _block_order(bk[0]))
    return " ⊕ ".join(render_block(b, k) for b, k in parsed)


# -------------------------------------------------------------- extraction

def unknown_shapes(group: GroupSpec, w) -> list:
    """The shapes whose counts a given invariant dimension determines."""
    stable_label = CuspidalLabel(group.n, SYMPLECTIC if group.sign == -1 else ORTHOGONAL, tuple(w))
    out = [ArthurParameter(group, (Block(stable_label),))]
    if group.sign == 1 and w[-1] == 0:
        ostar = CuspidalLabel(group.n - 1, ORTHOGONAL, tuple(w[:-1]))
        out.append(ArthurParameter(group, (Block(ostar), Block(TRIVIAL_LABEL))))
    return out


def known_contribution(group: GroupSpec, w, tables: CountTables) -> tuple:
    """(sum of count * multiplicity over determined shapes, list of (psi, count, mult))."""
    unknown = set(unknown_shapes(group, w))
    total = 0
    detail = []
    for psi in enumerate_shapes(group, w):
        if psi in unknown:
            continue
        mult = multiplicity(psi, w)
        if mult == 0:
            continue
        try:
            c = choice_count(psi, tables)
        except MissingCount as exc:
            raise MissingCount(f"{group.name}{tuple(w)} needs {exc}") from None
        total += c * mult
        if c:
            detail.append((psi, c, mult))
    return total, detail


class NegativeResidual(ArithmeticError):
    pass


def extract_counts(group: GroupSpec, dims: dict, tables: CountTables) -> CountTables:
    """Turn invariant dimensions {hodge tuple: dim} into counts of the unknown labels."""
    tables.m.setdefault(group.name, {}).update(dims)
    for w in sorted(dims):
        known, _ = known_contribution(group, w, tables)
        res = dims[w] - known
        if res < 0:
            raise NegativeResidual(f"{group.name}{tuple(w)}: residual {res} < 0")
        stable = unknown_shapes(group, w)[0].blocks[0].label
        if group.sign == -1:
            tables.set(stable, res)
        elif w[-1] > 0:
            tables.set(stable, res)
        else:
            tables.combined[tuple(w[:-1])] = res
            ostar = CuspidalLabel(group.n - 1, ORTHOGONAL, tuple(w[:-1]))
            if res <= 1:  # otherwise only the combination is determined
                tables.set(ostar, res)
                tables.set(stable, 0)
    return tables


def endoscopic_partition(group: GroupSpec, w, tables: CountTables) -> list:
    """Every shape with nonzero contribution, as (name, multiplicity, count)."""
    out = []
    for psi in enumerate_shapes(group, w):
        mult = multiplicity(psi, w)
        if not mult:
            continue
        c = choice_count(psi, tables)
        if c:
            out.append((render(psi, tables), mult, c))
    return out


# ------------------------------------------------------------------- G2

@dataclass(frozen=True)
class G2Parameter:
    """A G2 parameter described by its image in the 7-dimensional representation."""
    kind: str  # 'stable', 'principal', 'tempered', 'nontempered1', 'nontempered2'
    rank4: tuple  # Hodge weights of the rank-4 part; (w, v) for the stable one
    rank3: tuple
    labels: tuple  # PGL2 Hodge weights involved (long, short) or (pi,)

    def name(self) -> str:
        if self.kind == "principal":
            return "[7]"
        if self.kind == "stable":
            return "G2_{%d,%d}" % self.rank4
        if self.kind == "tempered":
            l, s = self.labels
            return f"Δ_{{{l}}}⊗Δ_{{{s}}} ⊕ Sym²Δ_{{{s}}}"
        (a,) = self.labels
        if self.kind == "nontempered1":
            return f"Δ_{{{a}}}[2] ⊕ Sym²Δ_{{{a}}}"
        return f"Δ_{{{a}}}[2] ⊕ [3]"


def g2_shapes(w: int, v: int) -> list:
    """Endoscopic G2 parameters with Hodge weights w+v > w > v (not the stable one)."""
    vals = (w + v, w, v)
    out = []
    if vals == (6, 4, 2):
        out.append(G2Parameter("principal", (), (), ()))
    # tempered: pi_long x pi_short (+-(wl+ws), +-|wl-ws|) plus Sym^2 pi_short (2 ws)
    for i, x in enumerate(vals):
        if x % 4 != 2:
            continue
        ws = x // 2
        others = [y for j, y in enumerate(vals) if j != i]
        wl = others[0] - ws
        if wl > 0 and wl % 2 and abs(wl - ws) == others[1] and wl != ws:
            out.append(G2Parameter("tempered", tuple(others), (x,), (wl, ws)))
    # pi[2] plus Sym^2 pi, or pi[2] plus [3]
    for i in range(3):
        for j in range(i + 1, 3):
            a, b = vals[i], vals[j]
            if a - b == 2 and (a - 1) % 2 == 1:
                pi = a - 1
                rest = [y for k, y in enumerate(vals) if k not in (i, j)][0]
                if rest == 2 * pi:
                    out.append(G2Parameter("nontempered1", (a, b), (rest,), (pi,)))
                if rest == 2:
                    out.append(G2Parameter("nontempered2", (a, b), (rest,), (pi,)))
    return out


def g2_multiplicity(p: G2Parameter, w: int, v: int) -> int:
    if p.kind in ("principal", "stable"):
        return 1
    # rho-check(s) is -1 exactly when the middle Hodge weight w lies in the rank-4 part
    rho = -1 if w in p.rank4 else 1
    if p.kind == "tempered":
        eps = 1
    elif p.kind == "nontempered1":
        # epsilon(Sym^3 pi) from the archimedean rule
        a = p.labels[0]
        eps = (-1) ** ((a + 1) // 2 + (3 * a + 1) // 2)
    else:
        eps = (-1) ** ((p.labels[0] + 1) // 2)
    return 1 if rho == eps else 0


def g2_choice_count(p: G2Parameter, shared_short: bool = True) -> int:
    """Number of parameters of a shape.  In the tempered case the short PGL2 factor is
    common to both summands; shared_short=False counts the two summands independently."""
    if p.kind == "principal":
        return 1
    if p.kind == "tempered":
        wl, ws = p.labels
        if shared_short:
            return s1(wl) * s1(ws)
        return s1(ws) * (s1(ws) * s1(wl))
    return s1(p.labels[0])


def g2_known_contribution(w: int, v: int, shared_short: bool = True) -> int:
    return sum(g2_multiplicity(p, w, v) * g2_choice_count(p, shared_short) for p in g2_shapes(w, v))


def extract_g2(dims: dict, tables: CountTables, shared_short: bool = True) -> CountTables:
    tables.m.setdefault("G2", {}).update(dims)
    for (w, v) in sorted(dims):
        res = dims[w, v] - g2_known_contribution(w, v, shared_short)
        if res < 0:
            raise NegativeResidual(f"G2{(w, v)}: residual {res} < 0")
        tables.g2[w, v] = res
    return tables


def g2_partition(w: int, v: int, tables: CountTables) -> list:
    out = []
    for p in g2_shapes(w, v):
        m = g2_multiplicity(p, w, v)
        c = g2_choice_count(p)
        if m and c:
            out.append((p.name(), m, c))
    c = tables.g2.get((w, v), 0)
    if c:
        out.append((G2Parameter("stable", (w, v), (), ()).name(), 1, c))
    return out


# ---------------------------------------------------------------- genus 3

def ostar(tables: CountTables, w) -> tuple:
    """Bounds for O*(w) for one or three weights."""
    w = tuple(w)
    if not parity_ok(w):
        return 0, 0
    return tables.bounds(CuspidalLabel(2 * len(w) + 1, ORTHOGONAL, w))


def siegel_genus3_dim(w1: int, w2: int, w3: int, tables: CountTables) -> tuple:
    """Bounds (lo, hi) for dim S_{w1,w2,w3}(Sp6(Z)); lo == hi when fully determined."""
    if not (w1 > w2 > w3 > 0) or any(x % 2 for x in (w1, w2, w3)):
        raise ValueError("need even w1 > w2 > w3 > 0")
    lo, hi = ostar(tables, (w1, w2, w3))
    o2 = tables.count(CuspidalLabel(4, ORTHOGONAL, (w1, w3)))
    extra = o2 * ostar(tables, (w2,))[0]
    if w2 % 4 == 0:
        if w2 == w3 + 2:
            extra += s1(w2 - 1) * ostar(tables, (w1,))[0]
        if w1 == w2 + 2:
            extra += s1(w2 + 1) * ostar(tables, (w3,))[0]
    return lo + extra, hi + extra
