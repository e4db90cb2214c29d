"""Finitely generated groups of ladder functions and exact decompositions.

A presentation names a finite family of generators inside one domain.  All
membership questions reduce to integer linear algebra over a finite, faithful
coordinate window: enough evaluation points to pin down every finite part,
plus one scaled axis per (ladder, weight) for behaviour at the limits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ordlat.element import (
    Domain,
    Element,
    WeightFn,
    is_semibasic,
)
from ordlat.intlinalg import row_rank, solve_in_rowspace
from ordlat.ordinal import Ordinal, compare, format_ordinal, successor, floor_rank
from ordlat.space import ClopenBlock


class AmbiguousProbeError(ValueError):
    """A caller-supplied probe set failed to separate two candidates."""


class SearchExhaustedError(RuntimeError):
    """The bounded generator search ended without a witness."""


@dataclass(frozen=True)
class Presentation:
    name: str
    domain: Domain
    generators: Tuple[Tuple[str, Element], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "generators", tuple((n, g) for n, g in self.generators)
        )
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        for n, g in self.generators:
            if g.domain != self.domain:
                raise ValueError(f"generator {n} lives on a different domain")

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.generators)

    @property
    def elements(self) -> Tuple[Element, ...]:
        return tuple(g for _, g in self.generators)

    def generator(self, name: str) -> Element:
        for n, g in self.generators:
            if n == name:
                return g
        raise KeyError(f"no generator {name!r}")


@dataclass(frozen=True)
class CoordinateSystem:
    """Faithful finite coordinates for integer combinations of a family.

    points: evaluation window (every prefix point of the family plus every
    ladder index below the largest canonical start).  axes: one residue
    coordinate per (ladder, weight) in use, scaled to clear denominators.
    strict coords refuse elements that step outside the window.
    """

    domain: Domain
    points: Tuple[Ordinal, ...]
    axes: Tuple[Tuple[str, WeightFn], ...]
    scales: Tuple[int, ...]
    strict: bool = True

    @classmethod
    def for_elements(
        cls,
        domain: Domain,
        elements: Sequence[Element],
        probes: Optional[Sequence[Ordinal]] = None,
    ) -> "CoordinateSystem":
        axes: Dict[Tuple[str, WeightFn], int] = {}
        max_start: Dict[str, int] = {}
        for f in elements:
            for t in f.tails:
                key = (t.ladder_id, t.weight)
                axes[key] = lcm(axes.get(key, 1), t.coeff.denominator)
                max_start[t.ladder_id] = max(
                    max_start.get(t.ladder_id, 0), t.start
                )
        if probes is not None:
            pts = {p for p in probes}
            strict = False
        else:
            pts = {x for f in elements for x, _ in f.prefix}
            for lid, s in max_start.items():
                L = domain.ladder(lid)
                for k in range(s):
                    pts.add(L.point(k))
            strict = True
        axis_keys = sorted(axes, key=lambda a: (a[0], a[1].dominance_key()))
        return cls(
            domain=domain,
            points=tuple(sorted(pts, key=Ordinal.key)),
            axes=tuple(axis_keys),
            scales=tuple(axes[a] for a in axis_keys),
            strict=strict,
        )

    def coords(self, f: Element) -> Tuple[int, ...]:
        if self.strict:
            window = set(self.points)
            for x, _ in f.prefix:
                if x not in window:
                    raise ValueError(
                        f"prefix point {format_ordinal(x)} outside the window"
                    )
        out = [f.value(p) for p in self.points]
        residues = {
            (t.ladder_id, t.weight): t.coeff for t in f.tails
        }
        for (lid, w), scale in zip(self.axes, self.scales):
            r = residues.pop((lid, w), Fraction(0)) * scale
            if r.denominator != 1:
                raise ValueError("residue outside the scaled lattice")
            out.append(int(r))
        if residues:
            raise ValueError("element uses a (ladder, weight) outside the axes")
        return tuple(out)


@dataclass(frozen=True)
class Decomposition:
    coeffs: Tuple[int, ...]
    unique: bool


def member_decompose(
    gens: Sequence[Element],
    target: Element,
    probes: Optional[Sequence[Ordinal]] = None,
) -> Optional[Decomposition]:
    """Integer coefficients writing target over gens, or None.

    With the automatic window the answer is exact.  A caller-supplied probe
    list is trusted for speed; if it turns out too coarse to separate the
    candidates, the exact recheck raises AmbiguousProbeError.
    """
    if not gens:
        return Decomposition((), True) if target.is_zero else None
    domain = gens[0].domain
    cs = CoordinateSystem.for_elements(
        domain, list(gens) + [target], probes=probes
    )
    rows = [cs.coords(g) for g in gens]
    sol = solve_in_rowspace(rows, cs.coords(target))
    if sol is None:
        return None
    combo = domain.zero()
    for c, g in zip(sol, gens):
        combo = combo + c * g
    if combo != target:
        if probes is not None:
            raise AmbiguousProbeError(
                f"{len(cs.points)} probe points cannot separate the candidates"
            )
        raise AssertionError("faithful window produced a bogus solution")
    return Decomposition(coeffs=sol, unique=row_rank(rows) == len(gens))


def finite_prime_test(domain: Domain, x: Ordinal) -> bool:
    """Whether evaluation at x is integer-valued on the whole domain."""
    if not domain.space.contains(x):
        return False
    L = domain.target_ladder(x)
    if L is None:
        return True
    return all(w.kind == "constant" for w in L.weights)


def residue_index_at(f: Element, lid: str) -> Optional[int]:
    """Index from which values on the ladder follow the residue formula."""
    return f.tail_start(lid)


def _isolates(f: Element, x: Ordinal, gamma: Ordinal) -> bool:
    if f.value(x) < 1 or not f.is_nonneg():
        return False
    space = f.domain.space
    for p in f.support().points:
        if p != x and compare(space.cb_rank(p), gamma) >= 0:
            return False
    for lid, rho in f.support().regimes:
        L = f.domain.ladder(lid)
        if compare(space.cb_rank(L.target), gamma) >= 0:
            return False
        if rho == 0 and compare(space.cb_rank(L.point(0)), gamma) >= 0:
            return False
    return True


def semibasic_construct(
    pres: Presentation,
    x: Ordinal,
    coeff_bound: int = 4,
    max_terms: int = 3,
) -> Element:
    """Search the presentation for a semibasic element at x.

    Tries e(x) first; otherwise runs a bounded deterministic search for a
    nonnegative combination that isolates x and flattens it to height one
    with a meet.
    """
    domain = pres.domain
    if domain.target_ladder(x) is not None:
        raise ValueError("no integer-valued evaluation at a ladder target")
    gamma = domain.space.cb_rank(x)
    spike = domain.e(x)
    if member_decompose(pres.elements, spike) is not None:
        return spike

    def search(want: Callable[[Element], bool]) -> Optional[Element]:
        gens = pres.elements
        for size in range(1, max_terms + 1):
            for idx in itertools.combinations(range(len(gens)), size):
                for coeffs in itertools.product(
                    range(-coeff_bound, coeff_bound + 1), repeat=size
                ):
                    if any(c == 0 for c in coeffs):
                        continue
                    f = domain.zero()
                    for c, i in zip(coeffs, idx):
                        f = f + c * gens[i]
                    if want(f):
                        return f
        return None

    f = search(lambda g: _isolates(g, x, gamma))
    if f is None:
        raise SearchExhaustedError(
            f"no isolating combination at {format_ordinal(x)} within bounds"
        )
    if f.value(x) == 1:
        return f
    g = search(lambda h: h.is_nonneg() and h.value(x) == 1)
    if g is None:
        raise SearchExhaustedError(
            f"no height-one combination at {format_ordinal(x)} within bounds"
        )
    q = f.meet(g)
    if not is_semibasic(q, x):
        raise SearchExhaustedError(
            f"bounded search failed to produce a semibasic element at "
            f"{format_ordinal(x)}"
        )
    return q


QuarkSource = Union[Mapping[Ordinal, Element], Callable[[Ordinal], Element], None]


def _quark_at(domain: Domain, quarks: QuarkSource, x: Ordinal) -> Element:
    if quarks is None:
        return domain.e(x)
    if callable(quarks):
        return quarks(x)
    return quarks.get(x, domain.e(x))


def span_qx_decompose(
    f: Element, quarks: QuarkSource = None
) -> Dict[Ordinal, int]:
    """Write a finite-support element over semibasic elements, one per
    support point, peeling ranks from the top down.

    Returns an ordered mapping point -> coefficient; iteration order is
    decreasing rank and, within a rank, increasing ordinal.  That order makes
    the quark-value matrix unitriangular, which is what the kernel basis
    certificate exploits.
    """
    if f.tails:
        raise ValueError("decomposition over quarks needs a finite support")
    domain = f.domain
    space = domain.space
    result: Dict[Ordinal, int] = {}
    work = f
    while not work.is_zero:
        gamma = work.cb()
        pts = [
            p
            for p in work.support().points
            if space.cb_rank(p) == gamma
        ]
        clusters: Dict[Ordinal, List[Ordinal]] = {}
        for p in pts:
            clusters.setdefault(floor_rank(p, successor(gamma)), []).append(p)
        for base in sorted(clusters, key=Ordinal.key):
            members = clusters[base]
            hi = max(members, key=Ordinal.key)
            block = ClopenBlock(
                low=None if base.is_zero else base, high=hi
            )
            for x in space.rank_slice(block, gamma):
                c = work.value(x)
                if c == 0:
                    continue
                q = _quark_at(domain, quarks, x)
                if not is_semibasic(q, x):
                    raise ValueError(
                        f"supplied quark at {format_ordinal(x)} is not semibasic"
                    )
                work = work - c * q
                result[x] = c
        if not work.is_zero and compare(work.cb(), gamma) >= 0:
            raise AssertionError("rank failed to descend")
    return result


@dataclass(frozen=True)
class KernelBasisCertificate:
    """Checkable evidence that the quarks at the listed points are an
    independent family spanning the given finite-support elements.

    points are ordered by decreasing rank then increasing ordinal, so the
    matrix of quark values over the points is unitriangular.
    """

    points: Tuple[Ordinal, ...]
    quarks: Tuple[Element, ...]
    gens: Tuple[Element, ...]
    rows: Tuple[Tuple[int, ...], ...]  # gens over quarks

    def verify(self) -> bool:
        for i, x in enumerate(self.points):
            q = self.quarks[i]
            if q.value(x) != 1:
                return False
            for j, y in enumerate(self.points):
                if j < i and q.value(y) != 0:
                    return False
        for g, row in zip(self.gens, self.rows):
            combo = g.domain.zero()
            for c, q in zip(row, self.quarks):
                combo = combo + c * q
            if combo != g:
                return False
        return True


def kernel_basis_certificate(
    gens: Sequence[Element], quarks: QuarkSource = None
) -> KernelBasisCertificate:
    if not gens:
        raise ValueError("need at least one element")
    domain = gens[0].domain
    space = domain.space
    decomps = [span_qx_decompose(g, quarks) for g in gens]
    seen: Dict[Ordinal, Element] = {}
    for d in decomps:
        for x in d:
            if x not in seen:
                seen[x] = _quark_at(domain, quarks, x)
    ranks = sorted({space.cb_rank(x) for x in seen}, key=Ordinal.key)
    ordered: List[Ordinal] = []
    for r in reversed(ranks):
        ordered.extend(
            sorted(
                (x for x in seen if space.cb_rank(x) == r), key=Ordinal.key
            )
        )
    rows = tuple(
        tuple(d.get(x, 0) for x in ordered) for d in decomps
    )
    return KernelBasisCertificate(
        points=tuple(ordered),
        quarks=tuple(seen[x] for x in ordered),
        gens=tuple(gens),
        rows=rows,
    )
