"""Charts, atlases, their morphisms and 2-morphisms.

The objects here form a strict 2-category.  A chart is a connected open
rational region together with a finite effective group of affine maps
preserving it; an atlas is a family of charts glued by certified changes of
charts.  Because every local datum is affine, germ equality is affine-map
equality, and all axioms of morphism representatives (M1)-(M5f) and of
2-morphism representatives (2Ma)-(2Me) are decided exactly.

Base points are never materialized: the coarse space of an atlas is the
quotient of its chart points by the pseudogroup generated by the declared
generators and the chart groups.  That pseudogroup is computed as a bounded
word closure; when the closure stabilizes below the bound it is complete and
negative answers are sound, otherwise verdicts degrade to "undecided".
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .geometry import (
    AffineMap,
    PartialAffineIso,
    Region,
    distinct_points,
)
from .reports import (
    ComposabilityError,
    Report,
    UndecidedError,
)

WORD_BOUND = 4
FAMILY_CAP = 256
SAMPLE_COUNT = 64


# ---------------------------------------------------------------------------
# Charts, changes of charts, atlases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chart:
    """Connected open region with a finite effective affine symmetry group.

    The quotient projection is implicit: a base point is the orbit of a
    chart point under the atlas pseudogroup."""

    cid: str
    domain: Region
    group: tuple

    @staticmethod
    def make(cid, domain, group) -> "Chart":
        maps = sorted({g if isinstance(g, AffineMap) else AffineMap.make(*g) for g in group},
                      key=lambda m: m.key())
        if not any(m.is_identity() for m in maps):
            maps = sorted(maps + [AffineMap.identity(domain.dim)], key=lambda m: m.key())
        return Chart(cid, domain, tuple(maps))

    @property
    def dim(self):
        return self.domain.dim

    def stabilizer(self, x) -> tuple:
        return tuple(g for g in self.group if g(x) == x)

    def key(self):
        return (self.cid, self.domain.key(), tuple(g.key() for g in self.group))


@dataclass(frozen=True)
class ChangeOfCharts:
    """Partial affine isomorphism from one chart to another, compatible with
    the implicit projections.  The domain may have several components; each
    component is a change of charts in its own right."""

    src: str
    dst: str
    iso: PartialAffineIso

    @staticmethod
    def make(src, dst, m: AffineMap, dom: Region) -> "ChangeOfCharts":
        return ChangeOfCharts(src, dst, PartialAffineIso.make(m, dom))

    @property
    def map(self) -> AffineMap:
        return self.iso.map

    @property
    def dom(self) -> Region:
        return self.iso.dom

    @property
    def cod(self) -> Region:
        return self.iso.cod

    def inverse(self) -> "ChangeOfCharts":
        return ChangeOfCharts(self.dst, self.src, self.iso.inverse())

    def restrict(self, region: Region) -> "ChangeOfCharts":
        return ChangeOfCharts(self.src, self.dst, self.iso.restrict(region))

    def key(self):
        return (self.src, self.dst, self.iso.key())


def compose_changes(later: ChangeOfCharts, earlier: ChangeOfCharts):
    """later after earlier; None when the composite has empty domain."""
    if earlier.dst != later.src:
        raise ComposabilityError(
            f"changes not composable: {earlier.dst} != {later.src}")
    iso = later.iso.compose(earlier.iso)
    if iso.dom.is_empty():
        return None
    return ChangeOfCharts(earlier.src, later.dst, iso)


@dataclass(frozen=True)
class Atlas:
    """Finite family of charts together with generating changes of charts."""

    charts: tuple
    generators: tuple

    @staticmethod
    def make(charts, generators=()) -> "Atlas":
        charts = tuple(sorted(charts, key=lambda c: c.cid))
        ids = [c.cid for c in charts]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate chart ids")
        return Atlas(charts, tuple(sorted(generators, key=lambda g: g.key())))

    @property
    def dim(self):
        return self.charts[0].dim

    def chart(self, cid: str) -> Chart:
        for c in self.charts:
            if c.cid == cid:
                return c
        raise KeyError(f"no chart {cid!r}")

    def chart_ids(self):
        return tuple(c.cid for c in self.charts)

    def key(self):
        return (tuple(c.key() for c in self.charts), tuple(g.key() for g in self.generators))


def merge_many(*atlases):
    """Merge any number of atlases (ignoring Nones); None when inconsistent."""
    out = None
    for a in atlases:
        if a is None:
            continue
        out = a if out is None else merge_atlases(out, a)
        if out is None:
            return None
    return out


def merge_atlases(a: Atlas, b: Atlas):
    """Union of two atlases identifying charts with equal ids.  Returns None
    when a shared id carries different chart data (no canonical merge)."""
    if a.dim != b.dim:
        return None
    charts = {c.cid: c for c in a.charts}
    for c in b.charts:
        if c.cid in charts and charts[c.cid].key() != c.key():
            return None
        charts[c.cid] = c
    gens = {g.key(): g for g in a.generators}
    gens.update({g.key(): g for g in b.generators})
    return Atlas.make(tuple(charts.values()), tuple(gens.values()))


# ---------------------------------------------------------------------------
# Bounded pseudogroup closure
# ---------------------------------------------------------------------------

class Pseudogroup:
    """Word closure of the chart groups and declared generators, aggregated
    by affine map: families[(i, j)][map] is the union of the domains of all
    closure words from chart i to chart j with that affine map."""

    def __init__(self, families, complete, overflowed):
        self.families = families
        self.complete = complete
        self.overflowed = overflowed

    def region(self, src, dst, m: AffineMap):
        return self.families.get((src, dst), {}).get(m)

    def maps(self, src, dst):
        return self.families.get((src, dst), {})

    def covered(self, src, dst, m: AffineMap, region: Region):
        """Whether the region lies in the domain union of closure words with
        the given map.  True/False, or None when incomplete and not covered."""
        fam = self.region(src, dst, m)
        if fam is not None and region.covers([fam]):
            return True
        return False if self.complete else None

    def items(self):
        for (src, dst), by_map in sorted(self.families.items()):
            for m in sorted(by_map, key=lambda m: m.key()):
                yield src, dst, m, by_map[m]

    def count(self):
        return sum(len(v) for v in self.families.values())


def _seed_families(atlas: Atlas):
    seeds = []
    for c in atlas.charts:
        for g in c.group:
            seeds.append((c.cid, c.cid, g, c.domain))
    for gen in atlas.generators:
        seeds.append((gen.src, gen.dst, gen.map, gen.dom))
        inv = gen.inverse()
        seeds.append((inv.src, inv.dst, inv.map, inv.dom))
    return seeds


@lru_cache(maxsize=None)
def closure(atlas: Atlas, bound: int = WORD_BOUND, cap: int = FAMILY_CAP) -> Pseudogroup:
    """Bounded pseudogroup closure.  Appending one generating letter at a
    time reaches every word, so stability under a single append pass proves
    the closure is the full pseudogroup (complete=True)."""
    seeds = _seed_families(atlas)
    fams = {}

    def absorb(src, dst, m, region):
        by_map = fams.setdefault((src, dst), {})
        cur = by_map.get(m)
        if cur is None:
            if region.is_empty():
                return False
            by_map[m] = region
            return True
        new = cur.union(region)
        if new == cur:
            return False
        by_map[m] = new
        return True

    for s in seeds:
        absorb(*s)
    complete = False
    overflowed = False
    for _ in range(bound):
        changed = False
        snapshot = [(src, dst, m, reg)
                    for (src, dst), by_map in fams.items()
                    for m, reg in by_map.items()]
        for (src, mid, m1, d1) in snapshot:
            for (s2, dst, m2, d2) in seeds:
                if s2 != mid:
                    continue
                dom = d1.preimage_under(m1, d2)
                if dom.is_empty():
                    continue
                changed |= absorb(src, dst, m2.compose(m1), dom)
        total = sum(len(v) for v in fams.values())
        if total > cap:
            overflowed = True
            break
        if not changed:
            complete = True
            break
    return Pseudogroup(fams, complete, overflowed)


def coarse_equal_atlas(atlas: Atlas, p, q, bound: int = WORD_BOUND):
    """Are two chart points (chart_id, point) in the same orbit of the
    pseudogroup?  Returns 'equal', 'distinct' or 'undecided'."""
    (ci, x), (cj, y) = p, q
    if ci == cj and x == y:
        return "equal"
    cl = closure(atlas, bound)
    for m, reg in cl.maps(ci, cj).items():
        if reg.contains_point(x) and m(x) == y:
            return "equal"
    return "distinct" if cl.complete else "undecided"


# ---------------------------------------------------------------------------
# Structural validation
# ---------------------------------------------------------------------------

def validate_chart(chart: Chart) -> Report:
    rep = Report(f"chart {chart.cid}")
    if chart.domain.is_empty():
        rep.fail("C1", "empty domain")
        return rep
    if not chart.domain.is_connected():
        rep.fail("C1", "domain not connected")
    maps = set(chart.group)
    for g in chart.group:
        if not g.is_invertible():
            rep.fail("C2", "group element not invertible", g)
            continue
        if not chart.domain.image(g).same_set(chart.domain):
            rep.fail("C2", f"group element does not preserve the domain", g)
        if g.inverse() not in maps:
            rep.fail("C3", "group not closed under inversion", g)
    for g, h in itertools.product(chart.group, repeat=2):
        if g.is_invertible() and h.is_invertible() and g.compose(h) not in maps:
            rep.fail("C3", "group not closed under composition", (g, h))
            break
    return rep


def validate_change(atlas: Atlas, ch: ChangeOfCharts) -> Report:
    rep = Report(f"change {ch.src}->{ch.dst}")
    try:
        src, dst = atlas.chart(ch.src), atlas.chart(ch.dst)
    except KeyError as e:
        rep.fail("CC1", str(e))
        return rep
    if ch.dom.is_empty():
        rep.fail("CC1", "empty domain")
        return rep
    if not ch.dom.covers([src.domain]):
        rep.fail("CC1", "domain not inside the source chart")
    if not ch.cod.covers([dst.domain]):
        rep.fail("CC2", "codomain not inside the target chart")
    for side, chart_, reg in (("CC3", src, ch.dom), ("CC4", dst, ch.cod)):
        for comp in reg.components():
            for g in chart_.group:
                img = comp.image(g)
                if not img.same_set(comp) and not img.intersect(comp).is_empty():
                    rep.fail(side, "component neither preserved nor moved off itself",
                             (g, comp.interior_point()))
    return rep


def validate_atlas(atlas: Atlas, bound: int = WORD_BOUND) -> Report:
    rep = Report("atlas")
    dims = {c.dim for c in atlas.charts}
    if len(dims) != 1:
        rep.fail("A1", "charts of mixed dimension")
        return rep
    for c in atlas.charts:
        rep.absorb(validate_chart(c))
    for g in atlas.generators:
        rep.absorb(validate_change(atlas, g))
    if not rep.ok:
        return rep
    cl = closure(atlas, bound)
    if cl.overflowed:
        rep.note_undecided("pseudogroup closure exceeded the family cap")
    elif not cl.complete:
        rep.note_undecided("pseudogroup closure did not stabilize within the word bound")
    for src, dst, m, reg in cl.items():
        if not reg.covers([atlas.chart(src).domain]):
            rep.fail("A2", f"closure family escapes chart {src}", m)
        if not reg.image(m).covers([atlas.chart(dst).domain]):
            rep.fail("A2", f"closure family escapes chart {dst}", m)
    return rep


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PEntry:
    """One element of the distinguished generating family of changes of
    charts carried by a morphism representative, with its assigned change of
    the target atlas."""

    change: ChangeOfCharts
    nu: ChangeOfCharts

    def key(self):
        return (self.change.key(), self.nu.key())


@dataclass(frozen=True)
class MorphismRep:
    source: Atlas
    target: Atlas
    chart_map: tuple        # sorted (source chart id, target chart id) pairs
    lifts: tuple            # sorted (source chart id, AffineMap) pairs
    entries: tuple

    @staticmethod
    def make(source, target, chart_map, lifts, entries) -> "MorphismRep":
        cm = tuple(sorted(dict(chart_map).items()))
        lf = tuple(sorted(dict(lifts).items()))
        return MorphismRep(source, target, cm, lf, tuple(entries))

    def chart_image(self, cid: str) -> str:
        return dict(self.chart_map)[cid]

    def lift(self, cid: str) -> AffineMap:
        return dict(self.lifts)[cid]

    def entries_at(self, src: str, dst: str):
        return [e for e in self.entries if e.change.src == src and e.change.dst == dst]


def _normalize_entries(entries):
    merged = {}
    for e in entries:
        if e.change.dom.is_empty():
            continue
        k = (e.change.src, e.change.dst, e.change.map.key(), e.nu.map.key(),
             e.nu.src, e.nu.dst)
        if k in merged:
            prev = merged[k]
            merged[k] = PEntry(
                ChangeOfCharts(prev.change.src, prev.change.dst,
                               PartialAffineIso(prev.change.map,
                                                prev.change.dom.union(e.change.dom))),
                ChangeOfCharts(prev.nu.src, prev.nu.dst,
                               PartialAffineIso(prev.nu.map, prev.nu.dom.union(e.nu.dom))),
            )
        else:
            merged[k] = e
    return tuple(sorted(merged.values(), key=lambda e: e.key()))


@dataclass(frozen=True)
class Morphism:
    """A morphism of atlases, held as a normalized representative of its
    germ-agreement class.  `certificate`, when present, is an atlas whose
    pseudogroup certifies that the lifts identify source and target points
    over the identity of the underlying space; it never takes part in
    equality."""

    rep: MorphismRep
    certificate: Atlas = field(default=None, compare=False)

    @staticmethod
    def make(source, target, chart_map, lifts, entries, certificate=None) -> "Morphism":
        rep = MorphismRep.make(source, target, dict(chart_map), dict(lifts),
                               _normalize_entries(entries))
        return Morphism(rep, certificate)

    @property
    def source(self) -> Atlas:
        return self.rep.source

    @property
    def target(self) -> Atlas:
        return self.rep.target

    def chart_image(self, cid):
        return self.rep.chart_image(cid)

    def lift(self, cid):
        return self.rep.lift(cid)

    @property
    def entries(self):
        return self.rep.entries

    def is_etale(self) -> bool:
        return all(m.is_invertible() for _, m in self.rep.lifts)

    def key(self):
        return (self.rep.chart_map, tuple((c, m.key()) for c, m in self.rep.lifts),
                tuple(e.key() for e in self.rep.entries))


def _lift_image(m: Morphism, cid: str, region: Region) -> Region:
    """Image of a region in a source chart under the lift; exact for
    invertible lifts, which is the only case the callers rely on."""
    return region.image(m.lift(cid))


def validate_morphism(m: Morphism, bound: int = WORD_BOUND) -> Report:
    rep = Report("morphism")
    src, tgt = m.source, m.target
    cm, lifts = dict(m.rep.chart_map), dict(m.rep.lifts)
    if set(cm) != set(src.chart_ids()) or set(lifts) != set(src.chart_ids()):
        rep.fail("M2", "chart map / lifts not defined on every source chart")
        return rep
    for i, j in cm.items():
        try:
            tgt.chart(j)
        except KeyError:
            rep.fail("M2", f"chart map sends {i} to unknown chart {j}")
            return rep

    # (M2)/(M3): each lift carries its chart domain into the assigned target
    # chart domain
    for i, j in cm.items():
        L = lifts[i]
        dom_i, dom_j = src.chart(i).domain, tgt.chart(j).domain
        if L.dim != src.dim:
            rep.fail("M3", f"lift at {i} has wrong dimension")
            continue
        if L.is_invertible():
            if not dom_i.image(L).covers([dom_j]):
                rep.fail("M3", f"lift at {i} leaves the target chart",
                         dom_i.interior_point())
        else:
            for p in distinct_points(dom_i, 8):
                if not dom_j.contains_point(L(p)):
                    rep.fail("M3", f"lift at {i} leaves the target chart", p)
                    break

    scl = closure(src, bound)
    tcl = closure(tgt, bound)
    if not scl.complete or not tcl.complete:
        rep.note_undecided("pseudogroup closure incomplete; good-subset checks partial")

    # entry-level structural checks and certification
    for e in m.entries:
        i, ip = e.change.src, e.change.dst
        if e.nu.src != cm.get(i) or e.nu.dst != cm.get(ip):
            rep.fail("M5", f"assigned change lives over the wrong chart pair ({i},{ip})")
            continue
        if scl.covered(i, ip, e.change.map, e.change.dom) is False:
            rep.fail("M4", "entry change not certified by the source pseudogroup",
                     e.change.map)
        if tcl.covered(e.nu.src, e.nu.dst, e.nu.map, e.nu.dom) is False:
            rep.fail("M5", "assigned change not certified by the target pseudogroup",
                     e.nu.map)
        L, Lp = lifts[i], lifts[ip]
        # (M5c) exact equation of affine maps, by rigidity
        if Lp.compose(e.change.map) != e.nu.map.compose(L):
            w = e.change.dom.interior_point()
            rep.fail("M5c", "lift does not intertwine the change with its image", w)
        # (M5a)/(M5b) domain and codomain containments
        if L.is_invertible():
            if not _lift_image(m, i, e.change.dom).covers([e.nu.dom]):
                rep.fail("M5a", "image of the change domain escapes the assigned domain")
        if Lp.is_invertible():
            if not _lift_image(m, ip, e.change.cod).covers([e.nu.cod]):
                rep.fail("M5b", "image of the change codomain escapes the assigned codomain")

    # (M4): the entries reproduce every germ of the source pseudogroup
    for i, ip, mm, reg in scl.items():
        doms = [e.change.dom for e in m.rep.entries_at(i, ip) if e.change.map == mm]
        w = reg.covers_witness(doms)
        if w is not None:
            rep.fail("M4", f"pseudogroup germ not reproduced by the good subset "
                           f"({i}->{ip})", w)

    # (M5d): overlapping entries with equal germs get equal assigned germs
    for i, ip in {(e.change.src, e.change.dst) for e in m.entries}:
        es = m.rep.entries_at(i, ip)
        for e1, e2 in itertools.combinations(es, 2):
            if e1.change.map != e2.change.map or e1.nu.map == e2.nu.map:
                continue
            overlap = e1.change.dom.intersect(e2.change.dom)
            if not overlap.is_empty():
                rep.fail("M5d", "equal germs with different assigned germs",
                         overlap.interior_point())

    # (M5e): multiplicativity of the assignment on composable entries
    for e1 in m.entries:
        for e2 in m.entries:
            if e1.change.dst != e2.change.src:
                continue
            u = e1.change.dom.preimage_under(e1.change.map, e2.change.dom)
            if u.is_empty():
                continue
            m3 = e2.change.map.compose(e1.change.map)
            nu3 = e2.nu.map.compose(e1.nu.map)
            thirds = [e3 for e3 in m.rep.entries_at(e1.change.src, e2.change.dst)
                      if e3.change.map == m3]
            w = u.covers_witness([e3.change.dom for e3 in thirds])
            if w is not None:
                rep.fail("M5e", "composite germ not reproduced inside the good subset", w)
                continue
            for e3 in thirds:
                if e3.nu.map == nu3:
                    continue
                bad = e3.change.dom.intersect(u)
                if not bad.is_empty():
                    rep.fail("M5e", "assignment not multiplicative",
                             bad.interior_point())

    # (M5f): identity germs map to identity germs
    for e in m.entries:
        if e.change.src == e.change.dst and e.change.map.is_identity():
            if not e.nu.map.is_identity():
                rep.fail("M5f", "identity germ assigned a non-identity germ",
                         e.change.dom.interior_point())
    return rep


def equal_morphisms(a: Morphism, b: Morphism) -> bool:
    """Germ-agreement equality: same chart map and lifts, and wherever two
    entries carry the same germ the assigned germs coincide."""
    if a.source.key() != b.source.key() or a.target.key() != b.target.key():
        return False
    if a.rep.chart_map != b.rep.chart_map or a.rep.lifts != b.rep.lifts:
        return False
    for e1 in a.entries:
        for e2 in b.entries:
            if (e1.change.src, e1.change.dst) != (e2.change.src, e2.change.dst):
                continue
            if e1.change.map != e2.change.map or e1.nu.map == e2.nu.map:
                continue
            if not e1.change.dom.intersect(e2.change.dom).is_empty():
                return False
    return True


def identity_morphism(atlas: Atlas, bound: int = WORD_BOUND) -> Morphism:
    cl = closure(atlas, bound)
    entries = []
    for src, dst, m, reg in cl.items():
        ch = ChangeOfCharts(src, dst, PartialAffineIso(m, reg))
        entries.append(PEntry(ch, ch))
    return Morphism.make(
        atlas, atlas,
        {c.cid: c.cid for c in atlas.charts},
        {c.cid: AffineMap.identity(atlas.dim) for c in atlas.charts},
        entries, certificate=atlas)


def _mkey(m: Morphism):
    return (m.rep, None if m.certificate is None else m.certificate.key())


_compose_memo = {}


def compose_morphisms(g: Morphism, f: Morphism) -> Morphism:
    """Composite g after f.  Each entry of f is matched, by exact affine
    equality, against the entries of g covering its assigned change; the
    entry is restricted to the matched part and handed g's assignment."""
    memo_key = (_mkey(g), _mkey(f))
    hit = _compose_memo.get(memo_key)
    if hit is not None:
        return hit
    out = _compose_morphisms(g, f)
    _compose_memo[memo_key] = out
    return out


def _compose_morphisms(g: Morphism, f: Morphism) -> Morphism:
    if f.target.key() != g.source.key():
        raise ComposabilityError("target of the first factor is not the source of the second")
    cm = {i: g.chart_image(j) for i, j in f.rep.chart_map}
    lifts = {i: g.lift(f.chart_image(i)).compose(L) for i, L in f.rep.lifts}
    entries = []
    for e in f.entries:
        j, jp = e.nu.src, e.nu.dst
        matches = [eg for eg in g.rep.entries_at(j, jp) if eg.change.map == e.nu.map]
        covered = []
        Li = f.lift(e.change.src)
        for eg in matches:
            dom = e.change.dom.preimage_under(Li, eg.change.dom)
            if dom.is_empty():
                continue
            covered.append(dom)
            entries.append(PEntry(
                ChangeOfCharts(e.change.src, e.change.dst,
                               PartialAffineIso(e.change.map, dom)),
                eg.nu))
        if e.change.dom.covers_witness(covered) is not None:
            raise ComposabilityError(
                "good subset of the second factor does not reproduce an assigned germ")
    cert = None
    if f.certificate is not None and g.certificate is not None:
        cert = merge_atlases(f.certificate, g.certificate)
    return Morphism.make(f.source, g.target, cm, lifts, entries, certificate=cert)


def self_change_element(chart: Chart, ch: ChangeOfCharts) -> AffineMap:
    """The unique group element restricting to a change of charts from a
    chart to itself."""
    if ch.src != chart.cid or ch.dst != chart.cid:
        raise ValueError("change is not from the chart to itself")
    for g in chart.group:
        if g == ch.map:
            return g
    raise ValueError("no group element matches the change (invalid change of charts)")


def induced_hom(m: Morphism, cid: str) -> dict:
    """The group homomorphism induced on a chart's symmetry group: each
    element g goes to the unique target group element whose affine map is
    assigned to (any entry restricting) g."""
    src_chart = m.source.chart(cid)
    tgt_chart = m.target.chart(m.chart_image(cid))
    out = {}
    for g in src_chart.group:
        nus = {e.nu.map for e in m.rep.entries_at(cid, cid) if e.change.map == g}
        if len(nus) != 1:
            raise ValueError(f"assignment of {g} is not uniquely determined")
        nu = nus.pop()
        if nu not in set(tgt_chart.group):
            raise ValueError("assigned map is not a target group element")
        out[g] = nu
    # homomorphism property and the intertwining equation, exactly
    L = m.lift(cid)
    for g, h in itertools.product(src_chart.group, repeat=2):
        if out[g.compose(h)] != out[g].compose(out[h]):
            raise ValueError("induced assignment is not a homomorphism")
    for g in src_chart.group:
        if L.compose(g) != out[g].compose(L):
            raise ValueError("induced homomorphism does not intertwine the lift")
    return out


def morphism_from_lifts(source: Atlas, target: Atlas, chart_map, lifts,
                        bound: int = WORD_BOUND, certificate=None,
                        target_search: Atlas = None) -> Morphism:
    """The unique morphism with the given open-embedding lifts: the
    assignment is forced by conjugation through the lifts.  `target_search`,
    when given, is a larger atlas (containing the target's charts) whose
    pseudogroup is used to certify the forced assignments."""
    chart_map, lifts = dict(chart_map), dict(lifts)
    for i, L in lifts.items():
        if not L.is_invertible():
            raise ValueError(f"lift at {i} is not an open embedding")
    scl = closure(source, bound)
    tcl = closure(target_search if target_search is not None else target, bound)
    entries = []
    for i, ip, mm, reg in scl.items():
        j, jp = chart_map[i], chart_map[ip]
        nu_map = lifts[ip].compose(mm).compose(lifts[i].inverse())
        fam = tcl.region(j, jp, nu_map)
        img = reg.image(lifts[i])
        if fam is None or not img.covers([fam]):
            if not tcl.complete:
                raise UndecidedError(
                    f"target pseudogroup too small to certify the lift assignment "
                    f"({i}->{ip})")
            raise ValueError(
                f"lifts are not base-compatible: no target germ matches {i}->{ip}")
        entries.append(PEntry(
            ChangeOfCharts(i, ip, PartialAffineIso(mm, reg)),
            ChangeOfCharts(j, jp, PartialAffineIso(nu_map, fam))))
    return Morphism.make(source, target, chart_map, lifts, entries,
                         certificate=certificate)


def inclusion(sub: Atlas, amb: Atlas, bound: int = WORD_BOUND) -> Morphism:
    """Inclusion of an atlas into a larger one containing its charts."""
    for c in sub.charts:
        if amb.chart(c.cid).key() != c.key():
            raise ValueError(f"chart {c.cid} differs in the ambient atlas")
    return morphism_from_lifts(
        sub, amb,
        {c.cid: c.cid for c in sub.charts},
        {c.cid: AffineMap.identity(sub.dim) for c in sub.charts},
        bound, certificate=amb)


def pushforward(atlas: Atlas, h: AffineMap, bound: int = WORD_BOUND):
    """Transport an atlas along an invertible affine map of the ambient
    space; returns the transported atlas and the induced isomorphism."""
    if not h.is_invertible():
        raise ValueError("pushforward needs an invertible affine map")
    hinv = h.inverse()
    ren = {c.cid: f"{c.cid}@push" for c in atlas.charts}
    charts = [Chart.make(ren[c.cid], c.domain.image(h),
                         [h.compose(g).compose(hinv) for g in c.group])
              for c in atlas.charts]
    gens = [ChangeOfCharts.make(ren[g.src], ren[g.dst],
                                h.compose(g.map).compose(hinv), g.dom.image(h))
            for g in atlas.generators]
    new_atlas = Atlas.make(charts, gens)
    mor = morphism_from_lifts(
        atlas, new_atlas, ren, {c.cid: h for c in atlas.charts}, bound)
    return new_atlas, mor


# ---------------------------------------------------------------------------
# Classification: refinements, weak equivalences, open embeddings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    label: str           # refinement | weak_equivalence | open_embedding |
                         # general | undecided
    notes: tuple = ()
    witness: object = None

    def __str__(self):
        n = f" ({'; '.join(self.notes)})" if self.notes else ""
        return self.label + n


def _essentially_surjective(m: Morphism, fams: Pseudogroup, tgt: Atlas):
    """Three-valued: is every target orbit hit by a lifted source point?
    A found cover is sound at any bound; a miss needs a complete closure."""
    witness = None
    for jc in tgt.charts:
        parts = []
        for i, j in m.rep.chart_map:
            img = m.source.chart(i).domain.image(m.lift(i))
            for mm, reg in fams.maps(j, jc.cid).items():
                part = reg.intersect(img)
                if not part.is_empty():
                    parts.append(part.image(mm))
        w = jc.domain.covers_witness(parts)
        if w is not None:
            witness = (jc.cid, w)
            break
    if witness is None:
        return True, None
    if fams.complete:
        return False, witness
    return None, witness


def _fully_faithful(m: Morphism, yfams: Pseudogroup, xfams: Pseudogroup):
    """Three-valued: does every target germ between lifted points come from
    a source germ (so the induced coarse map is injective and the morphism
    reflects identifications)?"""
    some_undecided = False
    for i in m.source.chart_ids():
        for ip in m.source.chart_ids():
            j, jp = m.chart_image(i), m.chart_image(ip)
            Li, Lp = m.lift(i), m.lift(ip)
            for mm, dm in yfams.maps(j, jp).items():
                n = Lp.inverse().compose(mm).compose(Li)
                r = m.source.chart(i).domain.preimage_under(Li, dm)
                r = r.preimage_under(n, m.source.chart(ip).domain)
                if r.is_empty():
                    continue
                got = xfams.covered(i, ip, n, r)
                if got is True:
                    continue
                if got is None:
                    some_undecided = True
                    continue
                fam = xfams.region(i, ip, n)
                w = r.covers_witness([fam] if fam is not None else [])
                return False, (i, w)
    if not yfams.complete or some_undecided:
        return None, None
    return True, None


_classify_memo = {}


def classify_morphism(m: Morphism, bound: int = WORD_BOUND) -> Classification:
    """Strongest applicable class of a morphism.

    A morphism is a refinement when its lifts are open embeddings whose
    germs are certified by the pseudogroup of the declared joint structure
    (the morphism's certificate atlas, or the merge of source and target by
    shared chart ids) and the target orbits are exhausted; a weak
    equivalence when the induced coarse map is a certified bijection; an
    open embedding when it is a certified injection."""
    memo_key = (_mkey(m), bound)
    hit = _classify_memo.get(memo_key)
    if hit is not None:
        return hit
    out = _classify_morphism(m, bound)
    _classify_memo[memo_key] = out
    return out


def _classify_morphism(m: Morphism, bound: int) -> Classification:
    notes = []
    if not m.is_etale():
        return Classification("general", ("a lift is not an open embedding",))
    cert = m.certificate or merge_atlases(m.source, m.target)
    ident = False
    surj_cert = None
    if cert is not None:
        ccl = closure(cert, bound)
        ident = True
        for i, L in m.rep.lifts:
            got = ccl.covered(i, m.chart_image(i), L, m.source.chart(i).domain)
            if got is not True:
                ident = got  # False, or None when the bound ran out
                break
        if ident:
            surj_cert, _ = _essentially_surjective(m, ccl, m.target)
            if surj_cert is True:
                return Classification("refinement")
        if ident is None:
            notes.append("identity-base certification undecided at this bound")
    scl, tcl = closure(m.source, bound), closure(m.target, bound)
    full, wit_f = _fully_faithful(m, tcl, scl)
    surj, wit_s = _essentially_surjective(m, tcl, m.target)
    if full is True and surj is True:
        return Classification("weak_equivalence", tuple(notes))
    if full is True and surj is False:
        return Classification("open_embedding", tuple(notes), wit_s)
    if full is False:
        return Classification("general", tuple(notes), wit_f)
    notes.append("word bound exhausted before the coarse conditions were settled")
    return Classification("undecided", tuple(notes))


# ---------------------------------------------------------------------------
# 2-morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoCellRep:
    source_morphism: Morphism
    target_morphism: Morphism
    patches: tuple        # sorted (chart id, ((Region, ChangeOfCharts), ...))

    @staticmethod
    def make(src_m, dst_m, patches) -> "TwoCellRep":
        ps = tuple(sorted(
            (cid, tuple(sorted(items, key=lambda p: (p[0].key(), p[1].key()))))
            for cid, items in dict(patches).items()))
        return TwoCellRep(src_m, dst_m, ps)

    def at(self, cid):
        return dict(self.patches).get(cid, ())


def _normalize_patches(patches):
    out = {}
    for cid, items in dict(patches).items():
        merged = {}
        for region, ch in items:
            if region.is_empty():
                continue
            k = (ch.src, ch.dst, ch.map.key())
            if k in merged:
                r0, c0 = merged[k]
                merged[k] = (r0.union(region),
                             ChangeOfCharts(c0.src, c0.dst,
                                            PartialAffineIso(c0.map, c0.dom.union(ch.dom))))
            else:
                merged[k] = (region, ch)
        out[cid] = tuple(merged.values())
    return out


@dataclass(frozen=True)
class TwoCell:
    """A 2-morphism between parallel morphisms, as a normalized family of
    patches (region of the source chart, change of the target atlas)."""

    rep: TwoCellRep

    @staticmethod
    def make(src_m, dst_m, patches) -> "TwoCell":
        return TwoCell(TwoCellRep.make(src_m, dst_m, _normalize_patches(patches)))

    @property
    def source_morphism(self):
        return self.rep.source_morphism

    @property
    def target_morphism(self):
        return self.rep.target_morphism

    def patches_at(self, cid):
        return self.rep.at(cid)


def identity_2cell(f: Morphism) -> TwoCell:
    patches = {}
    for i, j in f.rep.chart_map:
        dom = f.target.chart(j).domain
        patches[i] = [(f.source.chart(i).domain,
                       ChangeOfCharts(j, j, PartialAffineIso(AffineMap.identity(f.source.dim), dom)))]
    return TwoCell.make(f, f, patches)


def invert_2cell(c: TwoCell) -> TwoCell:
    patches = {cid: [(r, ch.inverse()) for r, ch in items]
               for cid, items in c.rep.patches}
    return TwoCell.make(c.target_morphism, c.source_morphism, patches)


def validate_2cell(c: TwoCell, bound: int = WORD_BOUND) -> Report:
    rep = Report("2-cell")
    f1, f2 = c.source_morphism, c.target_morphism
    if f1.source.key() != f2.source.key() or f1.target.key() != f2.target.key():
        rep.fail("2M0", "morphisms are not parallel")
        return rep
    src, tgt = f1.source, f1.target
    tcl = closure(tgt, bound)
    for i in src.chart_ids():
        items = c.patches_at(i)
        j1, j2 = f1.chart_image(i), f2.chart_image(i)
        L1, L2 = f1.lift(i), f2.lift(i)
        # (2Ma) the patch regions cover the chart
        w = src.chart(i).domain.covers_witness([r for r, _ in items])
        if w is not None:
            rep.fail("2Ma", f"patches do not cover chart {i}", w)
        for region, ch in items:
            if ch.src != j1 or ch.dst != j2:
                rep.fail("2Mb", f"patch change over the wrong chart pair at {i}")
                continue
            if tcl.covered(ch.src, ch.dst, ch.map, ch.dom) is False:
                rep.fail("2Mb", "patch change not certified by the target pseudogroup",
                         ch.map)
            # (2Mb) image containments
            if L1.is_invertible() and not region.image(L1).covers([ch.dom]):
                rep.fail("2Mb", f"first lift image escapes the patch domain at {i}")
            if L2.is_invertible() and not region.image(L2).covers([ch.cod]):
                rep.fail("2Mb", f"second lift image escapes the patch codomain at {i}")
            # (2Mc) the patch change carries the first lift to the second
            if L2 != ch.map.compose(L1):
                w = _value_witness(region, L2, ch.map.compose(L1))
                rep.fail("2Mc", "patch change does not relate the two lifts", w)
        # (2Md) overlapping patches agree as germs
        for (r1, c1), (r2, c2) in itertools.combinations(items, 2):
            if c1.map != c2.map and not r1.intersect(r2).is_empty():
                rep.fail("2Md", "overlapping patches carry different germs",
                         r1.intersect(r2).interior_point())
    # (2Me) compatibility with every source germ; the germ equations are
    # map-level by rigidity, so overlap regions are only computed when an
    # equation actually fails somewhere
    scl = closure(src, bound)
    if not scl.complete:
        rep.note_undecided("source pseudogroup incomplete; (2Me) checked on the computed part")
    for i, ip, mm, reg in scl.items():
        e1s = [e for e in f1.rep.entries_at(i, ip) if e.change.map == mm]
        e2s = [e for e in f2.rep.entries_at(i, ip) if e.change.map == mm]
        for ra, cha in c.patches_at(i):
            for rap, chap in c.patches_at(ip):
                bad = [(e1, e2) for e1 in e1s for e2 in e2s
                       if e2.nu.map.compose(cha.map) != chap.map.compose(e1.nu.map)]
                if not bad:
                    continue
                w = reg.intersect(ra).preimage_under(mm, rap)
                if w.is_empty():
                    continue
                for e1, e2 in bad:
                    if e1.change.dom.intersect(w).is_empty():
                        continue
                    if e2.change.dom.intersect(w).is_empty():
                        continue
                    rep.fail("2Me", "patch germs do not intertwine the two assignments",
                             w.interior_point())
    return rep


def _value_witness(region: Region, m1: AffineMap, m2: AffineMap):
    """A rational point of the region where two unequal affine maps take
    different values (they may agree at symmetric points such as the
    centroid, so midpoints towards each vertex are probed next)."""
    c = region.interior_point()
    candidates = [c]
    for piece in region.pieces:
        for v in sorted(piece.vertices(), reverse=True):
            candidates.append(tuple((ci + vi) / 2 for ci, vi in zip(c, v)))
    for p in candidates:
        if region.contains_point(p) and m1(p) != m2(p):
            return p
    for p in distinct_points(region, 12):
        if m1(p) != m2(p):
            return p
    return c


def equal_2cells(a: TwoCell, b: TwoCell) -> bool:
    """Germ agreement on overlaps of patch regions."""
    for i in {cid for cid, _ in a.rep.patches} | {cid for cid, _ in b.rep.patches}:
        for r1, c1 in a.patches_at(i):
            for r2, c2 in b.patches_at(i):
                if c1.map != c2.map and not r1.intersect(r2).is_empty():
                    return False
    return True


def vertical_compose(sigma: TwoCell, delta: TwoCell) -> TwoCell:
    """sigma after delta (both between morphisms with the same endpoints)."""
    if not equal_morphisms(delta.target_morphism, sigma.source_morphism):
        raise ComposabilityError("2-cells not vertically composable")
    patches = {}
    for i in delta.source_morphism.source.chart_ids():
        out = []
        for r1, c1 in delta.patches_at(i):
            for r2, c2 in sigma.patches_at(i):
                r = r1.intersect(r2)
                if r.is_empty():
                    continue
                comp = compose_changes(c2, c1)
                if comp is None:
                    continue
                out.append((r, comp))
        patches[i] = out
    return TwoCell.make(delta.source_morphism, sigma.target_morphism, patches)


def horizontal_compose(xi: TwoCell, delta: TwoCell) -> TwoCell:
    """Composite of [xi] (between g1, g2) alongside [delta] (between f1,
    f2): a 2-cell g1 f1 => g2 f2.  Each patch germ of delta is pushed
    through the assignment of g1 and composed with a patch germ of xi; by
    rigidity the stabilizer-shrinking of the patch regions that the general
    construction needs is unnecessary here."""
    f1, f2 = delta.source_morphism, delta.target_morphism
    g1, g2 = xi.source_morphism, xi.target_morphism
    if f1.target.key() != g1.source.key():
        raise ComposabilityError("2-cells not horizontally composable")
    left = compose_morphisms(g1, f1)
    right = compose_morphisms(g2, f2)
    patches = {}
    for i in f1.source.chart_ids():
        j1, j2 = f1.chart_image(i), f2.chart_image(i)
        L1 = f1.lift(i)
        G1 = g1.lift(j1)
        out = []
        for ra, cha in delta.patches_at(i):
            for eg in g1.rep.entries_at(j1, j2):
                if eg.change.map != cha.map:
                    continue
                for sc, chc in xi.patches_at(j2):
                    gamma = compose_changes(chc, eg.nu)
                    if gamma is None:
                        continue
                    r = ra.preimage_under(L1, eg.change.dom)
                    r = r.preimage_under(G1.compose(L1), gamma.dom)
                    if r.is_empty():
                        continue
                    out.append((r, gamma))
        patches[i] = out
    return TwoCell.make(left, right, patches)


# ---------------------------------------------------------------------------
# Constructive squares: pullbacks along refinements
# ---------------------------------------------------------------------------

_square_memo = {}


def pullback_square(f: Morphism, w: Morphism, bound: int = WORD_BOUND):
    memo_key = (_mkey(f), _mkey(w), bound)
    hit = _square_memo.get(memo_key)
    if hit is not None:
        return hit
    out = _pullback_square(f, w, bound)
    _square_memo[memo_key] = out
    return out


def _pullback_square(f: Morphism, w: Morphism, bound: int = WORD_BOUND):
    """Fill the cospan f: C -> B <- A : w (with w a refinement and f with
    open-embedding lifts) to an invertible square

        D --f'--> A
        |w'       |w      with a 2-cell  f o w' => w o f'.
        C --f---> B

    The charts of D are the components, inside the charts of C, of the
    loci where a pseudogroup germ of B carries the f-image into the w-image
    of an A-chart; w' is the chart-wise inclusion (a refinement by
    construction) and f' transports through w."""
    C, B, A = f.source, f.target, w.source
    if w.target.key() != B.key():
        raise ComposabilityError("the two morphisms do not share their target")
    if not f.is_etale() or not w.is_etale():
        raise ValueError("pullback squares need open-embedding lifts")
    search = B
    for cand in (w.certificate, f.certificate):
        if cand is not None:
            merged = merge_atlases(search, cand)
            if merged is not None:
                search = merged
    bcl = closure(search, bound)
    # chart ids of the pullback are content-addressed so that middles of
    # different squares never collide when certificates are merged
    tok = hashlib.md5(repr((f.key(), w.key(), bound)).encode()).hexdigest()[:6]

    # gather candidates per parent chart, then keep a deterministic covering
    # subset: any choice of square is valid, and small middles keep the
    # certificate closures tractable
    per_parent = {}
    for c in C.charts:
        jc = f.chart_image(c.cid)
        Lc = f.lift(c.cid)
        seen = set()
        cands = []
        for a in A.charts:
            ja = w.chart_image(a.cid)
            img_a = a.domain.image(w.lift(a.cid))
            for mm, dom in sorted(bcl.maps(jc, ja).items(), key=lambda kv: kv[0].key()):
                r = c.domain.preimage_under(Lc, dom)
                r = r.preimage_under(mm.compose(Lc), img_a)
                for comp in r.components():
                    lift_fp = w.lift(a.cid).inverse().compose(mm).compose(Lc)
                    dk = (comp.key(), a.cid, lift_fp.key())
                    if dk in seen:
                        continue
                    seen.add(dk)
                    cands.append((c.cid, a.cid, mm, dom, lift_fp, comp))
        per_parent[c.cid] = cands

    charts, info = [], {}
    for c in C.charts:
        # identity germs first, then larger regions: keeps the chosen
        # squares as close to inclusions as the cospan allows
        cands = sorted(per_parent[c.cid],
                       key=lambda t: (0 if t[2].is_identity() else 1,
                                      -t[5].pieces[0].measure(), t[5].key(),
                                      t[4].key(), t[1]))
        kept, covered = [], []
        for cand in cands:
            if covered and c.domain.covers(covered):
                break
            comp = cand[5]
            if covered and comp.covers(covered):
                continue
            kept.append(cand)
            covered.append(comp)
        if not c.domain.covers(covered):
            raise ComposabilityError(
                f"the W-arrow does not reach every orbit over chart {c.cid}")
        for (cid, acid, mm, dom, lift_fp, comp) in kept:
            did = f"{cid}|{acid}|{tok}{len(charts)}"
            group = [g for g in c.group if comp.image(g).same_set(comp)]
            charts.append(Chart.make(did, comp, group))
            info[(cid, comp.key(), acid, lift_fp.key())] = (
                did, cid, acid, mm, dom, lift_fp, comp)

    gens = []
    ccl = closure(C, bound)
    by_id = {v[0]: v for v in info.values()}
    for d1, (did1, c1, _, _, _, _, r1) in sorted(by_id.items()):
        for d2, (did2, c2, _, _, _, _, r2) in sorted(by_id.items()):
            for mm, dom in ccl.maps(c1, c2).items():
                g = r1.intersect(dom).preimage_under(mm, r2)
                if g.is_empty():
                    continue
                gens.append(ChangeOfCharts(did1, did2, PartialAffineIso(mm, g)))
    D = Atlas.make(charts, gens)

    cert = Atlas.make(
        tuple(C.charts) + tuple(charts),
        tuple(C.generators) + tuple(gens)
        + tuple(ChangeOfCharts(did, c1, PartialAffineIso(AffineMap.identity(C.dim), r1))
                for did, c1, _, _, _, _, r1 in by_id.values()))
    w_prime = morphism_from_lifts(
        D, C, {did: v[1] for did, v in by_id.items()},
        {did: AffineMap.identity(C.dim) for did in by_id},
        bound, certificate=cert)
    f_prime = morphism_from_lifts(
        D, A, {did: v[2] for did, v in by_id.items()},
        {did: v[5] for did, v in by_id.items()},
        bound, certificate=merge_many(cert, search, A),
        target_search=merge_many(search, A) or A)

    patches = {}
    for did, (_, c1, a1, mm, dom, _, r1) in by_id.items():
        patches[did] = [(r1, ChangeOfCharts(f.chart_image(c1), w.chart_image(a1),
                                            PartialAffineIso(mm, dom)))]
    alpha = TwoCell.make(compose_morphisms(f, w_prime),
                         compose_morphisms(w, f_prime), patches)
    return D, w_prime, f_prime, alpha


def common_refinement(w1: Morphism, w2: Morphism, bound: int = WORD_BOUND):
    """Common refinement of two weak equivalences into the same atlas:
    an atlas U with morphisms v1, v2 such that w1 v1 and w2 v2 are joined by
    an invertible 2-cell and both composites refine."""
    return pullback_square(w1, w2, bound)


def cancel_refinement_cell(v: Morphism, x: Morphism, y: Morphism, cell: TwoCell,
                           bound: int = WORD_BOUND) -> TwoCell:
    """Given a refinement v: Y' -> Y, morphisms x, y: M -> Y' and a 2-cell
    (v x) => (v y), return the unique 2-cell x => y with i_v * it equal to
    the given cell."""
    if not v.is_etale():
        raise ValueError("cancellation needs open-embedding lifts on the refinement")
    tgt = x.target
    search = tgt
    for cand in (v.certificate, x.certificate, y.certificate):
        if cand is not None:
            merged = merge_atlases(search, cand)
            if merged is not None:
                search = merged
    tcl = closure(search, bound)
    patches = {}
    for i in x.source.chart_ids():
        j1, j2 = x.chart_image(i), y.chart_image(i)
        out = []
        for r, ch in cell.patches_at(i):
            d_map = v.lift(j2).inverse().compose(ch.map).compose(v.lift(j1))
            fam = tcl.region(j1, j2, d_map)
            img = r.image(x.lift(i)) if x.lift(i).is_invertible() else None
            if fam is None or (img is not None and not img.covers([fam])):
                if not tcl.complete:
                    raise UndecidedError(
                        f"cannot certify the cancelled germ at chart {i}")
                raise ValueError(f"no cancelled germ exists at chart {i}")
            out.append((r, ChangeOfCharts(j1, j2, PartialAffineIso(d_map, fam))))
        patches[i] = out
    return TwoCell.make(x, y, patches)


def validate(kind: str, payload, bound: int = WORD_BOUND, context=None) -> Report:
    """Dispatch over the validators.  `context` supplies the atlas a change
    of charts is checked against."""
    if kind == "chart":
        return validate_chart(payload)
    if kind == "change":
        if context is None:
            raise ValueError("validating a change of charts needs its atlas")
        return validate_change(context, payload)
    if kind == "atlas":
        return validate_atlas(payload, bound)
    if kind == "morphism":
        return validate_morphism(payload, bound)
    if kind == "2cell":
        return validate_2cell(payload, bound)
    raise ValueError(f"unknown kind {kind!r}")


def equal(kind: str, a, b) -> bool:
    if kind == "morphism":
        return equal_morphisms(a, b)
    if kind == "2cell":
        return equal_2cells(a, b)
    raise ValueError(f"unknown kind {kind!r}")


def compose_2cells(mode: str, beta: TwoCell, alpha: TwoCell) -> TwoCell:
    if mode == "vertical":
        return vertical_compose(beta, alpha)
    if mode == "horizontal":
        return horizontal_compose(beta, alpha)
    raise ValueError(f"unknown mode {mode!r}")


def structural(kind: str, *args, **kwargs):
    """Dispatch over the structural constructions: identity morphisms and
    2-cells, inclusions into extended atlases, transports along ambient
    affine embeddings."""
    if kind == "identity":
        return identity_morphism(*args, **kwargs)
    if kind == "two_identity":
        return identity_2cell(*args, **kwargs)
    if kind == "inclusion":
        return inclusion(*args, **kwargs)
    if kind == "pushforward":
        return pushforward(*args, **kwargs)
    raise ValueError(f"unknown kind {kind!r}")


_unique_2cell_memo = {}


def unique_2cell_open_embeddings(w1: Morphism, w2: Morphism,
                                 bound: int = WORD_BOUND) -> TwoCell:
    memo_key = (_mkey(w1), _mkey(w2), bound)
    hit = _unique_2cell_memo.get(memo_key)
    if hit is not None:
        return hit
    out = _unique_2cell_open_embeddings(w1, w2, bound)
    _unique_2cell_memo[memo_key] = out
    return out


def _unique_2cell_open_embeddings(w1: Morphism, w2: Morphism,
                                  bound: int = WORD_BOUND) -> TwoCell:
    """The unique 2-cell between two open embeddings with the same induced
    base map; the patch germ over each chart is forced to be the second lift
    after the inverse of the first."""
    if w1.source.key() != w2.source.key() or w1.target.key() != w2.target.key():
        raise ComposabilityError("morphisms are not parallel")
    if not (w1.is_etale() and w2.is_etale()):
        raise ValueError("both morphisms must have open-embedding lifts")
    tgt = w1.target
    search = tgt
    for cand in (w1.certificate, w2.certificate):
        if cand is not None:
            merged = merge_atlases(search, cand)
            if merged is not None:
                search = merged
    tcl = closure(search, bound)
    patches = {}
    for i in w1.source.chart_ids():
        d_map = w2.lift(i).compose(w1.lift(i).inverse())
        j1, j2 = w1.chart_image(i), w2.chart_image(i)
        img = w1.source.chart(i).domain.image(w1.lift(i))
        got = tcl.covered(j1, j2, d_map, img)
        if got is True:
            patches[i] = [(w1.source.chart(i).domain,
                           ChangeOfCharts(j1, j2,
                                          PartialAffineIso(d_map, tcl.region(j1, j2, d_map))))]
        elif got is None:
            raise UndecidedError(f"no certified connecting germ found at chart {i} "
                                 f"within the word bound")
        else:
            raise ValueError(f"the base maps differ: no 2-cell exists (chart {i})")
    return TwoCell.make(w1, w2, patches)
