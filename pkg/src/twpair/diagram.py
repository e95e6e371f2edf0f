"""Oriented link diagrams: PD-code parsing, built-in diagrams, Wirtinger data.

Arcs are labelled by positive integers.  A crossing records its over arc, the
incoming and outgoing under arcs and its sign.  At a crossing of sign ``e`` the
Wirtinger relation reads ``m_out = m_over^(-e) * m_in * m_over^(e)``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Crossing:
    over: int
    under_in: int
    under_out: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DiagramError(f"crossing sign must be +1 or -1, got {self.sign}")

    @property
    def source(self) -> int:
        """Under arc whose color is pushed through the over arc.

        The quandle relation is ``color(target) = color(source) ◁ color(over)``;
        for a positive crossing the source is the incoming under arc, for a
        negative one it is the outgoing under arc.
        """
        return self.under_in if self.sign > 0 else self.under_out

    @property
    def target(self) -> int:
        return self.under_out if self.sign > 0 else self.under_in


@dataclass(frozen=True)
class GroupWord:
    """Word in the arc generators: a tuple of ``(generator index, ±1)``."""

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for g, e in self.letters:
            if e not in (1, -1):
                raise ValueError(f"exponent must be ±1, got {e}")

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def reduced(self) -> "GroupWord":
        out: list[tuple[int, int]] = []
        for g, e in self.letters:
            if out and out[-1] == (g, -e):
                out.pop()
            else:
                out.append((g, e))
        return GroupWord(tuple(out))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    @classmethod
    def gen(cls, g: int, e: int = 1) -> "GroupWord":
        return cls(((g, e),))

    def evaluate(self, images: Sequence, inverses: Sequence, identity):
        """Multiply out the word given generator images and their inverses."""
        acc = identity
        for g, e in self.letters:
            acc = acc @ (images[g] if e > 0 else inverses[g])
        return acc

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"x{g + 1}" + ("" if e > 0 else "^-1") for g, e in self.letters)


@dataclass(frozen=True)
class WirtingerPresentation:
    generators: int
    relators: tuple[GroupWord, ...]


@dataclass(frozen=True)
class LinkDiagram:
    arcs: tuple[int, ...]
    crossings: tuple[Crossing, ...]
    components: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        _validate(self)

    # -- lookups ------------------------------------------------------------
    def arc_index(self, arc: int) -> int:
        return self._positions()[arc]

    def _positions(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.arcs)}

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    @property
    def n_components(self) -> int:
        return len(self.components)

    def component_of(self, arc: int) -> int:
        for k, comp in enumerate(self.components):
            if arc in comp:
                return k
        raise KeyError(arc)

    def base_arc(self, component: int) -> int:
        return min(self.components[component])

    def crossing_ending(self, arc: int) -> Crossing | None:
        """The crossing where ``arc`` passes under and terminates."""
        for c in self.crossings:
            if c.under_in == arc:
                return c
        return None

    def crossings_under(self, component: int) -> list[Crossing]:
        comp = set(self.components[component])
        return [c for c in self.crossings if c.under_in in comp]

    def path(self, component: int, start: int | None = None) -> list[tuple[int, Crossing]]:
        """Walk the component from ``start`` (default: base arc).

        Returns ``[(arc, crossing at its end), ...]`` once around the component.
        """
        start = self.base_arc(component) if start is None else start
        out = []
        arc = start
        while True:
            c = self.crossing_ending(arc)
            if c is None:
                return out
            out.append((arc, c))
            arc = c.under_out
            if arc == start:
                return out

    # -- serialisation ----------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "arcs": list(self.arcs),
            "crossings": [
                {"over": c.over, "under_in": c.under_in, "under_out": c.under_out, "sign": c.sign}
                for c in self.crossings
            ],
            "components": [list(c) for c in self.components],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> "LinkDiagram":
        try:
            crossings = tuple(Crossing(int(c["over"]), int(c["under_in"]), int(c["under_out"]), int(c["sign"]))
                              for c in data["crossings"])
            return cls(tuple(int(a) for a in data["arcs"]), crossings,
                       tuple(tuple(int(a) for a in comp) for comp in data["components"]), name)
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram document: {exc}") from exc


def _validate(d: LinkDiagram):
    arcs = set(d.arcs)
    if len(arcs) != len(d.arcs):
        raise DiagramError("duplicate arc labels")
    seen = [a for comp in d.components for a in comp]
    if sorted(seen) != sorted(d.arcs):
        raise DiagramError("components must partition the arcs")
    ends: dict[int, int] = {}
    starts: dict[int, int] = {}
    for c in d.crossings:
        for a in (c.over, c.under_in, c.under_out):
            if a not in arcs:
                raise DiagramError(f"crossing {c} references unknown arc {a}")
        if c.under_in in ends:
            raise DiagramError(f"arc {c.under_in} ends at two crossings")
        if c.under_out in starts:
            raise DiagramError(f"arc {c.under_out} starts at two crossings")
        ends[c.under_in] = c.under_out
        starts[c.under_out] = c.under_in
    for comp in d.components:
        under = [a for a in comp if a in ends]
        if not under:
            if len(comp) != 1:
                raise DiagramError(f"crossing-free component must be a single arc: {comp}")
            if comp[0] in starts:
                raise DiagramError(f"arc {comp[0]} starts at a crossing but never ends")
            continue
        if len(under) != len(comp):
            raise DiagramError(f"every arc of component {comp} must end at an under-crossing")
        # cyclic order: successor of comp[i] is comp[i+1]
        for i, a in enumerate(comp):
            if ends[a] != comp[(i + 1) % len(comp)]:
                raise DiagramError(f"component {comp} is not listed in orientation order")
        if len(comp) > 1 and any(ends[a] == a for a in comp):
            raise DiagramError("under-in equals under-out on a multi-arc component")


# ---------------------------------------------------------------------------
# Wirtinger data


def wirtinger(d: LinkDiagram) -> WirtingerPresentation:
    """One generator per arc, one relator ``m_out^-1 m_over^-e m_in m_over^e`` per crossing."""
    idx = d._positions()
    rels = []
    for c in d.crossings:
        o, i, j, e = idx[c.over], idx[c.under_in], idx[c.under_out], c.sign
        rels.append(GroupWord(((j, -1), (o, -e), (i, 1), (o, e))))
    return WirtingerPresentation(d.n_arcs, tuple(rels))


def meridian(d: LinkDiagram, component: int) -> GroupWord:
    return GroupWord.gen(d.arc_index(d.base_arc(component)))


def longitude(d: LinkDiagram, component: int) -> GroupWord:
    """Peripheral longitude read along the component from its base arc.

    The letters are the over-arc meridians of the crossings passed under, in
    order, each raised to the crossing sign.  No framing correction is applied.
    The resulting word commutes with the base-arc meridian in the link group.
    A crossing-free component has the empty word.
    """
    idx = d._positions()
    letters = [(idx[c.over], c.sign) for _, c in d.path(component)]
    return GroupWord(tuple(letters))


# ---------------------------------------------------------------------------
# PD codes

_TUPLE = re.compile(r"X\s*[\[(]\s*([^\])]*)[\])]")


def parse_pd(text: str, name: str = "") -> LinkDiagram:
    """Parse a planar-diagram code ``X(a,b,c,d) ...``.

    Edges at a crossing are listed counterclockwise starting from the incoming
    under edge, so the under strand runs ``a -> c``.  The crossing is positive
    when the over strand runs ``d -> b``.
    """
    stripped = text.strip()
    if not stripped:
        raise DiagramError("empty diagram")
    body = re.sub(r"^PD\s*[\[(]|[\])]\s*$", "", stripped) if stripped.startswith("PD") else stripped
    tuples = []
    pos = 0
    for m in _TUPLE.finditer(body):
        gap = body[pos:m.start()].strip(" ,;\n\t")
        if gap:
            raise DiagramError(f"malformed PD text near {gap!r}")
        pos = m.end()
        parts = [p.strip() for p in m.group(1).split(",")]
        if len(parts) != 4 or not all(p.isdigit() and int(p) > 0 for p in parts):
            raise DiagramError(f"malformed crossing tuple {m.group(0)!r}")
        tuples.append(tuple(int(p) for p in parts))
    if body[pos:].strip(" ,;\n\t"):
        raise DiagramError(f"malformed PD text near {body[pos:].strip()!r}")
    if not tuples:
        raise DiagramError("empty diagram")
    count: dict[int, int] = {}
    for t in tuples:
        for e in t:
            count[e] = count.get(e, 0) + 1
    bad = sorted(e for e, k in count.items() if k != 2)
    if bad:
        raise DiagramError(f"edge labels must appear exactly twice; offending: {bad}")

    succ: dict[int, int] = {}
    pred: dict[int, int] = {}

    def link(a, b):
        if a in succ or b in pred:
            raise DiagramError("non-orientable edge assignment")
        succ[a] = b
        pred[b] = a

    for a, b, c, d_ in tuples:
        link(a, c)
    pending = [(k, t[1], t[3]) for k, t in enumerate(tuples)]
    over_dir: dict[int, tuple[int, int]] = {}
    progress = True
    while pending and progress:
        progress = False
        rest = []
        for k, b, d_ in pending:
            forward_ok = b not in succ and d_ not in pred  # b -> d
            backward_ok = d_ not in succ and b not in pred  # d -> b
            if forward_ok and not backward_ok:
                link(b, d_)
                over_dir[k] = (b, d_)
                progress = True
            elif backward_ok and not forward_ok:
                link(d_, b)
                over_dir[k] = (d_, b)
                progress = True
            elif not forward_ok and not backward_ok:
                raise DiagramError("non-orientable edge assignment")
            else:
                rest.append((k, b, d_))
        pending = rest
        if pending and not progress:
            k, b, d_ = pending.pop(0)
            # label adjacency decides (consecutive labels run forward, else wrap)
            if d_ == b + 1 or (b > d_ + 1):
                link(b, d_)
                over_dir[k] = (b, d_)
            else:
                link(d_, b)
                over_dir[k] = (d_, b)
            progress = True
    edges = sorted(count)
    if any(e not in succ or e not in pred for e in edges):
        raise DiagramError("non-orientable edge assignment")

    under_in_edges = {t[0] for t in tuples}
    under_out_edges = {t[2] for t in tuples}
    # arcs: from an under-out edge follow successors until an under-in edge
    edge_arc: dict[int, int] = {}
    arc_edges: list[list[int]] = []
    for start in sorted(under_out_edges):
        chain = [start]
        e = start
        while e not in under_in_edges:
            e = succ[e]
            if e == start:
                raise DiagramError("inconsistent PD code")
            chain.append(e)
        arc_edges.append(chain)
    # crossing-free components cannot appear in PD codes with all edges used,
    # but a component made purely of over edges is an unknotted closed arc
    covered = {e for ch in arc_edges for e in ch}
    for e in edges:
        if e not in covered:
            chain = [e]
            f = succ[e]
            while f != e:
                chain.append(f)
                f = succ[f]
            covered.update(chain)
            arc_edges.append(chain)
    arc_edges.sort(key=min)
    for k, chain in enumerate(arc_edges, start=1):
        for e in chain:
            edge_arc[e] = k
    crossings = []
    for k, (a, b, c, d_) in enumerate(tuples):
        src, dst = over_dir[k]
        sign = 1 if (src, dst) == (d_, b) else -1
        crossings.append(Crossing(edge_arc[b], edge_arc[a], edge_arc[c], sign))
    # components in orientation order starting from the lowest arc
    ends = {c.under_in: c.under_out for c in crossings}
    remaining = set(range(1, len(arc_edges) + 1))
    comps = []
    while remaining:
        a0 = min(remaining)
        comp = [a0]
        a = ends.get(a0)
        while a is not None and a != a0:
            comp.append(a)
            a = ends[a]
        remaining.difference_update(comp)
        comps.append(tuple(comp))
    return LinkDiagram(tuple(range(1, len(arc_edges) + 1)), tuple(crossings), tuple(comps), name)


# ---------------------------------------------------------------------------
# built-in diagrams with the arc labels used in the reference figures


def _trefoil() -> LinkDiagram:
    cs = (Crossing(2, 3, 1, -1), Crossing(1, 2, 3, -1), Crossing(3, 1, 2, -1))
    return LinkDiagram((1, 2, 3), cs, ((1, 2, 3),), "trefoil")


def _figure8() -> LinkDiagram:
    cs = (Crossing(2, 3, 1, -1), Crossing(4, 2, 3, 1), Crossing(1, 4, 2, -1), Crossing(3, 1, 4, 1))
    return LinkDiagram((1, 2, 3, 4), cs, ((1, 4, 2, 3),), "figure8")


def _torus_mm(m: int) -> LinkDiagram:
    """Closed-braid diagram of T(m,m).

    Component ``l`` owns the long arc ``l`` (which passes over every other
    component) and ``m-2`` short arcs; it passes under the long arcs
    ``l+1, ..., l+m-1`` (indices mod m) in that order.
    """
    if m < 2:
        raise DiagramError("torus_mm needs m >= 2")
    arcs = list(range(1, m + 1))
    crossings = []
    comps = []
    nxt = m + 1
    for l in range(1, m + 1):
        chain = [l] + list(range(nxt, nxt + m - 2))
        nxt += m - 2
        arcs.extend(chain[1:])
        for k in range(m - 1):
            over = (l + k) % m + 1
            crossings.append(Crossing(over, chain[k], chain[(k + 1) % len(chain)], 1))
        comps.append(tuple(chain))
    return LinkDiagram(tuple(arcs), tuple(crossings), tuple(comps), f"torus_mm:{m}")


def _unknot() -> LinkDiagram:
    return LinkDiagram((1,), (), ((1,),), "unknot")


BUILTIN_NAMES = ("trefoil", "figure8", "hopf", "torus_mm", "unknot")


def builtin(name: str, params: Iterable[int] = ()) -> LinkDiagram:
    """Built-in diagrams: ``trefoil``, ``figure8``, ``hopf``, ``torus_mm`` (m >= 2), ``unknot``.

    ``name`` may carry the parameter inline, e.g. ``"torus_mm:3"``.
    """
    params = list(params)
    if ":" in name:
        name, arg = name.split(":", 1)
        params = [int(x) for x in arg.split(",")]
    if name == "trefoil":
        return _trefoil()
    if name in ("figure8", "figure_eight", "fig8"):
        return _figure8()
    if name == "hopf":
        d = _torus_mm(2)
        return LinkDiagram(d.arcs, d.crossings, d.components, "hopf")
    if name == "torus_mm":
        if not params:
            raise DiagramError("torus_mm needs a parameter m")
        return _torus_mm(int(params[0]))
    if name == "unknot":
        return _unknot()
    raise DiagramError(f"unknown built-in diagram {name!r}")
