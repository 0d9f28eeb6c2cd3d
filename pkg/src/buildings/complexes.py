"""Chamber systems labelled by a Weyl group, and the spherical building test.

Both the residue at a point and the building at infinity are presented the
same way: a set of hashable chamber keys, the panel of each type on every
chamber, and apartments given as ``w -> chamber`` labellings.
"""
from __future__ import annotations

from collections import deque
from itertools import combinations

from .reports import CheckReport


class ChamberSystem:
    def __init__(self, phi, chambers, panels: dict, apartments: dict):
        """``panels[c]`` is a tuple of panel keys indexed by simple-root type;
        ``apartments[name]`` a tuple of chambers indexed by Weyl element."""
        self.phi = phi
        self.chambers = sorted(set(chambers))
        self.panels = panels
        self.apartments = dict(sorted(apartments.items()))
        by_panel = {}
        for c in self.chambers:
            for p in panels[c]:
                by_panel.setdefault(p, []).append(c)
        self.by_panel = by_panel
        adj = {c: set() for c in self.chambers}
        for cs in by_panel.values():
            for a, b in combinations(cs, 2):
                adj[a].add(b)
                adj[b].add(a)
        self.adjacent = {c: sorted(v) for c, v in adj.items()}
        self._dist = {}

    def distances_from(self, c):
        d = self._dist.get(c)
        if d is None:
            d = {c: 0}
            queue = deque([c])
            while queue:
                u = queue.popleft()
                for v in self.adjacent[u]:
                    if v not in d:
                        d[v] = d[u] + 1
                        queue.append(v)
            self._dist[c] = d
        return d

    def distance(self, a, b):
        """Gallery distance; None if not connected."""
        return self.distances_from(a).get(b)

    def apartments_containing(self, *chambers):
        return [name for name, labels in self.apartments.items() if all(c in labels for c in chambers)]

    def check_building(self, name="building") -> CheckReport:
        """Spherical building test with replayable witnesses.

        * every apartment is a thin copy of the Coxeter complex;
        * any two chambers lie in a common apartment;
        * two apartments sharing a chamber are related by the type preserving
          isomorphism fixing that chamber, and it fixes the whole intersection;
        * gallery distance inside an apartment is the Coxeter length.
        """
        phi = self.phi
        rep = CheckReport(name)
        rep.stats["chambers"] = len(self.chambers)
        rep.stats["apartments"] = len(self.apartments)
        simple = phi._simple_index
        members = {}
        for a, labels in self.apartments.items():
            if len(set(labels)) != phi.order:
                return rep.fail({"kind": "apartment_not_injective", "apartment": str(a)},
                                "apartment labelling repeats a chamber")
            members[a] = {c: w for w, c in enumerate(labels)}
            for w, c in enumerate(labels):
                for j, s in enumerate(simple):
                    d = labels[phi.mul[w][s]]
                    if self.panels[c][j] != self.panels[d][j]:
                        return rep.fail({"kind": "apartment_panel", "apartment": str(a), "w": w, "type": j},
                                        "s-adjacent labels do not share a panel")
                    inside = [x for x in self.by_panel[self.panels[c][j]] if x in members[a]]
                    if len(inside) != 2:
                        return rep.fail({"kind": "apartment_thin", "apartment": str(a), "w": w, "type": j},
                                        "panel does not have exactly two chambers in the apartment")
            for w in range(phi.order):
                dist = self.distances_from(labels[w])
                for v in range(phi.order):
                    if dist.get(labels[v]) != phi.length(phi.mul[phi.inverse[w]][v]):
                        return rep.fail({"kind": "apartment_distance", "apartment": str(a), "w": w, "v": v},
                                        "gallery distance differs from the Coxeter length")
        rep.count("apartment_checks", len(self.apartments))
        # any two chambers in a common apartment
        cover = set()
        for m in members.values():
            cs = sorted(m)
            cover.update(combinations(cs, 2))
        for a, b in combinations(self.chambers, 2):
            rep.count("chamber_pairs")
            if (a, b) not in cover:
                return rep.fail({"kind": "no_common_apartment", "chambers": [str(a), str(b)]},
                                "two chambers lie in no common apartment")
        # isomorphisms fixing intersections
        names = list(self.apartments)
        for a, b in combinations(names, 2):
            common = [c for c in members[a] if c in members[b]]
            if not common:
                continue
            rep.count("apartment_pairs")
            c0 = min(common)
            w0, v0 = members[a][c0], members[b][c0]
            shift = phi.mul[v0][phi.inverse[w0]]
            for c in common:
                if members[b][c] != phi.mul[shift][members[a][c]]:
                    return rep.fail({"kind": "intersection_not_fixed", "apartments": [str(a), str(b)],
                                     "chamber": str(c)},
                                    "isomorphism fixing one common chamber moves another")
        return rep
