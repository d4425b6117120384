"""Genome representation: a typed dataflow DAG shaped as a forest of subtrees
whose roots feed the master node's input slots.

Genomes are treated as immutable values: every editing primitive returns a
new genome and leaves the receiver untouched, so instances can be shared
freely across threads.  Node ids are monotonically assigned integers
rendered as strings; id "0" is always the master node.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Set, Tuple

from . import catalog
from .catalog import MASTER_KIND, PresetParam, UNLIT_SLOTS
from .errors import (
    CannotRemoveMaster,
    CyclicGraph,
    IncompatibleDimensions,
    InvalidGenome,
    TypeMismatch,
    UnknownNode,
    UnknownSlot,
    WouldCycle,
)

MASTER_ID = "0"


@dataclass(frozen=True)
class NodeInstance:
    id: str
    kind: str
    params: dict
    slot_defaults: dict  # one entry per input slot, at the slot's declared dimension
    layout: Optional[tuple] = None


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    message: str


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)
    orphans: List[str] = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def add(self, kind, subject, message):
        self.violations.append(Violation(kind, subject, message))


@dataclass(frozen=True)
class SlotSubtree:
    """Backward-reachable view behind one master input slot."""

    slot: str
    root: Optional[tuple]  # (node id, output slot) feeding the master slot
    node_ids: frozenset
    edges: tuple  # ((from id, from slot), (to id, to slot)) pairs, master edge included


def _default_params(spec, rng=None):
    params = {}
    for name in sorted(spec.params):
        p = spec.params[name]
        if isinstance(p, PresetParam):
            params[name] = p.default
        else:
            if rng is None:
                params[name] = tuple(p.default)
            else:
                params[name] = tuple(rng.uniform(p.lo, p.hi) for _ in range(p.dim))
    return params


def _default_slot_values(spec, rng=None):
    values = {}
    for slot in spec.inputs:
        if rng is None or not slot.randomizable or slot.lo is None:
            values[slot.name] = tuple(slot.default)
        else:
            values[slot.name] = tuple(rng.uniform(slot.lo, slot.hi) for _ in slot.default)
    return values


@dataclass
class Genome:
    nodes: Dict[str, NodeInstance]
    in_edges: Dict[Tuple[str, str], Tuple[str, str]]  # (to id, to slot) -> (from id, from slot)
    master_id: str
    lit: bool
    metadata: dict
    next_id: int

    # -- construction ------------------------------------------------------

    @classmethod
    def minimal(cls, lit=True, rng=None, metadata=None):
        """Master-only genome with catalog (or randomized) slot defaults."""
        spec = catalog.master_spec()
        master = NodeInstance(
            id=MASTER_ID,
            kind=MASTER_KIND,
            params={},
            slot_defaults=_default_slot_values(spec, rng),
        )
        meta = {"created_at": "", "generation": 0, "lineage": []}
        if metadata:
            meta.update(metadata)
        return cls(
            nodes={MASTER_ID: master},
            in_edges={},
            master_id=MASTER_ID,
            lit=lit,
            metadata=meta,
            next_id=1,
        )

    def copy(self, metadata=None):
        meta = dict(self.metadata)
        if metadata:
            meta.update(metadata)
        return Genome(
            nodes=dict(self.nodes),
            in_edges=dict(self.in_edges),
            master_id=self.master_id,
            lit=self.lit,
            metadata=meta,
            next_id=self.next_id,
        )

    # -- basic accessors ----------------------------------------------------

    @property
    def master(self):
        return self.nodes[self.master_id]

    def node(self, node_id):
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no node with id {node_id!r}") from None

    def sorted_ids(self):
        return sorted(self.nodes, key=int)

    def edge_list(self):
        """Edges in canonical order: by destination, then source."""
        items = [(frm, to) for to, frm in self.in_edges.items()]
        items.sort(key=lambda e: (int(e[1][0]), e[1][1], int(e[0][0]), e[0][1]))
        return items

    def source_of(self, node_id, slot):
        return self.in_edges.get((node_id, slot))

    def _forward_adjacency(self):
        adj: Dict[str, List[str]] = {nid: [] for nid in self.nodes}
        for (to_id, _), (from_id, _) in self.in_edges.items():
            adj[from_id].append(to_id)
        return adj

    def _backward_adjacency(self):
        adj: Dict[str, List[str]] = {nid: [] for nid in self.nodes}
        for (to_id, _), (from_id, _) in self.in_edges.items():
            adj[to_id].append(from_id)
        return adj

    # -- topology queries ----------------------------------------------------

    def topo_order(self):
        """Topological order with ties broken by ascending numeric node id."""
        indeg = {nid: 0 for nid in self.nodes}
        adj: Dict[str, List[str]] = {nid: [] for nid in self.nodes}
        for (to_id, _), (from_id, _) in self.in_edges.items():
            indeg[to_id] += 1
            adj[from_id].append(to_id)
        ready = [int(nid) for nid, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            nid = str(heapq.heappop(ready))
            order.append(nid)
            for succ in adj[nid]:
                indeg[succ] -= 1
                if indeg[succ] == 0:
                    heapq.heappush(ready, int(succ))
        if len(order) != len(self.nodes):
            raise CyclicGraph("genome graph contains a cycle")
        return order

    def _closure(self, start, adjacency):
        seen: Set[str] = set()
        stack = list(adjacency[start])
        while stack:
            nid = stack.pop()
            if nid in seen:
                continue
            seen.add(nid)
            stack.extend(adjacency[nid])
        seen.discard(start)
        return seen

    def upstream_set(self, node_id):
        """All nodes with a directed path into node_id (node_id excluded)."""
        self.node(node_id)
        return self._closure(node_id, self._backward_adjacency())

    def downstream_set(self, node_id):
        """All nodes reachable from node_id (node_id excluded)."""
        self.node(node_id)
        return self._closure(node_id, self._forward_adjacency())

    def subtree_for_slot(self, slot):
        spec = catalog.master_spec()
        if spec.input_slot(slot) is None:
            raise UnknownSlot(f"master has no slot {slot!r}")
        root = self.in_edges.get((self.master_id, slot))
        if root is None:
            return SlotSubtree(slot, None, frozenset(), ())
        root_id = root[0]
        members = self.upstream_set(root_id) | {root_id}
        edges = [
            (frm, to)
            for to, frm in self.in_edges.items()
            if to[0] in members and frm[0] in members
        ]
        edges.append((root, (self.master_id, slot)))
        edges.sort(key=lambda e: (int(e[1][0]), e[1][1], int(e[0][0]), e[0][1]))
        return SlotSubtree(slot, root, frozenset(members), tuple(edges))

    # -- type resolution ------------------------------------------------------

    def resolve_types(self):
        """Per-node resolved slot dimensions; requires an acyclic, well-typed graph."""
        dims: Dict[str, Dict[str, int]] = {}
        for nid in self.topo_order():
            node = self.nodes[nid]
            spec = catalog.lookup(node.kind)
            input_dims = []
            for slot in spec.inputs:
                src = self.in_edges.get((nid, slot.name))
                if src is None:
                    input_dims.append(len(node.slot_defaults[slot.name]))
                else:
                    input_dims.append(dims[src[0]][src[1]])
            dims[nid] = catalog.resolve_dynamic(spec, input_dims)
        return dims

    # -- validation ------------------------------------------------------------

    def validate(self):
        report = ValidationReport()
        self._check_master(report)
        self._check_nodes(report)
        self._check_edges(report)
        acyclic = self._check_cycles(report)
        if acyclic:
            self._check_types(report)
            report.orphans = self._orphans()
        return report

    def _check_master(self, report):
        masters = [nid for nid, n in self.nodes.items() if n.kind == MASTER_KIND]
        if masters != [self.master_id]:
            report.add("master", ",".join(sorted(masters, key=int) or ["-"]),
                       "genome must contain exactly one master node")
        if self.lit:
            return
        legal = set(UNLIT_SLOTS)
        for (to_id, to_slot) in sorted(self.in_edges, key=lambda k: (int(k[0]), k[1])):
            if to_id == self.master_id and to_slot not in legal:
                report.add("unlit_slot", to_slot,
                           f"unlit genome may not drive master slot {to_slot}")

    def _check_nodes(self, report):
        for nid in self.sorted_ids():
            node = self.nodes[nid]
            try:
                spec = catalog.lookup(node.kind)
            except Exception:
                report.add("unknown_kind", nid, f"unknown node kind {node.kind!r}")
                continue
            for name in sorted(spec.params):
                p = spec.params[name]
                value = node.params.get(name)
                if isinstance(p, PresetParam):
                    if value not in p.choices:
                        report.add("bad_param", f"{nid}.{name}", f"preset {value!r} not in choices")
                else:
                    if value is None or len(value) != p.dim:
                        report.add("bad_param", f"{nid}.{name}", "numeric param has wrong dimension")
                    elif not all(p.lo <= x <= p.hi for x in value):
                        report.add("bad_param", f"{nid}.{name}", "numeric param out of range")
            for name in node.params:
                if name not in spec.params:
                    report.add("bad_param", f"{nid}.{name}", "param not declared by catalog")
            for slot in spec.inputs:
                value = node.slot_defaults.get(slot.name)
                if value is None or len(value) != len(slot.default):
                    report.add("bad_default", f"{nid}.{slot.name}", "slot default has wrong dimension")
                    continue
                if slot.randomizable and slot.lo is not None:
                    if not all(slot.lo <= x <= slot.hi for x in value):
                        report.add("bad_default", f"{nid}.{slot.name}", "slot default out of range")
            for name in node.slot_defaults:
                if spec.input_slot(name) is None:
                    report.add("bad_default", f"{nid}.{name}", "default for unknown input slot")

    def _check_edges(self, report):
        for to, frm in sorted(self.in_edges.items(), key=lambda kv: (int(kv[0][0]), kv[0][1])):
            to_id, to_slot = to
            from_id, from_slot = frm
            subject = f"{from_id}.{from_slot}->{to_id}.{to_slot}"
            if to_id not in self.nodes or from_id not in self.nodes:
                report.add("bad_edge", subject, "edge references a missing node")
                continue
            to_spec = catalog.lookup(self.nodes[to_id].kind)
            from_spec = catalog.lookup(self.nodes[from_id].kind)
            if to_spec.input_slot(to_slot) is None:
                report.add("bad_edge", subject, f"{to_id} has no input slot {to_slot!r}")
            if from_spec.output_slot(from_slot) is None:
                report.add("bad_edge", subject, f"{from_id} has no output slot {from_slot!r}")

    def _check_cycles(self, report):
        try:
            self.topo_order()
            return True
        except CyclicGraph:
            report.add("cycle", "-", "genome graph contains a cycle")
            return False

    def _check_types(self, report):
        try:
            self.resolve_types()
        except IncompatibleDimensions as exc:
            report.add("type", "-", str(exc))
        except UnknownSlot:
            pass  # already reported as bad_edge

    def _orphans(self):
        reachable = self.upstream_set(self.master_id)
        return sorted(
            (nid for nid in self.nodes if nid != self.master_id and nid not in reachable),
            key=int,
        )

    # -- editing primitives ------------------------------------------------------

    def add_node(self, kind, params=None, slot_defaults=None, layout=None, rng=None):
        spec = catalog.lookup(kind)
        if spec.category == "master":
            raise ValueError("genomes contain exactly one master node")
        node_params = _default_params(spec, rng)
        if params:
            node_params.update(params)
        defaults = _default_slot_values(spec, rng)
        if slot_defaults:
            defaults.update({k: tuple(v) for k, v in slot_defaults.items()})
        g = self.copy()
        nid = str(g.next_id)
        g.next_id += 1
        g.nodes[nid] = NodeInstance(nid, kind, node_params, defaults, layout)
        return g, nid

    def connect(self, frm, to):
        from_id, from_slot = frm
        to_id, to_slot = to
        from_spec = catalog.lookup(self.node(from_id).kind)
        to_spec = catalog.lookup(self.node(to_id).kind)
        if from_spec.output_slot(from_slot) is None:
            raise UnknownSlot(f"{self.nodes[from_id].kind} has no output slot {from_slot!r}")
        if to_spec.input_slot(to_slot) is None:
            raise UnknownSlot(f"{self.nodes[to_id].kind} has no input slot {to_slot!r}")
        if not self.lit and to_id == self.master_id and to_slot not in UNLIT_SLOTS:
            raise TypeMismatch(f"unlit genome may not drive master slot {to_slot}")
        if from_id == to_id or from_id in self.downstream_set(to_id):
            raise WouldCycle(f"edge {from_id}->{to_id} would create a cycle")
        g = self.copy()
        replaced = g.in_edges.get((to_id, to_slot))
        g.in_edges[(to_id, to_slot)] = (from_id, from_slot)
        try:
            g.resolve_types()
        except IncompatibleDimensions as exc:
            raise TypeMismatch(str(exc)) from None
        if replaced is not None:
            g = g.normalize()
        return g

    def disconnect(self, to):
        to_id, to_slot = to
        if (to_id, to_slot) not in self.in_edges:
            self.node(to_id)
            raise UnknownSlot(f"no edge into {to_id}.{to_slot}")
        g = self.copy()
        del g.in_edges[(to_id, to_slot)]
        return g

    def remove_node(self, node_id):
        self.node(node_id)
        if node_id == self.master_id:
            raise CannotRemoveMaster("the master node cannot be removed")
        g = self.copy()
        del g.nodes[node_id]
        g.in_edges = {
            to: frm
            for to, frm in g.in_edges.items()
            if to[0] != node_id and frm[0] != node_id
        }
        return g.normalize()

    def set_param(self, node_id, name, value):
        node = self.node(node_id)
        spec = catalog.lookup(node.kind)
        p = spec.params.get(name)
        if p is None:
            raise UnknownSlot(f"{node.kind} has no param {name!r}")
        if isinstance(p, PresetParam):
            if value not in p.choices:
                raise ValueError(f"preset {value!r} not a member of {node.kind}.{name}")
        else:
            value = tuple(float(x) for x in value)
            if len(value) != p.dim or not all(p.lo <= x <= p.hi for x in value):
                raise ValueError(f"value {value} outside {node.kind}.{name} range")
        g = self.copy()
        params = dict(node.params)
        params[name] = value
        g.nodes[node_id] = replace(node, params=params)
        return g

    def set_slot_default(self, node_id, slot, value):
        node = self.node(node_id)
        spec = catalog.lookup(node.kind)
        s = spec.input_slot(slot)
        if s is None:
            raise UnknownSlot(f"{node.kind} has no input slot {slot!r}")
        value = tuple(float(x) for x in value)
        if len(value) != len(s.default):
            raise ValueError(f"default for {node.kind}.{slot} must have dim {len(s.default)}")
        if s.randomizable and s.lo is not None and not all(s.lo <= x <= s.hi for x in value):
            raise ValueError(f"default {value} outside {node.kind}.{slot} range")
        g = self.copy()
        defaults = dict(node.slot_defaults)
        defaults[slot] = value
        g.nodes[node_id] = replace(node, slot_defaults=defaults)
        return g

    def normalize(self):
        """Drop nodes with no path to the master; idempotent."""
        keep = self.upstream_set(self.master_id)
        keep.add(self.master_id)
        if len(keep) == len(self.nodes):
            return self
        g = self.copy()
        g.nodes = {nid: n for nid, n in g.nodes.items() if nid in keep}
        g.in_edges = {
            to: frm
            for to, frm in g.in_edges.items()
            if to[0] in keep and frm[0] in keep
        }
        return g

    def replace_slot_subtree(self, slot, donor):
        """Replace this genome's subtree behind a master slot with a copy of
        the donor genome's subtree behind the same slot.

        Donor node ids are preserved when free in the host and remapped to
        fresh ids on collision.  The donor's master-slot default travels with
        the subtree so an empty donor slot reverts the host slot to the
        donor's value.
        """
        spec = catalog.master_spec()
        if spec.input_slot(slot) is None:
            raise UnknownSlot(f"master has no slot {slot!r}")
        g = self.copy()
        if (g.master_id, slot) in g.in_edges:
            del g.in_edges[(g.master_id, slot)]
        g = g.normalize()

        master_defaults = dict(g.master.slot_defaults)
        master_defaults[slot] = tuple(donor.master.slot_defaults[slot])
        g.nodes[g.master_id] = replace(g.master, slot_defaults=master_defaults)

        sub = donor.subtree_for_slot(slot)
        if sub.root is None:
            return g
        next_id = max(g.next_id, max((int(n) for n in g.nodes), default=0) + 1)
        id_map = {}
        for donor_id in sorted(sub.node_ids, key=int):
            if donor_id not in g.nodes and donor_id not in id_map.values():
                id_map[donor_id] = donor_id
                next_id = max(next_id, int(donor_id) + 1)
            else:
                id_map[donor_id] = str(next_id)
                next_id += 1
        for donor_id in sorted(sub.node_ids, key=int):
            node = donor.nodes[donor_id]
            new_id = id_map[donor_id]
            g.nodes[new_id] = replace(node, id=new_id,
                                      params=dict(node.params),
                                      slot_defaults=dict(node.slot_defaults))
        for (frm, to) in sub.edges:
            if to[0] == donor.master_id:
                g.in_edges[(g.master_id, slot)] = (id_map[frm[0]], frm[1])
            else:
                g.in_edges[(id_map[to[0]], to[1])] = (id_map[frm[0]], frm[1])
        g.next_id = next_id
        return g

    # -- comparison helpers ---------------------------------------------------

    def structurally_equal(self, other, include_metadata=True):
        if self.lit != other.lit or self.master_id != other.master_id:
            return False
        if self.nodes != other.nodes or self.in_edges != other.in_edges:
            return False
        if include_metadata and self.metadata != other.metadata:
            return False
        return True


def ensure_valid(genome):
    report = genome.validate()
    if not report.ok:
        details = "; ".join(f"{v.kind}@{v.subject}: {v.message}" for v in report.violations[:8])
        raise InvalidGenome(f"genome does not validate: {details}")
    return report
