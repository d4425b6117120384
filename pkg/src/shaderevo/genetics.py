"""Feasibility-preserving variation operators.

All operators are pure functions over immutable genomes plus an explicit
random stream; every operator either returns a genome that validates or
reports itself inapplicable.  Operators that draw targets which fail type
checks retry a bounded number of times, so termination is unconditional.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import List, Optional

from . import catalog
from .catalog import NOISE_KINDS, NumericParam, PresetParam, UNLIT_SLOTS
from .errors import NoCompatibleSlot, TypeMismatch, WouldCycle
from .graph import Genome, ensure_valid

MAX_RETRIES = 16
MAX_SUBTREE_DEPTH = 3
HIGH_FOCUS_PROBABILITY = 0.75  # High strength targets BaseColor/NormalTS regions
RANDOM_GENOME_EXPAND_BIAS = 0.6
FOCUS_SLOTS = ("BaseColor", "NormalTS")


class MutationStrength(enum.IntEnum):
    LOW = 0
    MEDIUM = 1
    HIGH = 2

    @classmethod
    def from_name(cls, name):
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown mutation strength {name!r}") from None

    @property
    def label(self):
        return self.name.lower()


# fraction of a parameter's range used as jitter sigma, per strength
JITTER_SIGMA = {
    MutationStrength.LOW: 0.05,
    MutationStrength.MEDIUM: 0.15,
    MutationStrength.HIGH: 0.40,
}

OPERATOR_ORDER = ("param_jitter", "preset_swap", "swap_noise_map", "expand_subtree")

DEFAULT_WEIGHTS = {
    MutationStrength.LOW: {
        "param_jitter": 0.7, "preset_swap": 0.3,
        "swap_noise_map": 0.0, "expand_subtree": 0.0,
    },
    MutationStrength.MEDIUM: {
        "param_jitter": 0.35, "preset_swap": 0.25,
        "swap_noise_map": 0.2, "expand_subtree": 0.2,
    },
    MutationStrength.HIGH: {
        "param_jitter": 0.15, "preset_swap": 0.15,
        "swap_noise_map": 0.3, "expand_subtree": 0.4,
    },
}


@dataclass
class MutationConfig:
    strength: MutationStrength = MutationStrength.MEDIUM
    mutation_count: int = 2
    expansion_enabled: bool = True
    expansion_probability: float = 1.0
    weights: Optional[dict] = None  # {MutationStrength: {op name: weight}}

    def validate(self):
        if self.mutation_count < 1:
            raise ValueError("mutation_count must be a positive integer")
        if not 0.0 <= self.expansion_probability <= 1.0:
            raise ValueError("expansion_probability must lie in [0, 1]")

    def to_doc(self):
        doc = {
            "strength": self.strength.label,
            "mutation_count": self.mutation_count,
            "expansion_enabled": self.expansion_enabled,
            "expansion_probability": self.expansion_probability,
        }
        if self.weights is not None:
            doc["weights"] = {
                s.label: dict(table) for s, table in sorted(self.weights.items())
            }
        return doc

    @classmethod
    def from_doc(cls, doc):
        weights = None
        if "weights" in doc and doc["weights"] is not None:
            weights = {}
            for name, table in doc["weights"].items():
                strength = MutationStrength.from_name(name)
                unknown = set(table) - set(OPERATOR_ORDER)
                if unknown:
                    raise ValueError(f"unknown operator weights: {sorted(unknown)}")
                weights[strength] = {op: float(table.get(op, 0.0)) for op in OPERATOR_ORDER}
        cfg = cls(
            strength=MutationStrength.from_name(doc.get("strength", "medium")),
            mutation_count=int(doc.get("mutation_count", 2)),
            expansion_enabled=bool(doc.get("expansion_enabled", True)),
            expansion_probability=float(doc.get("expansion_probability", 1.0)),
            weights=weights,
        )
        cfg.validate()
        return cfg


@dataclass
class OpResult:
    genome: Genome
    change: Optional[dict]  # None when the operator was inapplicable


@dataclass
class MutationResult:
    genome: Genome
    changes: List[dict] = field(default_factory=list)


def focus_region(genome):
    """Node ids upstream of the BaseColor or NormalTS master slots."""
    ids = set()
    for slot in FOCUS_SLOTS:
        src = genome.in_edges.get((genome.master_id, slot))
        if src is not None:
            ids.add(src[0])
            ids.update(genome.upstream_set(src[0]))
    return ids


def _weighted_choice(rng, table):
    total = sum(w for w in table.values() if w > 0)
    if total <= 0:
        return None
    r = rng.random() * total
    acc = 0.0
    for name in OPERATOR_ORDER:
        w = table.get(name, 0.0)
        if w <= 0:
            continue
        acc += w
        if r < acc:
            return name
    return name


# ---------------------------------------------------------------------------
# param_jitter

def _jitter_candidates(genome):
    items = []
    for nid in genome.sorted_ids():
        node = genome.nodes[nid]
        spec = catalog.lookup(node.kind)
        for name in sorted(spec.params):
            p = spec.params[name]
            if isinstance(p, NumericParam):
                items.append(("param", nid, name, p.lo, p.hi))
        for slot in spec.inputs:
            if not slot.randomizable or slot.lo is None:
                continue
            if (nid, slot.name) in genome.in_edges:
                continue
            items.append(("slot", nid, slot.name, slot.lo, slot.hi))
    return items


def _in_focus(genome, region, nid, target_name):
    if nid == genome.master_id:
        return target_name in FOCUS_SLOTS
    return nid in region


def param_jitter(genome, strength, rng):
    """Perturb one numeric param or unconnected slot default by Gaussian noise
    with sigma proportional to the target's range, clamped back into range."""
    candidates = _jitter_candidates(genome)
    if not candidates:
        return OpResult(genome, None)
    if strength is MutationStrength.HIGH and rng.random() < HIGH_FOCUS_PROBABILITY:
        region = focus_region(genome)
        focused = [c for c in candidates if _in_focus(genome, region, c[1], c[2])]
        if focused:
            candidates = focused
    sigma_frac = JITTER_SIGMA[strength]
    for _ in range(MAX_RETRIES):
        kind, nid, name, lo, hi = candidates[rng.randrange(len(candidates))]
        node = genome.nodes[nid]
        old = node.params[name] if kind == "param" else node.slot_defaults[name]
        sigma = sigma_frac * (hi - lo)
        new = tuple(min(max(x + rng.gauss(0.0, sigma), lo), hi) for x in old)
        if new == old:
            continue
        if kind == "param":
            g = genome.set_param(nid, name, new)
        else:
            g = genome.set_slot_default(nid, name, new)
        return OpResult(g, {"op": "param_jitter", "node": nid, "target": name})
    return OpResult(genome, None)


# ---------------------------------------------------------------------------
# preset_swap

def preset_swap(genome, rng):
    """Replace one enumerated preset with a different member, uniformly."""
    candidates = []
    for nid in genome.sorted_ids():
        node = genome.nodes[nid]
        spec = catalog.lookup(node.kind)
        for name in sorted(spec.params):
            p = spec.params[name]
            if isinstance(p, PresetParam) and len(p.choices) > 1:
                candidates.append((nid, name, p.choices))
    if not candidates:
        return OpResult(genome, None)
    nid, name, choices = candidates[rng.randrange(len(candidates))]
    current = genome.nodes[nid].params[name]
    others = [c for c in choices if c != current]
    new = others[rng.randrange(len(others))]
    g = genome.set_param(nid, name, new)
    return OpResult(g, {"op": "preset_swap", "node": nid, "target": name,
                        "from": current, "to": new})


# ---------------------------------------------------------------------------
# swap_noise_map

def _density_slot(kind):
    return "CellDensity" if kind == "Voronoi" else "Scale"


def noise_groups(genome):
    """Partition noise nodes into semantically linked groups.

    Two noise nodes are linked iff they share a kind and their forward
    closures intersect before the master node; groups are the transitive
    closure of that relation.
    """
    noise_ids = [nid for nid in genome.sorted_ids()
                 if catalog.lookup(genome.nodes[nid].kind).category == "noise"]
    down = {nid: genome.downstream_set(nid) - {genome.master_id} for nid in noise_ids}
    parent = {nid: nid for nid in noise_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in enumerate(noise_ids):
        for b in noise_ids[i + 1:]:
            if genome.nodes[a].kind != genome.nodes[b].kind:
                continue
            if down[a] & down[b]:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
    groups = {}
    for nid in noise_ids:
        groups.setdefault(find(nid), []).append(nid)
    return sorted(groups.values(), key=lambda g: int(g[0]))


def _linear_range_map(value, from_slot, to_slot):
    if from_slot.hi == from_slot.lo:
        return to_slot.lo
    t = (value - from_slot.lo) / (from_slot.hi - from_slot.lo)
    return to_slot.lo + t * (to_slot.hi - to_slot.lo)


def swap_noise_map(genome, rng):
    """Rewrite every member of one linked noise group to a single different
    noise kind, remapping the density parameter linearly between ranges."""
    groups = noise_groups(genome)
    if not groups:
        return OpResult(genome, None)
    group = groups[rng.randrange(len(groups))]
    old_kind = genome.nodes[group[0]].kind
    alternatives = [k for k in NOISE_KINDS if k != old_kind]
    new_kind = alternatives[rng.randrange(len(alternatives))]
    old_spec = catalog.lookup(old_kind)
    new_spec = catalog.lookup(new_kind)
    old_density = _density_slot(old_kind)
    new_density = _density_slot(new_kind)

    g = genome.copy()
    for nid in group:
        node = g.nodes[nid]
        defaults = {}
        for slot in new_spec.inputs:
            defaults[slot.name] = tuple(slot.default)
        defaults["UV"] = tuple(node.slot_defaults["UV"])
        defaults[new_density] = (
            _linear_range_map(node.slot_defaults[old_density][0],
                              old_spec.input_slot(old_density),
                              new_spec.input_slot(new_density)),
        )
        g.nodes[nid] = replace(node, kind=new_kind, params={}, slot_defaults=defaults)

        # incoming edges: UV keeps its slot, density reconnects across names,
        # slots the new kind lacks are dropped (orphans pruned below)
        incoming = {to: frm for to, frm in g.in_edges.items() if to[0] == nid}
        for (to_id, to_slot), frm in incoming.items():
            del g.in_edges[(to_id, to_slot)]
            if to_slot == "UV":
                g.in_edges[(nid, "UV")] = frm
            elif to_slot == old_density:
                g.in_edges[(nid, new_density)] = frm
        # outgoing edges map by position: Out stays Out, Voronoi Cells falls
        # back to Out when leaving Voronoi
        for to, frm in list(g.in_edges.items()):
            if frm[0] == nid and new_spec.output_slot(frm[1]) is None:
                g.in_edges[to] = (nid, "Out")
    g = g.normalize()
    return OpResult(g, {"op": "swap_noise_map", "group": list(group),
                        "from": old_kind, "to": new_kind})


# ---------------------------------------------------------------------------
# expand_subtree

_LEAF_POOL = (
    ("FloatConstant", 0.18), ("ColorConstant", 0.12), ("Vec2Constant", 0.04),
    ("Vec3Constant", 0.08), ("Vec4Constant", 0.02), ("UV", 0.16), ("Time", 0.05),
    ("WorldNormal", 0.06), ("ViewDirection", 0.04), ("ObjectPosition", 0.04),
    ("GradientNoise", 0.07), ("SimpleNoise", 0.07), ("Voronoi", 0.07),
)

_INNER_POOL = (
    ("Add", 0.07), ("Multiply", 0.10), ("Subtract", 0.04), ("Divide", 0.03),
    ("Power", 0.04), ("Sin", 0.05), ("Cos", 0.04), ("Abs", 0.02), ("Fract", 0.04),
    ("Floor", 0.02), ("OneMinus", 0.04), ("Saturate", 0.05), ("Clamp", 0.02),
    ("Lerp", 0.08), ("Step", 0.04), ("SmoothStep", 0.05), ("Remap", 0.05),
    ("Dot", 0.02), ("Cross", 0.02), ("Normalize", 0.02), ("Length", 0.02),
    ("Distance", 0.02), ("Split", 0.01), ("Combine", 0.03), ("Swizzle", 0.02),
    ("TilingAndOffset", 0.04), ("Rotate", 0.03), ("Panner", 0.03),
    ("GradientNoise", 0.02), ("SimpleNoise", 0.02), ("Voronoi", 0.02),
    ("Fresnel", 0.04), ("Posterize", 0.03),
)

_CHILD_PROBABILITY = 0.55
_UV_WIRE_PROBABILITY = 0.7
_DYNAMIC_DIM_WEIGHTS = ((1, 0.5), (2, 0.15), (3, 0.25), (4, 0.1))


def _pick_weighted(rng, pool):
    total = sum(w for _, w in pool)
    r = rng.random() * total
    acc = 0.0
    for item, w in pool:
        acc += w
        if r < acc:
            return item
    return pool[-1][0]


def _compatible_output(spec, target_dim):
    for slot in spec.outputs:
        if slot.stype is catalog.SemanticType.DYNAMIC:
            return slot.name  # dynamic outputs can always resolve to a scalar
        if catalog.coercible(slot.stype.dim, target_dim):
            return slot.name
    return None


def _grow_subtree(genome, target_dim, depth, rng):
    """Add a random typed subtree; returns (genome, root id, root output slot)."""
    pool = _LEAF_POOL if depth <= 1 else _INNER_POOL
    for _ in range(MAX_RETRIES):
        kind = _pick_weighted(rng, pool)
        spec = catalog.lookup(kind)
        out_slot = _compatible_output(spec, target_dim)
        if out_slot is not None:
            break
    else:
        kind = "FloatConstant"
        spec = catalog.lookup(kind)
        out_slot = "Out"
    g, nid = genome.add_node(kind, rng=rng)
    if depth > 1:
        for slot in spec.inputs:
            if slot.name == "UV" and slot.stype is catalog.SemanticType.VEC2:
                if rng.random() < _UV_WIRE_PROBABILITY:
                    g, uv_id = g.add_node("UV")
                    try:
                        g = g.connect((uv_id, "Out"), (nid, slot.name))
                    except (TypeMismatch, WouldCycle):
                        pass
                    continue
            if rng.random() >= _CHILD_PROBABILITY:
                continue
            if slot.stype is catalog.SemanticType.DYNAMIC:
                child_dim = _pick_weighted(rng, _DYNAMIC_DIM_WEIGHTS)
            else:
                child_dim = slot.stype.dim
            g, child_id, child_slot = _grow_subtree(g, child_dim, depth - 1, rng)
            try:
                g = g.connect((child_id, child_slot), (nid, slot.name))
            except (TypeMismatch, WouldCycle):
                pass  # dangling child is pruned by the caller's normalize
    return g, nid, out_slot


def _expand_candidates(genome, dims):
    legal_master = None if genome.lit else set(UNLIT_SLOTS)
    items = []
    for nid in genome.sorted_ids():
        node = genome.nodes[nid]
        spec = catalog.lookup(node.kind)
        for slot in spec.inputs:
            if (nid, slot.name) in genome.in_edges:
                continue
            if nid == genome.master_id and legal_master is not None \
                    and slot.name not in legal_master:
                continue
            items.append((nid, slot.name, dims[nid][slot.name]))
    return items


def expand_subtree(genome, strength, rng):
    """Attach a random typed subtree (depth <= 3) to an unconnected input slot."""
    dims = genome.resolve_types()
    candidates = _expand_candidates(genome, dims)
    if not candidates:
        return OpResult(genome, None)
    if strength is MutationStrength.HIGH and rng.random() < HIGH_FOCUS_PROBABILITY:
        region = focus_region(genome)
        focused = [c for c in candidates if _in_focus(genome, region, c[0], c[1])]
        if focused:
            candidates = focused
    for _ in range(MAX_RETRIES):
        nid, slot_name, target_dim = candidates[rng.randrange(len(candidates))]
        g, root_id, root_slot = _grow_subtree(genome, target_dim, MAX_SUBTREE_DEPTH, rng)
        try:
            g = g.connect((root_id, root_slot), (nid, slot_name))
        except (TypeMismatch, WouldCycle):
            continue
        g = g.normalize()
        return OpResult(g, {"op": "expand_subtree", "node": nid, "target": slot_name,
                            "root": root_id})
    return OpResult(genome, None)


# ---------------------------------------------------------------------------
# the mutation entry point

def _effective_weights(config):
    base = (config.weights or DEFAULT_WEIGHTS)[config.strength]
    table = {op: float(base.get(op, 0.0)) for op in OPERATOR_ORDER}
    if config.expansion_enabled:
        table["expand_subtree"] *= config.expansion_probability
    else:
        table["expand_subtree"] = 0.0
    return table


def _apply_operator(name, genome, strength, rng):
    if name == "param_jitter":
        return param_jitter(genome, strength, rng)
    if name == "preset_swap":
        return preset_swap(genome, rng)
    if name == "swap_noise_map":
        return swap_noise_map(genome, rng)
    if name == "expand_subtree":
        return expand_subtree(genome, strength, rng)
    raise ValueError(f"unknown operator {name!r}")


def mutate(genome, config, rng):
    """Apply up to config.mutation_count scaffolded mutation functions drawn
    from the weighted registry; the result always validates."""
    config.validate()
    table = _effective_weights(config)
    g = genome
    changes = []
    for _ in range(config.mutation_count):
        remaining = dict(table)
        applied = False
        while not applied:
            name = _weighted_choice(rng, remaining)
            if name is None:
                changes.append({"op": "none", "inapplicable": True})
                break
            result = _apply_operator(name, g, config.strength, rng)
            if result.change is None:
                remaining[name] = 0.0
                continue
            g = result.genome
            changes.append(result.change)
            applied = True
    return MutationResult(g.normalize(), changes)


# ---------------------------------------------------------------------------
# random genomes and crossover

def random_genome(lit_probability, config, rng):
    """Draw lit/unlit, then grow a random feasible genome from the minimal
    master-only genome with expansion-biased Medium-strength mutations."""
    lit = rng.random() < lit_probability
    g = Genome.minimal(lit=lit, rng=rng)
    for _ in range(config.mutation_count):
        if rng.random() < RANDOM_GENOME_EXPAND_BIAS:
            result = expand_subtree(g, MutationStrength.MEDIUM, rng)
            if result.change is not None:
                g = result.genome
                continue
        step = MutationConfig(strength=MutationStrength.MEDIUM, mutation_count=1,
                              expansion_enabled=True)
        g = mutate(g, step, rng).genome
    return g.normalize()


def _legal_slots(genome):
    spec = catalog.master_spec()
    names = [s.name for s in spec.inputs]
    if genome.lit:
        return names
    return [n for n in names if n in UNLIT_SLOTS]


def crossover(parent_a, parent_b, rng):
    """Swap the subtrees behind one master slot shared by both parents.

    Children inherit lit from their base parent; the copied subtree carries
    the donor's node params and slot defaults verbatim.
    """
    ensure_valid(parent_a)
    ensure_valid(parent_b)
    shared = [s for s in _legal_slots(parent_a) if s in set(_legal_slots(parent_b))]
    if not shared:
        raise NoCompatibleSlot("parents have no master slot in common")
    connected = [
        s for s in shared
        if (parent_a.master_id, s) in parent_a.in_edges
        or (parent_b.master_id, s) in parent_b.in_edges
    ]
    candidates = connected or shared
    slot = candidates[rng.randrange(len(candidates))]
    child_a = parent_a.replace_slot_subtree(slot, parent_b)
    child_b = parent_b.replace_slot_subtree(slot, parent_a)
    return child_a, child_b
