"""CPU reference evaluation of genomes.

interpret() walks the graph in topological order applying the catalog's
reference semantics, mirroring the emitted GLSL statement for statement.
Non-finite intermediate results (division by zero, pow out of domain,
normalizing a zero vector) are replaced with a large finite sentinel and
flagged, so differential comparisons can skip the affected contexts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict

from . import catalog
from . import vecmath as vm
from .catalog import MASTER_FRAGMENT_SLOTS, MASTER_VERTEX_SLOTS
from .codegen import DEFAULT_LIGHT_COLOR, DEFAULT_LIGHT_DIR, _stage_closure
from .graph import ensure_valid

SENTINEL = 1e30


@dataclass
class EvalContext:
    uv: tuple = (0.5, 0.5)
    object_position: tuple = (0.0, 0.0, 0.0)
    world_normal: tuple = (0.0, 0.0, 1.0)
    view_direction: tuple = (0.0, 0.0, 1.0)
    time: float = 0.0
    uniforms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.uv = tuple(float(x) for x in self.uv)
        self.object_position = tuple(float(x) for x in self.object_position)
        self.world_normal = _unit(self.world_normal)
        self.view_direction = _unit(self.view_direction)
        self.time = float(self.time)


def _unit(v):
    v = tuple(float(x) for x in v)
    n = vm.length(v)
    if n == 0.0 or not math.isfinite(n):
        raise ValueError("direction vectors must have nonzero finite length")
    return tuple(x / n for x in v)


@dataclass
class _Env:
    stage: str
    uv: tuple
    object_position: tuple
    world_normal: tuple
    view_direction: tuple
    time: float
    uniforms: dict


@dataclass
class InterpResult:
    vertex: Dict[str, tuple]
    fragment: Dict[str, tuple]
    nonfinite: bool


@dataclass(frozen=True)
class ShadeResult:
    rgba: tuple
    discarded: bool


def default_tangent(normal):
    """Tangent used when the master Tangent slot is unconnected; mirrors the
    emitted GLSL fallback exactly."""
    t0 = vm.cross(normal, (0.0, 1.0, 0.0))
    if vm.length(t0) < 1.0e-4:
        return (1.0, 0.0, 0.0)
    return vm.normalize(t0)


class _Sanitizer:
    def __init__(self):
        self.flagged = False

    def __call__(self, value):
        if vm.is_finite(value):
            return value
        self.flagged = True
        return tuple(x if math.isfinite(x) else SENTINEL for x in value)


def _eval_stage(genome, dims, topo, closure, env, sanitize):
    values = {}
    for nid in topo:
        if nid not in closure:
            continue
        node = genome.nodes[nid]
        spec = catalog.lookup(node.kind)
        if not spec.emits_code:
            outs = spec.ref(node, {}, env)
        else:
            ins = {}
            for slot in spec.inputs:
                target = dims[nid][slot.name]
                src = genome.in_edges.get((nid, slot.name))
                if src is None:
                    ins[slot.name] = vm.broadcast(node.slot_defaults[slot.name], target)
                else:
                    ins[slot.name] = vm.coerce(values[src], target)
            outs = spec.ref(node, ins, env)
        for slot in spec.outputs:
            values[(nid, slot.name)] = sanitize(outs[slot.name])
    return values


def _master_value(genome, dims, values, slot_name, fallback):
    spec = catalog.master_spec()
    slot = spec.input_slot(slot_name)
    src = genome.in_edges.get((genome.master_id, slot_name))
    if src is None:
        if slot.passthrough:
            return fallback
        return tuple(genome.master.slot_defaults[slot_name])
    return vm.coerce(values[src], slot.stype.dim)


def interpret(genome, ctx):
    """Evaluate both shader stages at one sample point; pure and deterministic."""
    ensure_valid(genome)
    dims = genome.resolve_types()
    topo = genome.topo_order()
    sanitize = _Sanitizer()

    vert_env = _Env("vertex", ctx.uv, ctx.object_position, ctx.world_normal,
                    ctx.view_direction, ctx.time, ctx.uniforms)
    vert_closure = _stage_closure(genome, MASTER_VERTEX_SLOTS)
    vert_values = _eval_stage(genome, dims, topo, vert_closure, vert_env, sanitize)

    vertex = {
        "Position": _master_value(genome, dims, vert_values, "Position", ctx.object_position),
        "Normal": _master_value(genome, dims, vert_values, "Normal", ctx.world_normal),
    }
    vertex["Tangent"] = _master_value(genome, dims, vert_values, "Tangent",
                                      default_tangent(vertex["Normal"]))

    # the fragment stage sees the (possibly vertex-modified) interpolated normal
    frag_normal = sanitize(vm.normalize(vertex["Normal"]))
    frag_env = _Env("fragment", ctx.uv, ctx.object_position, frag_normal,
                    ctx.view_direction, ctx.time, ctx.uniforms)
    frag_closure = _stage_closure(genome, MASTER_FRAGMENT_SLOTS)
    frag_values = _eval_stage(genome, dims, topo, frag_closure, frag_env, sanitize)

    fragment = {
        name: _master_value(genome, dims, frag_values, name, None)
        for name in MASTER_FRAGMENT_SLOTS
    }
    return InterpResult(vertex=vertex, fragment=fragment, nonfinite=sanitize.flagged)


def shade(fragment, *, lit, alpha_clip, normal, tangent,
          light_dir=DEFAULT_LIGHT_DIR, light_color=DEFAULT_LIGHT_COLOR,
          view_dir=(0.0, 0.0, 1.0)):
    """Apply the documented lit model (or the unlit passthrough) to fragment
    slot values; mirrors the emitted shading block exactly."""
    if alpha_clip and fragment["Alpha"][0] < fragment["AlphaClipThreshold"][0]:
        return ShadeResult((0.0, 0.0, 0.0, 0.0), True)
    alpha = fragment["Alpha"][0]
    base = fragment["BaseColor"]
    if not lit:
        return ShadeResult((base[0], base[1], base[2], alpha), False)

    nrm = vm.normalize(normal)
    tan = vm.normalize(tangent)
    bit = vm.cross(nrm, tan)
    nts = tuple(x * 2.0 - 1.0 for x in fragment["NormalTS"])
    n = vm.normalize(tuple(
        tan[i] * nts[0] + bit[i] * nts[1] + nrm[i] * nts[2] for i in range(3)
    ))
    l = vm.normalize(light_dir)
    v = vm.normalize(view_dir)
    h = vm.normalize(tuple(l[i] + v[i] for i in range(3)))
    diff = max(vm.dot(n, l), 0.0)
    metallic = fragment["Metallic"][0]
    spec_pow = math.pow(2.0, 1.0 + 10.0 * fragment["Smoothness"][0])
    gate = 1.0 if diff >= 1.0e-6 else 0.0
    spec = gate * vm.spow(max(vm.dot(n, h), 0.0), spec_pow) * vm.lerp(0.04, 1.0, metallic)
    occ = fragment["Occlusion"][0]
    emis = fragment["Emission"]
    color = tuple(
        occ * 0.03 * base[i]
        + light_color[i] * (base[i] * diff * (1.0 - metallic) + spec)
        + emis[i]
        for i in range(3)
    )
    return ShadeResult((color[0], color[1], color[2], alpha), False)


def shade_genome(genome, ctx, light_dir=DEFAULT_LIGHT_DIR, light_color=DEFAULT_LIGHT_COLOR):
    """interpret() + shade() in one call, for previews and tests."""
    result = interpret(genome, ctx)
    alpha_clip = (genome.master_id, "AlphaClipThreshold") in genome.in_edges
    return shade(
        result.fragment,
        lit=genome.lit,
        alpha_clip=alpha_clip,
        normal=result.vertex["Normal"],
        tangent=result.vertex["Tangent"],
        light_dir=light_dir,
        light_color=light_color,
        view_dir=ctx.view_direction,
    )
