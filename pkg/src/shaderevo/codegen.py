"""Deterministic lowering of a validated genome to GLSL ES 3.00 sources.

Every node output in the stage closure becomes one fragment/vertex variable
named n<node-id>_<slot>; master slot values land in m_<Slot> locals; shading
temporaries use the sg_ prefix.  The emitted code is intentionally verbose
(one assignment per node output, no optimization passes) so that the text
mirrors the graph one-to-one and recompilation is byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from . import catalog, noise
from . import vecmath as vm
from .catalog import (
    GLSL_TYPE_NAMES,
    MASTER_FRAGMENT_SLOTS,
    MASTER_VERTEX_SLOTS,
    glsl_literal,
    uniform_name,
)
from .errors import UnsupportedGenome
from .graph import ensure_valid

DEFAULT_LIGHT_DIR = (0.5773502691896258, 0.5773502691896258, 0.5773502691896258)
DEFAULT_LIGHT_COLOR = (1.0, 1.0, 1.0)
DEFAULT_VIEW_DIR = (0.0, 0.0, 1.0)

_SCENE_UNIFORMS = (
    ("u_time", 1, (0.0,), "time"),
    ("u_viewDir", 3, DEFAULT_VIEW_DIR, "light"),
    ("u_lightDir", 3, DEFAULT_LIGHT_DIR, "light"),
    ("u_lightColor", 3, DEFAULT_LIGHT_COLOR, "light"),
)


@dataclass(frozen=True)
class UniformInfo:
    name: str
    stype: str
    default: tuple
    role: str  # user-input | time | light


@dataclass(frozen=True)
class ShaderBundle:
    vertex_src: str
    fragment_src: str
    uniforms: Tuple[UniformInfo, ...]
    lit: bool
    alpha_clip: bool

    def to_doc(self):
        return {
            "vertex": self.vertex_src,
            "fragment": self.fragment_src,
            "uniforms": [
                {"name": u.name, "type": u.stype, "default": list(u.default), "role": u.role}
                for u in self.uniforms
            ],
            "lit": self.lit,
            "alphaClip": self.alpha_clip,
        }


def _coerce_expr(expr, from_dim, to_dim):
    if from_dim == to_dim:
        return expr
    if from_dim == 1:
        return f"vec{to_dim}({expr})"
    if to_dim == 1:
        return f"({expr}).x"
    return f"({expr}).{'xyzw'[:to_dim]}"


def _stage_closure(genome, stage_slots):
    """Node ids reachable backwards from the connected master slots of a stage."""
    roots = []
    for slot in stage_slots:
        src = genome.in_edges.get((genome.master_id, slot))
        if src is not None:
            roots.append(src[0])
    seen = set()
    back = genome._backward_adjacency()
    stack = list(roots)
    while stack:
        nid = stack.pop()
        if nid in seen:
            continue
        seen.add(nid)
        stack.extend(back[nid])
    return seen


def _used_outputs(genome, closure, stage_slots):
    used = set()
    for (to_id, to_slot), frm in genome.in_edges.items():
        if to_id == genome.master_id:
            if to_slot in stage_slots:
                used.add(frm)
        elif to_id in closure:
            used.add(frm)
    return used


def _node_statements(genome, dims, topo, closure, used, stage):
    """One assignment per used output of every code-emitting node, plus the
    inline expressions input nodes stand for."""
    exprs: Dict[Tuple[str, str], str] = {}
    lines: List[str] = []
    for nid in topo:
        if nid not in closure:
            continue
        node = genome.nodes[nid]
        spec = catalog.lookup(node.kind)
        if not spec.emits_code:
            out = spec.glsl(node, {}, dims[nid], stage)
            for slot_name, text in out.items():
                exprs[(nid, slot_name)] = text
            continue
        if spec.glsl is None:
            raise UnsupportedGenome(f"no code template for node kind {node.kind}")
        ins = {}
        for slot in spec.inputs:
            target = dims[nid][slot.name]
            src = genome.in_edges.get((nid, slot.name))
            if src is None:
                value = vm.broadcast(node.slot_defaults[slot.name], target)
                ins[slot.name] = glsl_literal(value)
            else:
                ins[slot.name] = _coerce_expr(exprs[src], dims[src[0]][src[1]], target)
        out = spec.glsl(node, ins, dims[nid], stage)
        for slot in spec.outputs:
            if (nid, slot.name) not in used:
                continue
            var = f"n{nid}_{slot.name}"
            d = dims[nid][slot.name]
            lines.append(f"    {GLSL_TYPE_NAMES[d]} {var} = {out[slot.name]};")
            exprs[(nid, slot.name)] = var
    return lines, exprs


def _master_expr(genome, dims, exprs, slot_name, fallback):
    spec = catalog.master_spec()
    slot = spec.input_slot(slot_name)
    src = genome.in_edges.get((genome.master_id, slot_name))
    if src is None:
        if slot.passthrough:
            return fallback
        return glsl_literal(genome.master.slot_defaults[slot_name])
    return _coerce_expr(exprs[src], dims[src[0]][src[1]], slot.stype.dim)


def _closure_has(genome, closure, *kinds):
    return any(genome.nodes[nid].kind in kinds for nid in closure)


def _closure_has_category(genome, closure, category):
    return any(catalog.lookup(genome.nodes[nid].kind).category == category for nid in closure)


def _user_uniforms(genome, closures):
    infos = []
    for nid in sorted(set().union(*closures), key=int):
        node = genome.nodes[nid]
        spec = catalog.lookup(node.kind)
        if spec.category == "input" and "Value" in spec.params:
            p = spec.params["Value"]
            infos.append(UniformInfo(uniform_name(nid), GLSL_TYPE_NAMES[p.dim],
                                     tuple(node.params["Value"]), "user-input"))
    return infos


def _declare_uniforms(body, all_uniforms):
    lines = []
    for u in all_uniforms:
        if u.name in body:
            lines.append(f"uniform {u.stype} {u.name};")
    return lines


_TANGENT_FALLBACK = [
    "    vec3 sg_t0 = cross(m_Normal, vec3(0.0, 1.0, 0.0));",
    "    vec3 m_Tangent = (length(sg_t0) < 1.0e-4) ? vec3(1.0, 0.0, 0.0) : normalize(sg_t0);",
]

_LIT_SHADING = [
    "    vec3 sg_nrm = normalize(v_normal);",
    "    vec3 sg_tan = normalize(v_tangent);",
    "    vec3 sg_bit = cross(sg_nrm, sg_tan);",
    "    vec3 sg_nts = m_NormalTS * 2.0 - 1.0;",
    "    vec3 sg_N = normalize(sg_tan * sg_nts.x + sg_bit * sg_nts.y + sg_nrm * sg_nts.z);",
    "    vec3 sg_L = normalize(u_lightDir);",
    "    vec3 sg_V = normalize(u_viewDir);",
    "    vec3 sg_H = normalize(sg_L + sg_V);",
    "    float sg_diff = max(dot(sg_N, sg_L), 0.0);",
    "    float sg_specPow = exp2(1.0 + 10.0 * m_Smoothness);",
    "    float sg_spec = step(1.0e-6, sg_diff) * pow(max(dot(sg_N, sg_H), 0.0), sg_specPow)"
    " * mix(0.04, 1.0, m_Metallic);",
    "    vec3 sg_color = m_Occlusion * 0.03 * m_BaseColor"
    " + u_lightColor * (m_BaseColor * sg_diff * (1.0 - m_Metallic) + vec3(sg_spec))"
    " + m_Emission;",
    "    fragColor = vec4(sg_color, m_Alpha);",
]


def compile(genome):
    """Lower a validated genome to a ShaderBundle; pure and byte-deterministic."""
    ensure_valid(genome)
    dims = genome.resolve_types()
    topo = genome.topo_order()
    alpha_clip = (genome.master_id, "AlphaClipThreshold") in genome.in_edges

    vert_closure = _stage_closure(genome, MASTER_VERTEX_SLOTS)
    frag_closure = _stage_closure(genome, MASTER_FRAGMENT_SLOTS)
    vert_used = _used_outputs(genome, vert_closure, MASTER_VERTEX_SLOTS)
    frag_used = _used_outputs(genome, frag_closure, MASTER_FRAGMENT_SLOTS)

    # fragment-side needs decide which varyings exist
    need_v_uv = _closure_has(genome, frag_closure, "UV")
    need_v_objpos = _closure_has(genome, frag_closure, "ObjectPosition")
    need_v_normal = genome.lit or _closure_has(genome, frag_closure, "WorldNormal")
    need_v_tangent = genome.lit

    # ---- fragment body ----
    frag_lines, frag_exprs = _node_statements(genome, dims, topo, frag_closure, frag_used, "fragment")
    frag_slots = [s for s in MASTER_FRAGMENT_SLOTS
                  if genome.lit or s in ("BaseColor", "Alpha", "AlphaClipThreshold")]
    if not alpha_clip:
        frag_slots = [s for s in frag_slots if s != "AlphaClipThreshold"]
    master_spec = catalog.master_spec()
    for slot_name in frag_slots:
        d = master_spec.input_slot(slot_name).stype.dim
        expr = _master_expr(genome, dims, frag_exprs, slot_name, None)
        frag_lines.append(f"    {GLSL_TYPE_NAMES[d]} m_{slot_name} = {expr};")
    if alpha_clip:
        frag_lines.append("    if (m_Alpha < m_AlphaClipThreshold) discard;")
    if genome.lit:
        frag_lines.extend(_LIT_SHADING)
    else:
        frag_lines.append("    fragColor = vec4(m_BaseColor, m_Alpha);")
    frag_body = "\n".join(frag_lines)

    # ---- vertex body ----
    vert_lines, vert_exprs = _node_statements(genome, dims, topo, vert_closure, vert_used, "vertex")
    vert_lines.append(
        f"    vec3 m_Position = {_master_expr(genome, dims, vert_exprs, 'Position', 'a_position')};")
    if need_v_normal or need_v_tangent:
        vert_lines.append(
            f"    vec3 m_Normal = {_master_expr(genome, dims, vert_exprs, 'Normal', 'a_normal')};")
    if need_v_tangent:
        tangent_src = genome.in_edges.get((genome.master_id, "Tangent"))
        if tangent_src is None:
            vert_lines.extend(_TANGENT_FALLBACK)
        else:
            vert_lines.append(
                f"    vec3 m_Tangent = {_master_expr(genome, dims, vert_exprs, 'Tangent', 'a_normal')};")
    if need_v_uv:
        vert_lines.append("    v_uv = a_uv;")
    if need_v_objpos:
        vert_lines.append("    v_objpos = a_position;")
    if need_v_normal:
        vert_lines.append("    v_normal = normalize(mat3(u_model) * m_Normal);")
    if need_v_tangent:
        vert_lines.append("    v_tangent = normalize(mat3(u_model) * m_Tangent);")
    vert_lines.append("    gl_Position = u_viewProj * (u_model * vec4(m_Position, 1.0));")
    vert_body = "\n".join(vert_lines)

    # ---- uniforms ----
    user_uniforms = _user_uniforms(genome, (vert_closure, frag_closure))
    scene_uniforms = [UniformInfo(n, GLSL_TYPE_NAMES[d], dflt, role)
                      for n, d, dflt, role in _SCENE_UNIFORMS]
    candidates = scene_uniforms + user_uniforms
    manifest = tuple(u for u in candidates if u.name in vert_body or u.name in frag_body)

    # ---- assemble translation units ----
    vert_parts = ["#version 300 es", "precision highp float;", ""]
    for attr in (("a_position", "vec3"), ("a_normal", "vec3"), ("a_uv", "vec2")):
        if attr[0] in vert_body:
            vert_parts.append(f"in {attr[1]} {attr[0]};")
    vert_parts.append("uniform mat4 u_model;")
    vert_parts.append("uniform mat4 u_viewProj;")
    vert_parts.extend(_declare_uniforms(vert_body, candidates))
    for name, vtype in (("v_uv", "vec2"), ("v_objpos", "vec3"),
                        ("v_normal", "vec3"), ("v_tangent", "vec3")):
        if name in vert_body:
            vert_parts.append(f"out {vtype} {name};")
    vert_parts.append("")
    if _closure_has_category(genome, vert_closure, "noise"):
        vert_parts.append(noise.GLSL_HELPERS)
    vert_parts.append("void main() {")
    vert_parts.append(vert_body)
    vert_parts.append("}")
    vertex_src = "\n".join(vert_parts) + "\n"

    frag_parts = ["#version 300 es", "precision highp float;", ""]
    for name, vtype in (("v_uv", "vec2"), ("v_objpos", "vec3"),
                        ("v_normal", "vec3"), ("v_tangent", "vec3")):
        if name in frag_body:
            frag_parts.append(f"in {vtype} {name};")
    frag_parts.extend(_declare_uniforms(frag_body, candidates))
    frag_parts.append("out vec4 fragColor;")
    frag_parts.append("")
    if _closure_has_category(genome, frag_closure, "noise"):
        frag_parts.append(noise.GLSL_HELPERS)
    frag_parts.append("void main() {")
    frag_parts.append(frag_body)
    frag_parts.append("}")
    fragment_src = "\n".join(frag_parts) + "\n"

    return ShaderBundle(
        vertex_src=vertex_src,
        fragment_src=fragment_src,
        uniforms=manifest,
        lit=genome.lit,
        alpha_clip=alpha_clip,
    )
