"""Static registry of every node kind a genome may contain.

Each NodeSpec bundles the slot signature, parameter presets and ranges,
the GLSL expression template used by codegen, and the CPU reference
semantics used by the interpreter.  The registry is built once at import
time and is immutable afterwards; lookups are pure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from . import vecmath as vm
from .errors import IncompatibleDimensions, UnknownKind


class SemanticType(enum.Enum):
    FLOAT = 1
    VEC2 = 2
    VEC3 = 3
    VEC4 = 4
    DYNAMIC = 0

    @property
    def dim(self):
        if self is SemanticType.DYNAMIC:
            raise ValueError("DynamicVector has no fixed dimension")
        return self.value


GLSL_TYPE_NAMES = {1: "float", 2: "vec2", 3: "vec3", 4: "vec4"}

CATEGORIES = ("input", "math", "channel", "uv", "noise", "artistic", "master")

MASTER_KIND = "MasterNode"

# Master slots legal in an unlit genome.
UNLIT_SLOTS = ("Position", "BaseColor", "Alpha", "AlphaClipThreshold")


@dataclass(frozen=True)
class SlotSpec:
    name: str
    stype: SemanticType
    default: Optional[tuple] = None
    lo: Optional[float] = None
    hi: Optional[float] = None
    randomizable: bool = True
    passthrough: bool = False  # vertex master slots that fall back to mesh data
    stage: Optional[str] = None  # master slots only: "vertex" | "fragment"


@dataclass(frozen=True)
class PresetParam:
    choices: tuple
    default: str


@dataclass(frozen=True)
class NumericParam:
    dim: int
    lo: float
    hi: float
    default: tuple


@dataclass(frozen=True)
class NodeSpec:
    kind: str
    category: str
    inputs: tuple = ()
    outputs: tuple = ()
    params: Mapping = field(default_factory=dict)
    emits_code: bool = True
    # glsl(node, ins, dims, stage) -> {output slot: expression}
    glsl: Optional[Callable] = None
    # ref(node, ins, env) -> {output slot: value tuple}
    ref: Optional[Callable] = None

    def input_slot(self, name):
        for s in self.inputs:
            if s.name == name:
                return s
        return None

    def output_slot(self, name):
        for s in self.outputs:
            if s.name == name:
                return s
        return None


def coercible(src_dim, dst_dim):
    """Float broadcasts everywhere; larger vectors truncate; 1 < M < N is illegal."""
    return src_dim == dst_dim or src_dim == 1 or src_dim > dst_dim


def resolve_dynamic(spec, input_dims):
    """Resolve per-instance slot dimensions.

    input_dims carries one entry per input slot (the connected source's
    dimension, or the slot default's dimension when unconnected).  Every
    DynamicVector slot resolves to the max dimension seen across dynamic
    inputs; concrete slots keep their declared dimension.  Raises
    IncompatibleDimensions when a source cannot coerce into its slot.
    """
    if len(input_dims) != len(spec.inputs):
        raise ValueError(f"{spec.kind}: expected {len(spec.inputs)} input dims")
    d = 1
    for slot, given in zip(spec.inputs, input_dims):
        if slot.stype is SemanticType.DYNAMIC:
            d = max(d, given)
    resolved = {}
    for slot, given in zip(spec.inputs, input_dims):
        target = d if slot.stype is SemanticType.DYNAMIC else slot.stype.dim
        if not coercible(given, target):
            raise IncompatibleDimensions(
                f"{spec.kind}.{slot.name}: dim {given} cannot feed dim {target}"
            )
        resolved[slot.name] = target
    for slot in spec.outputs:
        resolved[slot.name] = d if slot.stype is SemanticType.DYNAMIC else slot.stype.dim
    return resolved


def glsl_float(x):
    text = repr(float(x))
    if "." in text or "e" in text or "E" in text:
        return text
    return text + ".0"


def glsl_literal(value):
    if len(value) == 1:
        return glsl_float(value[0])
    parts = ", ".join(glsl_float(x) for x in value)
    return f"vec{len(value)}({parts})"


def uniform_name(node_id):
    return f"u_n{node_id}_Value"


# --------------------------------------------------------------------------
# slot shorthands

_D = SemanticType.DYNAMIC
_F = SemanticType.FLOAT
_V2 = SemanticType.VEC2
_V3 = SemanticType.VEC3
_V4 = SemanticType.VEC4


def _in(name, stype, default, lo, hi):
    return SlotSpec(name, stype, tuple(float(v) for v in default), float(lo), float(hi))


def _out(name, stype):
    return SlotSpec(name, stype)


# --------------------------------------------------------------------------
# input nodes: no assignment is emitted, outputs map to uniform/varying
# expressions instead

def _const_glsl(node, ins, dims, stage):
    return {"Out": uniform_name(node.id)}


def _const_ref(node, ins, env):
    value = env.uniforms.get(uniform_name(node.id))
    if value is None:
        value = tuple(node.params["Value"])
    return {"Out": tuple(value)}


def _time_glsl(node, ins, dims, stage):
    return {"Out": "u_time"}


def _uv_glsl(node, ins, dims, stage):
    return {"Out": "a_uv" if stage == "vertex" else "v_uv"}


def _objpos_glsl(node, ins, dims, stage):
    return {"Out": "a_position" if stage == "vertex" else "v_objpos"}


def _normal_glsl(node, ins, dims, stage):
    if stage == "vertex":
        return {"Out": "normalize(mat3(u_model) * a_normal)"}
    return {"Out": "normalize(v_normal)"}


def _viewdir_glsl(node, ins, dims, stage):
    return {"Out": "u_viewDir"}


# --------------------------------------------------------------------------
# math

def _binary(fmt):
    def tmpl(node, ins, dims, stage):
        return {"Out": fmt.format(**ins)}

    return tmpl


def _ref1(f):
    def r(node, ins, env):
        return {"Out": vm.map1(f, ins["In"])}

    return r


def _ref2(name_a, name_b, f):
    def r(node, ins, env):
        return {"Out": vm.map2(f, ins[name_a], ins[name_b])}

    return r


def _remap_ref(node, ins, env):
    in_lo, in_hi = ins["InMinMax"]
    out_lo, out_hi = ins["OutMinMax"]
    span = in_hi - in_lo
    out = tuple(out_lo + (x - in_lo) * vm.sdiv(out_hi - out_lo, span) for x in ins["In"])
    return {"Out": out}


def _smoothstep_ref(node, ins, env):
    def ss(e0, e1, x):
        t = vm.clamp(vm.sdiv(x - e0, e1 - e0), 0.0, 1.0)
        return t * t * (3.0 - 2.0 * t)

    return {"Out": vm.map3(ss, ins["Edge1"], ins["Edge2"], ins["In"])}


def _normalize_ref(node, ins, env):
    return {"Out": vm.normalize(ins["In"])}


def _posterize_ref(node, ins, env):
    def post(x, steps):
        return vm.sdiv(math.floor(x * steps), steps)

    return {"Out": vm.map2(post, ins["In"], ins["Steps"])}


def _fresnel_ref(node, ins, env):
    n = vm.normalize(ins["Normal"])
    v = vm.normalize(ins["ViewDir"])
    base = vm.saturate(vm.dot(n, v))
    return {"Out": (vm.spow(1.0 - base, ins["Power"][0]),)}


# --------------------------------------------------------------------------
# channel

_COMPONENTS = "xyzw"


def _split_glsl(node, ins, dims, stage):
    d = dims["In"]
    out = {}
    for i, name in enumerate(("R", "G", "B", "A")):
        if i >= d:
            out[name] = "0.0"
        elif d == 1:
            out[name] = ins["In"]
        else:
            out[name] = f"({ins['In']}).{_COMPONENTS[i]}"
    return out


def _split_ref(node, ins, env):
    v = ins["In"]
    return {name: ((v[i],) if i < len(v) else (0.0,)) for i, name in enumerate(("R", "G", "B", "A"))}


def _combine_glsl(node, ins, dims, stage):
    return {
        "RGBA": f"vec4({ins['R']}, {ins['G']}, {ins['B']}, {ins['A']})",
        "RGB": f"vec3({ins['R']}, {ins['G']}, {ins['B']})",
        "RG": f"vec2({ins['R']}, {ins['G']})",
    }


def _combine_ref(node, ins, env):
    r, g, b, a = ins["R"][0], ins["G"][0], ins["B"][0], ins["A"][0]
    return {"RGBA": (r, g, b, a), "RGB": (r, g, b), "RG": (r, g)}


def _swizzle_glsl(node, ins, dims, stage):
    d = dims["In"]
    mask = node.params["Mask"]
    parts = []
    for c in mask:
        idx = _COMPONENTS.index(c)
        if idx >= d:
            parts.append("0.0")
        elif d == 1:
            parts.append(ins["In"])
        else:
            parts.append(f"({ins['In']}).{c}")
    return {"Out": f"vec2({parts[0]}, {parts[1]})"}


def _swizzle_ref(node, ins, env):
    v = ins["In"]
    mask = node.params["Mask"]
    out = tuple(v[_COMPONENTS.index(c)] if _COMPONENTS.index(c) < len(v) else 0.0 for c in mask)
    return {"Out": out}


# --------------------------------------------------------------------------
# uv

_DEG_TO_RAD = 0.017453292519943295


def _rotate_glsl(node, ins, dims, stage):
    r = ins["Rotation"]
    if node.params["Unit"] == "Degrees":
        r = f"({r} * {glsl_float(_DEG_TO_RAD)})"
    rot = f"mat2(cos({r}), sin({r}), -sin({r}), cos({r}))"
    return {"Out": f"({rot} * ({ins['UV']} - {ins['Center']}) + {ins['Center']})"}


def _rotate_ref(node, ins, env):
    theta = ins["Rotation"][0]
    if node.params["Unit"] == "Degrees":
        theta *= _DEG_TO_RAD
    c, s = math.cos(theta), math.sin(theta)
    dx = ins["UV"][0] - ins["Center"][0]
    dy = ins["UV"][1] - ins["Center"][1]
    return {"Out": (c * dx - s * dy + ins["Center"][0], s * dx + c * dy + ins["Center"][1])}


def _panner_glsl(node, ins, dims, stage):
    return {"Out": f"({ins['UV']} + u_time * {ins['Speed']})"}


def _panner_ref(node, ins, env):
    t = env.time
    return {"Out": vm.map2(lambda u, s: u + t * s, ins["UV"], ins["Speed"])}


# --------------------------------------------------------------------------
# noise

def _gradient_noise_ref(node, ins, env):
    from . import noise

    return {"Out": (noise.gradient_noise(ins["UV"][0], ins["UV"][1], ins["Scale"][0]),)}


def _simple_noise_ref(node, ins, env):
    from . import noise

    return {"Out": (noise.simple_noise(ins["UV"][0], ins["UV"][1], ins["Scale"][0]),)}


def _voronoi_ref(node, ins, env):
    from . import noise

    out, cells = noise.voronoi(
        ins["UV"][0], ins["UV"][1], ins["AngleOffset"][0], ins["CellDensity"][0]
    )
    return {"Out": (out,), "Cells": (cells,)}


# --------------------------------------------------------------------------
# registry

_SPECS = {}


def _register(spec):
    if spec.kind in _SPECS:
        raise ValueError(f"duplicate node kind {spec.kind}")
    _SPECS[spec.kind] = spec


def _simple(kind, category, inputs, outputs, fmt, ref, params=None, emits_code=True):
    _register(
        NodeSpec(
            kind=kind,
            category=category,
            inputs=tuple(inputs),
            outputs=tuple(outputs),
            params=params or {},
            emits_code=emits_code,
            glsl=_binary(fmt) if isinstance(fmt, str) else fmt,
            ref=ref,
        )
    )


# input nodes -----------------------------------------------------------------

for _kind, _dim_, _rng, _dflt in (
    ("FloatConstant", 1, (-2.0, 2.0), (1.0,)),
    ("Vec2Constant", 2, (-2.0, 2.0), (0.0, 0.0)),
    ("Vec3Constant", 3, (-2.0, 2.0), (0.0, 0.0, 0.0)),
    ("Vec4Constant", 4, (-2.0, 2.0), (0.0, 0.0, 0.0, 1.0)),
    ("ColorConstant", 3, (0.0, 1.0), (1.0, 1.0, 1.0)),
):
    _register(
        NodeSpec(
            kind=_kind,
            category="input",
            outputs=(_out("Out", SemanticType(_dim_)),),
            params={"Value": NumericParam(_dim_, _rng[0], _rng[1], _dflt)},
            emits_code=False,
            glsl=_const_glsl,
            ref=_const_ref,
        )
    )

_register(NodeSpec("Time", "input", outputs=(_out("Out", _F),), emits_code=False,
                   glsl=_time_glsl, ref=lambda node, ins, env: {"Out": (env.time,)}))
_register(NodeSpec("UV", "input", outputs=(_out("Out", _V2),), emits_code=False,
                   glsl=_uv_glsl, ref=lambda node, ins, env: {"Out": tuple(env.uv)}))
_register(NodeSpec("ObjectPosition", "input", outputs=(_out("Out", _V3),), emits_code=False,
                   glsl=_objpos_glsl, ref=lambda node, ins, env: {"Out": tuple(env.object_position)}))
_register(NodeSpec("WorldNormal", "input", outputs=(_out("Out", _V3),), emits_code=False,
                   glsl=_normal_glsl, ref=lambda node, ins, env: {"Out": tuple(env.world_normal)}))
_register(NodeSpec("ViewDirection", "input", outputs=(_out("Out", _V3),), emits_code=False,
                   glsl=_viewdir_glsl, ref=lambda node, ins, env: {"Out": tuple(env.view_direction)}))

# math ------------------------------------------------------------------------

_AB = lambda: (_in("A", _D, (0.0,), -2, 2), _in("B", _D, (0.0,), -2, 2))
_IN = lambda: (_in("In", _D, (0.0,), -2, 2),)

_simple("Add", "math", _AB(), (_out("Out", _D),), "({A} + {B})", _ref2("A", "B", lambda a, b: a + b))
_simple("Subtract", "math", _AB(), (_out("Out", _D),), "({A} - {B})", _ref2("A", "B", lambda a, b: a - b))
_simple("Multiply", "math", _AB(), (_out("Out", _D),), "({A} * {B})", _ref2("A", "B", lambda a, b: a * b))
_simple("Divide", "math",
        (_in("A", _D, (1.0,), -2, 2), _in("B", _D, (2.0,), 0.1, 4)),
        (_out("Out", _D),), "({A} / {B})", _ref2("A", "B", vm.sdiv))
_simple("Power", "math",
        (_in("A", _D, (1.0,), 0, 2), _in("B", _D, (2.0,), 0.5, 4)),
        (_out("Out", _D),), "pow({A}, {B})", _ref2("A", "B", vm.spow))
_simple("Sin", "math", _IN(), (_out("Out", _D),), "sin({In})", _ref1(math.sin))
_simple("Cos", "math", _IN(), (_out("Out", _D),), "cos({In})", _ref1(math.cos))
_simple("Abs", "math", _IN(), (_out("Out", _D),), "abs({In})", _ref1(abs))
_simple("Fract", "math", _IN(), (_out("Out", _D),), "fract({In})", _ref1(vm.fract))
_simple("Floor", "math", _IN(), (_out("Out", _D),), "floor({In})", _ref1(lambda x: float(math.floor(x))))
_simple("OneMinus", "math", _IN(), (_out("Out", _D),), "(1.0 - {In})", _ref1(lambda x: 1.0 - x))
_simple("Saturate", "math", _IN(), (_out("Out", _D),), "clamp({In}, 0.0, 1.0)", _ref1(vm.saturate))
_simple("Clamp", "math",
        (_in("In", _D, (0.0,), -2, 2), _in("Min", _D, (0.0,), -2, 2), _in("Max", _D, (1.0,), -2, 2)),
        (_out("Out", _D),), "clamp({In}, {Min}, {Max})",
        lambda node, ins, env: {"Out": vm.map3(lambda x, lo, hi: min(max(x, lo), hi),
                                               ins["In"], ins["Min"], ins["Max"])})
_simple("Lerp", "math",
        (_in("A", _D, (0.0,), -2, 2), _in("B", _D, (1.0,), -2, 2), _in("T", _D, (0.5,), 0, 1)),
        (_out("Out", _D),), "mix({A}, {B}, {T})",
        lambda node, ins, env: {"Out": vm.map3(vm.lerp, ins["A"], ins["B"], ins["T"])})
_simple("Step", "math",
        (_in("Edge", _D, (0.5,), 0, 1), _in("In", _D, (0.0,), -2, 2)),
        (_out("Out", _D),), "step({Edge}, {In})",
        _ref2("Edge", "In", lambda e, x: 1.0 if x >= e else 0.0))
_simple("SmoothStep", "math",
        (_in("Edge1", _D, (0.0,), 0, 1), _in("Edge2", _D, (1.0,), 0, 1), _in("In", _D, (0.5,), -2, 2)),
        (_out("Out", _D),), "smoothstep({Edge1}, {Edge2}, {In})", _smoothstep_ref)
_simple("Remap", "math",
        (_in("In", _D, (0.0,), -1, 1),
         _in("InMinMax", _V2, (-1.0, 1.0), -4, 4),
         _in("OutMinMax", _V2, (0.0, 1.0), -4, 4)),
        (_out("Out", _D),),
        "({OutMinMax}.x + ({In} - {InMinMax}.x) * ({OutMinMax}.y - {OutMinMax}.x) / ({InMinMax}.y - {InMinMax}.x))",
        _remap_ref)
_simple("Dot", "math", _AB(), (_out("Out", _F),), "dot({A}, {B})",
        lambda node, ins, env: {"Out": (vm.dot(ins["A"], ins["B"]),)})
_simple("Cross", "math",
        (_in("A", _V3, (0.0, 0.0, 1.0), -1, 1), _in("B", _V3, (0.0, 1.0, 0.0), -1, 1)),
        (_out("Out", _V3),), "cross({A}, {B})",
        lambda node, ins, env: {"Out": vm.cross(ins["A"], ins["B"])})
_simple("Normalize", "math", (_in("In", _D, (1.0,), -2, 2),), (_out("Out", _D),),
        "normalize({In})", _normalize_ref)
_simple("Length", "math", (_in("In", _D, (1.0,), -2, 2),), (_out("Out", _F),),
        "length({In})", lambda node, ins, env: {"Out": (vm.length(ins["In"]),)})
_simple("Distance", "math", _AB(), (_out("Out", _F),), "distance({A}, {B})",
        lambda node, ins, env: {"Out": (vm.distance(ins["A"], ins["B"]),)})

# channel ---------------------------------------------------------------------

_simple("Split", "channel", (_in("In", _D, (0.0,), -2, 2),),
        (_out("R", _F), _out("G", _F), _out("B", _F), _out("A", _F)),
        _split_glsl, _split_ref)
_simple("Combine", "channel",
        (_in("R", _F, (0.0,), 0, 1), _in("G", _F, (0.0,), 0, 1),
         _in("B", _F, (0.0,), 0, 1), _in("A", _F, (1.0,), 0, 1)),
        (_out("RGBA", _V4), _out("RGB", _V3), _out("RG", _V2)),
        _combine_glsl, _combine_ref)
_simple("Swizzle", "channel", (_in("In", _D, (0.0,), -2, 2),), (_out("Out", _V2),),
        _swizzle_glsl, _swizzle_ref,
        params={"Mask": PresetParam(tuple(a + b for a in _COMPONENTS for b in _COMPONENTS), "xy")})

# uv --------------------------------------------------------------------------

_simple("TilingAndOffset", "uv",
        (_in("UV", _V2, (0.0, 0.0), 0, 1), _in("Tiling", _V2, (1.0, 1.0), 0.1, 10),
         _in("Offset", _V2, (0.0, 0.0), -1, 1)),
        (_out("Out", _V2),), "({UV} * {Tiling} + {Offset})",
        lambda node, ins, env: {"Out": vm.map3(lambda u, t, o: u * t + o,
                                               ins["UV"], ins["Tiling"], ins["Offset"])})
_simple("Rotate", "uv",
        (_in("UV", _V2, (0.0, 0.0), 0, 1), _in("Center", _V2, (0.5, 0.5), 0, 1),
         _in("Rotation", _F, (0.0,), 0, 360)),  # value interpreted per the Unit preset
        (_out("Out", _V2),), _rotate_glsl, _rotate_ref,
        params={"Unit": PresetParam(("Radians", "Degrees"), "Radians")})
_simple("Panner", "uv",
        (_in("UV", _V2, (0.0, 0.0), 0, 1), _in("Speed", _V2, (0.1, 0.1), -2, 2)),
        (_out("Out", _V2),), _panner_glsl, _panner_ref)

# noise -----------------------------------------------------------------------

_simple("GradientNoise", "noise",
        (_in("UV", _V2, (0.0, 0.0), 0, 4), _in("Scale", _F, (10.0,), 1, 50)),
        (_out("Out", _F),), "sg_gradient_noise({UV}, {Scale})", _gradient_noise_ref)
_simple("SimpleNoise", "noise",
        (_in("UV", _V2, (0.0, 0.0), 0, 4), _in("Scale", _F, (20.0,), 1, 50)),
        (_out("Out", _F),), "sg_simple_noise({UV}, {Scale})", _simple_noise_ref)
_simple("Voronoi", "noise",
        (_in("UV", _V2, (0.0, 0.0), 0, 4), _in("AngleOffset", _F, (2.0,), 0, 8),
         _in("CellDensity", _F, (5.0,), 1, 20)),
        (_out("Out", _F), _out("Cells", _F)),
        lambda node, ins, dims, stage: {
            "Out": f"sg_voronoi({ins['UV']}, {ins['AngleOffset']}, {ins['CellDensity']}).x",
            "Cells": f"sg_voronoi({ins['UV']}, {ins['AngleOffset']}, {ins['CellDensity']}).y",
        },
        _voronoi_ref)

# artistic --------------------------------------------------------------------

_simple("Fresnel", "artistic",
        (_in("Normal", _V3, (0.0, 0.0, 1.0), -1, 1), _in("ViewDir", _V3, (0.0, 0.0, 1.0), -1, 1),
         _in("Power", _F, (1.0,), 0.5, 8)),
        (_out("Out", _F),),
        "pow(1.0 - clamp(dot(normalize({Normal}), normalize({ViewDir})), 0.0, 1.0), {Power})",
        _fresnel_ref)
_simple("Posterize", "artistic",
        (_in("In", _D, (0.0,), -2, 2), _in("Steps", _D, (4.0,), 2, 10)),
        (_out("Out", _D),), "(floor({In} * {Steps}) / {Steps})", _posterize_ref)

# master ----------------------------------------------------------------------

def _master_slot(name, stype, default, lo, hi, stage, passthrough=False):
    return SlotSpec(name, stype, default, lo, hi,
                    randomizable=not passthrough, passthrough=passthrough, stage=stage)


MASTER_VERTEX_SLOTS = ("Position", "Normal", "Tangent")
MASTER_FRAGMENT_SLOTS = ("BaseColor", "NormalTS", "Metallic", "Smoothness",
                         "Occlusion", "Emission", "Alpha", "AlphaClipThreshold")

_register(NodeSpec(
    kind=MASTER_KIND,
    category="master",
    inputs=(
        _master_slot("Position", _V3, (0.0, 0.0, 0.0), None, None, "vertex", passthrough=True),
        _master_slot("Normal", _V3, (0.0, 0.0, 1.0), None, None, "vertex", passthrough=True),
        _master_slot("Tangent", _V3, (1.0, 0.0, 0.0), None, None, "vertex", passthrough=True),
        _master_slot("BaseColor", _V3, (0.5, 0.5, 0.5), 0.0, 1.0, "fragment"),
        _master_slot("NormalTS", _V3, (0.5, 0.5, 1.0), 0.0, 1.0, "fragment"),
        _master_slot("Metallic", _F, (0.0,), 0.0, 1.0, "fragment"),
        _master_slot("Smoothness", _F, (0.5,), 0.0, 1.0, "fragment"),
        _master_slot("Occlusion", _F, (1.0,), 0.0, 1.0, "fragment"),
        _master_slot("Emission", _V3, (0.0, 0.0, 0.0), 0.0, 1.0, "fragment"),
        _master_slot("Alpha", _F, (1.0,), 0.0, 1.0, "fragment"),
        _master_slot("AlphaClipThreshold", _F, (0.0,), 0.0, 1.0, "fragment"),
    ),
    outputs=(),
    emits_code=False,
))


# --------------------------------------------------------------------------
# public surface

def lookup(kind):
    try:
        return _SPECS[kind]
    except KeyError:
        raise UnknownKind(f"unknown node kind: {kind!r}") from None


def list_kinds(category=None):
    if category is None:
        return sorted(_SPECS)
    return sorted(k for k, s in _SPECS.items() if s.category == category)


NOISE_KINDS = tuple(list_kinds("noise"))


def master_spec():
    return _SPECS[MASTER_KIND]


def _slot_doc(slot):
    doc = {"name": slot.name, "type": slot.stype.name}
    if slot.default is not None:
        doc["default"] = list(slot.default)
    if slot.lo is not None:
        doc["range"] = [slot.lo, slot.hi]
    if slot.stage is not None:
        doc["stage"] = slot.stage
    if slot.passthrough:
        doc["passthrough"] = True
    return doc


def catalog_dump():
    """JSON-ready introspection dump, one object per NodeSpec."""
    out = []
    for kind in list_kinds():
        spec = _SPECS[kind]
        params = {}
        for name in sorted(spec.params):
            p = spec.params[name]
            if isinstance(p, PresetParam):
                params[name] = {"choices": list(p.choices), "default": p.default}
            else:
                params[name] = {"dim": p.dim, "range": [p.lo, p.hi], "default": list(p.default)}
        out.append({
            "kind": kind,
            "category": spec.category,
            "inputs": [_slot_doc(s) for s in spec.inputs],
            "outputs": [_slot_doc(s) for s in spec.outputs],
            "params": params,
            "emits_code": spec.emits_code,
        })
    return out
