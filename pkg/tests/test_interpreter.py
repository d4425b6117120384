from __future__ import annotations

import pytest

from shaderevo.interpreter import EvalContext, SENTINEL, interpret, shade, shade_genome

APPROX = 1e-6


def approx_vec(value, expected, tol=APPROX):
    assert len(value) == len(expected)
    for got, want in zip(value, expected):
        assert got == pytest.approx(want, abs=tol), (value, expected)


def test_defaults_only_genome(builder):
    g = builder().build()
    r = interpret(g, EvalContext())
    approx_vec(r.fragment["BaseColor"], (0.5, 0.5, 0.5))
    approx_vec(r.fragment["Alpha"], (1.0,))
    approx_vec(r.vertex["Position"], (0.0, 0.0, 0.0))
    approx_vec(r.vertex["Normal"], (0.0, 0.0, 1.0))
    assert not r.nonfinite


def test_lerp_closed_form(builder):
    # Lerp((0,0,0), (1,1,1), 0.25) -> (0.25, 0.25, 0.25)
    b = builder()
    a = b.node("Vec3Constant", params={"Value": (0.0, 0.0, 0.0)})
    c = b.node("Vec3Constant", params={"Value": (1.0, 1.0, 1.0)})
    t = b.node("FloatConstant", params={"Value": (0.25,)})
    lerp = b.node("Lerp")
    b.wire((a, "Out"), (lerp, "A")).wire((c, "Out"), (lerp, "B"))
    b.wire((t, "Out"), (lerp, "T")).to_master((lerp, "Out"), "BaseColor")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["BaseColor"], (0.25, 0.25, 0.25))


def test_saturate_clamps_above_one(builder):
    b = builder()
    c = b.node("FloatConstant", params={"Value": (1.8,)})
    s = b.node("Saturate")
    b.wire((c, "Out"), (s, "In")).to_master((s, "Out"), "Metallic")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["Metallic"], (1.0,))


def test_saturate_clamps_below_zero(builder):
    b = builder()
    c = b.node("FloatConstant", params={"Value": (-0.75,)})
    s = b.node("Saturate")
    b.wire((c, "Out"), (s, "In")).to_master((s, "Out"), "Smoothness")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["Smoothness"], (0.0,))


def test_add_broadcast_closed_form(builder):
    # Add(1.0, 2.0) broadcast into the Vec3 BaseColor slot -> (3,3,3)
    b = builder()
    x = b.node("FloatConstant", params={"Value": (1.0,)})
    y = b.node("FloatConstant", params={"Value": (2.0,)})
    add = b.node("Add")
    b.wire((x, "Out"), (add, "A")).wire((y, "Out"), (add, "B"))
    b.to_master((add, "Out"), "BaseColor")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["BaseColor"], (3.0, 3.0, 3.0))


def test_remap_closed_form(builder):
    # Remap(0.5 from [0,1] to [0,4]) = 2.0
    b = builder()
    c = b.node("FloatConstant", params={"Value": (0.5,)})
    rm = b.node("Remap", defaults={"InMinMax": (0.0, 1.0), "OutMinMax": (0.0, 4.0)})
    b.wire((c, "Out"), (rm, "In")).to_master((rm, "Out"), "Metallic")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["Metallic"], (2.0,))


def test_fresnel_closed_form(builder):
    # dot(N=(0,0,1), V=(0.6,0,0.8)) = 0.8 -> (1-0.8)^2 = 0.04
    b = builder()
    f = b.node("Fresnel", defaults={"Normal": (0.0, 0.0, 1.0),
                                    "ViewDir": (0.6, 0.0, 0.8),
                                    "Power": (2.0,)})
    b.to_master((f, "Out"), "Occlusion")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["Occlusion"], (0.04,))


def test_multiply_broadcast_chain(builder):
    # Multiply((1, 0.5, 2), 0.5) -> (0.5, 0.25, 1.0)
    b = builder()
    v = b.node("Vec3Constant", params={"Value": (1.0, 0.5, 2.0)})
    s = b.node("FloatConstant", params={"Value": (0.5,)})
    m = b.node("Multiply")
    b.wire((v, "Out"), (m, "A")).wire((s, "Out"), (m, "B"))
    b.to_master((m, "Out"), "Emission")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["Emission"], (0.5, 0.25, 1.0))


def test_one_minus_color(builder):
    b = builder()
    c = b.node("ColorConstant", params={"Value": (0.2, 0.4, 0.8)})
    om = b.node("OneMinus")
    b.wire((c, "Out"), (om, "In")).to_master((om, "Out"), "BaseColor")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["BaseColor"], (0.8, 0.6, 0.2))


def test_posterize_closed_form(builder):
    # floor(0.37 * 4) / 4 = 0.25
    b = builder()
    c = b.node("FloatConstant", params={"Value": (0.37,)})
    p = b.node("Posterize", defaults={"Steps": (4.0,)})
    b.wire((c, "Out"), (p, "In")).to_master((p, "Out"), "Metallic")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["Metallic"], (0.25,))


def test_smoothstep_closed_form(builder):
    # t = 0.25 -> t^2 (3 - 2t) = 0.15625
    b = builder()
    c = b.node("FloatConstant", params={"Value": (0.25,)})
    ss = b.node("SmoothStep", defaults={"Edge1": (0.0,), "Edge2": (1.0,)})
    b.wire((c, "Out"), (ss, "In")).to_master((ss, "Out"), "Alpha")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["Alpha"], (0.15625,))


def test_step_boundary(builder):
    b = builder()
    c = b.node("FloatConstant", params={"Value": (0.5,)})
    st = b.node("Step", defaults={"Edge": (0.5,)})
    b.wire((c, "Out"), (st, "In")).to_master((st, "Out"), "Metallic")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["Metallic"], (1.0,))  # 0.5 >= 0.5


def test_rotate_quarter_turn_through_split_combine(builder):
    # rotate (1, 0) by 90deg around the origin -> (0, 1)
    b = builder()
    v = b.node("Vec2Constant", params={"Value": (1.0, 0.0)})
    rot = b.node("Rotate", params={"Unit": "Degrees"},
                 defaults={"Center": (0.0, 0.0), "Rotation": (90.0,)})
    sp = b.node("Split")
    cm = b.node("Combine")
    b.wire((v, "Out"), (rot, "UV")).wire((rot, "Out"), (sp, "In"))
    b.wire((sp, "R"), (cm, "R")).wire((sp, "G"), (cm, "G"))
    b.to_master((cm, "RGB"), "BaseColor")
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["BaseColor"], (0.0, 1.0, 0.0))


def test_swizzle_pads_missing_components(builder):
    b = builder()
    c = b.node("FloatConstant", params={"Value": (0.7,)})
    sw = b.node("Swizzle", params={"Mask": "yx"})
    b.wire((c, "Out"), (sw, "In")).to_master((sw, "Out"), "Metallic")
    # input dim 1: 'y' reads 0, 'x' reads the value; Metallic truncates to .x
    r = interpret(b.build(), EvalContext())
    approx_vec(r.fragment["Metallic"], (0.0,))


def test_vertex_displacement_along_normal(builder):
    # Position = ObjectPosition + WorldNormal * 0.25
    b = builder()
    op = b.node("ObjectPosition")
    wn = b.node("WorldNormal")
    k = b.node("FloatConstant", params={"Value": (0.25,)})
    mul = b.node("Multiply")
    add = b.node("Add")
    b.wire((wn, "Out"), (mul, "A")).wire((k, "Out"), (mul, "B"))
    b.wire((op, "Out"), (add, "A")).wire((mul, "Out"), (add, "B"))
    b.to_master((add, "Out"), "Position")
    ctx = EvalContext(object_position=(1.0, 2.0, 3.0), world_normal=(0.0, 1.0, 0.0))
    r = interpret(b.build(), ctx)
    approx_vec(r.vertex["Position"], (1.0, 2.25, 3.0))


def test_division_by_zero_flags_nonfinite(builder):
    b = builder()
    a = b.node("FloatConstant", params={"Value": (1.0,)})
    z = b.node("FloatConstant", params={"Value": (0.0,)})
    d = b.node("Divide")
    b.wire((a, "Out"), (d, "A")).wire((z, "Out"), (d, "B"))
    b.to_master((d, "Out"), "Metallic")
    r = interpret(b.build(), EvalContext())
    assert r.nonfinite
    assert r.fragment["Metallic"][0] == SENTINEL


def test_time_and_panner(builder):
    b = builder()
    uv = b.node("UV")
    pan = b.node("Panner", defaults={"Speed": (0.5, -0.5)})
    sp = b.node("Split")
    b.wire((uv, "Out"), (pan, "UV")).wire((pan, "Out"), (sp, "In"))
    b.to_master((sp, "R"), "Metallic")
    ctx = EvalContext(uv=(0.25, 0.5), time=2.0)
    r = interpret(b.build(), ctx)
    approx_vec(r.fragment["Metallic"], (1.25,))  # 0.25 + 2.0 * 0.5


# ---------------------------------------------------------------------------
# shading model

def test_shade_ambient_only_when_light_grazes(builder):
    # N.L = 0 and V perpendicular to N: color = 0.03 * albedo
    g = builder().build()
    frag = dict(interpret(g, EvalContext()).fragment)
    frag["BaseColor"] = (0.2, 0.4, 0.8)
    result = shade(frag, lit=True, alpha_clip=False,
                   normal=(0.0, 0.0, 1.0), tangent=(1.0, 0.0, 0.0),
                   light_dir=(1.0, 0.0, 0.0), light_color=(1.0, 1.0, 1.0),
                   view_dir=(0.0, 1.0, 0.0))
    approx_vec(result.rgba, (0.006, 0.012, 0.024, 1.0))
    assert not result.discarded


def test_shade_unlit_passthrough(builder):
    b = builder(lit=False)
    c = b.node("ColorConstant", params={"Value": (1.0, 0.0, 0.0)})
    b.to_master((c, "Out"), "BaseColor")
    g = b.build()
    g = g.set_slot_default("0", "Alpha", (0.5,))
    result = shade_genome(g, EvalContext())
    approx_vec(result.rgba, (1.0, 0.0, 0.0, 0.5))


def test_shade_alpha_clip_discards(builder):
    b = builder(lit=False)
    t = b.node("FloatConstant", params={"Value": (0.5,)})
    b.to_master((t, "Out"), "AlphaClipThreshold")
    g = b.build()
    g = g.set_slot_default("0", "Alpha", (0.2,))
    result = shade_genome(g, EvalContext())
    assert result.discarded


def test_shade_full_diffuse_head_on():
    # N = L = V = +z, smoothness 0.5, metallic 0, occlusion 1:
    # diff = 1, H = z, spec = 1^64 * 0.04 = 0.04
    frag = {
        "BaseColor": (1.0, 1.0, 1.0), "NormalTS": (0.5, 0.5, 1.0),
        "Metallic": (0.0,), "Smoothness": (0.5,), "Occlusion": (1.0,),
        "Emission": (0.0, 0.0, 0.0), "Alpha": (1.0,), "AlphaClipThreshold": (0.0,),
    }
    result = shade(frag, lit=True, alpha_clip=False,
                   normal=(0.0, 0.0, 1.0), tangent=(1.0, 0.0, 0.0),
                   light_dir=(0.0, 0.0, 1.0), view_dir=(0.0, 0.0, 1.0))
    expected = 0.03 + 1.0 + 0.04
    approx_vec(result.rgba, (expected, expected, expected, 1.0))


def test_normal_ts_default_is_identity(builder):
    # default NormalTS (0.5, 0.5, 1) must leave the lit result identical to
    # an explicitly unperturbed normal
    g = builder().build()
    ctx = EvalContext(world_normal=(0.0, 1.0, 0.0), view_direction=(0.0, 1.0, 0.0))
    r = interpret(g, ctx)
    result = shade(r.fragment, lit=True, alpha_clip=False,
                   normal=r.vertex["Normal"], tangent=r.vertex["Tangent"],
                   light_dir=(0.0, 1.0, 0.0), view_dir=(0.0, 1.0, 0.0))
    # diff = 1 against the unperturbed normal
    base = 0.5
    expected = 1.0 * 0.03 * base + (base * 1.0 + 0.04 * 1.0)
    approx_vec(result.rgba[:3], (expected, expected, expected))
