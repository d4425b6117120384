"""Differential testing: the emitted GLSL, re-parsed and evaluated by the
independent oracle in glsl_eval.py, must agree with the CPU interpreter on
every fragment master slot (contexts flagged non-finite are skipped)."""

from __future__ import annotations

import math
import random

from shaderevo import codegen
from shaderevo.catalog import MASTER_FRAGMENT_SLOTS
from shaderevo.interpreter import EvalContext, interpret, shade_genome

import glsl_eval
from conftest import make_pool

TOLERANCE = 1e-5


def random_ctx(rng):
    def unit3():
        while True:
            v = (rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1))
            n = math.sqrt(sum(x * x for x in v))
            if n > 1e-3:
                return tuple(x / n for x in v)

    return EvalContext(
        uv=(rng.uniform(-2, 2), rng.uniform(-2, 2)),
        object_position=(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)),
        world_normal=unit3(),
        view_direction=unit3(),
        time=rng.uniform(0, 20),
    )


def ctx_values(ctx):
    return {
        "uv": ctx.uv,
        "object_position": ctx.object_position,
        "world_normal": ctx.world_normal,
        "view_direction": ctx.view_direction,
        "time": ctx.time,
        "uniforms": {},
    }


def compare_genome(genome, contexts):
    """Returns (compared, skipped); raises AssertionError on any mismatch."""
    bundle = codegen.compile(genome)
    doc = bundle.to_doc()
    emitted_slots = [s for s in MASTER_FRAGMENT_SLOTS
                     if f"m_{s}" in bundle.fragment_src]
    compared = skipped = 0
    for ctx in contexts:
        result = interpret(genome, ctx)
        if result.nonfinite:
            skipped += 1
            continue
        _, frag_env, discarded = glsl_eval.evaluate_bundle(doc, ctx_values(ctx))
        bad = False
        for slot in emitted_slots:
            want = result.fragment[slot]
            got = frag_env[f"m_{slot}"]
            got = (got,) if isinstance(got, float) else got
            if any(not math.isfinite(x) for x in got):
                bad = True
                break
            assert len(got) == len(want), (slot, got, want)
            for g_val, w_val in zip(got, want):
                assert abs(g_val - w_val) <= TOLERANCE, (
                    slot, got, want, genome.metadata)
        if bad:
            skipped += 1
            continue
        # the full shading path too: interpreter shade() vs the emitted
        # shading block evaluated by the oracle
        shaded = shade_genome(genome, ctx)
        assert shaded.discarded == discarded
        if not discarded:
            color = frag_env["fragColor"]
            finite = all(math.isfinite(x) for x in color) and \
                all(math.isfinite(x) for x in shaded.rgba)
            if finite:
                for g_val, w_val in zip(color, shaded.rgba):
                    assert abs(g_val - w_val) <= TOLERANCE, (color, shaded.rgba)
        compared += 1
    return compared, skipped


def test_differential_random_corpus():
    rng = random.Random(31337)
    pool = make_pool(seed=4242, count=40, mutation_count=5)
    contexts = [random_ctx(rng) for _ in range(16)]
    total = total_skipped = 0
    for genome in pool:
        compared, skipped = compare_genome(genome, contexts)
        total += compared
        total_skipped += skipped
    # the corpus must be overwhelmingly comparable, not degenerate
    assert total > total_skipped * 3
    assert total >= 300


def test_differential_handles_vertex_stage(builder):
    # vertex-modified normals flow into the fragment stage through v_normal
    b = builder()
    wn = b.node("WorldNormal")
    c = b.node("Vec3Constant", params={"Value": (0.3, 0.9, 0.1)})
    add = b.node("Add")
    b.wire((wn, "Out"), (add, "A")).wire((c, "Out"), (add, "B"))
    b.to_master((add, "Out"), "Normal")
    f = b.node("Fresnel")
    wn2 = b.node("WorldNormal")
    vd = b.node("ViewDirection")
    b.wire((wn2, "Out"), (f, "Normal")).wire((vd, "Out"), (f, "ViewDir"))
    b.to_master((f, "Out"), "Metallic")
    genome = b.build()
    rng = random.Random(1)
    compared, skipped = compare_genome(genome, [random_ctx(rng) for _ in range(32)])
    assert compared >= 30


def test_differential_node_shared_across_stages(builder):
    # one emitting node feeds both a vertex slot and a fragment slot; its
    # assignment must appear in both translation units and agree with the
    # interpreter in each
    b = builder()
    c = b.node("FloatConstant", params={"Value": (0.3,)})
    t = b.node("FloatConstant", params={"Value": (1.7,)})
    add = b.node("Add")
    b.wire((c, "Out"), (add, "A")).wire((t, "Out"), (add, "B"))
    b.to_master((add, "Out"), "Metallic")
    op = b.node("ObjectPosition")
    mul = b.node("Multiply")
    b.wire((op, "Out"), (mul, "A")).wire((add, "Out"), (mul, "B"))
    b.to_master((mul, "Out"), "Position")
    genome = b.build()

    from shaderevo import codegen

    bundle = codegen.compile(genome)
    assert f"n{add}_Out" in bundle.vertex_src
    assert f"n{add}_Out" in bundle.fragment_src
    rng = random.Random(3)
    contexts = [random_ctx(rng) for _ in range(16)]
    compared, _skipped = compare_genome(genome, contexts)
    assert compared == 16
    # and the vertex side: Position = object_position * (0.3 + 1.7)
    ctx = contexts[0]
    result = interpret(genome, ctx)
    expected = tuple(x * 2.0 for x in ctx.object_position)
    for got, want in zip(result.vertex["Position"], expected):
        assert abs(got - want) < 1e-9


def test_differential_connected_tangent_flows_into_shading(builder):
    b = builder()
    wn = b.node("WorldNormal")
    cr = b.node("Cross", defaults={"B": (0.0, 1.0, 0.0)})
    b.wire((wn, "Out"), (cr, "A"))
    b.to_master((cr, "Out"), "Tangent")
    genome = b.build()
    from shaderevo import codegen

    bundle = codegen.compile(genome)
    assert "vec3 m_Tangent = " in bundle.vertex_src
    assert "sg_t0" not in bundle.vertex_src  # fallback replaced by the subtree
    rng = random.Random(4)
    compared, _ = compare_genome(genome, [random_ctx(rng) for _ in range(16)])
    assert compared >= 14  # cross() can null out for normals parallel to +y


def test_differential_noise_nodes(builder):
    b = builder()
    uv = b.node("UV")
    for kind, slot in (("GradientNoise", "Metallic"), ("SimpleNoise", "Smoothness"),
                       ("Voronoi", "Occlusion")):
        n = b.node(kind)
        b.wire((uv, "Out"), (n, "UV")).to_master((n, "Out"), slot)
    vor = b.node("Voronoi")
    b.wire((uv, "Out"), (vor, "UV")).to_master((vor, "Cells"), "Alpha")
    genome = b.build()
    rng = random.Random(2)
    compared, skipped = compare_genome(genome, [random_ctx(rng) for _ in range(32)])
    assert compared == 32
