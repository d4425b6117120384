from __future__ import annotations

import itertools

import pytest

from shaderevo import catalog
from shaderevo.catalog import (
    NOISE_KINDS,
    NumericParam,
    PresetParam,
    SemanticType,
    resolve_dynamic,
)
from shaderevo.errors import IncompatibleDimensions, UnknownKind


def oracle_resolution(spec, input_dims):
    """Independent restatement of the coercion rules: dynamic slots take the
    max dimension across dynamic inputs, Float broadcasts, larger vectors
    truncate, and 1 < M < N is illegal.  Returns None when illegal."""
    d = 1
    for slot, given in zip(spec.inputs, input_dims):
        if slot.stype is SemanticType.DYNAMIC:
            d = max(d, given)
    out = {}
    for slot, given in zip(spec.inputs, input_dims):
        target = d if slot.stype is SemanticType.DYNAMIC else slot.stype.value
        if not (given == target or given == 1 or given > target):
            return None
        out[slot.name] = target
    for slot in spec.outputs:
        out[slot.name] = d if slot.stype is SemanticType.DYNAMIC else slot.stype.value
    return out


def test_lookup_add_signature():
    spec = catalog.lookup("Add")
    assert [s.name for s in spec.inputs] == ["A", "B"]
    assert all(s.stype is SemanticType.DYNAMIC for s in spec.inputs)
    assert [s.name for s in spec.outputs] == ["Out"]
    assert spec.outputs[0].stype is SemanticType.DYNAMIC


def test_lookup_voronoi_signature():
    spec = catalog.lookup("Voronoi")
    assert spec.category == "noise"
    assert [(s.name, s.stype) for s in spec.inputs] == [
        ("UV", SemanticType.VEC2),
        ("AngleOffset", SemanticType.FLOAT),
        ("CellDensity", SemanticType.FLOAT),
    ]
    assert [(s.name, s.stype) for s in spec.outputs] == [
        ("Out", SemanticType.FLOAT),
        ("Cells", SemanticType.FLOAT),
    ]


def test_lookup_unknown_kind():
    with pytest.raises(UnknownKind):
        catalog.lookup("Banana")


def test_list_kinds_noise_matches_noisekind():
    assert catalog.list_kinds("noise") == ["GradientNoise", "SimpleNoise", "Voronoi"]
    assert list(NOISE_KINDS) == catalog.list_kinds("noise")


def test_list_kinds_master():
    assert catalog.list_kinds("master") == ["MasterNode"]


def test_list_kinds_absent_category():
    assert catalog.list_kinds("no-such-category") == []


def test_list_kinds_deterministic_and_sorted():
    a = catalog.list_kinds()
    b = catalog.list_kinds()
    assert a == b == sorted(a)
    assert len(a) == len(set(a))


def test_resolve_add_broadcast():
    spec = catalog.lookup("Add")
    resolved = resolve_dynamic(spec, [1, 3])
    assert resolved == {"A": 3, "B": 3, "Out": 3}


def test_resolve_add_identity():
    spec = catalog.lookup("Add")
    assert resolve_dynamic(spec, [1, 1]) == {"A": 1, "B": 1, "Out": 1}


def test_resolve_normalize_vec2():
    spec = catalog.lookup("Normalize")
    assert resolve_dynamic(spec, [2]) == {"In": 2, "Out": 2}


def test_resolve_against_oracle_all_pairs():
    """Exhaustive (dimA, dimB) in {1..4}^2 for the two-dynamic-input nodes."""
    for kind in ("Add", "Subtract", "Multiply", "Divide", "Power", "Step", "Dot"):
        spec = catalog.lookup(kind)
        for da, db in itertools.product((1, 2, 3, 4), repeat=2):
            expected = oracle_resolution(spec, [da, db])
            if expected is None:
                with pytest.raises(IncompatibleDimensions):
                    resolve_dynamic(spec, [da, db])
            else:
                assert resolve_dynamic(spec, [da, db]) == expected, (kind, da, db)


def _dim_combos(spec):
    axes = []
    for slot in spec.inputs:
        if slot.stype is SemanticType.DYNAMIC:
            axes.append((1, 2, 3, 4))
        else:
            axes.append((slot.stype.value,))
    return itertools.product(*axes)


def test_catalog_closure_templates_and_refs():
    """For every kind and legal dim/preset assignment the code template and
    the reference semantics accept exactly the resolved signature."""

    class Env:
        stage = "fragment"
        uv = (0.25, 0.75)
        object_position = (0.1, 0.2, 0.3)
        world_normal = (0.0, 0.0, 1.0)
        view_direction = (0.0, 0.0, 1.0)
        time = 1.25
        uniforms = {}

    class Node:
        id = "7"

    for kind in catalog.list_kinds():
        spec = catalog.lookup(kind)
        if spec.category == "master":
            continue
        presets = [(name, p.choices) for name, p in sorted(spec.params.items())
                   if isinstance(p, PresetParam)]
        preset_combos = itertools.product(*[c for _, c in presets]) if presets else [()]
        for preset_combo in preset_combos:
            node = Node()
            node.params = {}
            for name, p in sorted(spec.params.items()):
                if isinstance(p, NumericParam):
                    node.params[name] = tuple(p.default)
            for (name, _), value in zip(presets, preset_combo):
                node.params[name] = value
            node.slot_defaults = {s.name: tuple(s.default) for s in spec.inputs}
            for dims_combo in _dim_combos(spec):
                expected = oracle_resolution(spec, list(dims_combo))
                if expected is None:
                    continue
                resolved = resolve_dynamic(spec, list(dims_combo))
                assert resolved == expected
                ins_expr = {s.name: f"x{i}" for i, s in enumerate(spec.inputs)}
                out_exprs = spec.glsl(node, ins_expr, resolved, "fragment")
                for out in spec.outputs:
                    text = out_exprs[out.name]
                    assert text and text.count("(") == text.count(")")
                ins_val = {s.name: tuple(0.25 + 0.1 * k for k in range(resolved[s.name]))
                           for s in spec.inputs}
                out_vals = spec.ref(node, ins_val, Env())
                for out in spec.outputs:
                    assert len(out_vals[out.name]) == resolved[out.name], (kind, dims_combo)


def test_every_preset_list_nonempty_and_ranges_sane():
    for kind in catalog.list_kinds():
        spec = catalog.lookup(kind)
        for name, p in spec.params.items():
            if isinstance(p, PresetParam):
                assert len(p.choices) > 0
                assert p.default in p.choices
            else:
                assert p.lo <= p.hi
                assert len(p.default) == p.dim
                assert all(p.lo <= x <= p.hi for x in p.default)
        for slot in spec.inputs:
            if slot.lo is not None:
                assert slot.lo <= slot.hi
                assert all(slot.lo <= x <= slot.hi for x in slot.default) or slot.passthrough


def test_catalog_dump_shape():
    dump = catalog.catalog_dump()
    assert len(dump) == len(catalog.list_kinds())
    by_kind = {entry["kind"]: entry for entry in dump}
    assert by_kind["Voronoi"]["category"] == "noise"
    assert any(s["name"] == "CellDensity" for s in by_kind["Voronoi"]["inputs"])
    assert by_kind["MasterNode"]["outputs"] == []
