from __future__ import annotations

import itertools
import random

import pytest

from shaderevo import catalog
from shaderevo.errors import (
    CannotRemoveMaster,
    TypeMismatch,
    UnknownNode,
    UnknownSlot,
    WouldCycle,
)
from shaderevo.genetics import MutationConfig, random_genome
from shaderevo.graph import Genome


def closure_oracle(node_ids, edges):
    """Floyd-Warshall-style transitive closure over (from, to) node pairs."""
    reach = {(a, b): False for a in node_ids for b in node_ids}
    for a, b in edges:
        reach[(a, b)] = True
    for k in node_ids:
        for i in node_ids:
            if reach[(i, k)]:
                for j in node_ids:
                    if reach[(k, j)]:
                        reach[(i, j)] = True
    return reach


def is_topological(order, edges):
    pos = {nid: i for i, nid in enumerate(order)}
    return all(pos[a] < pos[b] for a, b in edges)


def test_minimal_genome_validates():
    g = Genome.minimal(lit=True)
    report = g.validate()
    assert report.ok
    assert report.orphans == []


def test_two_node_cycle_reports_violation():
    g = Genome.minimal()
    g, a = g.add_node("Add")
    g, b = g.add_node("Add")
    # force the back edge directly; connect() would refuse it
    g.in_edges[(b, "A")] = (a, "Out")
    g.in_edges[(a, "A")] = (b, "Out")
    report = g.validate()
    assert any(v.kind == "cycle" for v in report.violations)


def test_vec2_into_vec3_slot_is_type_violation():
    g = Genome.minimal()
    g, uv = g.add_node("UV")  # Vec2 output
    g.in_edges[("0", "BaseColor")] = (uv, "Out")  # bypass connect's checks
    report = g.validate()
    assert any(v.kind == "type" for v in report.violations)


def test_connect_rejects_vec2_to_vec3():
    g = Genome.minimal()
    g, uv = g.add_node("UV")
    with pytest.raises(TypeMismatch):
        g.connect((uv, "Out"), ("0", "BaseColor"))


def test_topo_order_chain():
    g = Genome.minimal()
    g, uv = g.add_node("UV")
    g, vor = g.add_node("Voronoi")
    g = g.connect((uv, "Out"), (vor, "UV"))
    g = g.connect((vor, "Out"), ("0", "Metallic"))
    assert g.topo_order() == [uv, vor, "0"]


def test_topo_order_tie_break_by_id():
    g = Genome.minimal()
    g, a = g.add_node("FloatConstant")
    g, b = g.add_node("FloatConstant")
    order = g.topo_order()
    assert order == sorted(order, key=int)


def test_topo_order_diamond_against_bruteforce():
    g = Genome.minimal()
    g, uv = g.add_node("UV")
    g, m1 = g.add_node("Multiply")
    g, m2 = g.add_node("Multiply")
    g, lerp = g.add_node("Lerp")
    g = g.connect((uv, "Out"), (m1, "A"))
    g = g.connect((uv, "Out"), (m2, "A"))
    g = g.connect((m1, "Out"), (lerp, "A"))
    g = g.connect((m2, "Out"), (lerp, "B"))
    g = g.connect((lerp, "Out"), ("0", "Metallic"))  # Vec2 truncates into Float

    edges = [(frm[0], to[0]) for frm, to in g.edge_list()]
    order = g.topo_order()
    assert is_topological(order, edges)
    # brute force: the chosen order must be among all valid topological orders
    valid = [
        list(perm) for perm in itertools.permutations(g.nodes)
        if is_topological(list(perm), edges)
    ]
    assert order in valid
    assert g.topo_order() == order  # deterministic


def test_upstream_chain_and_source():
    g = Genome.minimal()
    g, c = g.add_node("FloatConstant")
    g, s = g.add_node("Sin")
    g = g.connect((c, "Out"), (s, "In"))
    g = g.connect((s, "Out"), ("0", "Metallic"))
    assert g.upstream_set("0") == {c, s}
    assert g.upstream_set(s) == {c}
    assert g.upstream_set(c) == set()
    with pytest.raises(UnknownNode):
        g.upstream_set("99")


def test_upstream_matches_closure_oracle_on_random_dags():
    rng = random.Random(11)
    for trial in range(20):
        g = Genome.minimal()
        ids = []
        for _ in range(rng.randrange(4, 16)):
            g, nid = g.add_node("Add")
            ids.append(nid)
        for i, nid in enumerate(ids):
            for earlier in ids[:i]:
                if rng.random() < 0.3:
                    slot = rng.choice(["A", "B"])
                    if (nid, slot) not in g.in_edges:
                        g.in_edges[(nid, slot)] = (earlier, "Out")
        node_ids = list(g.nodes)
        edges = [(frm[0], to[0]) for to, frm in g.in_edges.items()]
        reach = closure_oracle(node_ids, edges)
        for nid in node_ids:
            expected = {a for a in node_ids if a != nid and reach[(a, nid)]}
            assert g.upstream_set(nid) == expected
            expected_down = {b for b in node_ids if b != nid and reach[(nid, b)]}
            assert g.downstream_set(nid) == expected_down


def test_subtree_for_unconnected_slot_is_empty():
    g = Genome.minimal()
    sub = g.subtree_for_slot("BaseColor")
    assert sub.root is None and sub.node_ids == frozenset() and sub.edges == ()


def test_subtree_chain():
    g = Genome.minimal()
    g, uv = g.add_node("UV")
    g, vor = g.add_node("Voronoi")
    g = g.connect((uv, "Out"), (vor, "UV"))
    g = g.connect((vor, "Out"), ("0", "Metallic"))
    sub = g.subtree_for_slot("Metallic")
    assert sub.node_ids == {uv, vor}
    assert len(sub.edges) == 2
    with pytest.raises(UnknownSlot):
        g.subtree_for_slot("NoSuchSlot")


def test_shared_node_appears_in_both_subtrees():
    g = Genome.minimal()
    g, uv = g.add_node("UV")
    g, vor = g.add_node("Voronoi")
    g, noise_ = g.add_node("GradientNoise")
    g = g.connect((uv, "Out"), (vor, "UV"))
    g = g.connect((uv, "Out"), (noise_, "UV"))
    g = g.connect((vor, "Out"), ("0", "Metallic"))
    g = g.connect((noise_, "Out"), ("0", "Smoothness"))
    assert uv in g.subtree_for_slot("Metallic").node_ids
    assert uv in g.subtree_for_slot("Smoothness").node_ids


def test_connect_float_constant_to_metallic():
    g = Genome.minimal()
    g, c = g.add_node("FloatConstant")
    g = g.connect((c, "Out"), ("0", "Metallic"))
    assert g.validate().ok
    assert g.subtree_for_slot("Metallic").node_ids == {c}


def test_connect_back_edge_raises_and_leaves_genome_unchanged():
    g = Genome.minimal()
    g, a = g.add_node("Sin")
    g, b = g.add_node("Cos")
    g = g.connect((a, "Out"), (b, "In"))
    before = g.copy()
    with pytest.raises(WouldCycle):
        g.connect((b, "Out"), (a, "In"))
    assert g.structurally_equal(before)


def test_remove_mid_chain_node_prunes_upstream():
    g = Genome.minimal()
    g, c = g.add_node("FloatConstant")
    g, s = g.add_node("Sin")
    g = g.connect((c, "Out"), (s, "In"))
    g = g.connect((s, "Out"), ("0", "Metallic"))
    g2 = g.remove_node(s)
    assert g2.validate().ok
    assert ("0", "Metallic") not in g2.in_edges  # slot reverts to default
    assert c not in g2.nodes  # orphaned constant pruned
    with pytest.raises(CannotRemoveMaster):
        g2.remove_node("0")


def test_unlit_slot_restriction():
    g = Genome.minimal(lit=False)
    g, c = g.add_node("FloatConstant")
    g.in_edges[("0", "Metallic")] = (c, "Out")
    report = g.validate()
    assert any(v.kind == "unlit_slot" for v in report.violations)
    g2 = Genome.minimal(lit=False)
    g2, c2 = g2.add_node("FloatConstant")
    g2 = g2.connect((c2, "Out"), ("0", "Alpha"))
    assert g2.validate().ok


def test_normalize_idempotent_on_random_genomes(random_pool):
    for g in random_pool[:20]:
        once = g.normalize()
        twice = once.normalize()
        assert once.structurally_equal(twice)
        assert once.validate().orphans == []


def test_editing_closure_random_edit_sequences():
    """Any sequence of successful edits keeps the genome valid."""
    rng = random.Random(99)
    kinds = ["Add", "Multiply", "Sin", "FloatConstant", "UV", "Voronoi",
             "Lerp", "Combine", "Split", "Fresnel"]
    for trial in range(15):
        g = random_genome(0.5, MutationConfig(mutation_count=3), rng)
        for _ in range(30):
            action = rng.random()
            try:
                if action < 0.35:
                    g, _ = g.add_node(rng.choice(kinds), rng=rng)
                elif action < 0.75:
                    ids = g.sorted_ids()
                    frm = rng.choice(ids)
                    to = rng.choice(ids)
                    outputs = [s.name for s in catalog.lookup(g.nodes[frm].kind).outputs]
                    inputs = [s.name for s in catalog.lookup(g.nodes[to].kind).inputs]
                    if not outputs or not inputs:
                        continue
                    g = g.connect((frm, rng.choice(outputs)), (to, rng.choice(inputs)))
                elif action < 0.9 and g.in_edges:
                    to = rng.choice(sorted(g.in_edges, key=lambda k: (int(k[0]), k[1])))
                    g = g.disconnect(to)
                else:
                    ids = [n for n in g.sorted_ids() if n != g.master_id]
                    if ids:
                        g = g.remove_node(rng.choice(ids))
            except (WouldCycle, TypeMismatch, UnknownSlot, UnknownNode):
                continue
            assert g.validate().ok


def test_replace_slot_subtree_self_identity():
    rng = random.Random(5)
    g = random_genome(1.0, MutationConfig(mutation_count=4), rng)
    connected = [s for s in ("BaseColor", "Metallic", "Smoothness", "Emission")
                 if (g.master_id, s) in g.in_edges]
    if not connected:
        g, c = g.add_node("FloatConstant")
        g = g.connect((c, "Out"), ("0", "Metallic"))
        connected = ["Metallic"]
    slot = connected[0]
    clone = g.replace_slot_subtree(slot, g)
    assert clone.validate().ok
    assert clone.structurally_equal(g, include_metadata=False)
