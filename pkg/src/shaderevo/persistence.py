"""Bit-stable genome file format and population directory layout.

Documents are JSON with a fixed key order and shortest round-trip float
formatting, so serialize(parse(serialize(g))) is byte-identical to
serialize(g).  Writes go to a temp file in the target directory followed by
an atomic rename; the manifest is written last so a population directory is
never observable half-written.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import tempfile
from pathlib import Path

from . import catalog
from .catalog import PresetParam
from .errors import ManifestMismatch, ParseError, SchemaError, StorageFailure, VersionError
from .evolution import EvolutionConfig, Individual, Population
from .graph import Genome, NodeInstance, ensure_valid

FORMAT_VERSION = 1
GENOME_SUFFIX = ".sgraph.json"
MANIFEST_NAME = "population.json"


# ---------------------------------------------------------------------------
# genome documents

def genome_to_doc(genome):
    nodes = []
    for nid in genome.sorted_ids():
        if nid == genome.master_id:
            continue
        node = genome.nodes[nid]
        entry = {
            "id": node.id,
            "kind": node.kind,
            "params": {
                name: (list(v) if isinstance(v, tuple) else v)
                for name, v in sorted(node.params.items())
            },
            "slot_defaults": {name: list(v) for name, v in sorted(node.slot_defaults.items())},
        }
        if node.layout is not None:
            entry["layout"] = list(node.layout)
        nodes.append(entry)
    edges = [
        {"from": [frm[0], frm[1]], "to": [to[0], to[1]]}
        for frm, to in genome.edge_list()
    ]
    return {
        "format_version": FORMAT_VERSION,
        "lit": genome.lit,
        "nodes": nodes,
        "edges": edges,
        "master": {
            "id": genome.master_id,
            "slot_defaults": {
                name: list(v) for name, v in sorted(genome.master.slot_defaults.items())
            },
        },
        "metadata": {
            "created_at": genome.metadata.get("created_at", ""),
            "generation": genome.metadata.get("generation", 0),
            "lineage": list(genome.metadata.get("lineage", [])),
        },
    }


def serialize_genome(genome):
    ensure_valid(genome)
    return json.dumps(genome_to_doc(genome), indent=2) + "\n"


def _require(doc, key, types, where):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"missing field {where}.{key}", field=f"{where}.{key}")
    value = doc[key]
    if not isinstance(value, types):
        raise SchemaError(f"field {where}.{key} has the wrong type", field=f"{where}.{key}")
    return value


def _float_vector(value, where):
    if not isinstance(value, list) or not all(isinstance(x, (int, float)) for x in value):
        raise SchemaError(f"{where} must be a list of numbers", field=where)
    return tuple(float(x) for x in value)


def _parse_node(entry, index):
    where = f"nodes[{index}]"
    nid = _require(entry, "id", str, where)
    kind = _require(entry, "kind", str, where)
    try:
        spec = catalog.lookup(kind)
    except Exception:
        raise SchemaError(f"unknown node kind {kind!r}", field=f"{where}.kind") from None
    raw_params = _require(entry, "params", dict, where)
    params = {}
    for name, value in raw_params.items():
        p = spec.params.get(name)
        if p is None:
            raise SchemaError(f"{kind} has no param {name!r}", field=f"{where}.params.{name}")
        if isinstance(p, PresetParam):
            if not isinstance(value, str):
                raise SchemaError(f"preset param {name} must be a string",
                                  field=f"{where}.params.{name}")
            params[name] = value
        else:
            params[name] = _float_vector(value, f"{where}.params.{name}")
    raw_defaults = _require(entry, "slot_defaults", dict, where)
    defaults = {}
    for name, value in raw_defaults.items():
        if spec.input_slot(name) is None:
            raise SchemaError(f"{kind} has no input slot {name!r}",
                              field=f"{where}.slot_defaults.{name}")
        defaults[name] = _float_vector(value, f"{where}.slot_defaults.{name}")
    layout = None
    if "layout" in entry:
        layout = tuple(_float_vector(entry["layout"], f"{where}.layout"))
    return NodeInstance(nid, kind, params, defaults, layout)


def genome_from_doc(doc):
    version = _require(doc, "format_version", int, "genome")
    if version != FORMAT_VERSION:
        raise VersionError(f"unsupported format_version {version}")
    lit = _require(doc, "lit", bool, "genome")
    master_doc = _require(doc, "master", dict, "genome")
    master_id = _require(master_doc, "id", str, "master")
    master_spec = catalog.master_spec()
    master_defaults = {}
    raw = _require(master_doc, "slot_defaults", dict, "master")
    for name, value in raw.items():
        if master_spec.input_slot(name) is None:
            raise SchemaError(f"master has no slot {name!r}", field=f"master.slot_defaults.{name}")
        master_defaults[name] = _float_vector(value, f"master.slot_defaults.{name}")
    for slot in master_spec.inputs:
        if slot.name not in master_defaults:
            raise SchemaError(f"master.slot_defaults missing {slot.name}",
                              field=f"master.slot_defaults.{slot.name}")

    nodes = {master_id: NodeInstance(master_id, catalog.MASTER_KIND, {}, master_defaults)}
    for i, entry in enumerate(_require(doc, "nodes", list, "genome")):
        node = _parse_node(entry, i)
        if node.id in nodes:
            raise SchemaError(f"duplicate node id {node.id!r}", field=f"nodes[{i}].id")
        nodes[node.id] = node

    in_edges = {}
    for i, entry in enumerate(_require(doc, "edges", list, "genome")):
        where = f"edges[{i}]"
        frm = _require(entry, "from", list, where)
        to = _require(entry, "to", list, where)
        if len(frm) != 2 or len(to) != 2:
            raise SchemaError(f"{where} endpoints must be [node, slot] pairs", field=where)
        from_id, from_slot = str(frm[0]), str(frm[1])
        to_id, to_slot = str(to[0]), str(to[1])
        for endpoint in (from_id, to_id):
            if endpoint not in nodes:
                raise SchemaError(f"{where} references unknown node {endpoint!r}", field=where)
        from_spec = catalog.lookup(nodes[from_id].kind)
        to_spec = catalog.lookup(nodes[to_id].kind)
        if from_spec.output_slot(from_slot) is None:
            raise SchemaError(f"{where}: {nodes[from_id].kind} has no output {from_slot!r}",
                              field=where)
        if to_spec.input_slot(to_slot) is None:
            raise SchemaError(f"{where}: {nodes[to_id].kind} has no input {to_slot!r}",
                              field=where)
        if (to_id, to_slot) in in_edges:
            raise SchemaError(f"{where}: input slot {to_id}.{to_slot} already connected",
                              field=where)
        in_edges[(to_id, to_slot)] = (from_id, from_slot)

    metadata = {"created_at": "", "generation": 0, "lineage": []}
    if "metadata" in doc and isinstance(doc["metadata"], dict):
        meta = doc["metadata"]
        metadata["created_at"] = meta.get("created_at", "")
        metadata["generation"] = int(meta.get("generation", 0))
        metadata["lineage"] = list(meta.get("lineage", []))

    next_id = max((int(nid) for nid in nodes), default=0) + 1
    return Genome(nodes=nodes, in_edges=in_edges, master_id=master_id,
                  lit=lit, metadata=metadata, next_id=next_id)


def parse_genome(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    return genome_from_doc(doc)


def genome_sha256(genome):
    return hashlib.sha256(serialize_genome(genome).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# atomic file writes

def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


def write_genome_file(path, genome):
    try:
        return _atomic_write(path, serialize_genome(genome))
    except OSError as exc:
        raise StorageFailure(f"cannot write genome file {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# population directories

def _rng_state_to_doc(state):
    version, internal, gauss = state
    return [version, list(internal), gauss]


def _rng_state_from_doc(doc):
    version, internal, gauss = doc
    return (version, tuple(internal), gauss)


def population_manifest_doc(population, config):
    entries = []
    for individual in population.individuals.values():
        entries.append({
            "id": individual.id,
            "file": f"{individual.id}{GENOME_SUFFIX}",
            "score": individual.score,
            "saved": individual.saved,
            "born_generation": individual.born_generation,
            "sha256": genome_sha256(individual.genome),
        })
    return {
        "format_version": FORMAT_VERSION,
        "capacity": population.capacity,
        "generation": population.generation,
        "seed": population.seed,
        "next_individual_id": population.next_individual_id,
        "rng_state": _rng_state_to_doc(population.rng.getstate()),
        "config": config.to_doc(),
        "individuals": entries,
    }


def population_state_text(population, config):
    """Canonical snapshot of the full population state, genomes included;
    two equal-state populations produce byte-identical text."""
    doc = population_manifest_doc(population, config)
    doc["genomes"] = {
        str(i.id): genome_to_doc(i.genome) for i in population.individuals.values()
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_population(directory, population, config):
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        manifest = population_manifest_doc(population, config)
        keep = set()
        for individual in population.individuals.values():
            name = f"{individual.id}{GENOME_SUFFIX}"
            keep.add(name)
            _atomic_write(directory / name, serialize_genome(individual.genome))
        for stale in directory.glob(f"*{GENOME_SUFFIX}"):
            if stale.name not in keep:
                stale.unlink()
        _atomic_write(directory / MANIFEST_NAME, json.dumps(manifest, indent=2) + "\n")
    except OSError as exc:
        raise StorageFailure(f"cannot write population directory {directory}: {exc}") from exc
    return directory


def load_population(directory):
    """Rebuild a population (and its config) from a directory; subsequent
    behaviour is identical because the rng state is restored exactly."""
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.exists():
        raise ManifestMismatch(f"missing manifest {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestMismatch(f"unreadable manifest {manifest_path}: {exc}") from exc
    if manifest.get("format_version") != FORMAT_VERSION:
        raise VersionError(f"unsupported manifest version {manifest.get('format_version')}")

    config = EvolutionConfig.from_doc(manifest["config"])
    individuals = {}
    seen = set()
    for entry in manifest["individuals"]:
        if entry["id"] in seen:
            raise ManifestMismatch(f"duplicate individual id {entry['id']}")
        seen.add(entry["id"])
        path = directory / entry["file"]
        if not path.exists():
            raise ManifestMismatch(f"missing genome file {entry['file']}")
        text = path.read_text(encoding="utf-8")
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        if digest != entry["sha256"]:
            raise ManifestMismatch(f"hash mismatch for {entry['file']}")
        genome = parse_genome(text)
        individuals[entry["id"]] = Individual(
            id=entry["id"], genome=genome, score=entry["score"],
            saved=entry["saved"], born_generation=entry["born_generation"],
        )
    rng = random.Random()
    rng.setstate(_rng_state_from_doc(manifest["rng_state"]))
    population = Population(
        individuals=individuals,
        capacity=manifest["capacity"],
        generation=manifest["generation"],
        rng=rng,
        seed=manifest.get("seed"),
        next_individual_id=manifest["next_individual_id"],
    )
    return population, config
