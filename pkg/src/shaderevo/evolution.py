"""Steady-state interactive evolution loop.

The population is a single state machine: scoring, breeding and saving
mutate it in place and must be serialized through one writer (the HTTP
service does this with a lock).  Every piece of randomness flows from the
population's master random stream; breed events draw a per-event seed from
it, which the append-only action log records so a session replays exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .errors import (
    IdenticalParents,
    StorageFailure,
    TooManySeeds,
    UnknownIndividual,
)
from .genetics import MutationConfig, crossover, mutate, random_genome
from .graph import Genome

SCORES = (-1, 0, 1)


@dataclass
class Individual:
    id: int
    genome: Genome
    score: int = 0
    saved: bool = False
    born_generation: int = 0


@dataclass
class EvolutionConfig:
    capacity: int = 8
    offspring_count: int = 2
    tournament_size: int = 3
    lit_probability: float = 0.5
    mutation: MutationConfig = field(default_factory=MutationConfig)
    output_dir: Optional[str] = None

    def validate(self):
        if self.capacity < 2:
            raise ValueError("capacity must be at least 2")
        if self.offspring_count < 2 or self.offspring_count % 2 != 0:
            raise ValueError("offspring_count must be a positive even number")
        if self.offspring_count > self.capacity:
            raise ValueError("offspring_count cannot exceed capacity")
        if not 2 <= self.tournament_size <= self.capacity:
            raise ValueError("tournament_size must lie in [2, capacity]")
        if not 0.0 <= self.lit_probability <= 1.0:
            raise ValueError("lit_probability must lie in [0, 1]")
        self.mutation.validate()

    def to_doc(self):
        doc = {
            "capacity": self.capacity,
            "offspring_count": self.offspring_count,
            "tournament_size": self.tournament_size,
            "lit_probability": self.lit_probability,
            "mutation": self.mutation.to_doc(),
        }
        if self.output_dir is not None:
            doc["output_dir"] = str(self.output_dir)
        return doc

    @classmethod
    def from_doc(cls, doc):
        cfg = cls(
            capacity=int(doc.get("capacity", 8)),
            offspring_count=int(doc.get("offspring_count", 2)),
            tournament_size=int(doc.get("tournament_size", 3)),
            lit_probability=float(doc.get("lit_probability", 0.5)),
            mutation=MutationConfig.from_doc(doc.get("mutation", {})),
            output_dir=doc.get("output_dir"),
        )
        cfg.validate()
        return cfg


@dataclass
class Population:
    individuals: Dict[int, Individual]
    capacity: int
    generation: int
    rng: random.Random
    seed: Optional[int]
    next_individual_id: int

    def get(self, individual_id):
        try:
            return self.individuals[individual_id]
        except KeyError:
            raise UnknownIndividual(f"no individual with id {individual_id}") from None

    def ids(self):
        return list(self.individuals)

    def size(self):
        return len(self.individuals)


@dataclass
class BreedResult:
    new_ids: List[int]
    culled_ids: List[int]
    event_seed: Optional[int]
    parents: List[Tuple[int, int]]


def _adopt(population, genome, generation, lineage, created_at):
    individual_id = population.next_individual_id
    population.next_individual_id += 1
    stamped = genome.copy(metadata={
        "generation": generation,
        "lineage": list(lineage),
        "created_at": created_at,
    })
    population.individuals[individual_id] = Individual(
        id=individual_id, genome=stamped, score=0, saved=False,
        born_generation=generation,
    )
    return individual_id


def start_run(config, seeds=(), rng=None, created_at=""):
    """Build generation zero: the seeds plus mutated copies of them
    (round-robin) when seeds are given, otherwise random genomes."""
    config.validate()
    seed_value = None
    if rng is None or isinstance(rng, int):
        seed_value = rng
        rng = random.Random(rng)
    seeds = list(seeds)
    if len(seeds) > config.capacity:
        raise TooManySeeds(f"{len(seeds)} seeds exceed capacity {config.capacity}")
    population = Population(
        individuals={}, capacity=config.capacity, generation=0,
        rng=rng, seed=seed_value, next_individual_id=1,
    )
    if seeds:
        for genome in seeds:
            _adopt(population, genome, 0, [], created_at)
        i = 0
        while population.size() < config.capacity:
            base = seeds[i % len(seeds)]
            child = mutate(base, config.mutation, rng).genome
            _adopt(population, child, 0, [], created_at)
            i += 1
    else:
        while population.size() < config.capacity:
            genome = random_genome(config.lit_probability, config.mutation, rng)
            _adopt(population, genome, 0, [], created_at)
    return population


def set_score(population, individual_id, score):
    if score not in SCORES:
        raise ValueError(f"score must be one of {SCORES}, got {score!r}")
    population.get(individual_id).score = score
    return population


def select_parents_tournament(population, tournament_size, rng):
    """Two independent tournaments; each samples tournament_size distinct
    individuals and takes the best score, breaking ties uniformly."""
    ids = population.ids()
    if len(ids) < 2:
        raise ValueError("tournament selection needs at least two individuals")
    k = min(tournament_size, len(ids))

    def run_one():
        sample = rng.sample(ids, k)
        best = max(population.individuals[i].score for i in sample)
        winners = [i for i in sample if population.individuals[i].score == best]
        return winners[rng.randrange(len(winners))]

    first = run_one()
    second = run_one()
    redraws = 0
    while second == first and redraws < 8:
        second = run_one()
        redraws += 1
    return first, second


def breed(population, config, rng=None, parents=None, created_at=""):
    """Insert offspring_count mutated crossover children, then cull the same
    number uniformly from the non-new, non-saved individuals."""
    config.validate()
    if parents is not None:
        a, b = parents
        population.get(a)
        population.get(b)
        if a == b:
            raise IdenticalParents("manual breeding requires two distinct parents")
    event_seed = None
    if rng is None:
        event_seed = population.rng.getrandbits(64)
        rng = random.Random(event_seed)

    generation = population.generation + 1
    new_ids = []
    used_parents = []
    for _ in range(config.offspring_count // 2):
        if parents is not None:
            pa, pb = parents
        else:
            pa, pb = select_parents_tournament(population, config.tournament_size, rng)
        used_parents.append((pa, pb))
        genome_a = population.get(pa).genome
        genome_b = population.get(pb).genome
        child_a, child_b = crossover(genome_a, genome_b, rng)
        for child in (child_a, child_b):
            mutated = mutate(child, config.mutation, rng).genome
            new_ids.append(_adopt(population, mutated, generation, [pa, pb], created_at))

    eligible = [i for i in population.ids() if i not in new_ids
                and not population.individuals[i].saved]
    if len(eligible) < config.offspring_count:
        protected = [i for i in population.ids() if i not in new_ids
                     and population.individuals[i].saved]
        eligible = eligible + protected
    culled = sorted(rng.sample(eligible, config.offspring_count))
    for i in culled:
        del population.individuals[i]
    population.generation = generation
    return BreedResult(new_ids=new_ids, culled_ids=culled,
                       event_seed=event_seed, parents=used_parents)


def save_individual(population, individual_id, output_dir=None):
    """Mark an individual as saved (excluded from culling) and write its
    genome under <output_dir>/saved immediately; idempotent."""
    individual = population.get(individual_id)
    individual.saved = True
    if output_dir is None:
        return None
    from . import persistence

    try:
        target = Path(output_dir) / "saved" / f"{individual_id}.sgraph.json"
        return persistence.write_genome_file(target, individual.genome)
    except OSError as exc:
        raise StorageFailure(f"cannot save individual {individual_id}: {exc}") from exc


# ---------------------------------------------------------------------------
# action log and replay

class ActionLog:
    """Append-only JSON-lines log of every state mutation."""

    def __init__(self, path):
        self.path = Path(path)

    def append(self, record):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    def load(self):
        if not self.path.exists():
            return []
        records = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records


class ReplayMismatch(Exception):
    pass


def replay(records):
    """Re-run a logged session; returns (population, config).

    Raises ReplayMismatch when the re-run diverges from what the log
    recorded (seeds, offspring ids or culled ids differ).
    """
    from . import persistence

    population = None
    config = None
    for record in records:
        event = record["event"]
        if event == "start":
            config = EvolutionConfig.from_doc(record["config"])
            seeds = [persistence.genome_from_doc(doc) for doc in record.get("seeds", [])]
            population = start_run(config, seeds, record["seed"],
                                   created_at=record.get("ts", ""))
        elif event == "score":
            set_score(population, record["id"], record["score"])
        elif event == "breed":
            parents = record.get("parents")
            result = breed(population, config,
                           parents=tuple(parents) if parents else None,
                           created_at=record.get("ts", ""))
            if record.get("event_seed") is not None and result.event_seed != record["event_seed"]:
                raise ReplayMismatch("breed event seed diverged from the log")
            if record.get("new_ids") and result.new_ids != record["new_ids"]:
                raise ReplayMismatch("offspring ids diverged from the log")
            if record.get("culled_ids") is not None and result.culled_ids != record["culled_ids"]:
                raise ReplayMismatch("culled ids diverged from the log")
        elif event == "save":
            save_individual(population, record["id"], output_dir=None)
        elif event == "config":
            config = EvolutionConfig.from_doc(record["config"])
        else:
            raise ValueError(f"unknown action log event {event!r}")
    return population, config
