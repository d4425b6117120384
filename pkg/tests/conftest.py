from __future__ import annotations

import random

import pytest

from shaderevo.genetics import MutationConfig, random_genome
from shaderevo.graph import Genome


class GenomeBuilder:
    """Tiny fluent helper for hand-constructing test genomes."""

    def __init__(self, lit=True):
        self.g = Genome.minimal(lit=lit)

    def node(self, kind, params=None, defaults=None):
        self.g, nid = self.g.add_node(kind, params=params, slot_defaults=defaults)
        return nid

    def wire(self, frm, to):
        self.g = self.g.connect(frm, to)
        return self

    def to_master(self, frm, slot):
        self.g = self.g.connect(frm, ("0", slot))
        return self

    def default(self, nid, slot, value):
        self.g = self.g.set_slot_default(nid, slot, value)
        return self

    def build(self):
        return self.g


@pytest.fixture
def builder():
    return GenomeBuilder


def make_pool(seed, count, mutation_count=4, lit_probability=0.5):
    rng = random.Random(seed)
    cfg = MutationConfig(mutation_count=mutation_count)
    return [random_genome(lit_probability, cfg, rng) for _ in range(count)]


@pytest.fixture(scope="session")
def random_pool():
    """Shared corpus of random valid genomes for fuzz-style tests."""
    return make_pool(seed=2024, count=60)
