"""Shared fixtures: a deterministic synthetic curve corpus with conductor <= 10^4.

The corpus is generated from small a-invariants and deduplicated by reduced
minimal model, so every record is a distinct curve over Q. Everything here is
seed-free and ordering-stable so tests comparing bytes stay reproducible.
"""

import itertools

import pytest

from ellgal.curve import SingularModel, WeierstrassModel
from ellgal.family import Corpus, CurveRecord, build_family
from ellgal.localdata import global_reduce

CORPUS_CEILING = 10**4


def _generate_corpus():
    seen = {}
    for a1, a3, a2 in itertools.product((0, 1), (0, 1), (-1, 0, 1)):
        for a4 in range(-10, 11):
            for a6 in range(-10, 11):
                try:
                    model = WeierstrassModel(a1, a2, a3, a4, a6)
                except SingularModel:
                    continue
                red = global_reduce(model)
                if red.conductor <= CORPUS_CEILING:
                    seen.setdefault(red.minimal_model.ainvs(), red)
    records = tuple(
        CurveRecord(f"c{i:04d}", red.minimal_model, red)
        for i, (_, red) in enumerate(sorted(seen.items()))
    )
    return Corpus(records, ())


@pytest.fixture(scope="session")
def corpus():
    return _generate_corpus()


@pytest.fixture(scope="session")
def family_all(corpus):
    return build_family(corpus, "all", CORPUS_CEILING)


@pytest.fixture(scope="session")
def corpus_csv(tmp_path_factory, corpus):
    path = tmp_path_factory.mktemp("corpus") / "corpus.csv"
    lines = ["a1,a2,a3,a4,a6,label"]
    for rec in corpus.records:
        a1, a2, a3, a4, a6 = rec.model.ainvs()
        lines.append(f"{a1},{a2},{a3},{a4},{a6},{rec.label}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def small_corpus_csv(tmp_path_factory, corpus):
    """First 40 corpus curves; enough for CLI-level checks without the full cost."""
    path = tmp_path_factory.mktemp("corpus_small") / "small.csv"
    lines = ["a1,a2,a3,a4,a6,label"]
    for rec in corpus.records[:40]:
        a1, a2, a3, a4, a6 = rec.model.ainvs()
        lines.append(f"{a1},{a2},{a3},{a4},{a6},{rec.label}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
