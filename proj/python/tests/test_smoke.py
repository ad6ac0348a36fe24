import json
import os
from pathlib import Path

import pytest

import toprorec

FIXTURES = Path(os.environ.get("TOPROREC_FIXTURES", Path(__file__).resolve().parents[2] / "tests" / "fixtures"))
GOLDEN = [2, 19, 21, 23, 30]


@pytest.fixture(scope="module")
def matrix():
    return toprorec.Matrix.load(FIXTURES / "golden_matrix.csv")


def test_golden_ranking(matrix):
    rec = toprorec.recommend(matrix, GOLDEN, tau=7)
    assert [e["program"] for e in rec][:3] == ["data-science", "bioinformatics", "industrial-engineering"]
    assert [e["pis"] for e in rec] == [113, 86, 546, 73, 585, 135, 822]
    assert rec[0]["score"] == 100.0
    assert abs(rec[-1]["score"] - 86.8) <= 0.05


def test_topic_scores(matrix):
    table = toprorec.topic_scores(matrix, GOLDEN, ["statistics", "history"])
    assert abs(table["rows"][0]["aggregate"] - 0.859) <= 0.001
    assert abs(table["rows"][1]["aggregate"] - 0.136) <= 0.001
    assert sum(table["rows"][0]["cells"]) == pytest.approx(table["rows"][0]["aggregate"])


def test_selection_errors(matrix):
    with pytest.raises(toprorec.SelectionError):
        toprorec.recommend(matrix, [])
    with pytest.raises(ValueError):
        toprorec.recommend(matrix, list(range(1, 10)))


def test_reachability(matrix):
    low = toprorec.reachability(matrix, phi=1, tau=3)
    high = toprorec.reachability(matrix, phi=1, tau=7)
    assert 0.0 <= low["rho"] <= high["rho"] <= 100.0
    assert low["subsets"] == 30


def test_personalization():
    assert toprorec.personalization([[1, 0, 1], [1, 0, 1]]) == pytest.approx(0.0, abs=1e-12)
    assert toprorec.personalization([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == pytest.approx(1.0, abs=1e-12)


def test_mine_and_build():
    catalog_json = json.dumps(
        {
            "programs": [
                {"id": "ocean", "name": "Ocean", "college": "Sci", "courses": ["c1", "c2"]},
                {"id": "music", "name": "Music", "college": "Arts", "courses": ["c3", "c4"]},
            ],
            "courses": [
                {"id": "c1", "name": "Marine biology", "description": "Marine ecosystems and ocean currents."},
                {"id": "c2", "name": "Oceanography", "description": "Ocean currents, tides and marine life."},
                {"id": "c3", "name": "Harmony", "description": "Music theory, harmony and composition."},
                {"id": "c4", "name": "Composition", "description": "Composition and music theory practice."},
            ],
        }
    )
    catalog = toprorec.Catalog.from_json(catalog_json)
    assert (catalog.n, catalog.m, catalog.edge_count) == (2, 4, 4)
    topics = toprorec.mine_topics(catalog, h=2, gamma=5, seed=3)
    assert topics == toprorec.mine_topics(catalog, h=2, gamma=5, seed=3)
    matrix = toprorec.Matrix.build(catalog, topics)
    assert matrix.topic_count == 2
    rec = toprorec.recommend(matrix, [1], tau=2)
    assert rec[0]["score"] == 100.0


def test_cleaning():
    words = toprorec.clean_description("Introduction to data structures.")
    assert "data structures" in words
    assert "to" not in words
