import json
import math
import os
import subprocess

import pytest

import folknet


@pytest.fixture
def small():
    return folknet.build_network(
        [
            ("mu", "i", ["rock", "metal"]),
            ("mu", "j", "jazz"),
            ("la", "i", "rock"),
            ("la", "k", ["Jazz "]),
        ]
    )


def test_network_basics(small):
    assert small.users == ["mu", "la"]
    assert sorted(small.tags) == ["jazz", "metal", "rock"]
    assert small.weight("mu", "i", "rock") == (1, 2)
    stats = small.stats()
    assert stats["ownerships"] == 4
    assert stats["links"] == 5


def test_unknown_names_raise_data_error(small):
    with pytest.raises(folknet.DataError, match="nobody"):
        small.diversity("nobody")
    assert issubclass(folknet.DataError, ValueError)


def test_cosine_and_matrix(small):
    assert small.cosine("users-via-items", "mu", "mu") == pytest.approx(1.0)
    m = small.correlation("tags")
    assert len(m) == 3
    rows = m.to_list()
    assert all(rows[a][b] == rows[b][a] for a in range(3) for b in range(3))
    assert m.to_csv().startswith(",")
    with pytest.raises(ValueError):
        small.correlation("tags", view="users-via-items")


def test_planted_tree_recovers_communities():
    rows, truth = folknet.generate_planted(p_inter=0.0, seed=3)
    net = folknet.build_network(rows)
    tree = folknet.build_tree(net.correlation("tags"))
    assert tree.levels[0] == 0.0
    level0 = [i for i in tree.level(0) if len(i["members"]) > 1]
    assert len(level0) == 3
    for island in level0:
        assert len({truth[t] for t in island["members"]}) == 1
    doc = json.loads(tree.to_json())
    assert doc["root"]["size"] == len(net.tags)
    assert tree.to_dot().startswith("digraph")


def test_diversity_and_activity():
    rows, _ = folknet.generate_planted(seed=4)
    net = folknet.build_network(rows)
    user = net.users[0]
    assert net.diversity(user) > 0
    assert net.pairwise_distance(user, user) == pytest.approx(1.0)
    tree = folknet.build_tree(net.correlation("tags", top_n=30))
    records = net.activity(tree, user)
    assert len(records) == len(tree.islands)
    for t in range(len(tree.levels)):
        total = sum(records[i["id"]]["p_sample"] for i in tree.level(t))
        assert total == pytest.approx(1.0, abs=1e-9)


def test_entropy_and_colors():
    assert folknet.entropy([1, 1, 1, 1]) == pytest.approx(math.log(4))
    assert folknet.activity_color(1.0) == (0, 100, 110)
    assert folknet.activity_color(None) == (128, 128, 128)
    assert folknet.rand_index([0, 0, 1], [3, 3, 4]) == 1.0


def test_read_triples(tmp_path):
    path = tmp_path / "t.tsv"
    path.write_text("user\titem\ttag\nu\ti\trock\nu\ti\tpop\nbad line\n")
    rows, warnings = folknet.read_triples(path)
    assert rows == [("u", "i", ["rock", "pop"])]
    assert warnings[0][0] == 4
    net = folknet.read_network(path)
    assert net.stats()["links"] == 2


@pytest.mark.skipif("FOLKNET_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_stats(tmp_path):
    path = tmp_path / "t.tsv"
    path.write_text("u\ti\trock\n")
    out = subprocess.run([os.environ["FOLKNET_CLI"], "stats", "--input", str(path)],
                         capture_output=True, text=True, check=True).stdout
    assert "links: 1" in out
