# Copyright 2026 The nameorigin Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
from pathlib import Path

import pytest

import nameorigin

DATA = Path(os.environ.get("NAMEORIGIN_TEST_DATA", Path(__file__).parents[1] / "data"))


def read_labels(path):
    rows = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            cells = line.rstrip("\n").split("\t")
            if len(cells) < 3 or cells[0].startswith("#"):
                continue
            try:
                first, last = nameorigin.normalize_name(cells[0] + " " + cells[1])
            except ValueError:
                continue  # rejected like the C++ loader does
            rows.append((first, last, cells[2], int(cells[3]) if len(cells) > 3 else 1))
    return rows


@pytest.fixture(scope="module")
def model():
    taxonomy = nameorigin.Taxonomy.load(str(DATA / "standard" / "taxonomy.taxonomy"))
    labels = read_labels(DATA / "standard" / "labels.tsv")
    return nameorigin.Model.build(labels, taxonomy, min_count=1)


def test_normalize_name():
    assert nameorigin.normalize_name("  Qiang   LEE ") == ("qiang", "lee")
    with pytest.raises(ValueError):
        nameorigin.normalize_name("madonna")


def test_shipped_taxonomy():
    t = nameorigin.Taxonomy.load("nat10")
    assert len(t.leaf_ids()) == 11
    assert t.leaf_for_country("ZZ") is None
    with pytest.raises(ValueError):
        nameorigin.Taxonomy.parse("[Root]\n[A]\nparent = Missing\n")


def test_classify(model):
    c = nameorigin.Classifier(model)
    r = nameorigin.classify(c, "Qiang Lee")
    assert r["leaf"] == "Chinese"
    assert r["path"][0]["node"] == "Root"
    for level in r["path"]:
        assert sum(level["probs"].values()) == pytest.approx(1.0)
    # Latin script still gives CH evidence; without fallbacks it is smoothed.
    assert not nameorigin.classify(c, "Zzqx Vvqw")["low_confidence"]
    tr_only = nameorigin.Classifier(model, tiers=["tr"])
    assert nameorigin.classify(tr_only, "Zzqx Vvqw")["low_confidence"]
    with pytest.raises(ValueError):
        nameorigin.Classifier(model, tiers=["xx"])


def test_model_round_trip(model, tmp_path):
    model.save(tmp_path / "model")
    loaded = nameorigin.Model.load(tmp_path / "model")
    a = nameorigin.Classifier(model).classify_json("maria", "lopez", "world")
    b = nameorigin.Classifier(loaded).classify_json("maria", "lopez", "world")
    assert a == b


def test_synthetic_embeddings_and_scoring(tmp_path):
    nameorigin.generate_synthetic(tmp_path, seed=3, owners=300, labels=2000)
    assert (tmp_path / "contacts.tsv").exists()
    sentences = []
    with open(tmp_path / "contacts.tsv", encoding="utf-8") as f:
        for line in f:
            cells = line.rstrip("\n").split("\t")[1:]
            sentences.append(["L:" + c.split()[-1].lower() for c in cells if " " in c])
    emb = nameorigin.Embeddings.train(sentences, dim=16, epochs=2, min_count=1)
    token = emb.tokens()[0]
    nn = emb.knn(token, 3)
    assert len(nn) == 3
    assert nn[0][1] >= nn[1][1] >= nn[2][1]

    s = nameorigin.score_predictions([("A", "A", 3), ("B", "A", 1)])
    assert s["total"] == 4
    assert s["classes"]["A"]["precision"] == pytest.approx(0.75)


def test_cli(tmp_path):
    status, out, err = nameorigin.run_cli(["--help"])
    assert status == 0
    assert "classify" in out
    status, _, _ = nameorigin.run_cli(["--workdir", str(tmp_path), "classify"])
    assert status != 0
