import json
import os

import numpy as np
import pytest

import fbtopics


def rbo_oracle(s, t, p):
    depth = min(len(s), len(t))
    return (1 - p) * sum(p ** (d - 1) * len(set(s[:d]) & set(t[:d])) / d for d in range(1, depth + 1))


def disjoint_docs(groups=3, per_group=40, length=8, words=10, seed=0):
    rng = np.random.default_rng(seed)
    docs, labels = [], []
    for g in range(groups):
        for _ in range(per_group):
            docs.append([f"g{g}w{i}" for i in rng.integers(0, words, length)])
            labels.append(g)
    return docs, labels


def test_version_and_data():
    assert fbtopics.__version__
    assert os.path.isdir(fbtopics.data_dir())


def test_preprocess_drops_stopwords():
    assert fbtopics.preprocess(["The nurse was RUDE and we waited!"]) == [["nurse", "rude", "waited"]]


def test_filter_partitions_comments():
    texts = ["he argued with me", "lovely clean room", "staff were abusive", "all good"]
    result = fbtopics.filter_feedback(texts, ids=["a", "b", "c", "d"])
    assert sorted(result["negatives"] + result["positives"]) == ["a", "b", "c", "d"]
    assert set(result["match_trace"]) == set(result["negatives"])
    assert "c" in result["negatives"]
    counts = fbtopics.match_counts(texts)
    assert counts["exact"] <= counts["lemma"] <= counts["lemma_pos"]


def test_rbo_and_irbo():
    s, t = list("abcde"), list("aecbd")
    assert fbtopics.rbo(s, t, 0.9) == pytest.approx(rbo_oracle(s, t, 0.9), abs=1e-12)
    assert fbtopics.rbo(s, s, 0.9) == pytest.approx(1 - 0.9**5, abs=1e-12)
    d = fbtopics.irbo_avg([list("abcde"), list("fghij"), list("klmno")])
    assert d["irbo_avg"] == 1.0
    with pytest.raises(fbtopics.Error):
        fbtopics.rbo([], ["a"])


def test_npmi_and_coherence():
    docs = [["a", "b"], ["c"], ["a", "b"], ["d"]]
    assert fbtopics.npmi("a", "b", docs) == pytest.approx(1.0, abs=1e-6)
    assert fbtopics.npmi("a", "c", docs) == fbtopics.npmi("c", "a", docs)
    report = fbtopics.cv_coherence([["a", "b"]], docs, top_n=2)
    assert report["per_topic"][0] == pytest.approx(1.0, abs=1e-6)


def test_models_recover_planted_groups():
    docs, labels = disjoint_docs()
    gsdmm = fbtopics.fit_gsdmm(docs, k_max=8, seed=1)
    assert gsdmm.model == "gsdmm"
    k = gsdmm.populated_clusters
    assert 3 <= k <= 8
    assert gsdmm.doc_topic.shape == (len(docs), k)
    # Every cluster draws from a single planted group.
    assignment = gsdmm.hard_assignment()
    for cluster in range(k):
        assert len({labels[i] for i, c in enumerate(assignment) if c == cluster}) == 1
    lda = fbtopics.fit_lda(docs, 3, alpha=0.1, iterations=100, seed=1)
    assert np.allclose(lda.topic_word.sum(axis=1), 1.0)
    assert np.allclose(lda.doc_topic.sum(axis=1), 1.0)
    for topic in lda.topic_word_lists(5):
        assert len({w.split("w")[0] for w in topic}) == 1
    assert json.loads(json.dumps(lda.to_dict(5)))["model"] == "lda"


def test_kmeans_and_kbert():
    rng = np.random.default_rng(3)
    centres = rng.uniform(-10, 10, (3, 5))
    labels = np.repeat(np.arange(3), 30)
    points = centres[labels] + rng.normal(size=(90, 5))
    km = fbtopics.kmeans(points, 3, seed=3)
    assert km["centroids"].shape == (3, 5)
    assert all(b <= a + 1e-9 for a, b in zip(km["inertia_history"], km["inertia_history"][1:]))
    docs = [[f"w{label}", "shared"] for label in labels]
    model = fbtopics.fit_kbert(docs, points, k=3, seed=3)
    assert model.num_topics == 3
    assert {w for k in range(3) for w, _ in model.top_words(k, 2)} == {"w0", "w1", "w2", "shared"}
    assignment = model.hard_assignment()
    for group in range(3):
        assert len({assignment[i] for i in range(90) if labels[i] == group}) == 1


def test_run_and_tables(tmp_path):
    texts = [
        "the nurse was rude and dismissive",
        "waited three hours for the doctor",
        "clean ward and friendly staff",
        "staff wore masks and kept distance",
        "appointment delayed again and again",
        "doctor argued with my mother",
    ] * 5
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text("".join(json.dumps({"id": f"c{i}", "text": t}) + "\n" for i, t in enumerate(texts)))
    config = {
        "corpus": {"path": str(corpus)},
        "models": ["lda", "gsdmm", "kbert"],
        "topic_counts": [2, 3],
        "lda": {"iterations": 30},
        "output_dir": str(tmp_path / "out"),
    }
    report = fbtopics.run(config)
    cells = {(c["model"], c["topic_count"]): c for c in report["coherence"]}
    assert len(cells) == 6
    assert cells[("lda", 2)]["failure"] is None
    assert "embedding" in cells[("kbert", 2)]["failure"]
    table = fbtopics.emit_table(report, "diversity")
    assert table.splitlines()[0] == "model,topic_count,irbo_avg"
    assert "kbert,2,N/A" in table
    assert (tmp_path / "out" / "report.json").exists()
    with pytest.raises(fbtopics.ConfigError):
        fbtopics.load_config({"lda": {"alpha_mode": "sometimes"}})
