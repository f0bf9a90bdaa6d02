import json
import os
import shutil
import subprocess
from pathlib import Path

import pytest

import sublabel

DATA = Path(os.environ.get("SUBLABEL_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))

SRT = """1
00:00:00,000 --> 00:00:04,000
Hello everyone and welcome to my channel.

2
00:00:04,000 --> 00:00:08,000
Keep your back straight from head to heels.
"""


@pytest.fixture(scope="module")
def lexicon():
    return sublabel.load_lexicon(str(DATA / "lexicon.json"))


def test_ingest_interpolates_token_times():
    tokens = sublabel.ingest(SRT)
    assert [t.text for t in tokens[:3]] == ["hello", "everyone", "and"]
    assert tokens[0].start_ms == 0
    assert tokens[-1].end_ms == 8000
    assert all(a.end_ms <= b.start_ms for a, b in zip(tokens, tokens[1:]))


def test_sentences_and_relevance(lexicon):
    sentences = sublabel.split_sentences(sublabel.ingest(SRT), lexicon)
    assert [s["text"] for s in sentences] == [
        "hello everyone and welcome to my channel",
        "keep your back straight from head to heels",
    ]
    votes = [sublabel.vote(sublabel.mark_words(s["words"], lexicon)) for s in sentences]
    assert votes == ["irrelevant", "relevant"]


def test_trigram_model_round_trip():
    model = sublabel.TrigramModel.train(
        [("keep your back straight", "correct"), ("butt too high", "incorrect")]
    )
    assert model.prior("correct") == pytest.approx(0.5)
    assert model.classify("keep your back straight")[0] == "correct"
    assert model.classify("butt too high")[0] == "incorrect"
    again = sublabel.TrigramModel.loads(model.dumps())
    assert again.classify("butt way high") == model.classify("butt way high")
    with pytest.raises(sublabel.TrainingError):
        sublabel.TrigramModel.train([("only one class", "correct")])


def test_summary(lexicon):
    words = sublabel.normalize_words("A common mistake is having your butt up in the air.")
    assert sublabel.summarize(words, lexicon) == "having your butt up"
    assert sublabel.summarize(["nothing", "here"], lexicon) is None


def test_rank_sum_small_exact():
    r = sublabel.rank_sum_test([1, 2, 3], [4, 5, 6])
    assert r["exact"]
    assert r["p_value"] == pytest.approx(0.1, abs=1e-12)
    assert r["delta_median"] == -3


def test_kmeans_is_deterministic():
    import random

    rng = random.Random(3)
    points = [[c * 5 + rng.gauss(0, 0.1) for _ in range(99)] for c in (0, 1) for _ in range(20)]
    a = sublabel.kmeans(points, k=2, seed=7)
    assert a == sublabel.kmeans(points, k=2, seed=7)
    assert sorted(a["sizes"]) == [20, 20]
    with pytest.raises(sublabel.ValidationError):
        sublabel.kmeans([[0.0] * 3], k=1)


def test_pipeline_on_fixture(tmp_path):
    make_fixture = os.environ.get("SUBLABEL_MAKE_FIXTURE")
    if not make_fixture:
        pytest.skip("SUBLABEL_MAKE_FIXTURE not set")
    subprocess.run([make_fixture, str(tmp_path)], check=True)
    report = sublabel.run_pipeline(str(tmp_path / "project.json"))
    assert report["success"]
    clips = sublabel.read_manifest(str(tmp_path / "out" / "manifest.jsonl"))
    summaries = [c["summary"] for c in clips if c["label"] == "relevant_incorrect"]
    assert "having your butt up" in summaries
    with pytest.raises(sublabel.ConfigError):
        sublabel.run_pipeline(str(tmp_path / "missing.json"))
