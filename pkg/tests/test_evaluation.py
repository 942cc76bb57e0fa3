import dataclasses

import pytest

from semdec.corpus import LabeledCorpus, LabeledUtterance, LabeledWord
from semdec.evaluation import (
    STRATEGIES, compare_strategies, decode_strategy, default_planted_spec,
    evaluate, generate_synthetic_corpus, planted_affinity_consistency,
    planted_spec_from_json, planted_spec_to_json, reports_to_csv,
    reports_to_json, reports_to_text, train_strategy,
)
from semdec.model import Catalogs, TrainConfig, train


def utt(type_id, *words):
    return LabeledUtterance(type_id, tuple(
        LabeledWord(*w.split("/")) for w in words))


def toy_corpus():
    utts = []
    for _ in range(3):
        utts.append(utt("t1", "go/act1/a1", "train/veh1/v1"))
        utts.append(utt("t2", "stop/act2/a2", "bus/veh2/v2"))
    return LabeledCorpus(utts)


def toy_catalogs():
    from semdec.extraction import ReferenceWord
    return Catalogs.from_corpus(toy_corpus(), [
        ReferenceWord(("go",), "t1", 1.0, 0),
        ReferenceWord(("stop",), "t2", 1.0, 0)])


def test_memorized_corpus_scores_zero():
    corpus = toy_corpus()
    model = train(corpus, None, toy_catalogs(), TrainConfig())
    report = evaluate(model, corpus)
    assert report.error_rate == 0.0
    assert report.class_error_rate == 0.0
    assert report.n_words == 12


def test_fixed_wrong_labels_score_one():
    # trained on one label, evaluated against gold that never uses it
    train_corpus = LabeledCorpus([utt("t1", "w/ca/x1")] * 4)
    gold = LabeledCorpus([utt("t1", "w/cb/y1")] * 4)
    catalogs = Catalogs(types=["t1"], classes=["ca", "cb"],
                        traits_by_class={"ca": ["x1"], "cb": ["y1"]})
    model = train(train_corpus, None, catalogs, TrainConfig())
    report = evaluate(model, gold)
    assert report.error_rate == 1.0


def test_confusion_reconciles_with_corpus_size():
    corpus = toy_corpus()
    model = train(corpus, None, toy_catalogs(), TrainConfig())
    report = evaluate(model, corpus)
    total = sum(n for row in report.confusion.values() for n in row.values())
    assert total == report.n_words


def test_gold_outside_catalogs_errors():
    corpus = toy_corpus()
    model = train(corpus, None, toy_catalogs(), TrainConfig())
    bad = LabeledCorpus([utt("t1", "go/unknown/zz")])
    with pytest.raises(ValueError, match="outside the model catalogs"):
        evaluate(model, bad)


def test_all_strategies_trainable_and_decodable():
    corpus = toy_corpus()
    catalogs = toy_catalogs()
    for name in STRATEGIES:
        variant = train_strategy(name, corpus, catalogs, TrainConfig())
        out = decode_strategy(variant, None, ["go", "train"])
        assert len(out.labels) == 2
        report = evaluate(variant, corpus, strategy=name)
        assert report.strategy == name
        assert 0.0 <= report.error_rate <= 1.0


def test_unknown_strategy_rejected():
    corpus = toy_corpus()
    with pytest.raises(ValueError, match="unknown strategy"):
        train_strategy("VITERBI", corpus, Catalogs.from_corpus(corpus),
                       TrainConfig())


# --- synthetic generator ----------------------------------------------------

def test_generator_empty_and_deterministic():
    spec = default_planted_spec()
    assert len(generate_synthetic_corpus(spec, 0, 0)) == 0
    a = generate_synthetic_corpus(spec, 40, 9)
    b = generate_synthetic_corpus(spec, 40, 9)
    assert a.utterances == b.utterances
    c = generate_synthetic_corpus(spec, 40, 10)
    assert a.utterances != c.utterances


def test_degenerate_spec_identical_labels():
    spec = dataclasses.replace(
        default_planted_spec(),
        type_priors={"solo": 1.0},
        refwords={"solo": [("go", "one", "x1")]},
        triggers={"solo": [(1.0, "trig", "one", "x1", ("tgt",))]},
        fillers=[],
        gap_range=(0, 0),
        transitions={("solo", "one"): {"one": 1.0}},
        trait_emissions={"one": {"x1": 1.0}},
    )
    corpus = generate_synthetic_corpus(spec, 12, 5)
    assert len(set(corpus.utterances)) == 1


def test_invalid_spec_distributions_error():
    spec = dataclasses.replace(default_planted_spec(),
                               type_priors={"book": 0.7, "time": 0.7})
    with pytest.raises(ValueError, match="sum"):
        generate_synthetic_corpus(spec, 5, 0)


def test_spec_rejects_missing_transition():
    spec = default_planted_spec()
    spec.transitions = {k: v for k, v in spec.transitions.items()
                        if k != ("book", "veh")}
    with pytest.raises(ValueError, match="transition"):
        spec.validate()


def test_planted_lexicon_is_valid_and_excludes_targets():
    spec = default_planted_spec()
    lex = spec.build_lexicon()
    assert lex.validate() == []
    assert lex.lookup("fil_0") is not None
    assert lex.lookup("amb_a_0") is None


def test_spec_json_roundtrip():
    spec = default_planted_spec()
    again = planted_spec_from_json(planted_spec_to_json(spec))
    assert again == spec


def test_planted_affinity_recovers_triggers():
    spec = default_planted_spec()
    corpus = generate_synthetic_corpus(spec, 300, 2)
    assert planted_affinity_consistency(corpus, spec) >= 0.98


def test_strategy_ordering_on_planted_corpus():
    spec = default_planted_spec()
    corpus = generate_synthetic_corpus(spec, 500, 0)
    reports = compare_strategies(corpus, spec.catalogs(), spec.build_lexicon(),
                                 TrainConfig(field=spec.field))
    err = {k: r.error_rate for k, r in reports.items()}
    assert err["PERTINENT"] < err["FIXED-2"] < err["FIXED-1"]
    assert err["PERTINENT"] < err["LEX+TYPE"] < err["LEX"]


def test_pertinent_error_weakly_decreases_with_size():
    spec = default_planted_spec()
    lex, cat = spec.build_lexicon(), spec.catalogs()
    cfg = TrainConfig(field=spec.field)
    errs = []
    for size in (100, 500, 2000):
        corpus = generate_synthetic_corpus(spec, size, 7)
        variant = train_strategy("PERTINENT", corpus, cat, cfg, lex)
        errs.append(evaluate(variant, corpus, lex).error_rate)
    assert errs[0] >= errs[1] >= errs[2]


def test_evaluation_deterministic():
    spec = default_planted_spec()
    corpus = generate_synthetic_corpus(spec, 120, 3)
    lex, cat = spec.build_lexicon(), spec.catalogs()
    cfg = TrainConfig(field=spec.field)
    a = evaluate(train_strategy("PERTINENT", corpus, cat, cfg, lex), corpus, lex)
    b = evaluate(train_strategy("PERTINENT", corpus, cat, cfg, lex), corpus, lex)
    assert a == b


def test_report_serializations():
    corpus = toy_corpus()
    reports = compare_strategies(corpus, Catalogs.from_corpus(corpus), None,
                                 TrainConfig(), ("LEX", "PERTINENT"))
    text = reports_to_text(reports)
    assert "LEX" in text and "PERTINENT" in text
    csv_text = reports_to_csv(reports)
    assert csv_text.splitlines()[0] == "strategy,error_rate"
    assert len(csv_text.splitlines()) == 3
    json_text = reports_to_json(reports)
    assert '"error_rate"' in json_text
