"""Error-rate evaluation and context-strategy comparison.

Five labeling strategies are compared on a gold corpus:

  LEX       word-conditioned label counts, no context, no utterance type
  LEX+TYPE  word-conditioned counts keyed additionally on the inferred type
  FIXED-1   full factorized model, context = the literal previous word
  FIXED-2   full factorized model, context = the two previous words
  PERTINENT full factorized model, context chosen by affinity ranking

The synthetic-corpus generator plants a ground truth in which a target
word's class is determined either by the utterance type alone or by the
class of a trigger word separated from the target by filler words, so
the strategies differ in exactly the representational power the
comparison is about.
"""

import csv
import io
import json
import random
from dataclasses import dataclass, field
from typing import Dict, Optional

from semdec.affinity import CooccurrenceStats, pertinent_context
from semdec.corpus import LabeledCorpus, LabeledUtterance, LabeledWord
from semdec.extraction import ReferenceWord
from semdec.lexicon import FSeGroup, FsyGroup, Lexicon, LexiconEntry
from semdec.model import (
    FIXED1, FIXED2, PERTINENT, Catalogs, DecodedUtterance, DecodedWord,
    TrainConfig, decode, prob_type, train,
)

STRATEGIES = ("LEX", "LEX+TYPE", "FIXED-1", "FIXED-2", "PERTINENT")

_MODE_OF = {"FIXED-1": FIXED1, "FIXED-2": FIXED2, "PERTINENT": PERTINENT}


@dataclass
class LexicalTagger:
    """Word-conditioned baseline: argmax over (class, trait) counts.

    With use_type the counts are additionally keyed on the utterance type
    inferred from reference words; unseen (type, word) contexts back off
    to the untyped word counts, unseen words to the label unigram.
    """
    use_type: bool
    delta: float
    catalogs: Catalogs
    word_joint: dict
    word_marginal: dict
    typed_joint: dict
    typed_marginal: dict
    label_unigram: dict
    total_words: int
    # duck-typed fields so prob_type() accepts a tagger as its model
    type_joint: dict = field(default_factory=dict)
    type_marginal: dict = field(default_factory=dict)

    @property
    def strategy(self) -> str:
        return "LEX+TYPE" if self.use_type else "LEX"


def train_lexical(corpus: LabeledCorpus, catalogs: Catalogs, use_type: bool,
                  delta: float = 0.5, max_gap: int = 3) -> LexicalTagger:
    from semdec.extraction import count_matches

    tagger = LexicalTagger(use_type=use_type, delta=delta, catalogs=catalogs,
                           word_joint={}, word_marginal={}, typed_joint={},
                           typed_marginal={}, label_unigram={}, total_words=0)
    for u in corpus:
        tokens = tuple(w.token for w in u.words)
        for rw in catalogs.refwords:
            cnt = count_matches(tokens, rw.tokens, rw.max_gap)
            if cnt:
                tagger.type_joint[(u.type_id, rw.key)] = \
                    tagger.type_joint.get((u.type_id, rw.key), 0) + cnt
                tagger.type_marginal[rw.key] = tagger.type_marginal.get(rw.key, 0) + cnt
        for w in u.words:
            lbl = (w.semantic_class, w.micro_trait)
            tagger.word_joint[(w.token,) + lbl] = \
                tagger.word_joint.get((w.token,) + lbl, 0) + 1
            tagger.word_marginal[w.token] = tagger.word_marginal.get(w.token, 0) + 1
            tk = (u.type_id, w.token)
            tagger.typed_joint[tk + lbl] = tagger.typed_joint.get(tk + lbl, 0) + 1
            tagger.typed_marginal[tk] = tagger.typed_marginal.get(tk, 0) + 1
            tagger.label_unigram[lbl] = tagger.label_unigram.get(lbl, 0) + 1
            tagger.total_words += 1
    return tagger


def _all_labels(catalogs: Catalogs) -> list:
    return [(c, tm) for c in catalogs.classes
            for tm in catalogs.traits_by_class.get(c, ())]


def decode_lexical(tagger: LexicalTagger, lexicon: Optional[Lexicon],
                   tokens, skipped=()) -> DecodedUtterance:
    tokens = tuple(tokens)
    types = tagger.catalogs.types
    tdist = prob_type(tagger, tokens)
    best_type = types[0]
    for t in types:
        if tdist[t] > tdist[best_type]:
            best_type = t

    labels = _all_labels(tagger.catalogs)
    delta = tagger.delta
    out = DecodedUtterance(utterance_type=(best_type, tdist[best_type]),
                           labels=[], skipped=tuple(skipped))
    for token in tokens:
        entry = lexicon.lookup(token) if lexicon is not None else None
        if entry is not None and tagger.catalogs.has_label(
                entry.fse.semantic_class, entry.fse.micro_trait):
            cand = [(entry.fse.semantic_class, entry.fse.micro_trait)]
        else:
            cand = labels

        tk = (best_type, token)
        if tagger.use_type and tagger.typed_marginal.get(tk, 0) > 0:
            denom = tagger.typed_marginal[tk] + delta * len(labels)
            dist = {lb: (tagger.typed_joint.get(tk + lb, 0) + delta) / denom
                    for lb in labels}
        elif tagger.word_marginal.get(token, 0) > 0:
            denom = tagger.word_marginal[token] + delta * len(labels)
            dist = {lb: (tagger.word_joint.get((token,) + lb, 0) + delta) / denom
                    for lb in labels}
        else:
            denom = tagger.total_words + delta * len(labels)
            if denom == 0:
                dist = {lb: 1.0 / len(labels) for lb in labels}
            else:
                dist = {lb: (tagger.label_unigram.get(lb, 0) + delta) / denom
                        for lb in labels}

        best = cand[0]
        for lb in cand:
            if dist[lb] > dist[best]:
                best = lb
        prob = dist[best] * (tdist[best_type] if tagger.use_type else 1.0)
        out.labels.append(DecodedWord(token, best[0], best[1], prob))
    return out


def train_strategy(name: str, corpus: LabeledCorpus, catalogs: Catalogs,
                   config: TrainConfig, lexicon: Optional[Lexicon] = None):
    """Train the model variant behind one strategy name."""
    if name in _MODE_OF:
        cfg = TrainConfig(context_mode=_MODE_OF[name], window=config.window,
                          delta=config.delta, max_gap=config.max_gap,
                          smooth_affinity=config.smooth_affinity,
                          field=config.field)
        return train(corpus, lexicon, catalogs, cfg)
    if name == "LEX":
        return train_lexical(corpus, catalogs, use_type=False,
                             delta=config.delta, max_gap=config.max_gap)
    if name == "LEX+TYPE":
        return train_lexical(corpus, catalogs, use_type=True,
                             delta=config.delta, max_gap=config.max_gap)
    raise ValueError(f"unknown strategy {name!r} (choose from {STRATEGIES})")


def decode_strategy(variant, lexicon: Optional[Lexicon], tokens,
                    skipped=()) -> DecodedUtterance:
    if isinstance(variant, LexicalTagger):
        return decode_lexical(variant, lexicon, tokens, skipped)
    return decode(variant, lexicon, tokens, skipped)


@dataclass
class EvalReport:
    strategy: str
    n_utterances: int
    n_words: int
    word_errors: int
    error_rate: float
    class_errors: int
    class_error_rate: float
    type_correct: int
    type_accuracy: float
    confusion: Dict[str, Dict[str, int]]

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "corpus": {"utterances": self.n_utterances, "words": self.n_words},
            "error_rate": self.error_rate,
            "word_errors": self.word_errors,
            "class_error_rate": self.class_error_rate,
            "class_errors": self.class_errors,
            "type_accuracy": self.type_accuracy,
            "type_correct": self.type_correct,
            "confusion": {g: dict(sorted(d.items()))
                          for g, d in sorted(self.confusion.items())},
        }


def evaluate(variant, corpus: LabeledCorpus, lexicon: Optional[Lexicon] = None,
             strategy: Optional[str] = None) -> EvalReport:
    """Decode every utterance and score exact (class, trait) matches.

    Class-only errors are also reported; the confusion summary counts
    decoded classes per gold class and reconciles with the corpus size.
    """
    catalogs = variant.catalogs
    for idx, u in enumerate(corpus):
        for w in u.words:
            if not catalogs.has_label(w.semantic_class, w.micro_trait):
                raise ValueError(
                    f"gold label {w.semantic_class}/{w.micro_trait} in utterance "
                    f"{idx} is outside the model catalogs")

    if strategy is None:
        strategy = (variant.strategy if isinstance(variant, LexicalTagger)
                    else {v: k for k, v in _MODE_OF.items()}[variant.config.context_mode])

    n_words = word_errors = class_errors = type_correct = 0
    confusion: Dict[str, Dict[str, int]] = {}
    for u in corpus:
        decoded = decode_strategy(variant, lexicon, [w.token for w in u.words])
        if decoded.utterance_type[0] == u.type_id:
            type_correct += 1
        for gold, got in zip(u.words, decoded.labels):
            n_words += 1
            row = confusion.setdefault(gold.semantic_class, {})
            row[got.semantic_class] = row.get(got.semantic_class, 0) + 1
            if got.semantic_class != gold.semantic_class:
                class_errors += 1
            if (got.semantic_class, got.micro_trait) != \
                    (gold.semantic_class, gold.micro_trait):
                word_errors += 1

    n_utts = len(corpus)
    return EvalReport(
        strategy=strategy, n_utterances=n_utts, n_words=n_words,
        word_errors=word_errors,
        error_rate=word_errors / n_words if n_words else 0.0,
        class_errors=class_errors,
        class_error_rate=class_errors / n_words if n_words else 0.0,
        type_correct=type_correct,
        type_accuracy=type_correct / n_utts if n_utts else 0.0,
        confusion=confusion,
    )


def compare_strategies(corpus: LabeledCorpus, catalogs: Catalogs,
                       lexicon: Optional[Lexicon] = None,
                       config: TrainConfig = TrainConfig(),
                       strategies=STRATEGIES) -> Dict[str, EvalReport]:
    """Train every requested strategy on the corpus and score it there.

    Training and scoring on the same corpus is deliberate: the comparison
    measures what each context representation can capture, and the
    word-level ambiguities planted by the generator are irreducible for
    the weaker strategies even in-sample.
    """
    out = {}
    for name in strategies:
        variant = train_strategy(name, corpus, catalogs, config, lexicon)
        out[name] = evaluate(variant, corpus, lexicon, strategy=name)
    return out


def reports_to_text(reports: Dict[str, EvalReport]) -> str:
    lines = [f"{'strategy':<10} {'error%':>8} {'class-err%':>11} {'type-acc%':>10}"]
    for name, r in reports.items():
        lines.append(f"{name:<10} {100 * r.error_rate:>8.2f} "
                     f"{100 * r.class_error_rate:>11.2f} "
                     f"{100 * r.type_accuracy:>10.2f}")
    return "\n".join(lines) + "\n"


def reports_to_csv(reports: Dict[str, EvalReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["strategy", "error_rate"])
    for name, r in reports.items():
        writer.writerow([name, repr(r.error_rate)])
    return buf.getvalue()


def reports_to_json(reports: Dict[str, EvalReport]) -> str:
    return json.dumps({name: r.to_dict() for name, r in reports.items()},
                      ensure_ascii=False, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Synthetic corpus with a planted pertinent-context ground truth
# ---------------------------------------------------------------------------

@dataclass
class PlantedSpec:
    """Generator spec: type priors, per-type templates and transitions.

    Every utterance is `refwords trigger fillers* target`: the trigger is
    the planted pertinent word, the fillers are uniform noise between it
    and the target, and the target's class is drawn from the transition
    row keyed on (type, trigger class).  Each trigger entry carries the
    target surfaces it can introduce, so target surfaces correlate with
    their triggers (what makes the trigger the strongest-affinity word)
    while staying class-ambiguous whenever two triggers of different
    classes share a target.
    """
    field: str
    type_priors: Dict[str, float]
    refwords: Dict[str, list]            # type -> [(surface, class, trait)]
    triggers: Dict[str, list]            # type -> [(prob, surface, class, trait, target pool)]
    fillers: list                        # [(surface, class, trait)]
    gap_range: tuple                     # (min, max) filler count
    transitions: Dict[tuple, dict]       # (type, trigger class) -> {class: prob}
    trait_emissions: Dict[str, dict]     # class -> {trait: prob}

    def validate(self) -> None:
        def check_dist(name, dist):
            total = sum(dist.values() if isinstance(dist, dict) else dist)
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"{name} probabilities sum to {total}, not 1")

        check_dist("type_priors", self.type_priors)
        for t, trig in self.triggers.items():
            check_dist(f"triggers[{t}]", [p for p, *_ in trig])
        for key, row in self.transitions.items():
            check_dist(f"transitions[{key}]", row)
        for c, row in self.trait_emissions.items():
            check_dist(f"trait_emissions[{c}]", row)
        if self.gap_range[0] < 0 or self.gap_range[0] > self.gap_range[1]:
            raise ValueError(f"bad gap_range {self.gap_range}")
        if self.gap_range[1] > 0 and not self.fillers:
            raise ValueError("positive gap_range needs a non-empty filler pool")
        for t in self.type_priors:
            for _, _, trig_class, _, pool in self.triggers[t]:
                if (t, trig_class) not in self.transitions:
                    raise ValueError(f"no transition row for ({t}, {trig_class})")
                if not pool:
                    raise ValueError(f"trigger in {t!r} has an empty target pool")
        for row in self.transitions.values():
            for c in row:
                if c not in self.trait_emissions:
                    raise ValueError(f"no trait emissions for class {c!r}")

    def vocabulary(self) -> Dict[str, tuple]:
        """surface -> (class, trait) for all unambiguous planted words."""
        vocab: Dict[str, tuple] = {}
        for group in list(self.refwords.values()) + [
                [x[1:4] for x in trig] for trig in self.triggers.values()] + [self.fillers]:
            for surface, cls, trait in group:
                prior = vocab.get(surface)
                if prior is not None and prior != (cls, trait):
                    raise ValueError(f"surface {surface!r} planted with two senses")
                vocab[surface] = (cls, trait)
        return vocab

    def build_lexicon(self) -> Lexicon:
        """Entries for every unambiguous planted word; targets stay out.

        Words sharing one FSe group are declared synonyms so the planted
        lexicon validates cleanly.
        """
        lex = Lexicon()
        for surface, (cls, trait) in sorted(self.vocabulary().items()):
            lex.add_entry(LexiconEntry(
                surface=surface,
                fse=FSeGroup(self.field, cls, trait),
                fsy=FsyGroup(),
                synonym_set=f"{cls}.{trait}",
            ))
        return lex

    def reference_words(self) -> list:
        return [ReferenceWord(tuple(s for s, _, _ in rws), t, 1.0, 0)
                for t, rws in sorted(self.refwords.items())]

    def catalogs(self) -> Catalogs:
        classes = set()
        traits: Dict[str, set] = {}
        for _, (cls, trait) in self.vocabulary().items():
            classes.add(cls)
            traits.setdefault(cls, set()).add(trait)
        for c, row in self.trait_emissions.items():
            classes.add(c)
            traits.setdefault(c, set()).update(row)
        return Catalogs(types=sorted(self.type_priors),
                        classes=sorted(classes),
                        traits_by_class={c: sorted(ts) for c, ts in traits.items()},
                        refwords=self.reference_words())


def _sample(rng: random.Random, dist: dict):
    x = rng.random()
    acc = 0.0
    items = sorted(dist.items())
    for key, p in items:
        acc += p
        if x < acc:
            return key
    return items[-1][0]


def generate_synthetic_corpus(spec: PlantedSpec, size: int,
                              seed: int) -> LabeledCorpus:
    """Deterministic planted corpus; gold labels follow the planted rules."""
    spec.validate()
    rng = random.Random(seed)
    utterances = []
    for _ in range(size):
        t = _sample(rng, spec.type_priors)
        words = [LabeledWord(s, c, tm) for s, c, tm in spec.refwords[t]]
        trig_dist = {(s, c, tm, tuple(pool)): p
                     for p, s, c, tm, pool in spec.triggers[t]}
        surface, trig_class, trig_trait, pool = _sample(rng, trig_dist)
        words.append(LabeledWord(surface, trig_class, trig_trait))
        gap = rng.randint(*spec.gap_range)
        for _ in range(gap):
            words.append(LabeledWord(*spec.fillers[rng.randrange(len(spec.fillers))]))
        target = pool[rng.randrange(len(pool))]
        cls = _sample(rng, spec.transitions[(t, trig_class)])
        trait = _sample(rng, spec.trait_emissions[cls])
        words.append(LabeledWord(target, cls, trait))
        utterances.append(LabeledUtterance(t, tuple(words)))
    return LabeledCorpus(utterances)


def planted_affinity_consistency(corpus: LabeledCorpus, spec: PlantedSpec,
                                 window: int = 5) -> float:
    """Fraction of targets whose affinity top-2 contains the planted trigger.

    Generation plants the trigger as the pertinent word; this checks that
    the decoder's own affinity definition, run on the generated corpus,
    recovers it.
    """
    cooc = CooccurrenceStats.from_utterances(
        (tuple(w.token for w in u.words) for u in corpus), window=window)
    vocab = spec.vocabulary()
    hits = total = 0
    for u in corpus:
        tokens = [w.token for w in u.words]
        target_pos = len(tokens) - 1
        prefix = [(w.token, FSeGroup(spec.field, w.semantic_class, w.micro_trait))
                  for w in u.words[:target_pos]]
        trigger_pos = len(spec.refwords[u.type_id])
        ctx = pertinent_context(cooc, None, prefix, tokens[target_pos])
        total += 1
        if trigger_pos in ctx.sources:
            hits += 1
    return hits / total if total else 1.0


def default_planted_spec() -> PlantedSpec:
    """Four types: two whose targets disambiguate by trigger class, two by
    utterance type; both kinds defeat strategies lacking that context.

    Each ambiguous target surface is introduced by one vehicle-class and
    one place-class trigger (or one neutral trigger in the type-driven
    half), so the trigger is the target's strongest-affinity word while
    the target surface alone says nothing about its class.
    """
    fam_a = [(0.25, f"trg_{cls}_{p}", cls, f"{cls}_t", (f"amb_a_{p}",))
             for p in range(2) for cls in ("veh", "plc")]
    fam_b = [(0.5, f"trg_gen_{p}", "gen", "gen_t", (f"amb_b_{p}",))
             for p in range(2)]
    return PlantedSpec(
        field="traininfo",
        type_priors={"book": 0.25, "cancel": 0.25, "time": 0.25, "price": 0.25},
        refwords={
            "book": [("ref_book", "act", "act_book")],
            "cancel": [("ref_cancel", "act", "act_cancel")],
            "time": [("ref_time", "act", "act_time")],
            "price": [("ref_price", "act", "act_price")],
        },
        triggers={"book": fam_a, "cancel": fam_a, "time": fam_b, "price": fam_b},
        fillers=[(f"fil_{i}", "fil", "fil_t") for i in range(8)],
        gap_range=(1, 3),
        transitions={
            ("book", "veh"): {"obj_v": 1.0},
            ("book", "plc"): {"obj_p": 1.0},
            ("cancel", "veh"): {"obj_v": 1.0},
            ("cancel", "plc"): {"obj_p": 1.0},
            ("time", "gen"): {"info_t": 1.0},
            ("price", "gen"): {"info_p": 1.0},
        },
        trait_emissions={"obj_v": {"tv": 1.0}, "obj_p": {"tp": 1.0},
                         "info_t": {"tt": 1.0}, "info_p": {"tq": 1.0}},
    )


def planted_spec_to_json(spec: PlantedSpec) -> str:
    obj = {
        "field": spec.field,
        "type_priors": spec.type_priors,
        "refwords": {t: [list(x) for x in v] for t, v in spec.refwords.items()},
        "triggers": {t: [[p, s, c, tm, list(pool)] for p, s, c, tm, pool in v]
                     for t, v in spec.triggers.items()},
        "fillers": [list(x) for x in spec.fillers],
        "gap_range": list(spec.gap_range),
        "transitions": {f"{t}\t{c}": row for (t, c), row in spec.transitions.items()},
        "trait_emissions": spec.trait_emissions,
    }
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def planted_spec_from_json(text: str) -> PlantedSpec:
    obj = json.loads(text)
    return PlantedSpec(
        field=obj["field"],
        type_priors=obj["type_priors"],
        refwords={t: [tuple(x) for x in v] for t, v in obj["refwords"].items()},
        triggers={t: [(p, s, c, tm, tuple(pool)) for p, s, c, tm, pool in v]
                  for t, v in obj["triggers"].items()},
        fillers=[tuple(x) for x in obj["fillers"]],
        gap_range=tuple(obj["gap_range"]),
        transitions={tuple(k.split("\t")): row
                     for k, row in obj["transitions"].items()},
        trait_emissions=obj["trait_emissions"],
    )
