"""Count-based training and greedy decoding of the factorized word model.

A word's interpretation probability factors into three conditionals:
utterance type given the reference words present, semantic class given
type and the two pertinent context classes, and micro trait given class
and the strongest context word's feature group.  All three are estimated
from integer count tables; smoothing is additive with unigram backoff
when a conditioning context was never observed.

Decoding is greedy left to right: each word's context is selected from
the already-committed prefix labels, the utterance type is fixed once
per utterance, and in-lexicon words are constrained to their lexicon
sense while unknown words are searched over the full class/trait grid.
"""

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from semdec.affinity import (
    BEGIN_CLASS, BEGIN_FSE, CooccurrenceStats, PertinentContext, pertinent_context,
)
from semdec.corpus import LabeledCorpus
from semdec.extraction import ReferenceWord, count_matches
from semdec.lexicon import FSeGroup, Lexicon

MODEL_FORMAT_VERSION = 1

PERTINENT = "pertinent"
FIXED1 = "fixed1"
FIXED2 = "fixed2"
CONTEXT_MODES = (PERTINENT, FIXED1, FIXED2)


@dataclass(frozen=True)
class TrainConfig:
    context_mode: str = PERTINENT
    window: int = 5          # co-occurrence window for affinity statistics
    delta: float = 0.5       # additive smoothing on class/trait conditionals
    max_gap: int = 3         # gap allowance when matching reference words
    smooth_affinity: bool = True
    field: str = "app"       # constant application field stamped on output

    def __post_init__(self):
        if self.context_mode not in CONTEXT_MODES:
            raise ValueError(f"unknown context mode {self.context_mode!r}")
        if self.delta < 0 or self.window < 1 or self.max_gap < 0:
            raise ValueError("delta must be >= 0, window >= 1, max_gap >= 0")


@dataclass
class Catalogs:
    types: List[str]
    classes: List[str]
    traits_by_class: Dict[str, list]
    refwords: List[ReferenceWord] = field(default_factory=list)

    def __post_init__(self):
        if not self.types:
            raise ValueError("catalogs need at least one utterance type")
        reserved = {BEGIN_CLASS}
        if reserved & set(self.classes) or reserved & set(self.types):
            raise ValueError(f"{BEGIN_CLASS!r} is reserved for boundary context")
        self.classes = sorted(self.classes)
        self.traits_by_class = {c: sorted(ts) for c, ts in
                                sorted(self.traits_by_class.items())}

    @classmethod
    def from_corpus(cls, corpus: LabeledCorpus, refwords=()) -> "Catalogs":
        classes = set()
        traits: Dict[str, set] = {}
        for u in corpus:
            for w in u.words:
                classes.add(w.semantic_class)
                traits.setdefault(w.semantic_class, set()).add(w.micro_trait)
        return cls(types=corpus.types(), classes=sorted(classes),
                   traits_by_class={c: sorted(ts) for c, ts in traits.items()},
                   refwords=list(refwords))

    def has_label(self, semantic_class: str, micro_trait: str) -> bool:
        return micro_trait in self.traits_by_class.get(semantic_class, ())


@dataclass
class TrainedModel:
    config: TrainConfig
    catalogs: Catalogs
    # P(NT | Mr): joint (type, refword key) and marginal (refword key) counts
    type_joint: Dict[tuple, int]
    type_marginal: Dict[str, int]
    # P(C | NT, CP1, CP2)
    class_joint: Dict[tuple, int]
    class_context: Dict[tuple, int]
    class_unigram: Dict[str, int]
    total_words: int
    # P(TM | C, FSeP): fsep keyed by its (class, trait)
    trait_joint: Dict[tuple, int]
    trait_context: Dict[tuple, int]
    trait_unigram: Dict[tuple, int]
    cooc: CooccurrenceStats


@dataclass(frozen=True)
class DecodedWord:
    token: str
    semantic_class: str
    micro_trait: str
    probability: float


@dataclass
class DecodedUtterance:
    utterance_type: Tuple[str, float]
    labels: List[DecodedWord]
    skipped: tuple = ()


def _fse_of(config: TrainConfig, semantic_class: str, micro_trait: str) -> FSeGroup:
    return FSeGroup(config.field, semantic_class, micro_trait)


def select_context(config: TrainConfig, cooc: CooccurrenceStats,
                   prefix, target: str) -> PertinentContext:
    """Context slots for one word under the configured selection mode.

    prefix is the list of (token, FSeGroup) already labeled.  BEGIN fills
    whatever slots the prefix cannot.
    """
    if config.context_mode == PERTINENT:
        return pertinent_context(cooc, None, prefix, target,
                                 smoothed=config.smooth_affinity)
    prev = prefix[-1] if prefix else None
    if prev is None:
        return PertinentContext(BEGIN_CLASS, BEGIN_CLASS, BEGIN_FSE, ())
    cp1 = prev[1].semantic_class
    if config.context_mode == FIXED1:
        return PertinentContext(cp1, BEGIN_CLASS, prev[1], (len(prefix) - 1,))
    prev2 = prefix[-2] if len(prefix) >= 2 else None
    cp2 = prev2[1].semantic_class if prev2 else BEGIN_CLASS
    sources = (len(prefix) - 1,) + ((len(prefix) - 2,) if prev2 else ())
    return PertinentContext(cp1, cp2, prev[1], sources)


def train(corpus: LabeledCorpus, lexicon: Optional[Lexicon],
          catalogs: Catalogs, config: TrainConfig = TrainConfig()) -> TrainedModel:
    """Fill every count table in a single pass over the labeled corpus.

    Each training word's context cells are chosen exactly as they will be
    at decode time, using co-occurrence statistics from this same corpus
    and the gold labels of the preceding words.
    """
    known_types = set(catalogs.types)
    for idx, u in enumerate(corpus):
        if u.type_id not in known_types:
            raise ValueError(f"utterance {idx}: type {u.type_id!r} outside catalogs")
        for w in u.words:
            if not catalogs.has_label(w.semantic_class, w.micro_trait):
                text = " ".join(x.token for x in u.words)
                raise ValueError(
                    f"utterance {idx} ({text!r}): label "
                    f"{w.semantic_class}/{w.micro_trait} outside catalogs")

    cooc = CooccurrenceStats.from_utterances(
        (tuple(w.token for w in u.words) for u in corpus), window=config.window)

    model = TrainedModel(
        config=config, catalogs=catalogs,
        type_joint={}, type_marginal={},
        class_joint={}, class_context={}, class_unigram={}, total_words=0,
        trait_joint={}, trait_context={}, trait_unigram={},
        cooc=cooc,
    )

    for u in corpus:
        tokens = tuple(w.token for w in u.words)
        for rw in catalogs.refwords:
            cnt = count_matches(tokens, rw.tokens, rw.max_gap)
            if cnt:
                key = rw.key
                model.type_joint[(u.type_id, key)] = \
                    model.type_joint.get((u.type_id, key), 0) + cnt
                model.type_marginal[key] = model.type_marginal.get(key, 0) + cnt

        prefix = []
        for w in u.words:
            ctx = select_context(config, cooc, prefix, w.token)
            ck = (u.type_id, w.semantic_class, ctx.cp1, ctx.cp2)
            model.class_joint[ck] = model.class_joint.get(ck, 0) + 1
            cc = (u.type_id, ctx.cp1, ctx.cp2)
            model.class_context[cc] = model.class_context.get(cc, 0) + 1
            model.class_unigram[w.semantic_class] = \
                model.class_unigram.get(w.semantic_class, 0) + 1
            model.total_words += 1

            fk = (w.semantic_class, w.micro_trait,
                  ctx.fsep.semantic_class, ctx.fsep.micro_trait)
            model.trait_joint[fk] = model.trait_joint.get(fk, 0) + 1
            fc = (w.semantic_class, ctx.fsep.semantic_class, ctx.fsep.micro_trait)
            model.trait_context[fc] = model.trait_context.get(fc, 0) + 1
            tu = (w.semantic_class, w.micro_trait)
            model.trait_unigram[tu] = model.trait_unigram.get(tu, 0) + 1

            prefix.append((w.token, _fse_of(config, w.semantic_class, w.micro_trait)))

    return model


def prob_type(model: TrainedModel, tokens) -> Dict[str, float]:
    """Distribution over utterance types from the reference words present.

    Every match instance contributes its raw conditional; instances
    combine by product with renormalization.  No usable match (or an
    all-zero product) falls back to uniform.
    """
    types = model.catalogs.types
    tokens = tuple(tokens)
    scores = {t: 1.0 for t in types}
    matched = False
    for rw in model.catalogs.refwords:
        cnt = count_matches(tokens, rw.tokens, rw.max_gap)
        if cnt == 0:
            continue
        marginal = model.type_marginal.get(rw.key, 0)
        if marginal == 0:
            continue  # never seen in training: uninformative
        matched = True
        for t in types:
            p = model.type_joint.get((t, rw.key), 0) / marginal
            scores[t] *= p ** cnt
    total = sum(scores.values())
    if not matched or total == 0.0:
        return {t: 1.0 / len(types) for t in types}
    return {t: s / total for t, s in scores.items()}


def prob_class(model: TrainedModel, type_id: str, cp1: str, cp2: str) -> Dict[str, float]:
    """Smoothed P(class | type, cp1, cp2); backs off to the class unigram
    when the conditioning context was never observed."""
    classes = model.catalogs.classes
    delta = model.config.delta
    ctx = model.class_context.get((type_id, cp1, cp2), 0)
    if ctx > 0:
        denom = ctx + delta * len(classes)
        return {c: (model.class_joint.get((type_id, c, cp1, cp2), 0) + delta) / denom
                for c in classes}
    denom = model.total_words + delta * len(classes)
    if denom == 0:
        return {c: 1.0 / len(classes) for c in classes}
    return {c: (model.class_unigram.get(c, 0) + delta) / denom for c in classes}


def prob_trait(model: TrainedModel, semantic_class: str,
               fsep: FSeGroup) -> Dict[str, float]:
    """Smoothed P(trait | class, fsep) over the traits valid for the class."""
    traits = model.catalogs.traits_by_class.get(semantic_class)
    if not traits:
        raise ValueError(f"class {semantic_class!r} has no known traits")
    delta = model.config.delta
    fk = (semantic_class, fsep.semantic_class, fsep.micro_trait)
    ctx = model.trait_context.get(fk, 0)
    if ctx > 0:
        denom = ctx + delta * len(traits)
        return {tm: (model.trait_joint.get(
            (semantic_class, tm, fsep.semantic_class, fsep.micro_trait), 0) + delta)
            / denom for tm in traits}
    class_count = sum(model.trait_unigram.get((semantic_class, tm), 0) for tm in traits)
    denom = class_count + delta * len(traits)
    if denom == 0:
        return {tm: 1.0 / len(traits) for tm in traits}
    return {tm: (model.trait_unigram.get((semantic_class, tm), 0) + delta) / denom
            for tm in traits}


def decode(model: TrainedModel, lexicon: Optional[Lexicon], tokens,
           skipped=()) -> DecodedUtterance:
    """Greedily label a preprocessed token sequence.

    Per word the winning probability is the exact product of the three
    component conditionals.  Ties take the first candidate in catalog
    order.  An empty token list yields an empty result with the uniform
    type distribution's first type.
    """
    tokens = tuple(tokens)
    types = model.catalogs.types
    tdist = prob_type(model, tokens)
    best_type = types[0]
    for t in types:
        if tdist[t] > tdist[best_type]:
            best_type = t
    p_type = tdist[best_type]

    out = DecodedUtterance(utterance_type=(best_type, p_type), labels=[],
                           skipped=tuple(skipped))
    prefix = []
    for token in tokens:
        ctx = select_context(model.config, model.cooc, prefix, token)
        cdist = prob_class(model, best_type, ctx.cp1, ctx.cp2)

        entry = lexicon.lookup(token) if lexicon is not None else None
        forced = None
        if entry is not None:
            c, tm = entry.fse.semantic_class, entry.fse.micro_trait
            if model.catalogs.has_label(c, tm):
                forced = (c, tm)

        if forced is not None:
            c, tm = forced
            score = cdist[c] * prob_trait(model, c, ctx.fsep)[tm]
            best = (c, tm, score)
        else:
            best = None
            for c in model.catalogs.classes:
                if not model.catalogs.traits_by_class.get(c):
                    continue
                trait_dist = prob_trait(model, c, ctx.fsep)
                for tm in model.catalogs.traits_by_class[c]:
                    score = cdist[c] * trait_dist[tm]
                    if best is None or score > best[2]:
                        best = (c, tm, score)
            if best is None:
                raise ValueError("no class in the catalogs carries any trait")

        c, tm, score = best
        out.labels.append(DecodedWord(token, c, tm, p_type * score))
        prefix.append((token, _fse_of(model.config, c, tm)))
    return out


def _sorted_rows(d: dict) -> list:
    return [(list(k) if isinstance(k, tuple) else [k]) + [v]
            for k, v in sorted(d.items())]


def serialize_model(model: TrainedModel) -> str:
    """Canonical JSON: integer counts only, fully sorted, byte-stable."""
    cfg = model.config
    obj = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": "semdec-model",
        "config": {
            "context_mode": cfg.context_mode, "window": cfg.window,
            "delta": cfg.delta, "max_gap": cfg.max_gap,
            "smooth_affinity": cfg.smooth_affinity, "field": cfg.field,
        },
        "catalogs": {
            "types": model.catalogs.types,
            "classes": model.catalogs.classes,
            "traits_by_class": model.catalogs.traits_by_class,
            "refwords": [
                {"tokens": list(r.tokens), "type_id": r.type_id,
                 "weight": r.weight, "max_gap": r.max_gap}
                for r in model.catalogs.refwords
            ],
        },
        "type_table": {
            "joint": _sorted_rows(model.type_joint),
            "marginal": _sorted_rows(model.type_marginal),
        },
        "class_table": {
            "joint": _sorted_rows(model.class_joint),
            "context": _sorted_rows(model.class_context),
            "unigram": _sorted_rows(model.class_unigram),
            "total_words": model.total_words,
        },
        "trait_table": {
            "joint": _sorted_rows(model.trait_joint),
            "context": _sorted_rows(model.trait_context),
            "unigram": _sorted_rows(model.trait_unigram),
        },
        "cooc": {
            "window": model.cooc.window,
            "total": model.cooc.total,
            "marginal": _sorted_rows(model.cooc.marginal),
            "joint": _sorted_rows(model.cooc.joint),
        },
    }
    return json.dumps(obj, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":")) + "\n"


def _dict_rows(rows: list, key_len: int) -> dict:
    out = {}
    for row in rows:
        key = tuple(row[:key_len]) if key_len > 1 else row[0]
        out[key] = row[key_len]
    return out


def deserialize_model(text: str) -> TrainedModel:
    obj = json.loads(text)
    if obj.get("kind") != "semdec-model":
        raise ValueError("not a semdec model file")
    if obj.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {obj.get('format_version')}")
    cfg = TrainConfig(**obj["config"])
    cat = obj["catalogs"]
    catalogs = Catalogs(
        types=cat["types"], classes=cat["classes"],
        traits_by_class={c: list(ts) for c, ts in cat["traits_by_class"].items()},
        refwords=[ReferenceWord(tuple(r["tokens"]), r["type_id"],
                                r["weight"], r["max_gap"])
                  for r in cat["refwords"]],
    )
    cooc = CooccurrenceStats(window=obj["cooc"]["window"], total=obj["cooc"]["total"])
    cooc.marginal = _dict_rows(obj["cooc"]["marginal"], 1)
    cooc.joint = _dict_rows(obj["cooc"]["joint"], 2)
    return TrainedModel(
        config=cfg, catalogs=catalogs,
        type_joint=_dict_rows(obj["type_table"]["joint"], 2),
        type_marginal=_dict_rows(obj["type_table"]["marginal"], 1),
        class_joint=_dict_rows(obj["class_table"]["joint"], 4),
        class_context=_dict_rows(obj["class_table"]["context"], 3),
        class_unigram=_dict_rows(obj["class_table"]["unigram"], 1),
        total_words=obj["class_table"]["total_words"],
        trait_joint=_dict_rows(obj["trait_table"]["joint"], 4),
        trait_context=_dict_rows(obj["trait_table"]["context"], 3),
        trait_unigram=_dict_rows(obj["trait_table"]["unigram"], 2),
        cooc=cooc,
    )


def save_model(model: TrainedModel, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_model(model))


def load_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as f:
        return deserialize_model(f.read())
