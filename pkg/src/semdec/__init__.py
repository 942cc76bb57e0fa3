"""Semantic decoder for transcribed utterances.

Labels each significant word of an utterance with a (semantic class,
micro trait) pair using a factorized count model whose context is chosen
by average mutual information, plus the supporting pipeline: lexicon
building under integrity constraints, reference-word extraction, class
induction, and an evaluation harness for context-selection strategies.
"""

__version__ = "0.1.0"

from semdec._kernels import BACKEND as KERNEL_BACKEND  # noqa: F401
from semdec.affinity import (  # noqa: F401
    BEGIN_CLASS, BEGIN_FSE, BEGIN_TRAIT, CooccurrenceStats, PertinentContext,
    im_avg, im_pointwise, max_affinity, pertinent_context,
)
from semdec.corpus import (  # noqa: F401
    LabeledCorpus, LabeledUtterance, LabeledWord, TypedCorpus,
    load_labeled_corpus, load_typed_corpus, save_labeled_corpus, strip_labels,
)
from semdec.extraction import (  # noqa: F401
    ClassCatalog, ReferenceWord, count_matches, extract_reference_words,
    kmeans_classes, tfidf_weight,
)
from semdec.lexicon import (  # noqa: F401
    ConstraintViolation, FSeGroup, FsyGroup, Lexicon, LexiconEntry,
    ValidationContext, load_lexicon, save_lexicon,
)
from semdec.model import (  # noqa: F401
    Catalogs, DecodedUtterance, DecodedWord, TrainConfig, TrainedModel,
    decode, load_model, prob_class, prob_trait, prob_type, save_model, train,
)
from semdec.evaluation import (  # noqa: F401
    EvalReport, PlantedSpec, compare_strategies, default_planted_spec,
    evaluate, generate_synthetic_corpus,
)
