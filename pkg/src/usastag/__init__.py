"""Hybrid rule/neural semantic tagging over the USAS category inventory.

The package pairs a lexicon-driven rule tagger with a trainable gloss
bi-encoder; the hybrid estimator backs off to the neural model exactly
when the lexicons have no entry for a token.  All taggers follow the
sklearn estimator conventions (``fit``/``predict``/``get_params``), so
they compose with pipelines, cloning, and grid search.
"""

from .biencoder import (
    BiEncoderTagger,
    EncoderConfig,
    GlossMatrix,
    ReferenceEncoder,
    TrainingExample,
    build_gloss_matrix,
    encode_context,
    load_checkpoint,
    predict_topk,
    save_checkpoint,
    score,
    train,
)
from .corpus import CorpusToken, Document, read_vertical, write_vertical
from .errors import UsastagError
from .hybrid import HybridConfig, HybridTagger, tag_hybrid
from .lexicon import MatchKind, MWEEntry, SingleWordLexicon, load_mwe, load_single_word, lookup
from .metrics import EvalReport, GoldToken, corpus_statistics, evaluate_run, preprocess_gold, top_n_accuracy
from .mwe import MWEMatch, Pattern, compile_template, match_sentence
from .rule import InputToken, Provenance, RankedPrediction, RuleTagger, tag_sentence
from .silver import (
    DistributionKind,
    SamplingDistribution,
    SilverRecord,
    TagFrequencyTable,
    build_distributions,
    count_labels,
    extract_positives,
    make_dataset,
    read_silver,
    sample_negatives,
    write_silver,
)
from .tags import (
    CategoryLabel,
    GlossEntry,
    ParsedTag,
    SenseInventory,
    canonical_core,
    default_inventory,
    is_discardable,
    load_inventory,
    parse_tag,
    split_membership,
)

__version__ = "0.1.0"

__all__ = [
    "BiEncoderTagger",
    "CategoryLabel",
    "CorpusToken",
    "DistributionKind",
    "Document",
    "EncoderConfig",
    "EvalReport",
    "GlossEntry",
    "GlossMatrix",
    "GoldToken",
    "HybridConfig",
    "HybridTagger",
    "InputToken",
    "MWEEntry",
    "MWEMatch",
    "MatchKind",
    "ParsedTag",
    "Pattern",
    "Provenance",
    "RankedPrediction",
    "ReferenceEncoder",
    "RuleTagger",
    "SamplingDistribution",
    "SenseInventory",
    "SilverRecord",
    "SingleWordLexicon",
    "TagFrequencyTable",
    "TrainingExample",
    "UsastagError",
    "build_distributions",
    "build_gloss_matrix",
    "canonical_core",
    "compile_template",
    "corpus_statistics",
    "count_labels",
    "default_inventory",
    "encode_context",
    "evaluate_run",
    "extract_positives",
    "is_discardable",
    "load_checkpoint",
    "load_inventory",
    "load_mwe",
    "load_single_word",
    "lookup",
    "make_dataset",
    "match_sentence",
    "parse_tag",
    "predict_topk",
    "preprocess_gold",
    "read_silver",
    "read_vertical",
    "sample_negatives",
    "save_checkpoint",
    "score",
    "split_membership",
    "tag_hybrid",
    "tag_sentence",
    "top_n_accuracy",
    "train",
    "write_silver",
    "write_vertical",
]
