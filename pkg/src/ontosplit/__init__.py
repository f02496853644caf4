"""Divide-and-conquer ontology matching: lexical index, clustering,
locality modules, and the coverage/size metrics to judge the result."""

__version__ = "0.1.0"

from .clustering import ClusterAssignment, cluster_entries, kmeans, naive_split
from .division import (
    Division,
    DivisionError,
    MatchingSubtask,
    MatchingTask,
    context_of,
    divide_task,
    make_task,
)
from .embedding import EmbeddingModel, HyperParams, key_vector, pair_loss, train_embeddings
from .lexindex import (
    IndexEntry,
    LexicalIndex,
    NormalizationConfig,
    STOP_WORDS,
    build_index,
    derive_mappings,
    dump_index,
    normalize_label,
    subset_keys,
)
from .locality import Module, extract_module, is_bottom_local
from .metrics import (
    Alignment,
    Mapping,
    coverage,
    coverage_ratio,
    division_size_ratio,
    merge_alignments,
    precision_recall_f,
    task_size_ratio,
)
from .model import Ontology, assign_ids, signature_of
from .ofn import ParseError, ParserConfig, parse_ontology, serialize_ontology

__all__ = [
    "Alignment",
    "ClusterAssignment",
    "Division",
    "DivisionError",
    "EmbeddingModel",
    "HyperParams",
    "IndexEntry",
    "LexicalIndex",
    "Mapping",
    "MatchingSubtask",
    "MatchingTask",
    "Module",
    "NormalizationConfig",
    "Ontology",
    "ParseError",
    "ParserConfig",
    "STOP_WORDS",
    "assign_ids",
    "build_index",
    "cluster_entries",
    "context_of",
    "coverage",
    "coverage_ratio",
    "derive_mappings",
    "divide_task",
    "division_size_ratio",
    "dump_index",
    "extract_module",
    "is_bottom_local",
    "key_vector",
    "kmeans",
    "make_task",
    "merge_alignments",
    "naive_split",
    "normalize_label",
    "pair_loss",
    "parse_ontology",
    "precision_recall_f",
    "serialize_ontology",
    "signature_of",
    "subset_keys",
    "task_size_ratio",
    "train_embeddings",
]
