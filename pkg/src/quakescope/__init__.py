"""Topic-model analytics over ensembles of building seismic response simulations."""

__version__ = "0.1.0"

from .config import PipelineConfig, load_config
from .corpus import Corpus, DocumentSeries, Vocabulary, assemble_corpus, build_documents
from .ingest import (
    Attribute,
    ChannelSeries,
    SimulationRecord,
    load_simulation,
    normalize_channels,
    save_simulation,
)
from .lda import TopicModel, TopicWeights, bound, fit, topic_spectrum, transform
from .pipeline import SessionState, documents_for_record, run_pipeline
from .search import (
    QuerySelection,
    SearchHit,
    search_collection,
    sliding_distance_fft,
    sliding_distance_naive,
)
from .similarity import (
    GaussianSummary,
    SimilarityMatrix,
    bhattacharyya,
    complete_linkage_order,
    fit_gaussian,
    similarity_matrix,
)
from .stft import BinnedSpectrogram, Spectrogram, bin_spectrogram, stft
from .synth import (
    EnsembleTemplate,
    PhaseSpec,
    four_phase_demo,
    generate_ensemble,
    generate_phased,
)
from .topics import TopicTimeSeries, segment, topic_series

__all__ = [
    "Attribute",
    "BinnedSpectrogram",
    "ChannelSeries",
    "Corpus",
    "DocumentSeries",
    "EnsembleTemplate",
    "GaussianSummary",
    "PhaseSpec",
    "PipelineConfig",
    "QuerySelection",
    "SearchHit",
    "SessionState",
    "SimilarityMatrix",
    "SimulationRecord",
    "Spectrogram",
    "TopicModel",
    "TopicTimeSeries",
    "TopicWeights",
    "Vocabulary",
    "assemble_corpus",
    "bhattacharyya",
    "bin_spectrogram",
    "bound",
    "build_documents",
    "complete_linkage_order",
    "documents_for_record",
    "fit",
    "fit_gaussian",
    "four_phase_demo",
    "generate_ensemble",
    "generate_phased",
    "load_config",
    "load_simulation",
    "normalize_channels",
    "run_pipeline",
    "save_simulation",
    "search_collection",
    "segment",
    "similarity_matrix",
    "sliding_distance_fft",
    "sliding_distance_naive",
    "stft",
    "topic_series",
    "topic_spectrum",
    "transform",
]
