"""Reversible spectral behavior images for API-call traces.

Encode dynamic-analysis traces into RGB rasters whose frequency plane
carries tf-idf amplitudes and first-occurrence phases, decode such rasters
back to ranked ngram sequences, and fingerprint them with per-channel
difference hashes.
"""
from .codec import (
    BehaviorImage,
    DecodedChannel,
    DecodedEntry,
    Spectrum,
    build_spectrum,
    contrast_normalize,
    decode,
    decode_channel,
    dft2,
    encode,
    first_occurrence_ranks,
    hermitian_symmetrize,
    idft2,
    idft_magnitude,
    load_png,
    png_bytes,
    polar,
    ranks_to_phases,
    save_png,
)
from .errors import (
    ChannelMapError,
    CodecError,
    EmptyDocumentError,
    FeatureRankingError,
    ManifestError,
    SpectraceError,
    TraceParseError,
    VocabularyError,
)
from .features import (
    CHANNEL_NGRAM_SIZES,
    CHANNELS,
    ChannelMap,
    build_channel_map,
    channel_ngrams,
    mirror_coord,
    rank_channel_ngrams,
    shell_order,
    significance,
    significance_table,
    usable_coords,
)
from .manifest import CodecModel, load_manifest, save_manifest
from .phash import (
    CategoryPartition,
    PerceptualHash,
    cluster,
    dhash_channel,
    distance_histogram,
    distance_matrix,
    hamming,
    hash192,
)
from .pipeline import encode_documents, fit_model, select_holdout
from .synth import SyntheticCorpus, SyntheticSpec, generate_corpus, write_corpus
from .tfidf import (
    Vocabulary,
    extract_ngrams,
    fit_vocabulary,
    smoothed_idf,
    sublinear_weight,
    tfidf,
)
from .trace import (
    Document,
    Event,
    document_from_text,
    document_to_text,
    parse_event_line,
    parse_trace,
)

__version__ = "0.1.0"
