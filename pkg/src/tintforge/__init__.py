"""Training-free color-fidelity toolkit: perceptual color math, hue-grouped
retrieval and Gaussian blending of color token embeddings, attention-binding
guidance, prompt disambiguation, and benchmark construction."""

__version__ = "0.1.0"

from .colorspace import (
    DeltaEParams,
    LabColor,
    SrgbColor,
    ciede2000,
    format_hex,
    lab_to_srgb,
    pairwise_distance_matrix,
    parse_hex,
    space_distance,
    srgb_to_lab,
)
from .vocab import HueGroup, Vocabulary, load_vocab
from .embedding import (
    BlendSpec,
    EmbeddingStore,
    blend_target,
    gaussian_weights,
    lerp,
    load_store,
    refine_prompt_embedding,
    save_store,
)
from .correlation import CorrelationReport, run_alignment_study, spearman_rho
from .guidance import (
    AttentionMap,
    BindingPair,
    LatentState,
    SyntheticAttentionProvider,
    binding_loss,
    binding_step,
    kl_divergence,
    synthetic_provider,
)
from .disambiguation import (
    ColorAnalysis,
    DisambiguationResult,
    EndpointConfig,
    detect_color_terms,
    disambiguate_llm,
    disambiguate_offline,
)
from .bench import (
    BenchPrompt,
    Caption,
    build_bench,
    filter_color_captions,
    kmeans,
    sample_per_cluster,
    substitute_compounds,
)
from .pipeline import PipelineConfig, run_pipeline
