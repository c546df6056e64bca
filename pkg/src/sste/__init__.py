"""Detection of fake and LLM-generated professional-network profiles from
registration-time text, via tag-debiased document embeddings."""

from .embeddings import (
    EmbeddingTable,
    MissingTagTokensError,
    ProviderDescriptor,
    ProviderError,
    RemoteEmbeddingProvider,
    StaticEmbeddingProvider,
    load_embedding_table,
)
from .featurize import (
    EmptyDocumentError,
    FeaturizationMode,
    SSTEVectorizer,
    collect_subsections,
    combined_features,
    document_embedding,
    featurize_profiles,
    numeric_features,
    subsection_feature,
    tag_vector,
)
from .profiles import (
    TAXONOMY,
    Dataset,
    DatasetError,
    Label,
    Profile,
    Section,
    SectionEntry,
    component_counts,
    parse_dataset,
    serialize_dataset,
)
from .text import TextPipeline, preprocess, preprocess_tag

__version__ = "0.1.0"
