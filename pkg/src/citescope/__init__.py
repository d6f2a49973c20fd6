"""citescope: self-citation analytics for citation corpora.

Detects self-citations under the any-common-author rule, computes
h-index variants and grouped descriptive statistics, and fits a
fractional-logit regression with robust standard errors and average
marginal effects.
"""

from citescope.corpus.filters import (
    assign_cohort,
    assign_region,
    filter_by_keyword,
    filter_min_citations,
    first_publication_year,
    load_region_table,
)
from citescope.corpus.generator import (
    GeneratorSpec,
    default_generator_spec,
    generate_synthetic_corpus,
)
from citescope.corpus.io import load_corpus, parse_corpus, save_corpus, serialize_corpus
from citescope.corpus.model import (
    CitationEdge,
    CohortGroup,
    Corpus,
    Gender,
    Publication,
    RegionGroup,
    ResearcherProfile,
)
from citescope.corpus.names import normalize_author_name, render_author_key
from citescope.glm import (
    DesignData,
    FitResult,
    ModelSpec,
    ModelVariant,
    average_marginal_effects,
    build_design_matrix,
    fit_fractional_logit,
    inv_logit,
    logit,
    robust_covariance,
    wald_inference,
)
from citescope.metrics import (
    AnalysisRecord,
    SummaryStats,
    build_analysis_records,
    describe,
    group_describe,
    h_index,
    h_index_excluding_self,
    pearson_correlation,
)
from citescope.report import BoxStats, boxplot_stats, emit_figures
from citescope.selfcite import (
    CitationTally,
    citation_tally,
    classify_edges,
    is_self_citation,
    mean_authors_per_cited_paper,
    self_citation_proportion,
)

__version__ = "0.1.0"
