"""Citation-graph data model, interchange format, filters, and generator."""

from citescope.corpus.filters import (
    assign_cohort,
    assign_region,
    citation_totals,
    filter_by_keyword,
    filter_min_citations,
    first_publication_year,
    load_region_table,
)
from citescope.corpus.generator import (
    DEFAULT_SELF_CITE_COEFFICIENTS,
    GeneratorSpec,
    default_generator_spec,
    generate_synthetic_corpus,
)
from citescope.corpus.io import (
    load_corpus,
    parse_corpus,
    save_corpus,
    serialize_corpus,
)
from citescope.corpus.model import (
    CitationEdge,
    CohortGroup,
    Corpus,
    Gender,
    Publication,
    RegionGroup,
    ResearcherProfile,
)
from citescope.corpus.names import (
    is_author_key,
    normalize_author_name,
    render_author_key,
)
