"""Profile-scoped common-sense semantic networks.

Statements collected through templates compile, in five phases (export,
extraction, normalization, relaxation, filtering), into immutable
networks scoped to a contributor-profile query. Inference operations run
over those networks in-process or behind the management server's XML
method-call protocol, and the quiz-game service feeds collected knowledge
back into the statement store.
"""

from .core import (ConceptNet, NetworkMetrics, ProfileAttrs, ProfileQuery,
                   RawRelation, Relation, RelationType, TypeRegistry,
                   compute_density, default_registry, load_type_registry,
                   parse_relation_line, parse_raw_relation_line,
                   register_relation_types, serialize_relation_line,
                   serialize_raw_relation_line)
from .extraction import (ExtractionRule, extract, extract_corpus, load_rules,
                         resolve_polarity)
from .filtering import (ConceptNetHandle, Materializer, build_conceptnet,
                        parse_profile_query, post_filter_property_heuristic)
from .game import GameService
from .game_http import GameHttpServer
from .inference import (Correspondence, RenderTemplates, ScoredConcept,
                        decompose_phrases, display_node, expand_query,
                        get_analogy, get_context, render_sentence)
from .normalization import (LexiconMorphology, MorphologyProvider,
                            NormalizationStats, TaggedToken, load_lexicon,
                            normalize_phrase, normalize_relation)
from .pipeline import Pipeline
from .relaxation import (HeuristicConfig, PassReport, apply_family_heuristics,
                         infer_property_of, relax, seed_and_group)
from .server import ManagementServer, dispatch, get_api
from .store import (RenderedTemplate, SpellingEvidence, Statement,
                    StatementStore, Template, load_templates, spell_check)

__version__ = "0.1.0"
