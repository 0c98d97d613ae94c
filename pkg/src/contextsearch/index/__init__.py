from .build import (ENTITY_LANE_KEY, IndexConfig, IndexStats, SearchIndex,
                    build_index)
from .excerpts import Excerpt, ExcerptStore, build_excerpt
from .postings import (ENTITY_BASE, ContextList, EntityList, empty_entities,
                       empty_list, entities_in_contexts,
                       filter_contexts_by_entities, filter_to_word,
                       filter_to_word_range, intersect, sort_postings,
                       validate_sorted)
from .storage import IndexFiles, open_index, write_index

__all__ = [
    "ENTITY_LANE_KEY", "IndexConfig", "IndexStats", "SearchIndex", "build_index",
    "Excerpt", "ExcerptStore", "build_excerpt",
    "ENTITY_BASE", "ContextList", "EntityList", "empty_entities", "empty_list",
    "entities_in_contexts", "filter_contexts_by_entities", "filter_to_word",
    "filter_to_word_range", "intersect", "sort_postings", "validate_sorted",
    "IndexFiles", "open_index", "write_index",
]
