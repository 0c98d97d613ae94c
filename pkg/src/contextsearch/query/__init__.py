from .engine import (EvalConfig, Evidence, ResultGroup, ResultSet, denotation,
                     evaluate, rank_results)
from .grammar import (Arc, OwItem, QueryNode, QueryTree, check_types,
                      from_json, parse_query, to_json, to_text)
from .rewrite import (apply_suggestion, change_focus, change_root, copy_node,
                      parse_focus, resolve_focus)
from .suggest import (SuggestConfig, SuggestionEntry, Suggestions, suggest)

__all__ = [
    "EvalConfig", "Evidence", "ResultGroup", "ResultSet", "denotation",
    "evaluate", "rank_results",
    "Arc", "OwItem", "QueryNode", "QueryTree", "check_types", "from_json",
    "parse_query", "to_json", "to_text",
    "apply_suggestion", "change_focus", "change_root", "copy_node",
    "parse_focus", "resolve_focus",
    "SuggestConfig", "SuggestionEntry", "Suggestions", "suggest",
]
