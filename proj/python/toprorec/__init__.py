from ._toprorec import (
    Catalog,
    InfeasibleError,
    Matrix,
    ParseError,
    SelectionError,
    ValidationError,
    clean_description,
    mine_topics,
    personalization,
    reachability,
    recommend,
    topic_scores,
)

__all__ = [
    "Catalog",
    "InfeasibleError",
    "Matrix",
    "ParseError",
    "SelectionError",
    "ValidationError",
    "clean_description",
    "mine_topics",
    "personalization",
    "reachability",
    "recommend",
    "topic_scores",
]
