"""Grammar induction over entity-annotated syntax trees.

Thin python surface over the C++ core: parse instances, ingest corpora,
extract and validate grammars, run the structuring loop, and generate
synthetic corpora.
"""

try:
    from ._architext import (  # noqa: F401
        Tree,
        accepts,
        equivalence_classes,
        extract_grammar,
        generate,
        ingest,
        parse_instance,
        sim,
        structure,
        validate,
    )
except ImportError:  # running against a plain cmake build tree
    from _architext import (  # noqa: F401
        Tree,
        accepts,
        equivalence_classes,
        extract_grammar,
        generate,
        ingest,
        parse_instance,
        sim,
        structure,
        validate,
    )

__all__ = [
    "Tree",
    "accepts",
    "equivalence_classes",
    "extract_grammar",
    "generate",
    "ingest",
    "parse_instance",
    "sim",
    "structure",
    "validate",
]
