"""Exception and warning types shared across the package.

Every error carries a machine-readable ``code`` (the class name) so the HTTP
layer can surface it without leaking stack traces.
"""

from __future__ import annotations


class FuzzyvisError(Exception):
    """Base class for all errors raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- ontology ---------------------------------------------------------------

class OntologyError(FuzzyvisError):
    """Raised when an ontology file fails to parse or validate."""


class MissingId(OntologyError):
    def __init__(self, line: int):
        super().__init__(f"term stanza starting at line {line} has no 'id:' line")
        self.line = line


class DuplicateId(OntologyError):
    def __init__(self, concept_id: str):
        super().__init__(f"concept id declared more than once: {concept_id!r}")
        self.concept_id = concept_id


class DanglingParent(OntologyError):
    def __init__(self, child: str, parent: str):
        super().__init__(f"concept {child!r} names undeclared parent {parent!r}")
        self.child = child
        self.parent = parent


class CycleDetected(OntologyError):
    def __init__(self, cycle: list[str]):
        super().__init__(f"parent edges form a cycle through {cycle}")
        self.cycle = cycle


class SchemaError(OntologyError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class EmptyQuery(FuzzyvisError):
    pass


class UnknownConcept(FuzzyvisError):
    def __init__(self, name: str, suggestions: list[str] | None = None):
        msg = f"unknown concept {name!r}"
        if suggestions:
            msg += "; did you mean: " + ", ".join(suggestions)
        super().__init__(msg)
        self.name = name
        self.suggestions = suggestions or []


class NotALeaf(FuzzyvisError):
    def __init__(self, concept_id: str):
        super().__init__(f"concept {concept_id!r} is not a leaf")
        self.concept_id = concept_id


class NoCommonAncestor(FuzzyvisError):
    def __init__(self, a: str, b: str):
        super().__init__(f"leaves {a!r} and {b!r} share no ancestor")
        self.a = a
        self.b = b


# --- fuzzy algebra ----------------------------------------------------------

class InvalidDegree(FuzzyvisError):
    def __init__(self, value: float):
        super().__init__(f"membership degree outside [0, 1]: {value!r}")
        self.value = value


class EmptyList(FuzzyvisError):
    pass


class DimensionMismatch(FuzzyvisError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"vector length mismatch: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


# --- embedding generation / store -------------------------------------------

class NoLeaves(FuzzyvisError):
    pass


class EmptyMatrix(FuzzyvisError):
    pass


class EmptyIndex(FuzzyvisError):
    pass


class HeaderMissing(FuzzyvisError):
    pass


class DimMismatchAcrossRows(FuzzyvisError):
    def __init__(self, line: int, expected: int, got: int):
        super().__init__(f"line {line}: row has {got} values, header says dim={expected}")
        self.line = line
        self.expected = expected
        self.got = got


class ValueOutOfRange(FuzzyvisError):
    def __init__(self, line: int, value: float):
        super().__init__(f"line {line}: value {value!r} outside [0, 1] beyond tolerance")
        self.line = line
        self.value = value


class UnknownConceptWarning(UserWarning):
    """Embedding row for a concept absent from the loaded ontology (row dropped)."""


class ValueClampedWarning(UserWarning):
    """Embedding value marginally outside [0, 1] clamped on import."""


# --- query engine -----------------------------------------------------------

class QuerySyntaxError(FuzzyvisError):
    def __init__(self, position: int, message: str, expected: list[str] | None = None):
        detail = f"at position {position}: {message}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)
        self.position = position
        self.expected = expected or []


class AmbiguousLabel(FuzzyvisError):
    def __init__(self, label: str, matches: list[str]):
        super().__init__(f"label {label!r} matches several concepts: {', '.join(matches)}")
        self.label = label
        self.matches = matches


class MissingEmbedding(FuzzyvisError):
    def __init__(self, concept_id: str):
        super().__init__(f"no embedding vector for concept {concept_id!r}")
        self.concept_id = concept_id


# --- service ----------------------------------------------------------------

class UnknownInstance(FuzzyvisError):
    def __init__(self, instance_id: str):
        super().__init__(f"no such instance: {instance_id!r}")
        self.instance_id = instance_id


class UnsupportedFormat(FuzzyvisError):
    def __init__(self, fmt: str):
        super().__init__(f"unsupported ontology format {fmt!r} (use 'obo' or 'json')")
        self.fmt = fmt


class InvalidParams(FuzzyvisError):
    pass


class NoEmbedding(FuzzyvisError):
    def __init__(self, instance_id: str):
        super().__init__(f"instance {instance_id!r} has no embedding index yet")
        self.instance_id = instance_id
