"""Exception hierarchy shared by all folksearch modules."""


class FolksearchError(Exception):
    """Base class for all folksearch errors."""


# --- formal contexts -------------------------------------------------------

class EmptyLabel(FolksearchError):
    """A facet/tag/incidence label is empty after normalization."""


class UnknownFacet(FolksearchError):
    """A facet is not part of the context."""


class UnknownTag(FolksearchError):
    """A tag is not part of the context (or not labelled in the lattice)."""


class NotALattice(FolksearchError):
    """The given concept set is not closed under meets and joins."""


# --- ranking ---------------------------------------------------------------

class UnknownNode(FolksearchError):
    """A node index or labelled tag is not present in the lattice."""


class ZeroVector(FolksearchError):
    """Cosine similarity is undefined for a zero-norm vector."""


class NoSubject(FolksearchError):
    """The walk graph has no valid start node."""


class OutOfRange(FolksearchError):
    """A similarity degree is outside [0, 1]."""


# --- projector frameworks --------------------------------------------------

class DimensionMismatch(FolksearchError):
    """Operands live in spaces of different dimension."""


class IncompatibleStatements(FolksearchError):
    """Projectors do not commute; combining them is nonsense."""


class IncompatibleFrameworks(FolksearchError):
    """Frameworks do not share a basis or their projectors do not commute."""


class AlgebraTooLarge(FolksearchError):
    """Generated Boolean algebra exceeds the atom guardrail."""


# --- ontology / joint meaning ----------------------------------------------

class CycleDetected(FolksearchError):
    """The taxonomy parent edges contain a cycle."""


class MultipleRoots(FolksearchError):
    """A node other than the implicit root has no path to it."""


class DuplicateLabel(FolksearchError):
    """The same child label is declared twice in the taxonomy."""


class EmptyCollection(FolksearchError):
    """No speaker frameworks to select from."""


class UnknownOption(FolksearchError):
    """A collapse option id does not exist in the pending choice."""


class PendingCollapse(FolksearchError):
    """A collapse choice awaits the reader before results can be produced."""

    def __init__(self, choice):
        super().__init__("reader must resolve a collapse choice")
        self.choice = choice


# --- search service ---------------------------------------------------------

class ParseError(FolksearchError):
    """A corpus/taxonomy/judgments line could not be parsed."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class EmptyCorpus(FolksearchError):
    """The contributions input holds no usable lines."""


class UnknownSession(FolksearchError):
    """No session with the given id."""


class NoPendingChoice(FolksearchError):
    """choose_collapse called with nothing to decide."""


class EmptyRetrieved(FolksearchError):
    """Precision is undefined for an empty retrieved set."""


class EmptyRelevant(FolksearchError):
    """Recall is undefined for an empty relevant set."""


class EmptyLog(FolksearchError):
    """Statistics need at least one query log entry."""
