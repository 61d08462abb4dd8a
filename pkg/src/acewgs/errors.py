"""Exception hierarchy shared by all acewgs modules.

Every error carries a stable machine-readable ``code`` so the service layer
can map failures onto ``{code, message}`` JSON bodies without leaking stack
traces onto the wire.
"""


class AcewgsError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__)


# --- LLM gateway -----------------------------------------------------------

class LlmError(AcewgsError):
    """A language-model backend call failed."""

    code = "llm_error"


class ConnectionFailed(LlmError):
    """The model backend was unreachable within the timeout."""

    code = "connection_failed"


class ModelNotFound(LlmError):
    """The backend does not know the requested model."""

    code = "model_not_found"


class MalformedResponse(LlmError):
    """The backend answered but the payload is missing required fields."""

    code = "malformed_response"


class EmptyPrompt(AcewgsError):
    """generate() requires a non-empty prompt."""

    code = "empty_prompt"


class DimensionMismatch(AcewgsError):
    """A vector's length differs from the established dimension."""

    code = "dimension_mismatch"


class PortUnavailable(AcewgsError):
    """The mock backend could not bind its port."""

    code = "port_unavailable"


# --- routing / sessions ----------------------------------------------------

class UnknownReference(AcewgsError):
    """A comprehension route named a reference ID not in the manifest."""

    code = "unknown_reference"


# --- corpus ----------------------------------------------------------------

class ManifestError(AcewgsError):
    """Base class for manifest loading failures."""

    code = "manifest_error"


class ParseError(ManifestError):
    """A manifest row could not be parsed."""

    code = "parse_error"

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class DuplicateRefId(ManifestError):
    """Two manifest rows share a reference ID."""

    code = "duplicate_ref_id"


class MissingField(ManifestError):
    """A required manifest field is absent or empty."""

    code = "missing_field"


class InvalidParams(AcewgsError):
    """Chunker parameters violate 0 <= overlap < size."""

    code = "invalid_params"


class MissingText(AcewgsError):
    """No full text exists for the requested article."""

    code = "missing_text"


# --- query DSL -------------------------------------------------------------

class DslError(AcewgsError):
    """Base class for query-DSL failures."""

    code = "dsl_error"


class DslSyntaxError(DslError):
    """The DSL text does not match the grammar."""

    code = "dsl_syntax_error"

    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(f"at position {position}: {message}")


class UnknownField(DslError):
    """The DSL referenced a field outside the seven manifest fields."""

    code = "unknown_field"


class DslTypeError(DslError):
    """Operator and field types are incompatible."""

    code = "dsl_type_error"


class TranslationExhausted(AcewgsError):
    """The LLM failed to produce parseable DSL within the retry budget."""

    code = "translation_exhausted"


# --- vector index ----------------------------------------------------------

class ZeroVector(AcewgsError):
    """Cosine similarity is undefined for a zero-norm vector."""

    code = "zero_vector"


class EmptyIndex(AcewgsError):
    """Search over an empty (possibly filtered-empty) index."""

    code = "empty_index"


class FormatError(AcewgsError):
    """A persisted file has a bad magic number, version, or layout."""

    code = "format_error"


class TruncatedFile(AcewgsError):
    """A persisted file ended mid-record."""

    code = "truncated_file"


# --- comprehension ---------------------------------------------------------

class ArticleNotIndexed(AcewgsError):
    """The article must be indexed before questions can be answered."""

    code = "article_not_indexed"


class EmptyRetrieval(AcewgsError):
    """The article is indexed but holds zero chunks."""

    code = "empty_retrieval"


# --- thermodynamics --------------------------------------------------------

class OutOfRange(AcewgsError):
    """Temperature outside the correlation's validity window."""

    code = "out_of_range"


class NonConvergence(AcewgsError):
    """The equilibrium bisection failed to bracket a root."""

    code = "non_convergence"


# --- surrogate model -------------------------------------------------------

class UnknownCatalogId(AcewgsError):
    """A design referenced a catalog entry the schema does not know."""

    code = "unknown_catalog_id"


class SchemaMismatch(AcewgsError):
    """The feature schema lacks a slot the encoder requires."""

    code = "schema_mismatch"


class DimensionChainBroken(AcewgsError):
    """Adjacent network layers have incompatible shapes."""

    code = "dimension_chain_broken"


class NonFiniteActivation(AcewgsError):
    """A forward pass produced NaN or infinity."""

    code = "non_finite_activation"


class InvalidDesign(AcewgsError):
    """A catalyst design violates its composition invariants."""

    code = "invalid_design"


# --- optimizer / inverse feature -------------------------------------------

class InfeasibleSpace(AcewgsError):
    """No point satisfies the design-space constraints."""

    code = "infeasible_space"


class InvalidSettings(AcewgsError):
    """Parameter settings failed validation against the catalog."""

    code = "invalid_settings"


class UnknownJob(AcewgsError):
    """No job with that ID exists (never submitted, or evicted)."""

    code = "unknown_job"


class ConfigError(AcewgsError):
    """The configuration file is missing or invalid."""

    code = "config_error"
