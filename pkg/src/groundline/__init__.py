"""Evidence-bounded retrieval and synthesis with byte-exact citations."""

from groundline.config import PipelineConfig
from groundline.engine import QueryEngine, TraceData
from groundline.envelope import Abstention, AnswerEnvelope, CitationAnchor, GroundedAnswer

__version__ = "0.1.0"

__all__ = [
    "Abstention",
    "AnswerEnvelope",
    "CitationAnchor",
    "GroundedAnswer",
    "PipelineConfig",
    "QueryEngine",
    "TraceData",
    "__version__",
]
