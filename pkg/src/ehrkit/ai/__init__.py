from .clients import (
    ClassifierClient,
    DeterministicGenerator,
    FailingGenerator,
    GeneratorClient,
    HttpGeneratorClient,
    RecordingGenerator,
    ThresholdStubClassifier,
    XRAY_LABELS,
)
from .imaging import FORMATS, MODEL_SIZE, decode_to_tensor, encode_pixel_data
from .orchestrator import (
    DEGRADED_RECOMMENDATIONS,
    REPORT_SECTION_ORDER,
    REVIEW_VERDICTS,
    AiOrchestrator,
    ConversationLog,
    MedicalReport,
    SummaryResult,
    Turn,
    XrayResult,
)
from .prompts import load_prompt
from .serialize import serialize_record_to_text

__all__ = [
    "AiOrchestrator",
    "ClassifierClient",
    "ConversationLog",
    "DEGRADED_RECOMMENDATIONS",
    "DeterministicGenerator",
    "FORMATS",
    "FailingGenerator",
    "GeneratorClient",
    "HttpGeneratorClient",
    "MODEL_SIZE",
    "MedicalReport",
    "REPORT_SECTION_ORDER",
    "REVIEW_VERDICTS",
    "RecordingGenerator",
    "SummaryResult",
    "ThresholdStubClassifier",
    "Turn",
    "XRAY_LABELS",
    "XrayResult",
    "decode_to_tensor",
    "encode_pixel_data",
    "load_prompt",
    "serialize_record_to_text",
]
