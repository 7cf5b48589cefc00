"""The six-step agent chain and its evaluation harness."""

from .agent import (
    PipelineRun,
    StepTranscript,
    ToolCall,
    UnknownDrawingKind,
    parse_kind,
    records_from_run,
    run_pipeline,
    run_step,
)
from .extract import ExtractionFailed, NoResultBlock, UnterminatedResultBlock, extract_result
from .prompts import MissingBinding, PromptTemplate, UnknownPlaceholder, load_templates, render_prompt
from .providers import (
    Completion,
    CompletionRequest,
    FaultProvider,
    HttpProvider,
    ProviderConfig,
    ProviderConfigError,
    ProviderError,
    ReplayProvider,
    Role,
    parse_schedule,
)
from .tools import ArityError, DivideByZero, NegativeSqrt, calc_tool
