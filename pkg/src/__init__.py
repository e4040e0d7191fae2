"""Desargues plane ratio engine - Main package."""

__version__ = "0.1.0"

from .construct import Chart, ConstructionTrace
from .dsl import parse
from .interpreter import evaluate
from .reporter import Reporter
from .scalar import ModelConfig
from .verifier import Verifier

__all__ = ["Chart", "ConstructionTrace", "ModelConfig", "Reporter", "Verifier", "evaluate", "parse"]
