"""Possibility frames for awareness, knowledge and belief."""
from .algebras import EpistemicAwarenessAlgebra, frame_to_algebra, validate_eaa
from .audit import audit
from .boolean import FiniteBooleanAlgebra
from .documents import load_algebra, load_frame, parse_frame, serialize_algebra, serialize_frame
from .events import Event, EventFamily
from .formula import eval_formula, parse_formula, query
from .frames import Frame, build_frame, quotient_frame
from .poset import Poset, build_poset
from .representation import build_filter_frame, verify_representation
from .validation import validate_frame

__version__ = "0.1.0"

__all__ = [
    "EpistemicAwarenessAlgebra", "Event", "EventFamily", "FiniteBooleanAlgebra", "Frame", "Poset",
    "audit", "build_filter_frame", "build_frame", "build_poset", "eval_formula", "frame_to_algebra",
    "load_algebra", "load_frame", "parse_formula", "parse_frame", "query", "quotient_frame",
    "serialize_algebra", "serialize_frame", "validate_eaa", "validate_frame", "verify_representation",
]
