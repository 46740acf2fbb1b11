"""Executable enriched categories over finite bases: modules, collages and their checks."""

__version__ = "0.1.0"

from .base import ArityClass, BaseError, Hom1, Hom2, QuantaloidBase, SpanBase, Verdict  # noqa: E402,F401
from .enriched import ECategory, EFunctor, EModule, ModCell, validate  # noqa: E402,F401
from .modcat import ModBase, mod_compose, mod_id  # noqa: E402,F401
from .collage import CollageResult, certify_collage, collage  # noqa: E402,F401
