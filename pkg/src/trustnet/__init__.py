"""Trust-ranked social search over a follow graph.

Contacts carry user-assigned static trust and activity-driven dynamic
trust; keyword search orders posts by the searcher's trust in their
authors. Admission of new members runs through a peer-groomed quarantine
with permanent immunization, and per-stream polarity forecasts follow a
pheromone update rule.
"""

__version__ = "0.1.0"

from .app import App, AppConfig
from .dynamic import CoefficientSet, DynamicTrustInput, compute_dynamic_trust
from .graph import DecayMode, SocialGraph, decayed_trust
from .index import Post, SearchEngine, SearchRequest, TrustMode
from .ledger import ActivityEvent, ActivityLedger, EventKind
from .opinion import ForecastBoard, Lexicon, PheromoneTable, Polarity, classify
from .quarantine import AdmissionRegistry, QuarantineState, identity_fingerprint

__all__ = [
    "ActivityEvent",
    "ActivityLedger",
    "AdmissionRegistry",
    "App",
    "AppConfig",
    "CoefficientSet",
    "DecayMode",
    "DynamicTrustInput",
    "EventKind",
    "ForecastBoard",
    "Lexicon",
    "PheromoneTable",
    "Polarity",
    "Post",
    "QuarantineState",
    "SearchEngine",
    "SearchRequest",
    "SocialGraph",
    "TrustMode",
    "classify",
    "compute_dynamic_trust",
    "decayed_trust",
    "identity_fingerprint",
]
