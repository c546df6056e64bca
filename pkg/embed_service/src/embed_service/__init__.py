from .app import ServiceSettings, create_app, load_model
from .model import DEFAULT_MODEL, MiniTransformerEncoder, UnknownModelError, split_pieces

__all__ = [
    "DEFAULT_MODEL",
    "MiniTransformerEncoder",
    "ServiceSettings",
    "UnknownModelError",
    "create_app",
    "load_model",
    "split_pieces",
]
