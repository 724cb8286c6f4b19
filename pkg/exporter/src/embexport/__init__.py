"""Token-embedding exporter: pull vectors for a word list out of an
encoder and write them as a TINTEMB1 store plus a JSON sidecar."""

__version__ = "0.1.0"

from .export import ExportManifest, export
from .tintemb import read_store, write_store
