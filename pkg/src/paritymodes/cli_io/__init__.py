"""File formats, reference signals, plotting and the command-line interface."""

from .formats import SignalFile, read_manifest, read_signal, to_signal, write_manifest, write_signal
from .generators import EXAMPLE_IDS, example_components, example_signal, sawtooth

__all__ = ["SignalFile", "read_signal", "write_signal", "to_signal", "read_manifest",
           "write_manifest", "EXAMPLE_IDS", "example_signal", "example_components", "sawtooth"]
