"""Mode decomposition of finite, odd-length signals by parity spectra,
narrowband orthogonal projection and instantaneous-frequency sign tests."""

from .errors import (AlgorithmError, SeedNotInModeError, SignalFormatError,
                     TrendFitError, ZeroSignalError)
from .lowfreq import TrendFit, choose_resample_period, eval_trend, fit_trend
from .mode_search import (DecompositionResult, SearchConfig, decompose_axis,
                          decompose_full, search_mode)
from .phase_freq import (PhaseTrack, classify_frequency_sign, companion_even_source,
                         companion_odd_source, compute_phase_track)
from .projection import (BandBasis, BandInterval, Mode, build_band_basis, project_band,
                         project_band_oracle)
from .signal_core import (DiscreteSignal, ParityPair, interpolant_derivative_eval,
                          interpolant_eval, parity_decompose)
from .spectrum import AxisSpectrum, Lobe, compute_axis_spectra, detect_lobes, lobe_width_classify

__version__ = "0.1.0"
