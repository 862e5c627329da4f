"""Time series classification with windowed symbolic Fourier features.

Sliding windows of many lengths are summarized as short discrete
words, counted into a sparse bag augmented with predecessor pairs,
pruned by a chi-squared filter, and scored by a regularized linear
model. See fit_weasel for the end-to-end entry point.
"""

from .bop import BagOfPatterns, build_bag, pack_words, unigram_keys, bigram_keys, unpack_key, unpack_word, window_lengths
from .errors import (
    ConfigError,
    EmptyPartitionError,
    InsufficientClassesError,
    InsufficientGroupsError,
    InvalidSplitError,
    NumericInputError,
    ParseError,
    SelectionError,
    ShapeError,
    TooShortError,
    WeaselError,
    WindowLengthError,
)
from .fourier import FourierCoefficients, coefficient_subset, dft, sliding_ri_columns, window_ri_matrix
from .harness import BenchRow, BenchmarkReport, apply_flags, nn_accuracy, nn_euclidean, run_benchmark
from .linear import LinearModel, decision_scores, predict_labels, train_linear
from .selection import DEFAULT_CHI2_THRESHOLD, FeatureDictionary, chi_squared_filter, chi_squared_stats, vectorize, vectorize_all
from .symbolic import (
    SymbolicModel,
    anova_f,
    entropy,
    equi_depth_bins,
    fit_bins,
    fit_symbolic_model,
    select_coefficients,
    sliding_symbols,
    split_gain,
    transform_word,
)
from .ts import DEFAULT_EPSILON, LabeledDataset, TimeSeries, Window, disjoint_windows, sliding_windows, znormalize
from .ucr import load_ucr, load_ucr_file
from .weasel import (
    WeaselConfig,
    WeaselModel,
    deserialize_model,
    fit_weasel,
    load_model,
    predict,
    save_model,
    serialize_model,
    variant_name,
)

__version__ = "0.1.0"
