"""Synthetic dataset generators for benchmark and ablation tests.

Each generator returns a (train, test) pair of LabeledDataset with
balanced classes. Signal components are anchored to absolute time
(phase depends on t, not on the random placement), so windows taken
at fixed offsets observe reproducible coefficient values even when
the component's location varies per sample.
"""

import numpy as np

from .ts import LabeledDataset

__all__ = [
    "shift_invariance",
    "fine_frequency",
    "bigram_order",
    "multi_scale",
    "pure_noise",
    "cluster_blobs",
]


def _assemble(values, labels, n_train):
    train = LabeledDataset(values[:n_train], labels[:n_train])
    test = LabeledDataset(values[n_train:], labels[n_train:])
    return train, test


def _balanced_labels(per_class_names, total):
    reps = -(-total // len(per_class_names))
    return (list(per_class_names) * reps)[:total]


def _smooth_noise(rng, n, width):
    """Unit-variance noise averaged over `width` samples.

    Averaging shifts the noise power toward low frequencies, which
    inflates the spread of whole-series distances without raising the
    noise floor at higher window frequencies.
    """
    if width <= 1:
        return rng.standard_normal(n)
    draw = rng.standard_normal(n + width - 1)
    kernel = np.ones(width) / width
    return np.convolve(draw, kernel, mode="valid") * np.sqrt(width)


def shift_invariance(n_train=200, n_test=200, length=128, burst_length=48,
                     period=4, amplitude=1.0, amplitude_jitter=0.3,
                     noise=1.2, noise_smooth=3, seed=0):
    """Sine burst at a uniformly random offset versus plain noise.

    The burst is cut from a global sinusoid sin(2*pi*t/period), so its
    phase at any fixed position is the same in every sample. The noise
    is slightly smoothed: most of its power sits below the burst
    frequency, so nearest-neighbor distances drown in correlated
    wander while window words at the burst frequency stay clean.
    """
    rng = np.random.default_rng(seed)
    total = n_train + n_test
    labels = _balanced_labels(("burst", "noise"), total)
    t = np.arange(length)
    values = []
    for lab in labels:
        x = _smooth_noise(rng, length, noise_smooth) * noise
        if lab == "burst":
            start = int(rng.integers(0, length - burst_length + 1))
            amp = amplitude * (1.0 + amplitude_jitter * (2.0 * rng.random() - 1.0))
            seg = slice(start, start + burst_length)
            x[seg] += amp * np.sin(2.0 * np.pi * t[seg] / period)
        values.append(x)
    return _assemble(values, labels, n_train)


def fine_frequency(n_train=100, n_test=100, length=64, cycles_low=13.0,
                   cycles_high=15.0, span=32.0, amplitude=1.0, noise=0.5,
                   seed=1):
    """Two whole-series tones separated by a small frequency step.

    Frequencies are cycles_low/span and cycles_high/span cycles per
    sample. Both sit far above the first few Fourier bins of any
    window, so a fixed low-pass coefficient choice cannot separate
    the classes while a class-aware choice can.
    """
    rng = np.random.default_rng(seed)
    total = n_train + n_test
    labels = _balanced_labels(("low", "high"), total)
    t = np.arange(length)
    values = []
    for lab in labels:
        cycles = cycles_low if lab == "low" else cycles_high
        x = amplitude * np.cos(2.0 * np.pi * cycles * t / span)
        x = x + rng.standard_normal(length) * noise
        values.append(x)
    return _assemble(values, labels, n_train)


# The two order-3 binary de Bruijn cycles. Every length-3 bit window
# occurs exactly once in each, so any series window spanning at most
# three blocks has the same content distribution in both classes;
# length-4 block runs differ between the cycles.
_CYCLE_A = (0, 0, 0, 1, 0, 1, 1, 1)
_CYCLE_B = (0, 0, 0, 1, 1, 1, 0, 1)


def bigram_order(n_train=100, n_test=100, length=64, noise=0.2, seed=2):
    """Block sequences that differ only in block order.

    Blocks of four samples carry one of two quarter-period-shifted
    waveforms. The two classes arrange them along the two de Bruijn
    cycles above, tiled and cyclically rotated by a random amount.
    Window lengths of 8 see at most three consecutive blocks and are
    order-blind; a window paired with its predecessor spans four.
    """
    block_x = np.array([0.0, 1.0, 0.0, -1.0])
    block_y = np.array([1.0, 0.0, -1.0, 0.0])
    cycles = {
        "ab": np.concatenate([(block_x, block_y)[b] for b in _CYCLE_A]),
        "ba": np.concatenate([(block_x, block_y)[b] for b in _CYCLE_B]),
    }
    cycle_len = len(_CYCLE_A) * 4
    reps = -(-length // cycle_len)
    rng = np.random.default_rng(seed)
    total = n_train + n_test
    labels = _balanced_labels(("ab", "ba"), total)
    values = []
    for lab in labels:
        tiled = np.tile(cycles[lab], reps)[:length]
        shift = int(rng.integers(0, cycle_len))
        x = np.roll(tiled, shift) + rng.standard_normal(length) * noise
        values.append(x)
    return _assemble(values, labels, n_train)


def multi_scale(n_train=100, n_test=100, length=128, short_period=5,
                short_length=15, short_amplitude=1.4, long_period=32,
                long_length=64, long_amplitude=1.0, noise=0.5, seed=3):
    """Motifs at two time scales; one class has both, the other one.

    The short motif repeats every 5 samples and the long one every 32,
    so no window length up to 128 is phase-consistent for both at its
    fixed offsets (that would need a multiple of 160). Detecting the
    conjunction therefore requires combining window lengths.
    """
    rng = np.random.default_rng(seed)
    total = n_train + n_test
    labels = _balanced_labels(("pair", "single"), total)
    t = np.arange(length)
    values = []
    for lab in labels:
        x = rng.standard_normal(length) * noise
        want_short = want_long = True
        if lab == "single":
            if rng.random() < 0.5:
                want_long = False
            else:
                want_short = False
        if want_short:
            start = int(rng.integers(0, length - short_length + 1))
            seg = slice(start, start + short_length)
            x[seg] += short_amplitude * np.sin(2.0 * np.pi * t[seg] / short_period)
        if want_long:
            start = int(rng.integers(0, length - long_length + 1))
            seg = slice(start, start + long_length)
            x[seg] += long_amplitude * np.sin(2.0 * np.pi * t[seg] / long_period)
        values.append(x)
    return _assemble(values, labels, n_train)


def pure_noise(n_train=100, n_test=100, length=64, seed=4):
    """Label-independent white noise; the no-signal control."""
    rng = np.random.default_rng(seed)
    total = n_train + n_test
    labels = _balanced_labels(("a", "b"), total)
    values = [rng.standard_normal(length) for _ in range(total)]
    return _assemble(values, labels, n_train)


def cluster_blobs(n_train=30, n_test=30, length=64, n_classes=3,
                  noise=0.05, seed=5):
    """Tight same-class clusters around smooth random templates.

    Designed so one-nearest-neighbor under Euclidean distance is a
    perfect classifier: within-class distances stay far below
    between-class distances.
    """
    rng = np.random.default_rng(seed)
    t = np.arange(length)
    templates = []
    for _ in range(n_classes):
        x = np.zeros(length)
        for _ in range(3):
            cycles = rng.uniform(1.0, 6.0)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            x += rng.uniform(0.5, 1.5) * np.sin(2.0 * np.pi * cycles * t / length + phase)
        templates.append(x)
    total = n_train + n_test
    names = [f"c{i}" for i in range(n_classes)]
    labels = _balanced_labels(names, total)
    values = [templates[names.index(lab)] + rng.standard_normal(length) * noise
              for lab in labels]
    return _assemble(values, labels, n_train)
