"""Gray-coded M-PSK modulation, minimum-distance demodulation and bit-error counting."""
from __future__ import annotations

import numpy as np

from .errors import FramingError, ParameterError

PSK_ORDERS = (2, 4, 8, 16)


def bits_per_symbol(m: int) -> int:
    if m not in PSK_ORDERS:
        raise ParameterError(f"unsupported PSK order {m}; choose one of {PSK_ORDERS}")
    return int(np.log2(m))


def _gray(k: np.ndarray | int):
    return k ^ (k >> 1)


def _gray_inverse(m: int) -> np.ndarray:
    """Lookup table: Gray label -> constellation index, for order m."""
    idx = np.arange(m)
    table = np.empty(m, dtype=np.int64)
    table[_gray(idx)] = idx
    return table


def constellation(m: int) -> np.ndarray:
    """Unit-energy PSK points; index k sits at phase 2*pi*k/m."""
    bits_per_symbol(m)
    return np.exp(2j * np.pi * np.arange(m) / m)


def modulate(bits, m: int) -> np.ndarray:
    """Map a 0/1 bit sequence onto Gray-coded unit-energy PSK symbols."""
    k = bits_per_symbol(m)
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 1 or bits.size % k != 0:
        raise FramingError(f"bit count {bits.size} is not divisible by {k} (order {m})")
    if bits.size and not np.all((bits == 0) | (bits == 1)):
        raise FramingError("bit block may only contain 0/1 entries")
    labels = bits.reshape(-1, k) @ (1 << np.arange(k - 1, -1, -1))
    indices = _gray_inverse(m)[labels]
    return np.exp(2j * np.pi * indices / m)


def demodulate(samples, m: int):
    """Nearest-constellation-point decision, then Gray bit labels (MSB first).

    Distance ties are broken toward the smaller phase index.
    """
    k = bits_per_symbol(m)
    samples = np.asarray(samples, dtype=complex)
    theta = np.mod(np.angle(samples), 2.0 * np.pi)
    step = 2.0 * np.pi / m
    # theta in ((i-1/2)step, (i+1/2)step] maps to index i: boundary -> smaller index
    indices = np.mod(np.ceil(theta / step - 0.5).astype(np.int64), m)
    labels = _gray(indices)
    shifts = np.arange(k - 1, -1, -1)
    return ((labels[:, None] >> shifts) & 1).reshape(-1).astype(np.int64)


def count_bit_errors(tx, rx) -> int:
    """Hamming distance between two equal-length bit blocks."""
    tx = np.asarray(tx)
    rx = np.asarray(rx)
    if tx.shape != rx.shape:
        raise FramingError(f"bit block length mismatch: {tx.shape} vs {rx.shape}")
    return int(np.count_nonzero(tx != rx))
