"""Bell-operator matrices in the ``|jj>`` basis.

Three representations share one interface (``matvec``, ``entry``,
``to_dense``, ``gershgorin_radius``):

* :class:`DenseBellMatrix` for arbitrary phase settings,
* :class:`ToeplitzBellMatrix` for the positive rule, where ``B_jm``
  depends only on ``j - m``,
* :class:`SegmentedBellMatrix` for the negative rule.

For a rule ``n_j = j + d s_j`` the element is

    B_jm = 4/(d-1) * sin(x pi/2d - (s_j - s_m) pi/2) / sin(x pi/d),  x = j - m,

which is ``Im(u_j h(x) conj(u_m))`` with ``u_j = (-i)^{s_j}`` and the complex
Toeplitz generator ``h(x) = 4/(d-1) exp(i x pi/2d) / sin(x pi/d)``. A product
with the segmented matrix is therefore one complex circulant convolution.
"""
from __future__ import annotations

import numpy as np
from scipy import fft as sfft

from .core import CapacityError, PhaseSettings, SchmidtState, check_dimension, pair_kernel
from .rules import PhaseRule

DEFAULT_DENSE_CAP = 20_000
DUMP_CAP = 64

# (-i)^k for k = 0..3, exact
_MINUS_I_POWERS = np.array([1, -1j, -1, 1j])


def element_general(phases: PhaseSettings, j: int, m: int, d: int | None = None) -> float:
    d = phases.d if d is None else d
    if d != phases.d:
        raise ValueError("d does not match the phase settings")
    if j == m:
        return 0.0
    x = np.pi / d * (j - m)

    def diff(v):
        return v[j] - v[m]

    a1, a2 = diff(phases.phi1), diff(phases.phi2)
    b1, b2 = diff(phases.vphi1), diff(phases.vphi2)
    bracket = (-np.sin(a1 + b1 - x) + np.sin(a1 + b2 + x)
               + np.sin(a2 + b1 - x) - np.sin(a2 + b2 - x))
    return float(bracket / ((d - 1) * np.sin(x)))


def element_rule(rule: PhaseRule, j: int, m: int) -> float:
    if j == m:
        return 0.0
    d = rule.d
    num = np.sin((2 * (j - m) - (rule.n[j] - rule.n[m])) * np.pi / (2 * d))
    return float(4 / (d - 1) * num / np.sin((j - m) * np.pi / d))


def _offsets(d: int) -> np.ndarray:
    """Differences ``x = j - m`` from ``-(d-1)`` to ``d-1``."""
    return np.arange(-(d - 1), d)


def _circulant_spectrum(gen: np.ndarray, d: int, n_fft: int) -> np.ndarray:
    """FFT of the circulant embedding of a Toeplitz generator ``gen[x + d - 1]``."""
    c = np.zeros(n_fft, dtype=gen.dtype)
    c[:d] = gen[d - 1:]
    c[n_fft - d + 1:] = gen[:d - 1]
    return sfft.fft(c)


def _toeplitz_row_sums(absgen: np.ndarray, d: int) -> np.ndarray:
    """``sum_m absgen(j - m)`` for every row j."""
    cs = np.concatenate(([0.0], np.cumsum(absgen)))
    j = np.arange(d)
    # row j covers x = j..j-(d-1), i.e. generator indices j..j+d-1
    return cs[j + d] - cs[j]


class BellMatrix:
    d: int

    def matvec(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def entry(self, j: int, m: int) -> float:
        raise NotImplementedError

    def to_dense(self) -> np.ndarray:
        raise NotImplementedError

    def gershgorin_radius(self) -> float:
        raise NotImplementedError

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise ValueError(f"vector of length {self.d} required, got shape {x.shape}")
        return x

    def __matmul__(self, x):
        return self.matvec(x)


class DenseBellMatrix(BellMatrix):
    def __init__(self, array: np.ndarray):
        a = np.asarray(array, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("dense Bell matrix must be square")
        self.d = check_dimension(a.shape[0])
        a.setflags(write=False)
        self.array = a

    def matvec(self, x):
        return self.array @ self._check(x)

    def entry(self, j, m):
        return float(self.array[j, m])

    def to_dense(self):
        return self.array

    def gershgorin_radius(self):
        return float(np.abs(self.array).sum(axis=1).max())


class ToeplitzBellMatrix(BellMatrix):
    """Symmetric Toeplitz matrix stored by its first row."""

    def __init__(self, first_row: np.ndarray):
        r = np.asarray(first_row, dtype=float)
        self.d = d = check_dimension(r.size)
        r.setflags(write=False)
        self.first_row = r
        self._gen = np.concatenate((r[:0:-1], r))
        self._n_fft = sfft.next_fast_len(2 * d - 1, real=True)
        c = np.zeros(self._n_fft)
        c[:d] = r
        c[self._n_fft - d + 1:] = r[:0:-1]
        self._spec = sfft.rfft(c)

    @classmethod
    def positive(cls, d: int) -> ToeplitzBellMatrix:
        d = check_dimension(d)
        x = np.arange(d)
        row = np.zeros(d)
        row[1:] = 2 / ((d - 1) * np.cos(x[1:] * np.pi / (2 * d)))
        return cls(row)

    def matvec(self, x):
        x = self._check(x)
        y = sfft.irfft(self._spec * sfft.rfft(x, self._n_fft), self._n_fft)
        return y[:self.d]

    def entry(self, j, m):
        return float(self.first_row[abs(j - m)])

    def to_dense(self):
        idx = np.arange(self.d)
        return self.first_row[np.abs(idx[:, None] - idx[None, :])]

    def gershgorin_radius(self):
        return float(_toeplitz_row_sums(np.abs(self._gen), self.d).max())


class SegmentedBellMatrix(BellMatrix):
    """Rule matrix with ``n_j = j + d s_j``: a grid of Toeplitz blocks.

    Block ``(p, q)`` (rows with ``s_j = p``, columns with ``s_m = q``) is
    Toeplitz in ``j - m`` with generator
    ``4/(d-1) sin(x pi/2d - (p - q) pi/2) / sin(x pi/d)``.
    """

    def __init__(self, d: int, segments: np.ndarray):
        self.d = d = check_dimension(d)
        s = np.asarray(segments, dtype=np.int64)
        if s.shape != (d,):
            raise ValueError("one segment label per index required")
        s.setflags(write=False)
        self.segments = s
        x = _offsets(d)
        nz = x != 0
        h = np.zeros(2 * d - 1, dtype=complex)
        h[nz] = 4 / (d - 1) * np.exp(1j * x[nz] * np.pi / (2 * d)) / np.sin(x[nz] * np.pi / d)
        self._h = h
        self._u = _MINUS_I_POWERS[s % 4]
        self._n_fft = sfft.next_fast_len(2 * d - 1)
        self._spec = _circulant_spectrum(h, d, self._n_fft)

    @classmethod
    def from_rule(cls, rule: PhaseRule) -> SegmentedBellMatrix:
        return cls(rule.d, rule.segments)

    @property
    def boundaries(self) -> list[tuple[int, int, int]]:
        """``(label, start, stop)`` runs of equal segment labels."""
        s = self.segments
        cuts = np.flatnonzero(np.diff(s)) + 1
        starts = np.concatenate(([0], cuts))
        stops = np.concatenate((cuts, [self.d]))
        return [(int(s[a]), int(a), int(b)) for a, b in zip(starts, stops)]

    def block_generator(self, ds: int) -> np.ndarray:
        """Real generator of blocks with ``s_j - s_m = ds``, indexed by ``x + d - 1``."""
        return (self._h * _MINUS_I_POWERS[ds % 4]).imag

    def matvec(self, x):
        x = self._check(x)
        y = sfft.ifft(self._spec * sfft.fft(np.conj(self._u) * x, self._n_fft))[:self.d]
        return (self._u * y).imag

    def entry(self, j, m):
        return float((self._u[j] * self._h[j - m + self.d - 1] * np.conj(self._u[m])).imag)

    def to_dense(self):
        idx = np.arange(self.d)
        full = self._u[:, None] * self._h[idx[:, None] - idx[None, :] + self.d - 1] * np.conj(self._u)[None, :]
        return full.imag

    def gershgorin_radius(self):
        # |B_jm| is |sin|-type when s_j, s_m share parity and |cos|-type otherwise
        d = self.d
        same = np.abs(self.block_generator(0))
        cross = np.abs(self.block_generator(1))
        n = sfft.next_fast_len(3 * d, real=True)
        even = (self.segments % 2 == 0).astype(float)
        rows = np.zeros(d)
        for mask, rowsel in ((even, even > 0), (1 - even, even == 0)):
            other = 1 - mask
            conv = (sfft.irfft(sfft.rfft(same, n) * sfft.rfft(mask, n), n)
                    + sfft.irfft(sfft.rfft(cross, n) * sfft.rfft(other, n), n))
            # full convolution index (x + d - 1) + m = j + d - 1
            rows[rowsel] = conv[d - 1:2 * d - 1][rowsel]
        return float(rows.max())


def dense_from_phases(phases: PhaseSettings) -> np.ndarray:
    return pair_kernel(phases)


def dense_from_rule(rule: PhaseRule) -> np.ndarray:
    d = rule.d
    idx = np.arange(d)
    x = idx[:, None] - idx[None, :]
    dn = rule.n[:, None] - rule.n[None, :]
    denom = np.sin(x * np.pi / d)
    np.fill_diagonal(denom, 1.0)
    b = 4 / (d - 1) * np.sin((2 * x - dn) * np.pi / (2 * d)) / denom
    np.fill_diagonal(b, 0.0)
    return b


def build(source, d: int | None = None, representation: str = "auto",
          dense_cap: int = DEFAULT_DENSE_CAP) -> BellMatrix:
    """Assemble a Bell matrix from a :class:`PhaseRule` or :class:`PhaseSettings`.

    ``representation`` is ``"dense"``, ``"structured"`` or ``"auto"`` (dense
    up to ``dense_cap``). Arbitrary phase settings only have a dense form.
    """
    if d is None:
        d = source.d
    d = check_dimension(d)
    if source.d != d:
        raise ValueError(f"source has dimension {source.d}, expected {d}")
    if representation not in ("auto", "dense", "structured"):
        raise ValueError(f"unknown representation {representation!r}")
    is_rule = isinstance(source, PhaseRule)
    if representation == "auto":
        representation = "dense" if d <= dense_cap else "structured"
    if representation == "structured":
        if not is_rule:
            raise ValueError("structured form requires a phase rule")
        if ((source.n - np.arange(d)) % d).any():
            raise ValueError("structured form needs n_j - j to be a multiple of d")
        if not source.segments.any():
            return ToeplitzBellMatrix.positive(d)
        return SegmentedBellMatrix.from_rule(source)
    if d > dense_cap:
        raise CapacityError(f"dense matrix with d={d} exceeds cap {dense_cap}")
    return DenseBellMatrix(dense_from_rule(source) if is_rule else dense_from_phases(source))


def matvec(B: BellMatrix, x) -> np.ndarray:
    return B.matvec(x)


def quadratic_form(B: BellMatrix, state: SchmidtState) -> float:
    a = state.alphas
    if a.size != B.d:
        raise ValueError("state dimension does not match the matrix")
    return float(a @ B.matvec(a))


def dump_dense(B: BellMatrix, fh, fmt: str = "%.17g") -> None:
    """Write the dense grid as comma-separated rows (debugging aid, d <= 64)."""
    if B.d > DUMP_CAP:
        raise CapacityError(f"dump limited to d <= {DUMP_CAP}")
    np.savetxt(fh, B.to_dense(), delimiter=",", fmt=fmt)
