"""Compressed suffix array over $-terminated trips with cyclic suffixes.

The text S[1..n] is a concatenation of trips, each closed by the terminator 0.
Suffixes are compared as if each trip were a circular string: the symbol
following a terminator is the first symbol of its own trip. An end-of-text
sentinel is placed before every real suffix, so the array has N = n + 1 ranks,
rank 1 is the sentinel (a fixed point of Ψ) and ranks 2..N hold the text.

Ψ is stored as absolute samples every `t_psi` ranks plus zigzag variable byte
gaps in between; D marks the first rank of every symbol region.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import logging
import functools
from bisect import bisect_left, bisect_right
from typing import Tuple, Sequence, Optional, Iterator, List, Dict

import numpy as np

from tripidx.succinct import SparseBitVector, FixedWidthIntArray, RecordReader, Record, pack_record
from tripidx.succinct.record import pack_int_array, unpack_int_array


LOGGER_NAME = 'tripidx.csa-'
log = logging.getLogger(LOGGER_NAME)


SymbolRange = Tuple[int, int]


def check_sequence(S: np.ndarray):
    """Raise ValueError unless S is a non-empty sequence of non-empty 0-terminated trips."""
    if not len(S):
        raise ValueError("Empty sequence")
    if int(S.min()) < 0:
        raise ValueError("Symbols must be non-negative")
    if S[-1] != 0:
        raise ValueError("Sequence must end with a terminator")
    ends = np.flatnonzero(S == 0)
    if ends[0] == 0 or (len(ends) > 1 and int(np.diff(ends).min()) < 2):
        raise ValueError("Empty trip in sequence")

def cyclic_successors(S: np.ndarray) -> np.ndarray:
    """0-based successor of every text position, terminators jump to their trip start."""
    n = len(S)
    nxt = np.arange(1, n + 1, dtype=np.int64)
    ends = np.flatnonzero(S == 0)
    nxt[ends] = np.concatenate(([0], ends[:-1] + 1))
    return nxt

def _trip_lengths(S: np.ndarray) -> np.ndarray:
    ends = np.flatnonzero(S == 0)
    return np.diff(np.concatenate(([-1], ends)))

def _sort_doubling(S: np.ndarray, nxt: np.ndarray) -> np.ndarray:
    n = len(S)
    rank = np.unique(S, return_inverse=True)[1].astype(np.int64)
    limit = 2 * int(_trip_lengths(S).max())
    jump = nxt.copy()
    h = 1
    while h < limit and int(rank.max()) < n - 1:
        key2 = rank[jump]
        order = np.lexsort((key2, rank))
        r1, r2 = rank[order], key2[order]
        step = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        new = np.empty(n, dtype=np.int64)
        new[order] = np.concatenate(([0], np.cumsum(step)))
        rank = new
        jump = jump[jump]
        h *= 2
    # rotations of different trips that never differ keep text order
    return np.lexsort((np.arange(n), rank))

def _sort_comparator(S: np.ndarray, nxt: np.ndarray) -> np.ndarray:
    sym = S.tolist()
    succ = nxt.tolist()
    lengths = _trip_lengths(S)
    tlen = np.repeat(lengths, lengths).tolist()

    def cmp(p: int, q: int) -> int:
        a, b = p, q
        for _ in range(tlen[p] + tlen[q]):
            if sym[a] != sym[b]:
                return -1 if sym[a] < sym[b] else 1
            a, b = succ[a], succ[b]
        return (p > q) - (p < q)

    return np.array(sorted(range(len(S)), key=functools.cmp_to_key(cmp)), dtype=np.int64)

def build_cyclic_sa(S: Sequence[int], method: str = 'doubling') -> Tuple[np.ndarray, np.ndarray]:
    """Suffix array of S under cyclic-within-trip successor semantics.

    Args:
        S (Sequence[int]): text, 0 is the terminator
        method (str): `doubling` (prefix doubling) or `comparator` (explicit comparisons)

    Raises:
        ValueError: on a malformed text or method

    Returns:
        Tuple[np.ndarray, np.ndarray]: A and A⁻¹, both indexed 1..N with an unused slot 0;
        A[1] = N is the sentinel
    """
    S = np.asarray(S, dtype=np.int64)
    check_sequence(S)
    nxt = cyclic_successors(S)
    if method == 'doubling':
        order = _sort_doubling(S, nxt)
    elif method == 'comparator':
        order = _sort_comparator(S, nxt)
    else:
        raise ValueError(f"Unknown suffix sort method {method!r}")
    n = len(S)
    N = n + 1
    A = np.zeros(N + 1, dtype=np.int64)
    A[1] = N
    A[2:] = order + 1
    A_inv = np.zeros(N + 1, dtype=np.int64)
    A_inv[A[1:]] = np.arange(1, N + 1)
    return A, A_inv

def psi_array(A: np.ndarray, A_inv: np.ndarray, S: Sequence[int]) -> np.ndarray:
    """Uncompressed Ψ indexed 1..N (slot 0 unused)."""
    S = np.asarray(S, dtype=np.int64)
    N = len(S) + 1
    nxt1 = np.empty(N + 1, dtype=np.int64)
    nxt1[1:N] = cyclic_successors(S) + 1
    nxt1[N] = N
    psi = np.zeros(N + 1, dtype=np.int64)
    psi[1:] = A_inv[nxt1[A[1:]]]
    return psi

def _vbyte(values: np.ndarray) -> Tuple[bytes, np.ndarray]:
    """Variable byte code (7 bits per byte, high bit = more follows); returns stream and per value byte counts."""
    if not len(values):
        return b'', np.zeros(0, dtype=np.int64)
    v = values.astype(np.uint64)
    limits = np.uint64(1) << (np.uint64(7) * np.arange(1, 10, dtype=np.uint64))
    nbytes = 1 + (v[:, None] >= limits[None, :]).sum(axis=1).astype(np.int64)
    k = np.arange(int(nbytes.max()), dtype=np.uint64)
    chunks = (v[:, None] >> (k * np.uint64(7))) & np.uint64(0x7f)
    more = k[None, :] < (nbytes[:, None] - 1).astype(np.uint64)
    chunks = chunks | (more.astype(np.uint64) << np.uint64(7))
    keep = k[None, :] < nbytes[:, None].astype(np.uint64)
    return chunks[keep].astype(np.uint8).tobytes(), nbytes

def _zigzag(d: np.ndarray) -> np.ndarray:
    return np.where(d >= 0, 2 * d, -2 * d - 1)


class CyclicCsa():
    """Ψ, D and the symbol table of a cyclic compressed suffix array.

    Use `build` or `from_record`; ranks are 1-based.
    """
    MAGIC = b'CSA1'

    def __init__(self, N: int, t_psi: int, symbols: np.ndarray, D: SparseBitVector,
                 samples: FixedWidthIntArray, offsets: FixedWidthIntArray, stream: bytes):
        self.N = N
        self.t_psi = t_psi
        self.symbols = symbols
        self.D = D
        self.samples = samples
        self.offsets = offsets
        self.stream = stream
        self._samples = samples.to_numpy().tolist()
        self._offsets = offsets.to_numpy().tolist()
        self._symbols = symbols.tolist()
        self.sigma = (self._symbols[-1] + 1) if self._symbols else 0
        # C[c] is the first rank of symbol c; C[sigma] = N + 1
        starts = np.array([D.select1(k + 2) for k in range(len(self._symbols))] + [N + 1], dtype=np.int64)
        counts = np.zeros(self.sigma, dtype=np.int64)
        counts[symbols] = np.diff(starts)
        self.C: List[int] = (2 + np.concatenate(([0], np.cumsum(counts)))).tolist()

    @property
    def n(self) -> int:
        """Number of text symbols."""
        return self.N - 1

    @classmethod
    def build(cls, S: Sequence[int], t_psi: int = 128, method: str = 'doubling') -> Tuple['CyclicCsa', np.ndarray, np.ndarray]:
        """Build from a text; also returns A and A⁻¹ for callers aligning data with it."""
        S = np.asarray(S, dtype=np.int64)
        A, A_inv = build_cyclic_sa(S, method)
        return build_psi(A, A_inv, S, t_psi), A, A_inv

    def psi(self, i: int) -> int:
        """Ψ[i], from the preceding sample and the decoded gaps."""
        if not 1 <= i <= self.N:
            raise IndexError(f"Rank {i} out of range [1, {self.N}]")
        b, off = divmod(i - 1, self.t_psi)
        v = self._samples[b]
        if not off:
            return v
        p = self._offsets[b]
        stream = self.stream
        for _ in range(off):
            x = 0
            shift = 0
            while True:
                byte = stream[p]
                p += 1
                x |= (byte & 0x7f) << shift
                if byte < 0x80:
                    break
                shift += 7
            v += (x >> 1) ^ -(x & 1)
        return v

    def symbol_at(self, i: int) -> int:
        """First symbol of the i-th suffix; -1 for the sentinel rank."""
        if not 1 <= i <= self.N:
            raise IndexError(f"Rank {i} out of range [1, {self.N}]")
        k = self.D.rank1(i)
        return -1 if k == 1 else self._symbols[k - 2]

    def region(self, a: int, b: Optional[int] = None) -> Optional[Tuple[int, int]]:
        """Rank range of the suffixes starting with a symbol in [a, b]."""
        b = a if b is None else b
        if a > b or a < 0:
            raise ValueError(f"Invalid symbol range [{a}, {b}]")
        if a >= self.sigma:
            return None
        sp = self.C[a]
        ep = self.C[min(b + 1, self.sigma)] - 1
        return (sp, ep) if sp <= ep else None

    def _refine(self, c: int, sp: int, ep: int) -> Optional[Tuple[int, int]]:
        reg = self.region(c)
        if reg is None:
            return None
        ranks = range(reg[0], reg[1] + 1)
        lo = bisect_left(ranks, sp, key=self.psi)
        hi = bisect_right(ranks, ep, key=self.psi) - 1
        if lo > hi:
            return None
        return reg[0] + lo, reg[0] + hi

    def backward_search(self, pattern: Sequence[SymbolRange]) -> Optional[Tuple[int, int]]:
        """Rank range of suffixes matching the pattern, elements are symbol ranges [a, b].

        Matching is cyclic within each trip. Only the last element may cover
        several symbols freely; elsewhere the matches of a multi symbol element
        must form one contiguous rank range.

        Raises:
            ValueError: when a multi symbol element yields a non contiguous range

        Returns:
            Optional[Tuple[int, int]]: inclusive 1-based ranks, None when nothing matches
        """
        if not pattern:
            return (2, self.N) if self.N > 1 else None
        a, b = pattern[-1]
        cur = self.region(a, b)
        for a, b in reversed(pattern[:-1]):
            if cur is None:
                return None
            sp, ep = cur
            parts = [r for r in (self._refine(c, sp, ep) for c in range(a, min(b, self.sigma - 1) + 1)) if r]
            if not parts:
                return None
            for (_, e1), (s2, _) in zip(parts, parts[1:]):
                if s2 != e1 + 1:
                    raise ValueError(f"Symbol range [{a}, {b}] does not give a contiguous match")
            cur = (parts[0][0], parts[-1][1])
        return cur

    def walk(self, i: int) -> Iterator[int]:
        """Ranks visited by following Ψ from i until it comes back to i (i first)."""
        r = i
        while True:
            yield r
            r = self.psi(r)
            if r == i:
                return

    def sizes(self) -> Dict[str, int]:
        psi = self.samples.size_in_bytes() + self.offsets.size_in_bytes() + len(self.stream)
        return {'psi': psi, 'D': self.D.size_in_bytes(),
                'symbols': FixedWidthIntArray.from_values(self.symbols).size_in_bytes()}

    def to_record(self) -> bytes:
        payload = pack_int_array(b'CSAP', [self.t_psi])
        payload += FixedWidthIntArray.from_values(self.symbols).to_record()
        payload += self.D.to_record()
        payload += self.samples.to_record()
        payload += self.offsets.to_record()
        payload += pack_record(b'PSIG', len(self.stream), 8, self.stream)
        return pack_record(self.MAGIC, self.N, 0, payload)

    @classmethod
    def from_record(cls, rec: Record) -> 'CyclicCsa':
        reader = RecordReader(rec.payload)
        t_psi = int(unpack_int_array(reader.read(b'CSAP'))[0])
        symbols = FixedWidthIntArray.from_record(reader.read(FixedWidthIntArray.MAGIC)).to_numpy()
        D = SparseBitVector.from_record(reader.read(SparseBitVector.MAGIC))
        samples = FixedWidthIntArray.from_record(reader.read(FixedWidthIntArray.MAGIC))
        offsets = FixedWidthIntArray.from_record(reader.read(FixedWidthIntArray.MAGIC))
        stream = reader.read(b'PSIG').payload
        return cls(rec.n, t_psi, symbols, D, samples, offsets, stream)

    def __repr__(self):
        return f'CyclicCsa(N={self.N}, sigma={self.sigma}, t_psi={self.t_psi})'


def build_psi(A: np.ndarray, A_inv: np.ndarray, S: Sequence[int], t_psi: int = 128) -> CyclicCsa:
    """Sampled Ψ and D from a cyclic suffix array.

    Args:
        A (np.ndarray): from `build_cyclic_sa`
        A_inv (np.ndarray): from `build_cyclic_sa`
        S (Sequence[int]): the text
        t_psi (int): sampling period of Ψ

    Returns:
        CyclicCsa: the compressed structure
    """
    if t_psi < 1:
        raise ValueError(f"Invalid Ψ sampling {t_psi}")
    S = np.asarray(S, dtype=np.int64)
    N = len(S) + 1
    psi = psi_array(A, A_inv, S)[1:]
    # symbol of every rank, -1 for the sentinel
    first = np.empty(N, dtype=np.int64)
    first[0] = -1
    first[1:] = S[A[2:] - 1]
    heads = np.flatnonzero(np.concatenate(([True], first[1:] != first[:-1]))) + 1
    D = SparseBitVector(N, heads)
    symbols = np.unique(S)

    idx = np.arange(N)
    is_sample = idx % t_psi == 0
    gaps = np.diff(psi)
    zz = _zigzag(gaps)[~is_sample[1:]]
    stream, nbytes = _vbyte(zz)
    # byte offset where the gaps following each sample begin
    owner = (idx[1:][~is_sample[1:]]) // t_psi
    per_block = np.bincount(owner, weights=nbytes, minlength=len(psi[is_sample])).astype(np.int64)
    offsets = np.concatenate(([0], np.cumsum(per_block)[:-1]))
    csa = CyclicCsa(N, t_psi, symbols, D,
                    FixedWidthIntArray.from_values(psi[is_sample]),
                    FixedWidthIntArray.from_values(offsets),
                    stream)
    log.debug(f'built {csa!r}: {len(stream)} gap bytes')
    return csa
