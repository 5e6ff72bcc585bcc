"""Storage pipeline simulator: MDS outer code, FR placement, repair-by-transfer.

A file is split into M source packets, expanded into v coded packets by a
Vandermonde generator over GF(256), and packet j is copied onto every node
whose block contains point j.  Repair copies lost packets verbatim from
surviving replicas; reconstruction inverts an M x M generator submatrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import gf256
from .incidence import FrCode

MAX_LENGTH = 64
SPOT_CHECKS = 10_000
EXHAUSTIVE_MAX = 16


class ToleranceExceeded(RuntimeError):
    """Failing the node would leave some packet with no live replica."""


class Unrecoverable(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class MdsCode:
    """Length-v, dimension-M code; column j of the generator is (x_j^0, ..., x_j^(M-1))."""

    length: int
    dim: int
    generator: np.ndarray
    _inverses: dict = field(default_factory=dict, init=False, repr=False)

    def encode(self, source: np.ndarray) -> np.ndarray:
        """(M, L) source packets -> (v, L) coded packets."""
        return gf256.matmul(self.generator.T, source)

    def decode(self, indices, coded: np.ndarray) -> np.ndarray:
        """Recover the (M, L) source from exactly M coded packets at ``indices``."""
        key = tuple(indices)
        inverse = self._inverses.get(key)
        if inverse is None:
            inverse = gf256.invert(self.generator[:, list(key)].T)
            self._inverses[key] = inverse
        return gf256.matmul(inverse, coded)

    def check_mds(self, spot_checks: int = SPOT_CHECKS, seed: int = 0) -> bool:
        """Every M columns invertible: exhaustive for v <= 16, random sample above."""
        v, m = self.length, self.dim
        if v <= EXHAUSTIVE_MAX:
            subsets = np.array(list(itertools.combinations(range(v), m)), dtype=np.intp)
        else:
            rng = np.random.default_rng(seed)
            subsets = np.array([np.sort(rng.choice(v, m, replace=False)) for _ in range(spot_checks)],
                               dtype=np.intp)
        for chunk in np.array_split(subsets, max(1, math.ceil(len(subsets) / 2000))):
            mats = self.generator[:, chunk].transpose(1, 0, 2)
            if not gf256.batch_nonsingular(mats).all():
                return False
        return True


@lru_cache(maxsize=None)
def vandermonde_mds(length: int, dim: int, verify: bool = True) -> MdsCode:
    if not 1 <= dim <= length:
        raise ValueError(f"need 1 <= M <= v, got M={dim}, v={length}")
    if length > MAX_LENGTH:
        raise ValueError(f"v = {length} exceeds simulator limit {MAX_LENGTH}")
    points = [int(gf256.EXP[j]) for j in range(length)]
    gen = np.array([[gf256.power(x, i) for x in points] for i in range(dim)], dtype=np.uint8)
    gen.setflags(write=False)
    code = MdsCode(length, dim, gen)
    if verify and not code.check_mds():
        raise AssertionError(f"generator for ({length}, {dim}) is not MDS")
    return code


@dataclass(frozen=True)
class Transfer:
    packet: int
    helper: int
    target: int
    nbytes: int

    def __str__(self) -> str:
        return f"packet {self.packet}: node {self.helper} -> node {self.target} ({self.nbytes} B)"


@dataclass(frozen=True)
class Insufficient:
    """Returned by reconstruction when the contacted nodes hold fewer than M packets."""

    available: int
    needed: int

    def __str__(self) -> str:
        return f"insufficient: {self.available} distinct packets, need {self.needed}"


@dataclass
class StorageSystem:
    code: FrCode
    mds: MdsCode
    packet_size: int
    # node i -> {packet index: bytes}, or None once failed
    nodes: list[dict[int, bytes] | None] = field(repr=False)

    @property
    def file_size(self) -> int:
        return self.mds.dim

    def alive(self, i: int) -> bool:
        return self.nodes[i] is not None

    @property
    def failed(self) -> list[int]:
        return [i for i, n in enumerate(self.nodes) if n is None]

    def holders(self, packet: int) -> list[int]:
        """Live nodes storing ``packet``, ascending."""
        return [i for i, row in enumerate(self.code.rows) if packet in row and self.nodes[i] is not None]

    def fail_node(self, i: int) -> None:
        if not self.alive(i):
            raise ValueError(f"node {i} already failed")
        for p in self.code.rows[i]:
            if self.holders(p) == [i]:
                raise ToleranceExceeded(f"failing node {i} would lose every replica of packet {p}")
        self.nodes[i] = None

    def repair_node(self, i: int) -> list[Transfer]:
        """Rebuild node i by copying each of its packets from the lowest-index live holder."""
        if self.alive(i):
            raise ValueError(f"node {i} is not failed")
        content, log = {}, []
        for p in sorted(self.code.rows[i]):
            helpers = self.holders(p)
            if not helpers:
                raise Unrecoverable(f"packet {p} has no live replica")
            data = self.nodes[helpers[0]][p]
            content[p] = data
            log.append(Transfer(p, helpers[0], i, len(data)))
        self.nodes[i] = content
        return log

    def repair_all(self) -> list[Transfer]:
        log = []
        for i in self.failed:
            log.extend(self.repair_node(i))
        return log

    def reconstruct(self, node_set) -> bytes | Insufficient:
        packets: dict[int, bytes] = {}
        for i in sorted(set(node_set)):
            if not self.alive(i):
                raise ValueError(f"node {i} is failed")
            for p, data in self.nodes[i].items():
                packets.setdefault(p, data)
        m = self.mds.dim
        if len(packets) < m:
            return Insufficient(len(packets), m)
        idx = sorted(packets)[:m]
        coded = np.frombuffer(b"".join(packets[p] for p in idx), dtype=np.uint8)
        coded = coded.reshape(m, self.packet_size)
        return self.mds.decode(idx, coded).tobytes()


def encode_and_place(code: FrCode, data: bytes, M: int) -> StorageSystem:
    v = code.v
    if M > v:
        raise ValueError(f"M = {M} exceeds v = {v}")
    if M < 1:
        raise ValueError("M must be positive")
    if len(data) % M:
        raise ValueError(f"file length {len(data)} not divisible by M = {M}; pad first")
    mds = vandermonde_mds(v, M)
    size = len(data) // M
    source = np.frombuffer(bytes(data), dtype=np.uint8).reshape(M, size)
    coded = mds.encode(source)
    packets = [coded[j].tobytes() for j in range(v)]
    nodes = [{p: packets[p] for p in row} for row in code.rows]
    return StorageSystem(code, mds, size, nodes)


def fail_node(sys: StorageSystem, i: int) -> StorageSystem:
    sys.fail_node(i)
    return sys


def repair_node(sys: StorageSystem, i: int) -> tuple[StorageSystem, list[Transfer]]:
    return sys, sys.repair_node(i)


def reconstruct_from(sys: StorageSystem, node_set) -> bytes | Insufficient:
    return sys.reconstruct(node_set)
