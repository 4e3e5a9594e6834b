"""QAP instances: QAPLIB-format parsing, exact cost evaluation, swap deltas.

An instance is a pair of n x n integer matrices (flow, dist); a solution is
a permutation p where p[i] is the location assigned to facility i.  The cost
of p is the full double sum over ordered facility pairs, diagonal included:

    cost(p) = sum_{i,k} flow[i][k] * dist[p[i]][p[k]]

All arithmetic is integer; results that do not fit a signed 64-bit range
raise CostOverflowError instead of wrapping.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

INT64_MAX = 2**63 - 1


class QapError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(QapError):
    """Malformed QAPLIB input; message carries line:column position."""


class CostOverflowError(QapError):
    """Cost does not fit in a signed 64-bit integer."""


@dataclass(frozen=True)
class Instance:
    """A QAP instance: size n plus flow and distance matrices."""

    name: str
    n: int
    flow: np.ndarray
    dist: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        for label, m in (("flow", self.flow), ("dist", self.dist)):
            if m.shape != (self.n, self.n):
                raise ValueError(
                    f"{label} matrix must be {self.n}x{self.n}, got {m.shape}"
                )
            if (m < 0).any():
                raise ValueError(f"{label} matrix has negative entries")
        self.flow.setflags(write=False)
        self.dist.setflags(write=False)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.name == other.name
            and self.n == other.n
            and np.array_equal(self.flow, other.flow)
            and np.array_equal(self.dist, other.dist)
        )


def check_permutation(p: np.ndarray, n: int) -> np.ndarray:
    """Validate that p is a bijection on {0..n-1}; returns p as an int array."""
    p = np.asarray(p, dtype=np.int64)
    if p.shape != (n,):
        raise ValueError(f"permutation has length {p.shape}, expected ({n},)")
    seen = np.zeros(n, dtype=bool)
    if (p < 0).any() or (p >= n).any():
        raise ValueError("permutation entries out of range")
    seen[p] = True
    if not seen.all():
        raise ValueError("permutation is not a bijection")
    return p


_TOKEN = re.compile(rb"\S+")


def _tokenize(text: str):
    """Yield (token, 'line:col') for each whitespace-separated token."""
    data = text.encode() if isinstance(text, str) else text
    line = 1
    line_start = 0
    pos = 0
    for m in _TOKEN.finditer(data):
        line += data.count(b"\n", pos, m.start())
        if b"\n" in data[pos : m.start()]:
            line_start = data.rindex(b"\n", pos, m.start()) + 1
        pos = m.start()
        yield m.group().decode(), f"{line}:{m.start() - line_start + 1}"


def parse_qaplib(text: str, name: str = "") -> Instance:
    """Parse a QAPLIB .dat stream: n, then two n x n matrices row-major.

    Tokens may be separated by any whitespace, including blank lines.
    Raises ParseError with a line:column position on malformed input.
    """
    tokens = _tokenize(text)

    def next_int(what):
        try:
            tok, pos = next(tokens)
        except StopIteration:
            raise ParseError(f"unexpected end of input: expected {what}") from None
        try:
            return int(tok), pos
        except ValueError:
            raise ParseError(f"malformed token {tok!r} at {pos}: expected {what}") from None

    n, pos = next_int("instance size n")
    if n < 1:
        raise ParseError(f"instance size must be positive, got {n} at {pos}")

    values = np.empty(2 * n * n, dtype=np.int64)
    for idx in range(2 * n * n):
        try:
            v, pos = next_int("matrix entry")
        except ParseError as e:
            if "end of input" in str(e):
                raise ParseError(
                    f"expected {2 * n * n} matrix entries, found {idx}"
                ) from None
            raise
        if v < 0:
            raise ParseError(f"negative matrix entry {v} at {pos}")
        values[idx] = v

    for tok, pos in tokens:
        raise ParseError(f"trailing garbage {tok!r} at {pos}")

    flow = values[: n * n].reshape(n, n).copy()
    dist = values[n * n :].reshape(n, n).copy()
    return Instance(name=name, n=n, flow=flow, dist=dist)


def render_qaplib(inst: Instance) -> str:
    """Canonical writer: n, blank line, flow matrix, blank line, dist matrix."""
    def rows(m):
        return "\n".join(" ".join(str(v) for v in row) for row in m)

    return f"{inst.n}\n\n{rows(inst.flow)}\n\n{rows(inst.dist)}\n"


def _check_overflow_budget(inst: Instance) -> bool:
    """True if the worst-case cost sum provably fits in int64."""
    a = int(inst.flow.max(initial=0))
    b = int(inst.dist.max(initial=0))
    return inst.n * inst.n * a * b <= INT64_MAX


def _cost_unchecked(flow: np.ndarray, dist: np.ndarray, p: np.ndarray) -> int:
    return int((flow * dist[np.ix_(p, p)]).sum())


def evaluate_cost(inst: Instance, p: np.ndarray) -> int:
    """Exact cost of permutation p: sum over all ordered pairs, diagonal included."""
    p = check_permutation(p, inst.n)
    if _check_overflow_budget(inst):
        return _cost_unchecked(inst.flow, inst.dist, p)
    # exact big-int path, only hit when int64 cannot be guaranteed up front
    total = 0
    fl = inst.flow.tolist()
    di = inst.dist.tolist()
    pl = p.tolist()
    for i in range(inst.n):
        row_f = fl[i]
        row_d = di[pl[i]]
        for k in range(inst.n):
            total += row_f[k] * row_d[pl[k]]
    if total > INT64_MAX:
        raise CostOverflowError(f"cost {total} exceeds signed 64-bit range")
    return total


def _swap_delta_unchecked(
    flow: np.ndarray, dist: np.ndarray, p: np.ndarray, i: int, k: int
) -> int:
    """Cost change from exchanging p[i] and p[k], O(n), no symmetry assumed.

    Only terms touching facility i or k change.  The j-sums below cover all
    other facilities; the four cells within {i, k} (diagonals included) are
    handled explicitly.
    """
    u = p[i]
    v = p[k]
    row_u, row_v = dist[u, p], dist[v, p]
    col_u, col_v = dist[p, u], dist[p, v]
    cross = (
        (flow[i] - flow[k]) * (row_v - row_u)
        + (flow[:, i] - flow[:, k]) * (col_v - col_u)
    )
    delta = int(cross.sum()) - int(cross[i]) - int(cross[k])
    delta += int(flow[i, i] - flow[k, k]) * int(dist[v, v] - dist[u, u])
    delta += int(flow[i, k] - flow[k, i]) * int(dist[v, u] - dist[u, v])
    return delta


def swap_delta(inst: Instance, p: np.ndarray, current: int, i: int, k: int) -> int:
    """Cost after exchanging p[i] and p[k], in O(n) given the current cost."""
    p = check_permutation(p, inst.n)
    if not (0 <= i < inst.n and 0 <= k < inst.n):
        raise IndexError(f"facility index out of range: i={i}, k={k}, n={inst.n}")
    if i == k:
        raise ValueError("swap requires two distinct facilities")
    if not _check_overflow_budget(inst):
        q = p.copy()
        q[i], q[k] = q[k], q[i]
        return evaluate_cost(inst, q)
    return current + _swap_delta_unchecked(inst.flow, inst.dist, p, i, k)
