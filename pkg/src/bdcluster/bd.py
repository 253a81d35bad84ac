"""Belavin-Drinfeld triples on the A-series root system [1, n-1].

A triple (gamma1, gamma2, map) must be a nilpotent isometry: the map is
a bijection gamma1 -> gamma2 that shifts every connected component of
gamma1 to a block of consecutive roots, either preserving or reversing
its order, and no map orbit may stay inside gamma1 forever.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class BDError(ValueError):
    pass


class NotBijective(BDError):
    pass


class NotIsometry(BDError):
    pass


class NotNilpotent(BDError):
    pass


class NotEndpoint(BDError):
    pass


def _components(roots) -> list[tuple[int, int]]:
    """Maximal intervals [a, b] of a set of simple-root indices."""
    out = []
    for r in sorted(roots):
        if out and out[-1][1] == r - 1:
            out[-1] = (out[-1][0], r)
        else:
            out.append((r, r))
    return out


@dataclass(frozen=True)
class RunPartition:
    """Consecutive intervals covering [1, n]; dual partitions are numbered
    right to left."""

    n: int
    intervals: tuple[tuple[int, int], ...]
    reversed_numbering: bool = False

    def __post_init__(self):
        pos = 1
        for a, b in self.intervals:
            if a != pos or b < a:
                raise BDError("intervals must be consecutive and cover [1, n]")
            pos = b + 1
        if pos != self.n + 1:
            raise BDError("intervals must cover [1, n]")

    def run_of(self, i: int) -> tuple[int, int]:
        for a, b in self.intervals:
            if a <= i <= b:
                return (a, b)
        raise KeyError(i)

    def run_index(self, i: int) -> int:
        """1-based run number; dual partitions count from the right."""
        for k, (a, b) in enumerate(self.intervals):
            if a <= i <= b:
                return len(self.intervals) - k if self.reversed_numbering else k + 1
        raise KeyError(i)

    def dual(self) -> "RunPartition":
        mirrored = tuple(sorted((self.n - b + 1, self.n - a + 1)
                                for a, b in self.intervals))
        return RunPartition(self.n, mirrored, not self.reversed_numbering)


def runs_from_subset(n: int, subset) -> RunPartition:
    """Runs of the subset: i and i+1 share a run iff i is in the subset."""
    intervals = []
    a = 1
    for i in range(1, n + 1):
        if i == n or i not in subset:
            intervals.append((a, i))
            a = i + 1
    return RunPartition(n, tuple(intervals))


@dataclass(frozen=True)
class BDTriple:
    n: int
    gamma1: frozenset[int]
    gamma2: frozenset[int]
    map: dict[int, int] = field(compare=False)
    _map_items: tuple = field(default=(), repr=False)

    def __init__(self, n, gamma1, gamma2, map):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "gamma1", frozenset(gamma1))
        object.__setattr__(self, "gamma2", frozenset(gamma2))
        object.__setattr__(self, "map", dict(map))
        object.__setattr__(self, "_map_items", tuple(sorted(self.map.items())))
        self._validate()

    def _validate(self):
        roots = set(range(1, self.n))
        if not (self.gamma1 <= roots and self.gamma2 <= roots):
            raise BDError(f"subsets must lie in [1, {self.n - 1}]")
        if set(self.map) != set(self.gamma1):
            raise NotBijective("map domain differs from gamma1")
        if set(self.map.values()) != set(self.gamma2) or \
                len(set(self.map.values())) != len(self.map):
            raise NotBijective("map is not a bijection onto gamma2")
        for a, b in self.components():
            image = sorted(self.map[i] for i in range(a, b + 1))
            if image != list(range(min(image), min(image) + (b - a + 1))):
                raise NotIsometry(f"image of component [{a},{b}] is not consecutive")
            diffs = {self.map[i + 1] - self.map[i] for i in range(a, b)}
            if not diffs <= {1} and not diffs <= {-1}:
                raise NotIsometry(f"component [{a},{b}] has mixed orientation")
        for alpha in self.gamma1:
            seen = set()
            x = alpha
            while x in self.gamma1:
                if x in seen:
                    raise NotNilpotent(f"orbit of {alpha} cycles inside gamma1")
                seen.add(x)
                x = self.map[x]

    def components(self) -> list[tuple[int, int]]:
        return _components(self.gamma1)

    def image_components(self) -> list[tuple[int, int]]:
        return _components(self.gamma2)

    def component_of(self, alpha: int) -> tuple[int, int]:
        for a, b in self.components():
            if a <= alpha <= b:
                return (a, b)
        raise KeyError(alpha)

    def orientation(self, component: tuple[int, int]) -> str:
        """'preserved' or 'reversed'; singletons count as preserved."""
        a, b = component
        if (a, b) not in self.components():
            raise BDError(f"[{a},{b}] is not a component of gamma1")
        if a == b or self.map[a + 1] == self.map[a] + 1:
            return "preserved"
        return "reversed"

    def inverse_map(self) -> dict[int, int]:
        return {v: k for k, v in self.map.items()}

    def is_empty(self) -> bool:
        return not self.gamma1

    def x_runs(self) -> RunPartition:
        return runs_from_subset(self.n, self.gamma1)

    def y_runs(self) -> RunPartition:
        return runs_from_subset(self.n, self.gamma2)

    def remove_root(self, alpha: int) -> "BDTriple":
        """Delete an endpoint root of a component together with its image."""
        a, b = self.component_of(alpha)
        if alpha not in (a, b) :
            raise NotEndpoint(f"{alpha} is interior to component [{a},{b}]")
        new_map = {k: v for k, v in self.map.items() if k != alpha}
        return BDTriple(self.n,
                        self.gamma1 - {alpha},
                        self.gamma2 - {self.map[alpha]},
                        new_map)

    def to_config(self) -> dict:
        return {
            "gamma1": sorted(self.gamma1),
            "gamma2": sorted(self.gamma2),
            "map": {str(k): v for k, v in sorted(self.map.items())},
        }

    @staticmethod
    def from_config(n: int, cfg: dict) -> "BDTriple":
        return BDTriple(n, cfg.get("gamma1", []), cfg.get("gamma2", []),
                        {int(k): v for k, v in cfg.get("map", {}).items()})

    @staticmethod
    def empty(n: int) -> "BDTriple":
        return BDTriple(n, (), (), {})

    def __hash__(self):
        return hash((self.n, self.gamma1, self.gamma2, self._map_items))


@dataclass(frozen=True)
class BDPair:
    rows: BDTriple
    cols: BDTriple

    def __post_init__(self):
        if self.rows.n != self.cols.n:
            raise BDError("row and column triples must share n")

    @property
    def n(self) -> int:
        return self.rows.n

    def size(self) -> int:
        return len(self.rows.gamma1) + len(self.cols.gamma1)

    @staticmethod
    def empty(n: int) -> "BDPair":
        return BDPair(BDTriple.empty(n), BDTriple.empty(n))

    def remove_root(self, which: str, alpha: int) -> "BDPair":
        if which == "rows":
            return BDPair(self.rows.remove_root(alpha), self.cols)
        if which == "cols":
            return BDPair(self.rows, self.cols.remove_root(alpha))
        raise ValueError("which must be 'rows' or 'cols'")

    # Run partitions for the four matrix sides.  Rows of X follow gamma1
    # of the row triple, columns of X gamma1 of the column triple; the Y
    # sides follow the gamma2 sets.
    def x_row_runs(self) -> RunPartition:
        return runs_from_subset(self.n, self.rows.gamma1)

    def x_col_runs(self) -> RunPartition:
        return runs_from_subset(self.n, self.cols.gamma1)

    def y_row_runs(self) -> RunPartition:
        return runs_from_subset(self.n, self.rows.gamma2)

    def y_col_runs(self) -> RunPartition:
        return runs_from_subset(self.n, self.cols.gamma2)

    def to_config(self) -> dict:
        return {"n": self.n, "rows": self.rows.to_config(), "cols": self.cols.to_config()}

    @staticmethod
    def from_config(cfg: dict) -> "BDPair":
        n = cfg["n"]
        return BDPair(BDTriple.from_config(n, cfg.get("rows", {})),
                      BDTriple.from_config(n, cfg.get("cols", {})))


def load_pair(path) -> BDPair:
    with open(path) as fh:
        return BDPair.from_config(json.load(fh))


def running_example_pair() -> BDPair:
    """The GL7 pair used across the test corpus."""
    rows = BDTriple(7, {1, 2, 5}, {1, 3, 4}, {1: 4, 2: 3, 5: 1})
    cols = BDTriple(7, {3, 4, 6}, {2, 3, 5}, {3: 2, 4: 3, 6: 5})
    return BDPair(rows, cols)
