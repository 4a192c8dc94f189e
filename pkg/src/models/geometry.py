"""Exact base-3 geometry of the normalized parameter cube"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Tuple

import numpy as np


@dataclass(frozen=True, slots=True)
class GridPoint:
    """Point of [0,1]^n_p with coordinates num / (2 * 3^depth)

    The factor two keeps rectangle centers (odd multiples of half a side)
    integral. Instances are always stored reduced, so dataclass equality
    and hashing compare rational values exactly.
    """

    nums: Tuple[int, ...]
    depth: int = 0

    def __post_init__(self):
        scale = 2 * 3**self.depth
        for num in self.nums:
            if num < 0 or num > scale:
                raise ValueError(
                    f"Coordinate {num}/{scale} outside the unit cube"
                )

    @classmethod
    def canonical(cls, nums: Iterable[int], depth: int) -> "GridPoint":
        """Build a reduced point from possibly unreduced numerators"""
        nums = tuple(nums)
        while depth > 0 and all(n % 3 == 0 for n in nums):
            nums = tuple(n // 3 for n in nums)
            depth -= 1
        return cls(nums=nums, depth=depth)

    @classmethod
    def center(cls, n_p: int) -> "GridPoint":
        return cls(nums=(1,) * n_p, depth=0)

    @classmethod
    def from_fractions(cls, values: Iterable[Fraction]) -> "GridPoint":
        values = [Fraction(v) for v in values]
        depth = 0
        for v in values:
            den = v.denominator
            if den % 2 == 0:
                den //= 2
            exp = 0
            while den % 3 == 0:
                den //= 3
                exp += 1
            if den != 1:
                raise ValueError(f"{v} is not a grid coordinate")
            depth = max(depth, exp)
        scale = 2 * 3**depth
        return cls.canonical((int(v * scale) for v in values), depth)

    @property
    def n_p(self) -> int:
        return len(self.nums)

    def rescaled(self, depth: int) -> Tuple[int, ...]:
        """Numerators over 2 * 3^depth for depth >= self.depth"""
        factor = 3 ** (depth - self.depth)
        return tuple(n * factor for n in self.nums)

    def offset(self, dim: int, exponent: int, sign: int) -> "GridPoint":
        """Shift coordinate ``dim`` by ``sign * 3^-exponent``"""
        depth = max(self.depth, exponent)
        nums = list(self.rescaled(depth))
        nums[dim] += sign * 2 * 3 ** (depth - exponent)
        return GridPoint.canonical(nums, depth)

    def fractions(self) -> Tuple[Fraction, ...]:
        scale = 2 * 3**self.depth
        return tuple(Fraction(n, scale) for n in self.nums)

    def to_array(self) -> np.ndarray:
        scale = 2.0 * 3.0**self.depth
        return np.array([n / scale for n in self.nums], dtype=float)

    def labels(self) -> list[str]:
        """Exact coordinates as strings, e.g. ``['1/6', '1/2']``"""
        return [str(f) for f in self.fractions()]


@dataclass(slots=True)
class HyperRect:
    """One cell of the partition, side length 3^-j_d along dimension d"""

    id: int
    center: GridPoint
    side_exponents: Tuple[int, ...]
    last_cost: Optional[float] = None
    size_key: Fraction = field(init=False)
    distance: float = field(init=False)

    def __post_init__(self):
        # sum_d 3^(-2 j_d): equal keys <=> equal center-to-vertex distance
        self.size_key = sum(
            (Fraction(1, 9**j) for j in self.side_exponents), Fraction(0)
        )
        self.distance = 0.5 * math.sqrt(float(self.size_key))

    def resize(self, side_exponents: Iterable[int]) -> None:
        self.side_exponents = tuple(side_exponents)
        self.__post_init__()

    @property
    def divisions(self) -> int:
        return sum(self.side_exponents)

    @property
    def max_side_exponent(self) -> int:
        """Exponent of the longest side (the smallest j_d)"""
        return min(self.side_exponents)

    def longest_dimensions(self) -> list[int]:
        j_min = self.max_side_exponent
        return [d for d, j in enumerate(self.side_exponents) if j == j_min]

    def grid_depth(self) -> int:
        return max(self.center.depth, max(self.side_exponents))

    def bounds(self, depth: int) -> Tuple[Tuple[int, int], ...]:
        """Integer (lower, upper) per dimension over 2 * 3^depth"""
        center = self.center.rescaled(depth)
        return tuple(
            (c - 3 ** (depth - j), c + 3 ** (depth - j))
            for c, j in zip(center, self.side_exponents)
        )

    def volume_units(self, depth: int) -> int:
        """Volume in units of 3^(-depth * n_p)"""
        return math.prod(3 ** (depth - j) for j in self.side_exponents)


@dataclass(frozen=True, slots=True)
class SampleRequest:
    """Cost evaluation awaited at ``point``; dimension None means the center"""

    rect_id: int
    dimension: Optional[int]
    point: GridPoint
