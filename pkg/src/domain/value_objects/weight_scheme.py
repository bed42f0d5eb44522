from enum import Enum


class WeightScheme(str, Enum):
    PAPER = "paper"
    EXACT = "exact"
