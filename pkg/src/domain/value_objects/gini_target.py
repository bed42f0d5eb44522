from enum import Enum


class GiniTarget(str, Enum):
    GD = "gd"
    GC = "gc"
