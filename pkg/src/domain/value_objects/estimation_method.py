from enum import Enum


class EstimationMethod(str, Enum):
    PLUGIN_ASYMPTOTIC = "plugin-asymptotic"
    BOOTSTRAP = "bootstrap"
