from .clustering import Dendrogram, Merge, cluster, cluster_profiles
from .distributions import (
    DistributionError,
    DistributionTable,
    activity_distribution,
    level_distribution,
    subject_distribution,
)
from .lsa import TransitionReport, lsa, windowed_counts
from .mining import ConfigurationGrammar, MiningResult, RewriteRule, apply_rewrite, mine_configurations
from .reliability import ReliabilityError, ReliabilityReport, cohen_kappa, perrault_leigh, reliability

__all__ = [
    "ConfigurationGrammar",
    "Dendrogram",
    "DistributionError",
    "DistributionTable",
    "Merge",
    "MiningResult",
    "ReliabilityError",
    "ReliabilityReport",
    "RewriteRule",
    "TransitionReport",
    "activity_distribution",
    "apply_rewrite",
    "cluster",
    "cluster_profiles",
    "cohen_kappa",
    "level_distribution",
    "lsa",
    "mine_configurations",
    "perrault_leigh",
    "reliability",
    "subject_distribution",
    "windowed_counts",
]
