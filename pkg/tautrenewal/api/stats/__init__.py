"""Use this section of API to summarize Monte Carlo output."""
from .api import KsResult, SummaryStats, covariance, ks_normality, summarize
