"""Shared test configuration.

Hypothesis runs with a deterministic profile so the suite is
reproducible run to run; property tests therefore freeze their
example streams rather than exploring anew on each invocation.
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")
