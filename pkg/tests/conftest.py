"""Shared test configuration.

The hypothesis profile is derandomized so the whole suite is reproducible
run-to-run (the library's own guarantees are deterministic-by-seed, and the
tests should be too).
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")
