"""Hypothesis profile shared by the suite.

Structured instances come from the package's own seeded generators; the
strategies draw integer seeds so shrinking lands on a reproducer seed.
Deadlines are off because exact arithmetic has long tails on big atoms.
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "exact",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")
