from hypothesis import settings

# exact arithmetic has long tails per example; wall-clock limits cause flaky shrinking
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")
