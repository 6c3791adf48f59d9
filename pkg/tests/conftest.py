from hypothesis import settings

settings.register_profile("jointlab", max_examples=100, deadline=None)
settings.load_profile("jointlab")
