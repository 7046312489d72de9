import hypothesis

# Search-heavy properties (isomorphism, enumeration) have spiky run times;
# a deadline would flake on them.
hypothesis.settings.register_profile(
    "default", max_examples=60, deadline=None, derandomize=True
)
hypothesis.settings.register_profile("more", max_examples=300, deadline=None)
hypothesis.settings.load_profile("default")
