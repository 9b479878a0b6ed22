import random

from hypothesis import settings, strategies as hst

from tiltlab import trees as tc

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repo")


@hst.composite
def trees(draw, min_n=1, max_n=5):
    n = draw(hst.integers(min_n, max_n))
    seed = draw(hst.integers(0, 2**32 - 1))
    return tc.random_tree(n, random.Random(seed))


@hst.composite
def tilt_words(draw, n, max_len=6):
    steps = draw(hst.lists(hst.tuples(hst.sampled_from("LR"), hst.integers(1, n)), max_size=max_len))
    return " ".join(f"{d}{i}" for d, i in steps)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, verdict = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {title}")
