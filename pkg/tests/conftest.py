import os

from hypothesis import HealthCheck, settings, strategies as st

from slimcon.order import Poset

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def posets(draw, min_size=1, max_size=6):
    """Random posets: a random DAG over a shuffled natural labelling, closed transitively."""
    n = draw(st.integers(min_size, max_size))
    perm = draw(st.permutations(range(n)))
    pairs = [
        (perm[i], perm[j])
        for i in range(n)
        for j in range(i + 1, n)
        if draw(st.booleans())
    ]
    return Poset.from_relation(n, pairs)


@st.composite
def graphs(draw, max_size=9):
    n = draw(st.integers(1, max_size))
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    return n, edges


def pytest_terminal_summary(terminalreporter):
    acc = __import__("sys").modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.RESULTS[n])
