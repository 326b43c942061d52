import itertools

from hypothesis import settings, strategies as st

from spectracert.graphs import Graph

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@st.composite
def small_graphs(draw, min_n: int = 1, max_n: int = 6):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.build(n, [p for p, k in zip(pairs, keep) if k])


@st.composite
def small_trees(draw, max_n: int = 8):
    n = draw(st.integers(1, max_n))
    parents = [draw(st.integers(1, v - 1)) for v in range(2, n + 1)]
    return Graph.build(n, [(p, v) for v, p in zip(range(2, n + 1), parents)])
