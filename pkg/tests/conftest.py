import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kselim.terms import ONE, ZERO, Letter, Prod, Star, Sum

settings.register_profile(
    "default", max_examples=int(os.environ.get("KSELIM_EXAMPLES", "60")), deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def terms(letters=("b", "c"), max_leaves=6, zero=True):
    """Raw terms over ``letters``; stars nest at most twice."""
    leaves = [st.sampled_from([Letter(x) for x in letters]), st.just(ONE)]
    if zero:
        leaves.append(st.just(ZERO))
    base = st.one_of(*leaves)

    def extend(children):
        return st.one_of(
            st.builds(Sum, children, children),
            st.builds(Prod, children, children),
            st.builds(Star, children),
        )

    return st.recursive(base, extend, max_leaves=max_leaves).filter(_star_depth_ok)


def _star_depth_ok(t, limit=2):
    def depth(node):
        kids = node.children
        inner = max((depth(k) for k in kids), default=0)
        return inner + 1 if isinstance(node, Star) else inner

    return depth(t) <= limit


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
