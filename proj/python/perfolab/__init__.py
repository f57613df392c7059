"""Random unipolar / perfect graphs, a first-order model checker, and the experiment harness."""

try:
    from ._perfolab import *  # noqa: F401,F403
    from ._perfolab import __doc__  # noqa: F401
except ImportError:  # extension built outside the package directory
    from _perfolab import *  # type: ignore  # noqa: F401,F403


def read_sentence(path):
    """Parse a sentence file ('#' starts a comment)."""
    with open(path, encoding="utf-8") as f:
        return parse_formula(f.read())  # noqa: F405
