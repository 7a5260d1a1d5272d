"""Concept-drift oracles, stream learners, and experiment harness.

The heavy lifting lives in the compiled extension; this package re-exports
its surface. The extension sits inside the installed package, or next to it
on PYTHONPATH when working from a build tree.
"""

try:
    from ._driftlab import *  # noqa: F401,F403
    from ._driftlab import __doc__  # noqa: F401
except ImportError:  # build-tree layout
    from _driftlab import *  # noqa: F401,F403
    from _driftlab import __doc__  # noqa: F401
