"""Python access to the dampns solver, decay analysis and experiment harness."""

try:
    from ._dampns import *  # noqa: F401,F403
    from ._dampns import Error, IoError, NumericalError, ValidationError  # noqa: F401
except ImportError:  # in-tree build: the module sits next to the package
    from _dampns import *  # noqa: F401,F403
    from _dampns import Error, IoError, NumericalError, ValidationError  # noqa: F401

__version__ = "0.1.0"
