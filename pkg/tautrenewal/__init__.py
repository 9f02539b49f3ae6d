from .__version__ import (  # noqa: F401
    __author__,
    __author_email__,
    __description__,
    __license__,
    __title__,
    __version__,
)
