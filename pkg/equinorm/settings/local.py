from .base import *

DEBUG = True

# Keep numeric chatter out of test output unless asked for
LOGGING["root"]["level"] = env("EQUINORM_LOG_LEVEL", default="WARNING")  # noqa: F405
