from .base import *

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = False

# Batch runs on shared machines: a real key must come from the environment
SECRET_KEY = env("SECRET_KEY")  # noqa: F405

# Larger sweeps are fine on dedicated hosts
EQUINORM_JOBS = env.int("EQUINORM_JOBS", default=os.cpu_count() or 1)  # noqa: F405
