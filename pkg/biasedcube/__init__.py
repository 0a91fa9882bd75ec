from .status import *
from .statuscheckedfunctions import FunctionInfo, StatusCheckedFunctions
from .preconditions import DEFAULT_TOLERANCE, MAX_COORDINATES, MAX_EXHAUSTIVE_COORDINATES
from .cube import *
from .fourier import *
from .hypercontract import *
from .fkn import *
from .affine import *
from .funcfile import (ValueKind, FunctionFile, read_function_file, read_rademacher_sum, format_table,
                       format_spectrum, format_rademacher)
from .campaign import (THREADS_ENVIRONMENT_VARIABLE, CampaignMode, Suite, CampaignConfig, Report,
                       run_campaign)

# flake8: noqa
