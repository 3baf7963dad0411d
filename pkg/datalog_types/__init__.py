from .errors import *
from .value import *
from .term import *
from .substitution import *
from .validate import *
