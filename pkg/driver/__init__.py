from .driver import *
from .types import *
