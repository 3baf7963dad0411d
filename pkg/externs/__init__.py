from .formula import *
from .functors import Functor, FunctorRegistry, default_registry
from .oracle import *
