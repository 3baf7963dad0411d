from .tree_reach import *
