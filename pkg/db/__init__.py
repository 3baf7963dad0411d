from .main import Database
from .relation import *
from .planner import plan_indexes, plan_order
