from .stratifier import *
