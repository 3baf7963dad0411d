from .parser import parse_program
from .facts import parse_facts, load_facts_dir
from .printer import *
