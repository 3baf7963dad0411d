from .config import EngineConfig
from .interpreter import RunResult, prepare, run_program, single_thread_trace
