from .dump import DatabaseDump

class Database(DatabaseDump):
    pass
