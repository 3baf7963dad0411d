import os

from datalog_types import *
from syntax.printer import print_tuple
from .base import DatabaseBase, logger


class DatabaseDump(DatabaseBase):

    def sorted_tuples(self, pred: str) -> list[tuple[ValueId, ...]]:
        """Canonical order of resolved values, independent of interning order."""
        return sorted(self.relation(pred).tuples(), key=tuple_sort_key)

    def dump_rows(self, pred: str) -> list[str]:
        return [print_tuple(t) for t in self.sorted_tuples(pred)]

    def dump(self, pred: str, out_dir: str) -> str:
        path = os.path.join(out_dir, f"{pred}.csv")
        rows = self.dump_rows(pred)
        with open(path, "w", encoding="utf-8") as f:
            for row in rows:
                f.write(row)
                f.write("\n")
        logger.info(f"wrote {len(rows)} rows to {path}")
        return path

    def dump_outputs(self, out_dir: str) -> list[str]:
        os.makedirs(out_dir, exist_ok=True)
        return [self.dump(pred, out_dir) for pred in self.program.output_preds()]

    def snapshot(self, preds: list[str] | None = None) -> dict[str, list[str]]:
        """Printed rows per predicate, in dump order; the unit engines are compared on."""
        if preds is None:
            preds = self.program.output_preds()
        return {pred: self.dump_rows(pred) for pred in preds}
