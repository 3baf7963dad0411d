import logging
import os
import re

from datalog_types import *

logger = logging.getLogger("driver")

DECIMAL = re.compile(r"-?[0-9]+")


def parse_facts(pred: str, arity: int, text: str, file: str = "<facts>") -> list[tuple[ValueId, ...]]:
    """Reads tab-separated decimal rows. Blank lines are skipped, line numbers count them."""
    tuples: list[tuple[ValueId, ...]] = []
    for number, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != arity:
            raise FactsError(f"{pred} expects {arity} fields, got {len(fields)}", file, number)
        row: list[ValueId] = []
        for field in fields:
            if not DECIMAL.fullmatch(field):
                raise FactsError(f"not a decimal integer: {field!r}", file, number)
            try:
                row.append(intern_int(int(field)))
            except (OverflowError, ValueError) as e:
                raise FactsError(str(e), file, number) from None
        tuples.append(tuple(row))
    return tuples


def load_facts_dir(program: Program, facts_dir: str) -> dict[str, list[tuple[ValueId, ...]]]:
    facts: dict[str, list[tuple[ValueId, ...]]] = {}
    for pred in program.input_preds():
        path = os.path.join(facts_dir, f"{pred}.facts")
        if not os.path.exists(path):
            logger.warning(f"no facts file for input {pred} at {path}, treating it as empty")
            facts[pred] = []
            continue
        with open(path, encoding="utf-8") as f:
            facts[pred] = parse_facts(pred, program.arity(pred), f.read(), path)
        logger.debug(f"loaded {len(facts[pred])} facts for {pred}")
    return facts
