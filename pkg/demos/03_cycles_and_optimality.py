"""
Cyclic sources: the first answer is not always the smallest
===========================================================

r takes an A and returns B; s takes a B and returns C and A. Values flow
round the cycle, so access paths have no fixed length. Extraction stops at
the first answer; the exhaustive baseline sees everything and the oracle
picks the smallest answer from it.
"""

from pathlib import Path

from deepkw import extract, fresh_executor, optimal_answer, parse_instance, parse_query, parse_schema
from deepkw.engine import keyword_constants, reachable_portion

data = Path(__file__).parent / "data"
schema = parse_schema((data / "cycle.schema").read_text())
instance = parse_instance((data / "cycle.instance").read_text(), schema)
q = parse_query("a:A, c:C")

ex = fresh_executor(schema, instance)
result = extract(q, schema, ex)
print(f"extract: {len(result.answer)} tuples after {ex.total} accesses")
for line in result.answer.lines():
    print(" ", line)

baseline = fresh_executor(schema, instance)
everything = reachable_portion(schema, baseline, keyword_constants(q, schema))
print(f"\nbaseline: {len(everything)} reachable tuples after {baseline.total} accesses")

best = optimal_answer(q, schema, fresh_executor(schema, instance))
print("optimal:", best.lines())
