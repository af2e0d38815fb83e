"""
Keywords without a known domain
===============================

When the user types plain words, each one is tried in every domain until
a tuple containing it comes back; from then on its domain is fixed.
"""

from pathlib import Path

from deepkw import extract, fresh_executor, parse_instance, parse_query, parse_schema

data = Path(__file__).parent / "data"
schema = parse_schema((data / "staff.schema").read_text())
instance = parse_instance((data / "staff.instance").read_text(), schema)

for text in ["IT:Dept, DBA:Role", "IT:Dept, DBA", "IT, DBA", "IT, Astronaut"]:
    ex = fresh_executor(schema, instance)
    result = extract(parse_query(text), schema, ex)
    answer = result.answer.lines() if result.found else "no answer"
    print(f"{text:20} accesses={ex.total:2}  {answer}")

# Guessing costs accesses: the untyped run also probes r1, r2 and r3 with
# "DBA" before the literal turns up as a role.
ex = fresh_executor(schema, instance)
extract(parse_query("IT, DBA"), schema, ex)
print()
print(ex.export_log(), end="")
