"""
Answering a keyword query through web forms
===========================================

Three forms: department -> employees, employee -> projects, project ->
employees with roles. We look for "IT" and "DBA" and watch which forms
get filled in.
"""

from pathlib import Path

from deepkw import analyze, extract, fresh_executor, parse_instance, parse_query, parse_schema

data = Path(__file__).parent / "data"
schema = parse_schema((data / "staff.schema").read_text())
instance = parse_instance((data / "staff.instance").read_text(), schema)

# Static checks first: can any instance answer this query at all?
q = parse_query("IT:Dept, DBA:Role")
print(analyze(q, schema).format())

# Extraction only touches the data through the executor, which logs every
# access.
executor = fresh_executor(schema, instance)
result = extract(q, schema, executor)

print("\naccess log (seq, relation, binding, output size):")
print(executor.export_log(), end="")

# r2 was only needed to get a project to feed r3; peel removed its tuple.
print("\nanswer:")
for line in result.answer.lines():
    print(" ", line)
print("witnesses tried:", [str(w) for w in result.witnesses])
