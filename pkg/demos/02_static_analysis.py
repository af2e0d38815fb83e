"""
Which queries can be answered at all?
=====================================

Compatibility ignores access patterns; answerability takes them into
account. Both are decided from the schema alone.
"""

from deepkw import analyze, compatible, parse_query, parse_schema

# Two keywords need a chain of non-unary relations joining their domains.
q = parse_query("a:A, c:C")
for text in ["r1(A:A, B:B)\nr2(C:C, D:D)", "r1(A:A, B:B)\nr3(B:B, C:C)"]:
    print(text.replace("\n", "  "), "->", "compatible" if compatible(q, parse_schema(text)) else "incompatible")

# A unary relation cannot link two values of its domain.
q2 = parse_query("a:A, a2:A")
print("r4(A)  ->", compatible(q2, parse_schema("r4(A:A)")))
print("r1(A, B)  ->", compatible(q2, parse_schema("r1(A:A, B:B)")))

# Access patterns can hide relations: s needs D values nobody returns.
for text in [
    "r(A:A^i, B:B)\ns(B:B, C:C, D:D^i)",
    "r(A:A^i, B:B)\ns(B:B^i, C:C, D:D)",
    "r(A:A^i, B:B)\ns(C:C^i, D:D)\nu(B:B, D:D, E:E^i)",
]:
    print()
    print(text)
    print("  ", analyze(q, parse_schema(text)).format())
