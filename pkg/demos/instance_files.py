"""
Instance documents and the command-line round trip
==================================================

Instances travel as line-oriented text documents: graph and lengths, plus
optional point records and a candidate assignment.  Rational tokens like
3/4 stay exact; the same files drive the command-line interface.
"""

from affeq import parse_document, render_document, solve

# A document is human-writable.  Comments start with '#'.
text = """\
# doubled 3-4-5 triangle
dim 2
vertices 3
edge 0 1 3 6
edge 0 2 4 8
edge 1 2 5 10
"""

doc = parse_document(text)
inst = doc.instance()
print("parsed:", inst.n, "vertices, dimension", inst.d,
      "| exact:", inst.exact)

# Solve it and write the certificate back out as a document: the points of
# both frameworks and the full assignment, re-readable by 'check',
# 'verify' and 'embed'.
verdict = solve(inst)
cert = verdict.certificate
round_trip = render_document(inst, points=cert.p, points_prime=cert.p_prime,
                             assignment=cert.assignment)
print("\ncertificate document:")
print(round_trip)

# Parsing the rendered text recovers identical objects: numbers are
# written exactly (rationals as p/q, floats with full precision).
back = parse_document(round_trip)
assert back.assignment().alpha == cert.alpha
assert back.configuration().points == cert.p.points
print("round trip exact:", True)

# The same document drives the command line:
#
#   affeq solve triangle.txt            exit 0, verdict JSON on stdout
#   affeq solve triangle.txt --all-dims sweep dimensions 1..d
#   affeq check certificate.txt         re-check an emitted certificate
#   affeq export-smt triangle.txt       SMT-LIB text for external solvers
#
# Exit status: 0 = YES/pass, 1 = NO/fail, 2 = UNKNOWN, 64 = input error.
