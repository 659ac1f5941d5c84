"""
Eulerian, alternative and Lerch-sum forms
=========================================

omega, f, h1 and h2 each have a second formula, and D5 has a form built on
a squared Pochhammer symbol.  The term counts include the infinite products
that a form needs.
"""

from d5mock import FunctionId, Tag, representations

q = 0.8

# every available form of every function at one point
for tag in Tag:
    for fid in representations(tag):
        r = fid.evaluate(q)
        print(f"{tag.value:8s} {fid.representation.value:15s} {complex(r.value).real:.18f}  terms={r.terms_used}")

# forms can also be picked by their command-line names
print(FunctionId.parse("h2", "lerch").evaluate(0.5 + 0.3j).value)
