"""Show the chain exchanges that keep an extraction alive.

With k = 3 the tight flats of N start to matter: a freshly found rainbow
matching may leave uncovered elements on vertices with no deficit to spare,
or fail to span some tight flat.  Both get fixed by swapping along chains of
alternating paths; each swap is logged as one line.
"""

import logging

from rainbow_bases import InstanceSpec, extract_all, gen_instance

logging.basicConfig(level=logging.DEBUG, format="  %(message)s")
logging.getLogger("rainbow_bases.extract").setLevel(logging.WARNING)

M, B = gen_instance(InstanceSpec(n=6, k=3, seed=2))
print(f"instance: n={M.n}, k={M.k}")
cert = extract_all(M, B)

for step in cert.history:
    print(f"p={step.p} eta={step.eta} attempts={step.attempts} exchanges={len(step.exchanges)}")
print("stop:", cert.stop.reason, "| t =", cert.t, "of", M.n)

kinds = {}
for x in cert.exchanges:
    kinds[x.kind] = kinds.get(x.kind, 0) + 1
print("exchange counts:", kinds)
