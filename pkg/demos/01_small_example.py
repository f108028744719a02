"""Walk through a two-colour instance by hand.

Three vectors in GF(2)^2: e1 = 10, e2 = 01, e3 = 11.  Colour 1 owns the base
{e1, e2}, colour 2 owns {e1, e3}.  Two disjoint rainbow bases exist; we watch
the extractor find them and check the answer against brute force.
"""

from rainbow_bases import BaseSequence, BinaryMatroid, brute_force_t, build_graph, build_quotient, extract_all

# rows of the representation; column j is element e_{j+1}
M = BinaryMatroid.from_strings(["101", "011"])
B = BaseSequence.validated(M, [[0, 1], [0, 2]])

Q = build_quotient(M)
print("psi vectors in N:", Q.vectors)  # every element sits in the one fundamental circuit

G = build_graph(B, M.m)
print("edges of G_0:", G.edge_list())
print("deficits at p=0:", G.deficits, "sum =", sum(G.deficits), "= k * eta")

cert = extract_all(M, B)
for j, row in enumerate(cert.rows, 1):
    print(f"rainbow basis {j}:", {f"u{c + 1}": f"e{e + 1}" for c, e in enumerate(row)})
print("t =", cert.t, "| brute force t =", brute_force_t(M, B))
