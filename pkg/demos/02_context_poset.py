"""
The poset of contexts
=====================

A context is an orthogonal decomposition of the identity, i.e. the atoms of
a finite Boolean algebra of projectors. Closing a family of contexts under
coarsening gives a finite poset ordered by inclusion.
"""

from ctxlogic import coarsenings, fixture_path, load_rayset, to_dot

rs = load_rayset(fixture_path("dim3_three_bases.json"))
for ctx in rs.contexts:
    print(ctx.id, "rays:", rs.context_rays[ctx.id])

# one 3-atom context has Bell(3) = 5 coarsenings, including itself
print("coarsenings of B1:", len(coarsenings(rs.contexts[0])))

p = rs.poset()
print(len(p), "contexts,", len(p.covers()), "covering edges, bottom =", p.bottom_id)

# B1 and B2 share e1, so both contain the 2-atom algebra {e1, 1 - e1}
for cid in p.ids:
    ups = sorted(p.above(cid) & set(p.input_ids))
    print(f"{cid:5s} {p.context(cid).size} atoms, inside {ups}")

# Graphviz source for the covering diagram
print(to_dot(p).splitlines()[0], "...")
