"""
Local sections and the dual presheaf
====================================

A local section picks one atom in every context of a downset, compatibly
with inclusion. Equivalently it is a natural transformation from a
subfunctor of the terminal presheaf into the presheaf of valuations.
"""

from ctxlogic import (
    LocalSection,
    build_dual_presheaf,
    enumerate_local_sections,
    fixture_path,
    is_local_section,
    load_rayset,
    principal_section,
    section_to_transformation,
    transformation_to_section,
)

rs = load_rayset(fixture_path("dim3_three_bases.json"))
p = rs.poset()

# choosing e1 in B1 determines the value on everything below B1
s = principal_section(p, "B1", 0)
print("domain:", s.domain.ids())
print("check:", bool(is_local_section(s)))

# flip one assignment and the compatibility check points at the problem
idx = s.indices()
bad = LocalSection.from_indices(p, {**idx, "B1": 1})
print("mutated:", is_local_section(bad))

# every local section, over every downset
sections = list(enumerate_local_sections(p))
print(len(sections), "local sections,", sum(x.is_global() for x in sections), "of them global")

# the presheaf view gives back exactly the same objects
D = build_dual_presheaf(p)
print("functorial:", D.check_functoriality() == [])
print("round trip:", all(transformation_to_section(section_to_transformation(x, D)) == x for x in sections))
