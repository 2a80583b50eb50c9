"""
Contextual logic is intuitionistic
==================================

Formulas are evaluated by Kripke forcing over the context poset. Truth
values are downsets, which form a Heyting algebra, and excluded middle
can fail.
"""

from ctxlogic import (
    border,
    check_heyting_homomorphism,
    eval_formula,
    excluded_middle_witness,
    fixture_path,
    load_model,
    parse_formula,
    random_formula,
)
import random

_, p, m = load_model(fixture_path("model_dim3.json"))
print("bindings:", m.bindings)

for text in ["A", "~A", "C", "~C", "C | ~C", "~~C", "A -> B"]:
    value = eval_formula(m, parse_formula(text))
    print(f"{text:8s} holds at {len(value):2d}/{len(p)} contexts, border {len(border(value))}")

# outside the section's domain a context can force neither an atom nor
# its negation
print("excluded middle fails for:", excluded_middle_witness(m))

# the forcing clauses agree with the Heyting operations on downsets
rng = random.Random(0)
phis = [random_formula(rng, ["A", "B", "C"], 5) for _ in range(30)]
rep = check_heyting_homomorphism(m, phis)
print(f"{rep.checked} identities checked, {len(rep.violations)} violations")
