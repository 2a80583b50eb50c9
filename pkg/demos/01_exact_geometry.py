"""
Exact projectors and observables
================================

Everything is exact: scalars are Gaussian rationals, so orthogonality and
idempotence are equalities, not tolerances.
"""

from fractions import Fraction

from ctxlogic import GaussianRational, Operator, Ray, apply_function, projector_from_ray

# complex literals use the same syntax as the JSON files
z = GaussianRational.coerce("1/2+3/4*i")
print(z, "*", z.conjugate(), "=", z * z.conjugate())

# a ray is only defined up to scale; its projector is the canonical form
p = projector_from_ray(Ray(["1", "i"]))
q = projector_from_ray(Ray(["2", "2*i"]))
print("same projector:", p == q, " rank:", p.rank)
print(p)

# a self-adjoint operator given by its spectral decomposition
up, down = projector_from_ray(Ray([1, 0])), projector_from_ray(Ray([0, 1]))
sz = Operator([(Fraction(1, 2), up), (Fraction(-1, 2), down)])
print("eigenvalues of Sz:", [str(v) for v in sz.eigenvalues])

# f(Sz) = Sz^2 collapses both eigenvalues onto 1/4, leaving the identity
sq = apply_function(sz, lambda x: x * x)
print("eigenvalues of Sz^2:", [str(v) for v in sq.eigenvalues], " projector rank:", sq.projectors[0].rank)
