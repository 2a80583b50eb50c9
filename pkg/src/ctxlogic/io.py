"""Reading and writing the JSON file formats.

Ray-set / context file::

    {"dim": 4,
     "rays": {"a": ["1", "0", "0", "0"], ...},
     "contexts": [["a", "b", "c", "d"],                 # id "C1"
                  {"id": "X", "rays": ["a", "e", ...]},
                  {"id": "Y", "atoms": [[["1","0"],["0","0"]], ...]},
                  {"id": "Z", "spectrum": [["2", "a"], ["-1", [[...]]]]}]}

Section file: ``{"base_context": id, "selected_atom": ray name or index}``
for a principal section, or ``{"assignment": {id: atom index, ...}}``.

Model file: ``{"poset": <rayset>, "section": <section>, "bindings": {name: id}}``
where the first two are inline objects or paths relative to the model file.
"""

from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import InvalidInput
from .geometry import Operator, Projector, Ray, are_orthogonal, as_matrix, projector_from_ray, sum_is_identity
from .lattice import Context, ContextPoset, build_poset, context_from_decomposition, spectral_algebra
from .logic import KripkeModel
from .sheaf import LocalSection, principal_section

__all__ = [
    "RaySet",
    "load_json",
    "load_rayset",
    "poset_to_json",
    "load_section",
    "section_to_json",
    "load_model",
    "atom_index",
    "fixture_path",
]


@dataclass
class RaySet:
    dim: int
    rays: dict = field(default_factory=dict)
    contexts: list = field(default_factory=list)
    context_rays: dict = field(default_factory=dict)  # context id -> ray names, when given by rays

    def memberships(self) -> dict:
        out = {name: [] for name in self.rays}
        for cid, names in self.context_rays.items():
            for name in names:
                out[name].append(cid)
        return out

    def ray_name_for(self, p: Projector) -> str | None:
        for name, ray in self.rays.items():
            if projector_from_ray(ray) == p:
                return name
        return None

    def poset(self, **kwargs) -> ContextPoset:
        return build_poset(self.contexts, **kwargs)


def load_json(source) -> Any:
    if isinstance(source, (dict, list)):
        return source
    try:
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {source}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _context_from_rays(cid: str, names, rays: Mapping, dim: int) -> Context:
    if not names:
        raise InvalidInput(f"context {cid}: no rays listed")
    for name in names:
        if name not in rays:
            raise InvalidInput(f"context {cid}: unknown ray {name!r}")
    if len(set(names)) != len(names):
        raise InvalidInput(f"context {cid}: a ray is listed twice")
    projs = [projector_from_ray(rays[n]) for n in names]
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            if not are_orthogonal(projs[i], projs[j]):
                raise InvalidInput(f"context {cid}: rays {names[i]!r} and {names[j]!r} are not orthogonal")
    if not sum_is_identity(projs):
        raise InvalidInput(f"context {cid}: rays {', '.join(names)} span only {len(names)} of {dim} dimensions")
    return Context(projs, cid)


def load_rayset(source) -> RaySet:
    data = load_json(source)
    if not isinstance(data, dict) or "dim" not in data or "contexts" not in data:
        raise InvalidInput("ray-set file needs 'dim' and 'contexts'")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InvalidInput("'dim' must be a positive integer")
    rays = {}
    for name, entries in (data.get("rays") or {}).items():
        try:
            ray = Ray(entries)
        except InvalidInput as exc:
            raise InvalidInput(f"ray {name!r}: {exc}") from None
        if ray.dim != dim:
            raise InvalidInput(f"ray {name!r} has {ray.dim} entries, expected {dim}")
        rays[name] = ray

    out = RaySet(dim, rays)
    seen_ids = set()
    for k, entry in enumerate(data["contexts"], start=1):
        if isinstance(entry, list):
            entry = {"rays": entry}
        if not isinstance(entry, dict):
            raise InvalidInput(f"context #{k}: expected a list of ray names or an object")
        cid = str(entry.get("id", f"C{k}"))
        if cid in seen_ids:
            raise InvalidInput(f"duplicate context id {cid!r}")
        seen_ids.add(cid)
        if "rays" in entry:
            ctx = _context_from_rays(cid, list(entry["rays"]), rays, dim)
            out.context_rays[cid] = list(entry["rays"])
        elif "atoms" in entry:
            try:
                atoms = [Projector(as_matrix(m)) for m in entry["atoms"]]
                ctx = context_from_decomposition(atoms, cid)
            except InvalidInput as exc:
                raise InvalidInput(f"context {cid}: {exc}") from None
        elif "spectrum" in entry:
            spectrum = []
            for value, proj in entry["spectrum"]:
                if isinstance(proj, str):
                    if proj not in rays:
                        raise InvalidInput(f"context {cid}: unknown ray {proj!r}")
                    proj = projector_from_ray(rays[proj])
                spectrum.append((_rational(value, cid), proj))
            try:
                ctx = spectral_algebra(Operator(spectrum), cid)
            except InvalidInput as exc:
                raise InvalidInput(f"context {cid}: {exc}") from None
        else:
            raise InvalidInput(f"context {cid}: give 'rays', 'atoms' or 'spectrum'")
        if ctx.dim != dim:
            raise InvalidInput(f"context {cid} has dim {ctx.dim}, expected {dim}")
        out.contexts.append(ctx)
    if not out.contexts:
        raise InvalidInput("no contexts given")
    return out


def _rational(value, cid):
    try:
        return Fraction(value) if not isinstance(value, float) else Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"context {cid}: bad eigenvalue {value!r}") from None


def poset_to_json(p: ContextPoset) -> dict:
    """Poset export; re-loadable with :func:`load_rayset`."""
    inputs = set(p.input_ids)
    return {
        "dim": p.dim,
        "contexts": [
            {"id": c.id, "atoms": [a.to_json() for a in c.atoms], "input": c.id in inputs} for c in p.contexts
        ],
        "covers": [list(pair) for pair in p.covers()],
        "maximal": list(p.maximal_ids),
        "bottom": p.bottom_id,
    }


def section_to_json(s: LocalSection, base: str | None = None, selected=None) -> dict:
    out = {}
    if base is not None:
        out["base_context"] = base
        out["selected_atom"] = selected
    out["assignment"] = s.indices()
    return out


def load_section(source, p: ContextPoset, rayset: RaySet | None = None) -> LocalSection:
    data = load_json(source)
    if not isinstance(data, dict):
        raise InvalidInput("section file must be a JSON object")
    if "base_context" in data:
        base = data["base_context"]
        if base not in p:
            raise InvalidInput(f"unknown base context {base!r}")
        ctx = p.context(base)
        sel = data.get("selected_atom", 0)
        return principal_section(p, base, atom_index(ctx, sel, rayset))
    if "assignment" in data:
        for cid in data["assignment"]:
            if cid not in p:
                raise InvalidInput(f"section names unknown context {cid!r}")
        try:
            return LocalSection.from_indices(p, data["assignment"])
        except (InvalidInput, ValueError, TypeError) as exc:
            raise InvalidInput(f"bad section assignment: {exc}") from None
    raise InvalidInput("section file needs 'base_context' or 'assignment'")


def atom_index(ctx: Context, sel, rayset: RaySet | None) -> int:
    if isinstance(sel, int) and not isinstance(sel, bool):
        if not 0 <= sel < ctx.size:
            raise InvalidInput(f"atom index {sel} out of range for {ctx.id} ({ctx.size} atoms)")
        return sel
    if isinstance(sel, str) and rayset is not None and sel in rayset.rays:
        proj = projector_from_ray(rayset.rays[sel])
        for j, atom in enumerate(ctx.atoms):
            if atom == proj:
                return j
        raise InvalidInput(f"ray {sel!r} is not an atom of context {ctx.id}")
    raise InvalidInput(f"unknown atom {sel!r}")


def _resolve_ref(ref, base_dir: Path):
    if isinstance(ref, str):
        path = Path(ref)
        return load_json(path if path.is_absolute() else base_dir / path)
    return ref


def load_model(source, **poset_kwargs) -> tuple:
    """Returns (rayset, poset, KripkeModel)."""
    data = load_json(source)
    base_dir = Path(source).parent if isinstance(source, (str, Path)) else Path(".")
    if not isinstance(data, dict) or "poset" not in data or "section" not in data:
        raise InvalidInput("model file needs 'poset' and 'section'")
    rayset = load_rayset(_resolve_ref(data["poset"], base_dir))
    p = rayset.poset(**poset_kwargs)
    section = load_section(_resolve_ref(data["section"], base_dir), p, rayset)
    bindings = data.get("bindings") or {}
    for name, cid in bindings.items():
        if cid not in p:
            raise InvalidInput(f"atom {name!r} bound to unknown context {cid!r}")
    return rayset, p, KripkeModel(p, section, bindings)


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture file, e.g. ``fixture_path("ks18_dim4.json")``."""
    return Path(__file__).parent / "fixtures" / name
