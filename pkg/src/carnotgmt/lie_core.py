"""Exact stratified Lie algebra and Carnot group arithmetic in exponential coordinates.

A group element is a plain ``numpy`` vector of length ``n`` (exponential
coordinates, the exponential map acts as the identity), partitioned into
layers ``p = (p_1, ..., p_kappa)``.  All operations accept arrays of shape
``(..., n)`` and broadcast over leading axes.  Everything here is a pure
function of its inputs; no shared mutable state.

The group product is the closed-form BCH series, exact for step <= 3:

    p * q = p + q + [p,q]/2 + ([p,[p,q]] - [q,[p,q]])/12
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, StructureError, UnsupportedStepError


@dataclass(frozen=True, eq=False)
class StratifiedAlgebra:
    """Graded Lie algebra with structure constants; defines the group.

    ``bracket_table[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``
    over the graded basis ``e_1, ..., e_n`` (0-based indices in code).
    """

    layer_dims: tuple[int, ...]
    bracket_table: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        dims = tuple(int(d) for d in self.layer_dims)
        if not dims or any(d <= 0 for d in dims):
            raise StructureError(f"layer_dims must be positive, got {dims}")
        object.__setattr__(self, "layer_dims", dims)
        n = sum(dims)
        table = np.ascontiguousarray(np.asarray(self.bracket_table, dtype=float))
        if table.shape != (n, n, n):
            raise StructureError(
                f"bracket_table shape {table.shape} does not match total dim {n}"
            )
        object.__setattr__(self, "bracket_table", table)

    @property
    def step(self) -> int:
        return len(self.layer_dims)

    @property
    def total_dim(self) -> int:
        return sum(self.layer_dims)

    @property
    def hom_dim(self) -> int:
        """Homogeneous dimension Q = sum_j j * n_j."""
        return sum((j + 1) * d for j, d in enumerate(self.layer_dims))

    @property
    def layer_slices(self) -> tuple[slice, ...]:
        out, start = [], 0
        for d in self.layer_dims:
            out.append(slice(start, start + d))
            start += d
        return tuple(out)

    @property
    def layer_weights(self) -> np.ndarray:
        """Per-coordinate layer index (1-based), length n."""
        return np.repeat(np.arange(1, self.step + 1), self.layer_dims)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape[-1:] != (self.total_dim,):
            raise StructureError(
                f"point has last dim {p.shape[-1:]}, expected {self.total_dim}"
            )
        return p

    def bracket(self, a, b) -> np.ndarray:
        """[a, b] by bilinear expansion through the structure constants."""
        a, b = self._check(a), self._check(b)
        return np.einsum("...i,...j,ijk->...k", a, b, self.bracket_table)

    def product(self, p, q) -> np.ndarray:
        """Group product p * q (exact BCH, step <= 3)."""
        if self.step > 3:
            raise UnsupportedStepError(
                f"closed-form BCH product supports step <= 3, algebra has step {self.step}"
            )
        p, q = self._check(p), self._check(q)
        out = p + q
        if self.step >= 2:
            pq = self.bracket(p, q)
            out = out + 0.5 * pq
            if self.step == 3:
                out = out + (self.bracket(p, pq) - self.bracket(q, pq)) / 12.0
        return out

    def inverse(self, p) -> np.ndarray:
        """Group inverse; in exponential coordinates p^{-1} = -p."""
        return -self._check(p)

    def dilate(self, lam, p) -> np.ndarray:
        """Homogeneous dilation: layer i scaled by lam**i.  Requires lam > 0."""
        lam = np.asarray(lam, dtype=float)
        if np.any(lam <= 0):
            raise DomainError(f"dilation factor must be positive, got {lam}")
        p = self._check(p)
        return p * lam[..., None] ** self.layer_weights

    def layer(self, p, i: int) -> np.ndarray:
        """Layer-i component (1-based), shape (..., n_i)."""
        return self._check(p)[..., self.layer_slices[i - 1]]

    def zero(self) -> np.ndarray:
        return np.zeros(self.total_dim)


@dataclass(frozen=True)
class ValidationReport:
    """Per-invariant diagnostics for a candidate stratified algebra."""

    antisymmetry: bool
    jacobi: bool
    grading: bool
    generation: bool
    first_violation: tuple | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.antisymmetry and self.jacobi and self.grading and self.generation

    def as_dict(self) -> dict:
        return {
            "antisymmetry": self.antisymmetry,
            "jacobi": self.jacobi,
            "grading": self.grading,
            "generation": self.generation,
            "passed": self.passed,
            "first_violation": self.first_violation,
            "detail": self.detail,
        }


def validate_algebra(alg: StratifiedAlgebra, tol: float = 1e-12) -> ValidationReport:
    """Check antisymmetry, Jacobi, grading and generation on all basis tuples.

    Returns a report with the first violating basis tuple on failure; never
    raises for invariant failures (shape mismatches raise StructureError at
    construction).
    """
    c = alg.bracket_table
    n = alg.total_dim
    weights = alg.layer_weights

    anti = True
    jac = True
    grad = True
    gen = True
    witness = None
    detail = ""

    bad = np.argwhere(np.abs(c + np.swapaxes(c, 0, 1)) > tol)
    if bad.size:
        anti = False
        witness = ("antisymmetry",) + tuple(int(v) for v in bad[0])
        detail = f"c[i,j,:] != -c[j,i,:] at (i,j)={tuple(int(v) for v in bad[0][:2])}"

    # Jacobi on basis triples: [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] = 0.
    inner = np.einsum("jkm,iml->ijkl", c, c)
    jacobi = inner + np.einsum("ijkl->jkil", inner) + np.einsum("ijkl->kijl", inner)
    bad = np.argwhere(np.abs(jacobi) > tol)
    if bad.size and anti:
        jac = False
        witness = witness or ("jacobi",) + tuple(int(v) for v in bad[0][:3])
        detail = detail or f"Jacobi residual at basis triple {tuple(int(v) for v in bad[0][:3])}"
    elif bad.size:
        jac = False

    # Grading: [V_a, V_b] lands in V_{a+b} (zero above the step).
    target = weights[:, None] + weights[None, :]
    allowed = weights[None, None, :] == target[:, :, None]
    bad = np.argwhere((np.abs(c) > tol) & ~allowed)
    if bad.size:
        grad = False
        if witness is None:
            witness = ("grading",) + tuple(int(v) for v in bad[0])
            detail = f"[e_{int(bad[0][0])}, e_{int(bad[0][1])}] leaks outside layer {int(target[bad[0][0], bad[0][1]])}"

    # Generation: span [V_1, V_i] = V_{i+1} for i = 1..step-1.
    sl = alg.layer_slices
    for i in range(1, alg.step):
        images = c[sl[0], sl[i - 1], :][:, :, sl[i]].reshape(-1, alg.layer_dims[i])
        rank = np.linalg.matrix_rank(images) if images.size else 0
        if rank < alg.layer_dims[i]:
            gen = False
            if witness is None:
                witness = ("generation", i + 1)
                detail = f"[V_1, V_{i}] has rank {rank} < dim V_{i + 1} = {alg.layer_dims[i]}"
            break

    return ValidationReport(anti, jac, grad, gen, witness, detail)


# -- presets and JSON group specifications ------------------------------------


def _table_from_relations(layer_dims, relations) -> np.ndarray:
    """Build an antisymmetric table from 1-based relations {(i, j): {k: coeff}}."""
    n = sum(layer_dims)
    c = np.zeros((n, n, n))
    for (i, j), coeffs in relations.items():
        for k, v in coeffs.items():
            c[i - 1, j - 1, k - 1] += float(v)
            c[j - 1, i - 1, k - 1] -= float(v)
    return c


def heisenberg(n: int = 1) -> StratifiedAlgebra:
    """Heisenberg group H^n: layers (2n, 1), [X_i, X_{n+i}] = X_{2n+1}."""
    if n < 1:
        raise DomainError("heisenberg index must be >= 1")
    rel = {(i, n + i): {2 * n + 1: 1.0} for i in range(1, n + 1)}
    return StratifiedAlgebra((2 * n, 1), _table_from_relations((2 * n, 1), rel),
                             name=f"heisenberg{n}")


def engel() -> StratifiedAlgebra:
    """Engel group, step 3, layers (2, 1, 1).

    Structure constants [X1,X2]=X3, [X1,X3]=X4, [X2,X3]=X4: the exponential
    coordinates in which both complementary-subgroup families
    M_{a,b}*N_{c,d} and K*H_{a,b} take their standard linear form.
    """
    rel = {(1, 2): {3: 1.0}, (1, 3): {4: 1.0}, (2, 3): {4: 1.0}}
    return StratifiedAlgebra((2, 1, 1), _table_from_relations((2, 1, 1), rel),
                             name="engel")


_HEIS_RE = re.compile(r"^heisenberg(\d+)$")

PRESET_GROUPS = ("heisenberg1", "heisenberg2", "heisenberg3", "engel")


def preset_group(name: str) -> StratifiedAlgebra:
    """Built-in groups: 'heisenberg<N>' or 'engel'."""
    m = _HEIS_RE.match(name)
    if m:
        return heisenberg(int(m.group(1)))
    if name == "engel":
        return engel()
    raise DomainError(f"unknown group preset {name!r}; built-ins: heisenberg<N>, engel")


def group_from_spec(spec: dict) -> StratifiedAlgebra:
    """Group from a JSON-style dict:

    ``{"layers": [n1, ...], "brackets": [{"i": i, "j": j, "coeffs": {"k": c}}]}``
    with 1-based basis indices; each listed bracket also sets the
    antisymmetric counterpart.  Optional "epsilons" are ignored here (they
    belong to the norm, see ``metrics.BoxNorm``).
    """
    layers = tuple(int(d) for d in spec["layers"])
    rel = {}
    for entry in spec.get("brackets", []):
        key = (int(entry["i"]), int(entry["j"]))
        rel.setdefault(key, {})
        for k, v in entry["coeffs"].items():
            rel[key][int(k)] = rel[key].get(int(k), 0.0) + float(v)
    return StratifiedAlgebra(layers, _table_from_relations(layers, rel),
                             name=str(spec.get("name", "custom")))


def group_to_spec(alg: StratifiedAlgebra) -> dict:
    c = alg.bracket_table
    brackets = []
    for i in range(alg.total_dim):
        for j in range(i + 1, alg.total_dim):
            ks = np.nonzero(c[i, j])[0]
            if ks.size:
                brackets.append({
                    "i": i + 1, "j": j + 1,
                    "coeffs": {str(k + 1): float(c[i, j, k]) for k in ks},
                })
    return {"name": alg.name, "layers": list(alg.layer_dims), "brackets": brackets}


def load_group(source: str) -> StratifiedAlgebra:
    """Load a group from a preset name or a JSON file path."""
    if _HEIS_RE.match(source) or source == "engel":
        return preset_group(source)
    with open(source) as fh:
        return group_from_spec(json.load(fh))
