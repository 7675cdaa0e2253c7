# models.py - Data models and enumerations for the hypercube polytope census

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Dict, List, Optional, Any, Tuple
from enum import Enum
from datetime import datetime
from fractions import Fraction
from math import factorial, gcd, prod
from pathlib import Path

DEFAULT_DATA_DIR = Path(__file__).parent / "data"
OUTPUT_FORMATS = ("text", "csv", "json")


# --- Configuration Model ---

class AppSettings(BaseModel):
    """Run configuration built from command-line flags."""
    n: Optional[int] = None
    n_max: int = 6
    expensive: bool = False
    output_format: str = "text"
    seed: int = 20240101
    samples: int = 10000
    subset_budget: int = 2_000_000
    log_level: str = "WARNING"
    data_dir: Path = DEFAULT_DATA_DIR

    @field_validator("output_format")
    @classmethod
    def _known_format(cls, value: str) -> str:
        value = value.lower()
        if value not in OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got '{value}'")
        return value

    @field_validator("samples", "subset_budget")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be a positive integer")
        return value

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        return value.upper()

    @model_validator(mode="after")
    def _dimension_cap(self) -> "AppSettings":
        # n above 6 only with the expensive flag
        for label, value in (("n", self.n), ("n_max", self.n_max)):
            if value is None:
                continue
            if value < 1:
                raise ValueError(f"{label} must be at least 1, got {value}")
            if value > 6 and not self.expensive:
                raise ValueError(f"{label}={value} exceeds 6; pass --expensive to allow it")
        return self


# --- Error Model ---

class ComputationError(ValueError):
    """Raised when an exact computation cannot honour its contract."""

    def __init__(self, code: str, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(f"{code}: {message}")
        self.code = code # e.g. "NOT_STABILIZING", "REGIME", "BUDGET_EXCEEDED"
        self.message = message
        self.context = context or {}
        self.timestamp = datetime.now().isoformat()


# --- Group Elements and Vertex Sets ---

class SignedPermutation(BaseModel):
    """Element of the hyperoctahedral group: coordinate permutation plus negated coordinates.

    ``pi[i-1]`` is the image of ``i``; coordinate ``i`` of the image vertex reads
    coordinate ``pi(i)`` of the source, complemented when ``i`` is in ``negated``.
    """
    model_config = ConfigDict(frozen=True)

    pi: Tuple[int, ...]
    negated: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_bijection(self) -> "SignedPermutation":
        n = len(self.pi)
        if sorted(self.pi) != list(range(1, n + 1)):
            raise ValueError(f"pi must be a permutation of 1..{n}, got {self.pi}")
        if list(self.negated) != sorted(set(self.negated)):
            raise ValueError("negated must be strictly increasing")
        if any(i < 1 or i > n for i in self.negated):
            raise ValueError(f"negated must be a subset of 1..{n}")
        return self

    @property
    def n(self) -> int:
        return len(self.pi)

    @property
    def sign_mask(self) -> int:
        return sum(1 << (i - 1) for i in self.negated)

    def __str__(self) -> str:
        seen, cycles = set(), []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cycle, i = [], start
            while i not in seen:
                seen.add(i)
                cycle.append(f"-{i}" if i in self.negated else str(i))
                i = self.pi[i - 1]
            cycles.append("(" + ",".join(cycle) + ")")
        return "".join(cycles) or "()"


class VertexSet(BaseModel):
    """Subset of the 2^n cube vertices as a bitset; vertex v has coordinate i at bit i-1."""
    model_config = ConfigDict(frozen=True)

    n: int
    mask: int = 0

    @model_validator(mode="after")
    def _fits(self) -> "VertexSet":
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.mask < 0 or self.mask >> (1 << self.n):
            raise ValueError(f"mask does not fit {1 << self.n} vertices")
        return self

    @classmethod
    def from_members(cls, n: int, members) -> "VertexSet":
        mask = 0
        for v in members:
            mask |= 1 << v
        return cls(n=n, mask=mask)

    def members(self) -> List[int]:
        out, mask, v = [], self.mask, 0
        while mask:
            if mask & 1:
                out.append(v)
            mask >>= 1
            v += 1
        return out

    @property
    def size(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, v: int) -> bool:
        return bool(self.mask >> v & 1)


class CycleType(BaseModel):
    """Multiset of cycle lengths {1^c1, 2^c2, ...} kept as sorted (length, multiplicity) pairs."""
    model_config = ConfigDict(frozen=True)

    counts: Tuple[Tuple[int, int], ...] = ()

    @field_validator("counts")
    @classmethod
    def _positive_pairs(cls, value):
        lengths = [length for length, _ in value]
        if lengths != sorted(set(lengths)):
            raise ValueError("cycle lengths must be strictly increasing")
        if any(length < 1 or mult < 1 for length, mult in value):
            raise ValueError("cycle lengths and multiplicities must be positive")
        return value

    @classmethod
    def from_mapping(cls, mapping: Dict[int, int]) -> "CycleType":
        return cls(counts=tuple(sorted((l, m) for l, m in mapping.items() if m)))

    @classmethod
    def from_lengths(cls, lengths) -> "CycleType":
        mapping: Dict[int, int] = {}
        for length in lengths:
            mapping[length] = mapping.get(length, 0) + 1
        return cls.from_mapping(mapping)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.counts)

    @property
    def mass(self) -> int:
        return sum(length * mult for length, mult in self.counts)

    def __str__(self) -> str:
        parts = [str(l) if m == 1 else f"{l}^{m}" for l, m in self.counts]
        return "{" + ",".join(parts) + "}"


# --- Polynomials ---

# z_1^{c_1} z_2^{c_2} ... as sorted (variable, exponent) pairs, zero exponents omitted
Monomial = Tuple[Tuple[int, int], ...]


class CycleIndex(BaseModel):
    """Sparse polynomial in z_1, z_2, ... with exact rational coefficients."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    terms: Dict[Monomial, Fraction] = Field(default_factory=dict)
    group_order: Optional[int] = None # set when the index is a full group average

    @model_validator(mode="after")
    def _homogeneous(self) -> "CycleIndex":
        masses = {sum(var * exp for var, exp in mono) for mono in self.terms}
        if len(masses) > 1:
            raise ValueError(f"cycle index is not homogeneous: masses {sorted(masses)}")
        return self

    @property
    def mass(self) -> int:
        for mono in self.terms:
            return sum(var * exp for var, exp in mono)
        return 0

    def variables(self) -> List[int]:
        return sorted({var for mono in self.terms for var, _ in mono})


class Bivariate(BaseModel):
    """Polynomial in u_1, u_2 stored as (p, q) -> coefficient, p + q fixed."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    coefficients: Dict[Tuple[int, int], Fraction] = Field(default_factory=dict)
    mass: int = 0


# --- Hyperplanes ---

class GeneralHyperplane(BaseModel):
    """a_1 x_1 + ... + a_n x_n = b with arbitrary integer coefficients."""
    model_config = ConfigDict(frozen=True)

    coeffs: Tuple[int, ...]
    rhs: int

    @field_validator("coeffs")
    @classmethod
    def _not_all_zero(cls, value):
        if not any(value):
            raise ValueError("at least one coefficient must be nonzero")
        return value

    @property
    def n(self) -> int:
        return len(self.coeffs)


class SpannedHyperplane(BaseModel):
    """Canonical representative a_1 x_1 + ... + a_t x_t = b, 0 < a_1 <= ... <= a_t, inside Q_n."""
    model_config = ConfigDict(frozen=True)

    coeffs: Tuple[int, ...]
    rhs: int
    n: int

    @model_validator(mode="after")
    def _canonical_shape(self) -> "SpannedHyperplane":
        if not self.coeffs:
            raise ValueError("a spanned hyperplane needs at least one coefficient")
        if self.coeffs[0] <= 0 or list(self.coeffs) != sorted(self.coeffs):
            raise ValueError(f"coefficients must be positive and nondecreasing, got {self.coeffs}")
        if len(self.coeffs) > self.n:
            raise ValueError(f"support {len(self.coeffs)} exceeds dimension {self.n}")
        if self.rhs < 0:
            raise ValueError("rhs must be non-negative")
        if gcd(*self.coeffs, self.rhs) != 1:
            raise ValueError("coefficients and rhs must be coprime")
        return self

    @property
    def t(self) -> int:
        return len(self.coeffs)

    @property
    def total(self) -> int:
        return sum(self.coeffs)

    @property
    def delta(self) -> int:
        return 1 if self.total == 2 * self.rhs else 0

    def key(self) -> str:
        """Compact 'coeffs|rhs' key used by fixtures and per-hyperplane columns."""
        return ",".join(map(str, self.coeffs)) + f"|{self.rhs}"

    def __str__(self) -> str:
        lhs = "+".join(f"x{i}" if a == 1 else f"{a}x{i}" for i, a in enumerate(self.coeffs, start=1))
        return f"{lhs}={self.rhs}"


class HyperplaneType(BaseModel):
    """alpha_i = number of coefficients equal to i."""
    model_config = ConfigDict(frozen=True)

    alpha: Tuple[int, ...]

    @field_validator("alpha")
    @classmethod
    def _trailing_positive(cls, value):
        if not value or value[-1] <= 0 or any(a < 0 for a in value):
            raise ValueError(f"alpha must be nonnegative with a positive last entry, got {value}")
        return value

    def __str__(self) -> str:
        return ",".join(map(str, self.alpha))


class StabilizerDescription(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: HyperplaneType
    delta: int
    n: int
    t: int

    @property
    def order(self) -> int:
        return prod(factorial(a) for a in self.alpha.alpha) * factorial(self.n - self.t) * 2 ** (self.n - self.t + self.delta)


class BlockPartitionElement(BaseModel):
    """Conjugacy data of a block-preserving symmetry: one partition per coefficient block plus a sign branch."""
    model_config = ConfigDict(frozen=True)

    blocks: Tuple[Tuple[int, ...], ...] # blocks[i-1] is a partition of alpha_i, parts descending
    negative: bool = False

    @property
    def parts(self) -> Tuple[int, ...]:
        return tuple(p for block in self.blocks for p in block)

    def block_counts(self) -> List[Dict[int, int]]:
        out = []
        for block in self.blocks:
            counts: Dict[int, int] = {}
            for part in block:
                counts[part] = counts.get(part, 0) + 1
            out.append(counts)
        return out


class AtlasRecord(BaseModel):
    """One line of a hyperplane atlas file."""
    label: str
    hyperplane: SpannedHyperplane
    alpha: HyperplaneType
    delta: int
    vertices: int
    stabilizer: int


# --- Census Models ---

class CensusRegime(str, Enum):
    """Which counting rule produced a census row."""
    HIGH = "high"
    MID = "mid"
    LOW = "low"
    DEFINITION = "definition" # F = 0 because k <= n
    EXTERNAL = "external"
    UNKNOWN = "unknown"


class IntersectionClass(BaseModel):
    """Codimension-2 flat H ∩ w(H') met by at least k cube vertices."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    vertex_set: VertexSet # canonical under the declared group
    source: VertexSet # V(H) ∩ w(V(H')), inside the base hyperplane
    base: SpannedHyperplane
    other: SpannedHyperplane
    image_element: SignedPermutation # the w above
    witness: SignedPermutation # carries source onto vertex_set, drawn from the declared group
    group: str # "stabilizer" (F(H)-classes) or "full" (B_n-classes)
    stabilizer: List[SignedPermutation] = Field(default_factory=list, repr=False, exclude=True)

    @property
    def vertex_count(self) -> int:
        return self.vertex_set.size


class CensusRow(BaseModel):
    n: int
    k: int
    A: int
    H: Optional[int] = None
    F: Optional[int] = None
    regime: CensusRegime
    provenance: str = ""
    per_hyperplane: Dict[str, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _consistent(self) -> "CensusRow":
        if self.H is not None and self.F is not None:
            if self.F != self.A - self.H:
                raise ValueError(f"k={self.k}: F={self.F} differs from A-H={self.A - self.H}")
            if self.F < 0 or self.H < 0:
                raise ValueError(f"k={self.k}: negative count")
        return self


class CensusTable(BaseModel):
    n: int
    rows: List[CensusRow] = Field(default_factory=list)

    def row(self, k: int) -> Optional[CensusRow]:
        return next((r for r in self.rows if r.k == k), None)

    def f_values(self) -> Dict[int, int]:
        return {r.k: r.F for r in self.rows if r.F is not None}


# --- Oracle Models ---

class ClassificationRecord(BaseModel):
    """One orbit of vertex subsets with its affine dimension."""
    vertex_set: VertexSet
    k: int
    dimension: int
    full_dimensional: bool

    @model_validator(mode="after")
    def _dimension_bounds(self) -> "ClassificationRecord":
        if self.k > 0 and self.dimension > min(self.k - 1, self.vertex_set.n):
            raise ValueError("dimension exceeds min(k-1, n)")
        if self.full_dimensional != (self.dimension == self.vertex_set.n):
            raise ValueError("full_dimensional flag disagrees with dimension")
        return self


class IntersectionBoundReport(BaseModel):
    n: int
    s: int
    samples: int
    seed: int
    bound: int
    max_vertices_seen: int = 0
    resampled: int = 0 # dependent normal sets drawn and discarded
    sharpness_count: int = 0
    violations: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and self.sharpness_count == self.bound


# --- Verification Models ---

class CheckStatus(str, Enum):
    PASSED = "passed"
    FAILED = "failed"
    NOTED = "noted" # known, documented difference from a published listing
    ERROR = "error"


class CheckResult(BaseModel):
    name: str
    suite: str
    status: CheckStatus
    expected: Optional[str] = None
    computed: Optional[str] = None
    detail: Optional[str] = None
    duration_seconds: float = 0.0
    checked_at: str = Field(default_factory=lambda: datetime.now().isoformat())


class VerificationReport(BaseModel):
    summary: Dict[str, Any]
    checks: List[CheckResult]

    @property
    def failed(self) -> bool:
        return any(c.status in (CheckStatus.FAILED, CheckStatus.ERROR) for c in self.checks)
