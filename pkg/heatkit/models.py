import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError, ConfigurationError


class PiKind(str, Enum):
    DENSITY = "density"
    POINT_MASS = "point-mass"
    SIGNED_LOCAL = "signed-local"


class ThetaEvalMethod(str, Enum):
    SPATIAL = "spatial"
    SPECTRAL = "spectral"
    AUTO = "auto"


class DerivativeRoute(str, Enum):
    COMTET = "comtet"
    FAA_DI_BRUNO = "faa-di-bruno"
    AUTO = "auto"


class KernelMethod(str, Enum):
    SERIES = "series"
    THETA = "theta"
    ORACLE = "oracle"
    AUTO = "auto"


class CrossFamily(str, Enum):
    SPHERE = "sphere"
    REAL_PROJECTIVE = "real-projective"
    COMPLEX_PROJECTIVE = "complex-projective"
    QUATERNIONIC_PROJECTIVE = "quaternionic-projective"
    CAYLEY_PLANE = "cayley-plane"


class Side(str, Enum):
    LOWER = "lower"
    UPPER = "upper"


class Step(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"


class Variant(str, Enum):
    """Choice of the upper odd-sphere constant used at the bottom of the pipeline."""
    AUTO = "auto"
    ROW1 = "row1"  # horizon 1/(2λ+2)
    ROW2 = "row2"  # horizon 1/(2λ+2)^2
    SPECIAL = "special"  # λ = ±1/2 only, horizon π²/2
    GENERAL = "general"  # sphere lower bound valid for every t


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise DomainError(f"Jacobi parameters must satisfy alpha, beta > -1 (got {self.alpha}, {self.beta})")

    @property
    def lam(self):
        """Λ = α + β + 1/2."""
        return self.alpha + self.beta + 0.5

    @property
    def is_ultraspherical(self):
        return self.alpha == self.beta

    def swapped(self):
        return JacobiParams(self.beta, self.alpha)


@dataclass(frozen=True)
class PiMeasure:
    alpha: float
    kind: PiKind

    @classmethod
    def for_alpha(cls, alpha):
        if alpha <= -1:
            raise DomainError(f"Pi measure needs alpha > -1 (got {alpha})")
        if alpha == -0.5:
            return cls(alpha, PiKind.POINT_MASS)
        if alpha > -0.5:
            return cls(alpha, PiKind.DENSITY)
        return cls(alpha, PiKind.SIGNED_LOCAL)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for integrating against dΠ_alpha (or its restriction to [0,1])."""
    nodes: tuple
    weights: tuple
    alpha: float
    half: bool = False  # rule for the part of dΠ_alpha on [0,1]

    @property
    def exponents(self):
        return (self.alpha - 0.5, self.alpha - 0.5)

    @property
    def total_mass(self):
        return math.fsum(self.weights)

    def integrate(self, f):
        return math.fsum(w * f(u) for u, w in zip(self.nodes, self.weights))


@dataclass
class EvalPolicy:
    """Truncation and method-selection knobs for kernel evaluation"""
    tol: float = 1e-12  # series tail tolerance
    max_terms: int = 20000  # hard cap on series length
    t_floor: float = 0.02  # generic series refuses t below this
    theta_method: ThetaEvalMethod = ThetaEvalMethod.AUTO
    route: DerivativeRoute = DerivativeRoute.AUTO
    quad_nodes: int = 64  # base Gauss-Jacobi size for the reduction oracle

    def __post_init__(self):
        if not self.tol > 0:
            raise ConfigurationError("tol must be > 0")
        if self.max_terms < 10:
            raise ConfigurationError("max_terms must be >= 10")
        if not self.t_floor > 0:
            raise ConfigurationError("t_floor must be > 0")
        self.theta_method = ThetaEvalMethod(self.theta_method)
        self.route = DerivativeRoute(self.route)


@dataclass(frozen=True)
class CrossSpace:
    family: CrossFamily
    dim: int
    diameter: float = math.pi

    def __post_init__(self):
        object.__setattr__(self, "family", CrossFamily(self.family))
        d = self.dim
        if self.diameter <= 0:
            raise DomainError("diameter must be > 0")
        fam = self.family
        if fam == CrossFamily.SPHERE and d < 1:
            raise DomainError("sphere needs d >= 1")
        if fam == CrossFamily.REAL_PROJECTIVE and d < 1:
            raise DomainError("real projective space needs d >= 1")
        if fam == CrossFamily.COMPLEX_PROJECTIVE and (d < 2 or d % 2):
            raise DomainError("complex projective space needs even d >= 2")
        if fam == CrossFamily.QUATERNIONIC_PROJECTIVE and (d < 4 or d % 4):
            raise DomainError("quaternionic projective space needs d in 4N")
        if fam == CrossFamily.CAYLEY_PLANE and d != 16:
            raise DomainError("the Cayley plane has d = 16")

    @property
    def kappa(self):
        return math.pi / self.diameter

    @property
    def antipodal_dim(self):
        return {
            CrossFamily.SPHERE: 0,
            CrossFamily.REAL_PROJECTIVE: self.dim - 1,
            CrossFamily.COMPLEX_PROJECTIVE: self.dim - 2,
            CrossFamily.QUATERNIONIC_PROJECTIVE: self.dim - 4,
            CrossFamily.CAYLEY_PLANE: 8,
        }[self.family]

    @property
    def params(self):
        d = self.dim
        return JacobiParams(d / 2 - 1, (d - self.antipodal_dim) / 2 - 1)

    @property
    def volume(self):
        d, k = self.dim, self.kappa
        fam = self.family
        if fam == CrossFamily.SPHERE:
            return 2 * math.pi ** ((d + 1) / 2) / (k ** d * math.gamma((d + 1) / 2))
        if fam == CrossFamily.REAL_PROJECTIVE:
            return math.sqrt(math.pi) * (4 * math.pi) ** (d / 2) / (k ** d * math.gamma(d / 2 + 0.5))
        if fam == CrossFamily.COMPLEX_PROJECTIVE:
            return (4 * math.pi) ** (d / 2) / (k ** d * math.gamma(d / 2 + 1))
        if fam == CrossFamily.QUATERNIONIC_PROJECTIVE:
            return (4 * math.pi) ** (d / 2) / (k ** d * math.gamma(d / 2 + 2))
        return 6 * (4 * math.pi) ** 8 / (k ** 16 * math.gamma(12))


@dataclass(frozen=True)
class Envelope:
    """One side of a sandwich bound: constant * Ξ_kappa, valid up to time_horizon"""
    kappa: float
    constant: float
    side: Side
    time_horizon: float
    params: JacobiParams

    def __post_init__(self):
        if not (self.kappa > 0 and self.constant > 0 and self.time_horizon > 0):
            raise DomainError("envelope kappa, constant and horizon must be positive")


@dataclass
class LedgerEntry:
    name: str
    value: float
    table: str  # "num", "par", "fun" or "derived"
    source: str  # lemma / case that produced the value


@dataclass
class ConstantLedger:
    """Named constants for one (alpha, beta, T), in insertion order"""
    params: JacobiParams = None
    T: float = None
    variant: Variant = Variant.AUTO
    entries: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    theorem_case: str = None  # "i" .. "iv", or None outside the closed-form cases
    lower: float = None  # final c_{α,β,T}
    upper: float = None  # final C_{α,β,T}
    rows: list = field(default_factory=list)  # printed closed-form rows with a holds flag
    alternatives: list = field(default_factory=list)  # ledgers of the neighbouring dispatch branch

    def record(self, name, value, table="derived", source=""):
        self.entries[name] = LedgerEntry(name, float(value), table, source)
        return value

    def value(self, name):
        return self.entries[name].value

    def __contains__(self, name):
        return name in self.entries

    def to_dict(self):
        tables = {"num": {}, "par": {}, "fun": {}, "derived": {}}
        for e in self.entries.values():
            tables.setdefault(e.table, {})[e.name] = {"value": e.value, "source": e.source}
        return {
            "alpha": self.params.alpha if self.params else None,
            "beta": self.params.beta if self.params else None,
            "T": self.T,
            "variant": Variant(self.variant).value,
            "theorem_case": self.theorem_case,
            "lower": self.lower,
            "upper": self.upper,
            "tables": tables,
            "rows": list(self.rows),
            "warnings": list(self.warnings),
            "alternatives": [alt.to_dict() for alt in self.alternatives],
        }

    @classmethod
    def from_dict(cls, data):
        """Rebuild a ledger written by to_dict (e.g. a --ledger file)."""
        try:
            params = None
            if data.get("alpha") is not None:
                params = JacobiParams(float(data["alpha"]), float(data["beta"]))
            ledger = cls(params=params, T=data.get("T"), variant=Variant(data.get("variant", "auto")))
            for table, entries in data.get("tables", {}).items():
                for name, entry in entries.items():
                    ledger.record(name, entry["value"], table, entry.get("source", ""))
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigurationError(f"malformed ledger: {e}") from e
        ledger.theorem_case = data.get("theorem_case")
        ledger.lower = data.get("lower")
        ledger.upper = data.get("upper")
        ledger.rows = list(data.get("rows", []))
        ledger.warnings = list(data.get("warnings", []))
        ledger.alternatives = [cls.from_dict(alt) for alt in data.get("alternatives", [])]
        return ledger


@dataclass
class GridSpec:
    """Angles x times grid on which a sandwich is certified"""
    params: JacobiParams
    T: float
    t_values: list
    theta_nodes: int = 33
    varphi_nodes: int = 33
    near_diagonal: bool = True  # add (θ, θ+1e-3) pairs

    def __post_init__(self):
        if self.theta_nodes < 1 or self.varphi_nodes < 1:
            raise ConfigurationError("grid angle counts must be >= 1")
        if not self.t_values:
            raise ConfigurationError("grid needs at least one time value")
        for t in self.t_values:
            if t <= 0 or t > self.T * (1 + 1e-12):
                raise ConfigurationError(f"grid time {t} must lie in (0, T={self.T}]")


@dataclass
class VerificationReport:
    """Outcome of one certification run"""
    kind: str
    grid: dict
    constants: dict
    min_ratio_lower: float = math.inf
    max_ratio_upper: float = 0.0
    points: int = 0
    skipped: int = 0  # points below binary64 resolution, left out of the ratios
    violations: list = field(default_factory=list)  # {"index", "point", "side", "margin"}
    errors: list = field(default_factory=list)  # per-point evaluation failures
    passed: bool = False
    slack: float = 1e-6
    runtime: float = 0.0
    notes: list = field(default_factory=list)
    history: list = field(default_factory=list)


@dataclass
class SuiteReport:
    name: str
    passed: int = 0
    failed: int = 0
    experimental: int = 0
    worst_margin: float = math.inf
    failures: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    @property
    def ok(self):
        return self.failed == 0


@dataclass
class RunConfig:
    """Resolved CLI run configuration (file values overridden by flags)"""
    command: str
    options: dict = field(default_factory=dict)
    output_format: str = "json"
    threads: int = None  # batch cap from HEATKIT_THREADS


@dataclass
class ManifoldBound:
    """Explicit bounds for a sphere or CROSS kernel, as constants in front of
    Ψ_β(κ²t, π-κr, π) (4πt)^{-d/2} e^{-r²/4t}"""
    space: CrossSpace
    T: float  # Jacobi-time horizon handed to the refinement, None for lower-only bounds
    variant: Variant
    lower_constant: float  # None when only the Gaussian lower bound is known
    upper_constant: float  # None for the all-time lower bound
    horizon: float  # largest t (manifold time) the upper bound admits
    gaussian_lower: bool = False  # lower side is (4πt)^{-d/2}e^{-r²/4t}
    ledger: ConstantLedger = None

    @property
    def ratio(self):
        if self.lower_constant is None or self.upper_constant is None:
            return None
        return self.upper_constant / self.lower_constant


@dataclass
class LargeTimeBound:
    params: JacobiParams
    t: float
    bound: float  # sup |h_0 G_t - 1|
    absolute: float  # sup |G_t - 1/h_0|
    threshold: float  # time after which h_0 G_t lies in [1/2, 3/2]
    sandwich: bool  # t >= threshold ∨ 2 log 2
    lower: float  # 1/(2 h_0)
    upper: float  # 3/(2 h_0)
