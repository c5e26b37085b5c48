from enum import Enum
from typing import Any, Optional
from dataclasses import dataclass, field

import numpy as np
import pandas as pd


class ModelKind(Enum):
    """Enumeration of expectation regimes."""

    BEHAVIORAL = "behavioral"
    RATIONAL = "rational"


class NoiseMode(Enum):
    """Enumeration of background-innovation modes."""

    NONE = "none"
    WHITE = "white"
    AR1 = "ar1"


class FilterKind(Enum):
    """Enumeration of trend-cycle filters."""

    HP = "hp"
    KALMAN = "kalman"


class MahalanobisStrategy(Enum):
    """Enumeration of covariance constructions for the calibration distance."""

    PAPER_TWO_OBS = "paper_two_obs"
    PAIRED_SERIES = "paired_series"


class KalmanLayout(Enum):
    """Enumeration of measurement/transition layouts for the trend model."""

    PRINTED = "printed"
    STANDARD = "standard"


class SeriesKind(Enum):
    """Enumeration of quarterly series kinds."""

    LEVEL = "level"
    LOG_LEVEL = "log_level"
    RATE = "rate"
    GAP = "gap"


class VisualizationType(Enum):
    """Enumeration of supported visualization types."""

    LINE = "line"
    HISTOGRAM = "histogram"


@dataclass(frozen=True)
class StructuralParams:
    """Deep and policy parameters of the three-equation model.

    Defaults reproduce the calibration for the Indian economy.

    Attributes:
        sigma: CRRA coefficient of household consumption.
        beta: Quarterly discount factor.
        theta: Calvo probability that a firm cannot reset its price.
        chi: Inverse Frisch elasticity of labor supply.
        varsigma: Labor share in the production function.
        e_price: Price elasticity of demand.
        c1: Taylor-rule response to inflation.
        c2: Taylor-rule response to the output gap.
        c3: Interest-rate smoothing.
        gamma: Intensity of choice in rule switching.
        rho_mem: Memory parameter of the forecast-error utilities.
        pi_target: Inflation target in deviation form.
    """

    sigma: float = 1.5
    beta: float = 0.98
    theta: float = 0.75
    chi: float = 2.7
    varsigma: float = 0.7
    e_price: float = 7.01
    c1: float = 1.2
    c2: float = 0.5
    c3: float = 0.8
    gamma: float = 2.0
    rho_mem: float = 0.5
    pi_target: float = 0.0

    def to_dict(self) -> dict[str, float]:
        """Convert to dictionary."""
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


@dataclass(frozen=True)
class PeriodState:
    """Output gap, inflation and nominal rate at a single quarter.

    Attributes:
        y: Output gap (log-deviation units).
        pi: Inflation (percent per quarter, deviation from target).
        i: Nominal interest rate (deviation form).
    """

    y: float
    pi: float
    i: float


@dataclass(frozen=True)
class ForecasterState:
    """State of the two-rule forecasting population for one variable.

    Attributes:
        u_fund: Deterministic utility of the fundamentalist rule.
        u_ext: Deterministic utility of the extrapolator rule.
        alpha_fund: Fraction of agents using the fundamentalist rule.
        forecast_history: (fundamentalist, extrapolator) forecasts made two
            periods ago and one period ago, oldest first.
    """

    u_fund: float = 0.0
    u_ext: float = 0.0
    alpha_fund: float = 0.5
    forecast_history: tuple[tuple[float, float], tuple[float, float]] = (
        (0.0, 0.0),
        (0.0, 0.0),
    )

    @property
    def alpha_ext(self) -> float:
        """Fraction of agents using the extrapolator rule."""
        return 1.0 - self.alpha_fund


@dataclass(frozen=True, eq=False)
class ReDecisionRule:
    """Rational-expectations decision rule x_t = C x_{t-1} + D_eps eps_t + D_eta eta_t.

    Attributes:
        C: 3x3 state-transition matrix over (y, pi, i).
        D_eps: Loading of the demand shock.
        D_eta: Loading of the supply shock.
        iterations: Fixed-point iterations used to obtain C.
    """

    C: np.ndarray
    D_eps: np.ndarray
    D_eta: np.ndarray
    iterations: int = 0

    @property
    def spectral_radius(self) -> float:
        """Largest absolute eigenvalue of C."""
        return float(np.max(np.abs(np.linalg.eigvals(self.C))))


@dataclass(frozen=True)
class ShockScenario:
    """COVID demand shock and vaccination supply shock paths.

    Attributes:
        eps1: Initial demand shock (log units, negative for COVID).
        rho_eps: Demand-shock persistence.
        demand_quarters: Number of quarters the demand shock is active.
        eta1: Initial supply shock.
        rho_eta: Supply-shock persistence.
        supply_offset: Quarters after t0 at which the supply shock starts.
        supply_quarters: Number of quarters the supply shock is active.
        t0: 0-based period index at which the scenario starts.
    """

    eps1: float = -0.27
    rho_eps: float = 0.8
    demand_quarters: int = 10
    eta1: float = 0.64
    rho_eta: float = 0.9
    supply_offset: int = 4
    supply_quarters: int = 6
    t0: int = 1000

    @property
    def demand_window(self) -> tuple[int, int]:
        """Inclusive (first, last) period of the demand shock."""
        return self.t0, self.t0 + self.demand_quarters - 1

    @property
    def supply_window(self) -> tuple[int, int]:
        """Inclusive (first, last) period of the supply shock."""
        start = self.t0 + self.supply_offset
        return start, start + self.supply_quarters - 1


@dataclass(frozen=True)
class SimConfig:
    """Simulation length, evaluation window and background noise.

    Attributes:
        T: Total number of periods.
        window_len: Length of the evaluation window.
        seed: Base RNG seed.
        run_index: Run index combined with the base seed.
        noise_mode: Background-innovation mode.
        noise_sd_demand: Standard deviation of demand innovations.
        noise_sd_supply: Standard deviation of supply innovations.
        noise_rho: AR(1) coefficient for the ar1 noise mode.
    """

    T: int = 2000
    window_len: int = 16
    seed: int = 0
    run_index: int = 0
    noise_mode: NoiseMode = NoiseMode.WHITE
    noise_sd_demand: float = 0.5
    noise_sd_supply: float = 0.5
    noise_rho: float = 0.95


@dataclass(frozen=True, eq=False)
class SimPath:
    """Simulated series of one run.

    Attributes:
        y: Output gap path.
        pi: Inflation path.
        i: Nominal rate path.
        alpha_y: Fundamentalist fraction for the output gap (behavioral only).
        alpha_pi: Fundamentalist fraction for inflation (behavioral only).
        eps_path: Realized demand shock, scenario plus noise.
        eta_path: Realized supply shock, scenario plus noise.
        model_kind: Expectation regime that produced the path.
    """

    y: np.ndarray
    pi: np.ndarray
    i: np.ndarray
    alpha_y: Optional[np.ndarray]
    alpha_pi: Optional[np.ndarray]
    eps_path: np.ndarray
    eta_path: np.ndarray
    model_kind: ModelKind

    @property
    def T(self) -> int:
        """Number of simulated periods."""
        return len(self.y)

    def to_frame(self) -> pd.DataFrame:
        """Tabulate the path with one row per period."""
        nan = np.full(self.T, np.nan)
        return pd.DataFrame({
            "t": np.arange(self.T),
            "y": self.y,
            "pi": self.pi,
            "i": self.i,
            "alpha_y": self.alpha_y if self.alpha_y is not None else nan,
            "alpha_pi": self.alpha_pi if self.alpha_pi is not None else nan,
            "eps": self.eps_path,
            "eta": self.eta_path,
        })


@dataclass(frozen=True, eq=False)
class QuarterlySeries:
    """A dated, gap-free quarterly series.

    Attributes:
        series_id: Source identifier (FRED id or derived name).
        data: Values indexed by a quarterly PeriodIndex.
        kind: Level, log level, rate or gap.
        source: Provenance tag ("fred", "hp", "kalman", ...).
        base_quarter: Rebasing anchor, when the series has been rebased.
    """

    series_id: str
    data: pd.Series
    kind: SeriesKind = SeriesKind.LEVEL
    source: str = "fred"
    base_quarter: Optional[pd.Period] = None

    @property
    def dates(self) -> pd.PeriodIndex:
        """Quarter labels."""
        return self.data.index

    @property
    def values(self) -> np.ndarray:
        """Values as a float array."""
        return self.data.to_numpy(dtype=float)

    def __len__(self) -> int:
        return len(self.data)


@dataclass(frozen=True, eq=False)
class KalmanSpec:
    """Two-state linear Gaussian trend model (level s1, growth s2 by default).

    Attributes:
        F: 1x2 measurement row.
        G: 2x2 state transition.
        V: Measurement variance.
        W: 2x2 process covariance.
        C0: 2x2 initial state covariance.
        s0: Initial state; None means [first observation, 0].
    """

    F: np.ndarray = field(default_factory=lambda: np.array([[1.0, 0.0]]))
    G: np.ndarray = field(default_factory=lambda: np.array([[1.0, 1.0], [0.0, 1.0]]))
    V: float = 0.06 ** 2
    W: np.ndarray = field(default_factory=lambda: np.diag([0.06 ** 2, 0.06 ** 2]))
    C0: np.ndarray = field(default_factory=lambda: np.diag([0.06 ** 2, 0.06 ** 2]))
    s0: Optional[np.ndarray] = None

    @classmethod
    def for_layout(cls, layout: KalmanLayout, **overrides: Any) -> "KalmanSpec":
        """Build a spec with the measurement/transition pair of a layout."""
        if layout is KalmanLayout.PRINTED:
            # printed matrices applied as column-vector algebra
            overrides.setdefault("F", np.array([[1.0, 1.0]]))
            overrides.setdefault("G", np.array([[1.0, 0.0], [1.0, 1.0]]))
        return cls(**overrides)


@dataclass(frozen=True, eq=False)
class KalmanResult:
    """Output of a Kalman filter pass.

    Attributes:
        filtered_states: n x 2 filtered states s_{t|t}.
        filtered_cov: n x 2 x 2 filtered covariances P_{t|t}.
        predicted_cov: n x 2 x 2 predicted covariances P_{t|t-1}.
        prediction_errors: One-step-ahead prediction errors z_t - F s_{t|t-1}.
    """

    filtered_states: np.ndarray
    filtered_cov: np.ndarray
    predicted_cov: np.ndarray
    prediction_errors: np.ndarray


@dataclass(frozen=True)
class MomentSet:
    """First four sample moments.

    Attributes:
        mean: Sample mean.
        variance: Unbiased sample variance.
        skewness: Moment-based skewness.
        kurtosis: Raw (not excess) kurtosis.
        n: Sample size.
    """

    mean: float
    variance: float
    skewness: float
    kurtosis: float
    n: int

    def to_record(self) -> dict[str, Any]:
        """JSON-style report record."""
        return {
            "test": "moments",
            "n": self.n,
            "mean": self.mean,
            "variance": self.variance,
            "skewness": self.skewness,
            "kurtosis": self.kurtosis,
        }


@dataclass(frozen=True)
class JarqueBeraResult:
    """Jarque-Bera normality test outcome."""

    jb: float
    p_value: float
    n: int
    skewness: float
    kurtosis: float

    def to_record(self) -> dict[str, Any]:
        """JSON-style report record."""
        return {
            "test": "jarque_bera",
            "n": self.n,
            "jb": self.jb,
            "p_value": self.p_value,
            "skewness": self.skewness,
            "kurtosis": self.kurtosis,
        }


@dataclass(frozen=True)
class BreakTestResult:
    """Single-mean vs. split-mean ANOVA comparison at a break quarter.

    Attributes:
        rss1: Residual sum of squares of the single-mean model.
        rss2: Residual sum of squares of the split-mean model.
        df1: Residual degrees of freedom of the single-mean model.
        df2: Residual degrees of freedom of the split-mean model.
        ss: Sum of squares explained by the break (rss1 - rss2).
        f_stat: F statistic with (1, df2) degrees of freedom.
        p_value: Survival probability of f_stat.
        exact_fit: True when the split-mean model fits exactly.
        break_date: Last quarter of the pre-break subsample.
        n_pre: Pre-break observations.
        n_post: Post-break observations.
    """

    rss1: float
    rss2: float
    df1: int
    df2: int
    ss: float
    f_stat: float
    p_value: float
    exact_fit: bool
    break_date: str
    n_pre: int
    n_post: int

    def to_record(self) -> dict[str, Any]:
        """JSON-style report record."""
        return {
            "test": "lr_break",
            "break_date": self.break_date,
            "n_pre": self.n_pre,
            "n_post": self.n_post,
            "rss1": self.rss1,
            "rss2": self.rss2,
            "df1": self.df1,
            "df2": self.df2,
            "ss": self.ss,
            "f_stat": self.f_stat,
            "p_value": self.p_value,
            "exact_fit": self.exact_fit,
        }


@dataclass(frozen=True)
class MahalanobisSpec:
    """Covariance construction and pseudo-inverse cutoff for the distance.

    Attributes:
        strategy: How the covariance matrix is built.
        pinv_tolerance: Relative singular-value cutoff of the pseudo-inverse.
    """

    strategy: MahalanobisStrategy = MahalanobisStrategy.PAPER_TWO_OBS
    pinv_tolerance: float = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Inclusive (start, stop, step) ranges of the calibration grid.

    Attributes:
        eta1_range: Initial supply shock range.
        rho_eps_range: Demand persistence range.
        rho_eta_range: Supply persistence range.
        seeds_per_point: Stochastic runs averaged per grid point.
    """

    eta1_range: tuple[float, float, float] = (0.0, 1.0, 0.01)
    rho_eps_range: tuple[float, float, float] = (0.0, 1.0, 0.05)
    rho_eta_range: tuple[float, float, float] = (0.0, 1.0, 0.05)
    seeds_per_point: int = 1


@dataclass(frozen=True, order=True)
class GridPoint:
    """One candidate (eta1, rho_eps, rho_eta); ordering is lexicographic."""

    eta1: float
    rho_eps: float
    rho_eta: float

    def as_tuple(self) -> tuple[float, float, float]:
        return self.eta1, self.rho_eps, self.rho_eta


@dataclass(frozen=True, eq=False)
class CalibrationTarget:
    """Empirical side of the calibration.

    Attributes:
        eps1: Pinned initial demand shock (measured Q1 2020 gap).
        data_means: Window means (output gap, inflation) of the data.
        data_window: 16 x 2 quarterly (gap, inflation) pairs, needed by the
            paired_series strategy.
        label: Free-form tag for reports (e.g. "hp", "kalman").
    """

    eps1: float
    data_means: tuple[float, float]
    data_window: Optional[np.ndarray] = None
    label: str = ""


@dataclass(frozen=True)
class CalibrationResult:
    """Evaluation of a single grid point.

    Attributes:
        point: The grid point.
        mean_y: Simulated window mean of the output gap.
        mean_pi: Simulated window mean of inflation.
        distance: Mahalanobis distance to the data means (inf when failed).
        rank: 1-based position in ascending-distance order (0 = unranked).
        index: Position of the point in the grid enumeration.
        tag: Diagnostic tag of failed points.
    """

    point: GridPoint
    mean_y: float
    mean_pi: float
    distance: float
    rank: int = 0
    index: int = -1
    tag: Optional[str] = None

    def to_record(self) -> dict[str, Any]:
        """JSON-style report record."""
        return {
            "eta1": self.point.eta1,
            "rho_eps": self.point.rho_eps,
            "rho_eta": self.point.rho_eta,
            "mean_y": self.mean_y,
            "mean_pi": self.mean_pi,
            "distance": self.distance,
            "rank": self.rank,
            "tag": self.tag,
        }


@dataclass(frozen=True)
class GridRunResult:
    """Ranked results of a grid search.

    Attributes:
        results: All evaluations in rank order.
        best: Rank-1 evaluation.
        grid_hash: Fingerprint of the grid and its evaluation context.
        ties_at_best: Points sharing the best distance (1 when the optimum is unique).
    """

    results: tuple[CalibrationResult, ...]
    best: CalibrationResult
    grid_hash: str
    ties_at_best: int = 1


@dataclass(frozen=True, eq=False)
class EmpiricalData:
    """Observed series the model is compared with.

    Attributes:
        log_gdp: Log real GDP.
        hp_gap: HP output gap, dated like log_gdp.
        kalman_gap: Kalman output gap, starting one quarter later.
        inflation: Quarter-on-quarter CPI inflation, when a CPI file is given.
    """

    log_gdp: QuarterlySeries
    hp_gap: QuarterlySeries
    kalman_gap: QuarterlySeries
    inflation: Optional[QuarterlySeries] = None

    def gap(self, kind: FilterKind) -> QuarterlySeries:
        """Output gap of a filter."""
        return self.hp_gap if kind is FilterKind.HP else self.kalman_gap


@dataclass(frozen=True)
class RobustnessRow:
    """Normality outcome of one series in the robustness comparison.

    Attributes:
        source: "behavioral", "rational" or "actual".
        variable: "output_gap" or "inflation".
        label: Filter or window description.
        jb: Jarque-Bera outcome of the reference run.
        rejection_rate: Share of runs with p < 0.05 (None for actual data).
        runs: Number of runs behind rejection_rate.
    """

    source: str
    variable: str
    label: str
    jb: JarqueBeraResult
    rejection_rate: Optional[float] = None
    runs: int = 1

    @property
    def verdict(self) -> str:
        """Normal / Non-Normal at the 5% level."""
        return "Non-Normal" if self.jb.p_value < 0.05 else "Normal"

    def to_record(self) -> dict[str, Any]:
        """JSON-style report record."""
        return {
            "source": self.source,
            "variable": self.variable,
            "label": self.label,
            "verdict": self.verdict,
            "rejection_rate": self.rejection_rate,
            "runs": self.runs,
            **self.jb.to_record(),
        }


@dataclass(frozen=True)
class Visualization:
    """Represents a data visualization.

    Attributes:
        chart_type: The type of chart (line, histogram).
        chart_object: The plotly chart object.
        title: The title of the chart.
        description: Description of what the visualization shows.
        config: Additional configuration for the chart.
    """

    chart_type: VisualizationType
    chart_object: Any
    title: str
    description: str
    config: Optional[dict[str, Any]] = None


@dataclass(frozen=True)
class RunConfig:
    """Complete run configuration; every field has a default.

    Attributes:
        params: Structural parameters.
        scenario: Shock scenario template.
        simulation: Simulation settings.
        grid: Calibration grid.
        mahalanobis: Distance settings; runs rank grid points with paired_series by default.
        kalman_layout: Measurement/transition layout of the trend model.
        kalman_v: Measurement variance.
        kalman_w: Diagonal of the process covariance.
        kalman_c0: Diagonal of the initial covariance.
        hp_lambda: HP smoothing parameter.
        gdp_path: Path of the GDP CSV (None = configured snapshot).
        cpi_path: Path of the CPI CSV (None = configured snapshot).
        cpi_base_quarter: Rebasing anchor of the CPI.
        window_start: First quarter of the empirical window.
        window_quarters: Length of the empirical window (16 or 17).
        output_dir: Output directory (None = environment default).
    """

    params: StructuralParams = field(default_factory=StructuralParams)
    scenario: ShockScenario = field(default_factory=ShockScenario)
    simulation: SimConfig = field(default_factory=SimConfig)
    grid: GridSpec = field(default_factory=GridSpec)
    mahalanobis: MahalanobisSpec = field(
        default_factory=lambda: MahalanobisSpec(strategy=MahalanobisStrategy.PAIRED_SERIES)
    )
    kalman_layout: KalmanLayout = KalmanLayout.STANDARD
    kalman_v: float = 0.06 ** 2
    kalman_w: tuple[float, float] = (0.06 ** 2, 0.06 ** 2)
    kalman_c0: tuple[float, float] = (0.06 ** 2, 0.06 ** 2)
    hp_lambda: float = 1600.0
    gdp_path: Optional[str] = None
    cpi_path: Optional[str] = None
    cpi_base_quarter: str = "2011Q4"
    window_start: str = "2020Q1"
    window_quarters: int = 16
    output_dir: Optional[str] = None

    def kalman_spec(self) -> KalmanSpec:
        """Build the KalmanSpec described by this configuration."""
        return KalmanSpec.for_layout(
            self.kalman_layout,
            V=self.kalman_v,
            W=np.diag(self.kalman_w),
            C0=np.diag(self.kalman_c0),
        )
