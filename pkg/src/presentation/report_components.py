import pandas as pd
from typing import Any
from ..domain.entities import (
    BreakTestResult,
    CalibrationTarget,
    GridRunResult,
    RobustnessRow
)


def _number(value: float, digits: int = 4) -> str:
    return f"{value:.{digits}f}" if abs(value) >= 1e-3 or value == 0 else f"{value:.3e}"


class ReportComponents:
    """Collection of plain-text renderers for command output."""

    @staticmethod
    def render_files(written: dict[str, str]) -> str:
        """Render the list of written artifacts.

        Args:
            written: Paths keyed by artifact name.
        """
        width = max((len(k) for k in written), default=0)
        return "\n".join(f"{name:<{width}}  {path}" for name, path in written.items())

    @staticmethod
    def render_break_table(result: BreakTestResult, series_name: str = "gap") -> str:
        """Render the single-mean vs. split-mean comparison as an ANOVA table.

        Args:
            result: Outcome of the break test.
            series_name: Name of the tested series.
        """
        p_text = "< 2.2e-16" if result.p_value < 2.2e-16 else f"{result.p_value:.4g}"
        f_text = "Inf" if result.f_stat == float("inf") else f"{result.f_stat:.4f}"
        frame = pd.DataFrame(
            {
                "Res.Df": [result.df1, result.df2],
                "RSS": [f"{result.rss1:.5f}", f"{result.rss2:.5f}"],
                "Df": ["", "1"],
                "Sum of Sq": ["", f"{result.ss:.5f}"],
                "F": ["", f_text],
                "Pr(>F)": ["", p_text],
            },
            index=["1", "2"],
        )
        lines = [
            "Analysis of Variance Table",
            "",
            f"Model 1: {series_name} ~ 1",
            f"Model 2: {series_name} ~ 1 + after({result.break_date})",
            frame.to_string(),
        ]
        if result.exact_fit:
            lines.append("note: the split-mean model fits exactly")
        return "\n".join(lines)

    @staticmethod
    def render_simulation_summary(summary: dict[str, Any]) -> str:
        """Render window moments of a simulation.

        Args:
            summary: Output of the simulate use case.
        """
        rows = {}
        for variable in ("output_gap", "inflation"):
            record = summary[variable]
            rows[variable] = {
                key: record.get(key, float("nan"))
                for key in ("mean", "variance", "skewness", "kurtosis")
            }
        frame = pd.DataFrame(rows).T
        header = (
            f"{summary['model']} model, seed {summary['seed']}, "
            f"window {summary['t0']}..{summary['t0'] + summary['window_len'] - 1}"
        )
        return header + "\n" + frame.to_string(float_format=lambda v: f"{v:.6f}")

    @staticmethod
    def render_calibration(
        run: GridRunResult,
        target: CalibrationTarget,
        top: int = 10
    ) -> str:
        """Render the best rows of a grid search against the data.

        Args:
            run: Ranked grid results.
            target: Empirical side of the calibration.
            top: Number of rows shown.
        """
        best = run.best
        lines = [
            f"best point (eta1, rho_eps, rho_eta) = "
            f"({best.point.eta1:g}, {best.point.rho_eps:g}, {best.point.rho_eta:g})",
            f"Mahalanobis distance = {best.distance:.4f}",
        ]
        if run.ties_at_best > 1:
            lines.append(
                f"note: {run.ties_at_best} points share this distance; "
                f"the first in grid order is reported"
            )
        lines.append("")
        comparison = pd.DataFrame(
            {
                "Simulated": [best.mean_y, best.mean_pi],
                "Actual": list(target.data_means),
            },
            index=["Mean (Output Gap)", "Mean (Inflation Rate)"],
        )
        lines.append(comparison.to_string(float_format=lambda v: f"{v:.4f}"))
        lines.append("")

        rows = [r.to_record() for r in run.results[:top]]
        table = pd.DataFrame(rows).set_index("rank")
        lines.append(table.to_string(float_format=lambda v: f"{v:.6g}"))
        return "\n".join(lines)

    @staticmethod
    def render_robustness(rows: list[RobustnessRow]) -> str:
        """Render the normality comparison table.

        Args:
            rows: Rows of the robustness use case.
        """
        records = []
        for row in rows:
            rate = "" if row.rejection_rate is None else f"{row.rejection_rate:.3f} ({row.runs})"
            records.append({
                "Data": row.source.capitalize(),
                "Variable": row.variable.replace("_", " "),
                "Window": row.label,
                "JB": _number(row.jb.jb),
                "P-Value": _number(row.jb.p_value),
                "Normality": row.verdict,
                "Reject rate": rate,
            })
        return pd.DataFrame(records).to_string(index=False)

    @staticmethod
    def render_statistics(table: pd.DataFrame) -> str:
        """Render the statistical-properties table.

        Args:
            table: Output of stats.statistical_properties.
        """
        return "Statistical Properties\n" + table.to_string(float_format=lambda v: f"{v:.4f}")

    @staticmethod
    def render_calibration_summary(summary: pd.DataFrame) -> str:
        """Render best rows of earlier calibrations.

        Args:
            summary: One row per calibration report.
        """
        if summary.empty:
            return "no calibration reports found"
        return "Moments Comparison\n" + summary.to_string(
            index=False, float_format=lambda v: f"{v:.4f}"
        )
