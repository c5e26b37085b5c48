import os
import pandas as pd
import plotly.graph_objects as go
from typing import Any, Optional
from ... import logger
from ...domain.entities import Visualization, VisualizationType
from ...domain.repositories import IChartGenerator, ChartGenerationError


class PlotlyChartGenerator(IChartGenerator):
    """Plotly implementation of the chart generator interface.

    This class draws the toolkit's static figures (output gaps, inflation,
    distributions of simulated series) and writes them as SVG.
    """

    def __init__(self):
        """Initialize the plotly chart generator."""
        self.default_config = {
            "template": "plotly_white",
            "showlegend": True,
            "height": 500,
            "width": 900,
        }

    def _as_frame(self, data: Any) -> pd.DataFrame:
        """Normalize chart input to a DataFrame with one column per series."""
        if isinstance(data, pd.DataFrame):
            return data
        if isinstance(data, pd.Series):
            return data.to_frame(name=data.name or "value")
        if isinstance(data, dict):
            return pd.DataFrame({k: pd.Series(v) for k, v in data.items()})
        raise ChartGenerationError(f"Unsupported chart data type: {type(data).__name__}")

    def _create_line_chart(
        self,
        data: Any,
        title: str,
        config: dict[str, Any]
    ) -> go.Figure:
        """Create a line chart with one trace per column, sharing the index as x.

        Args:
            data: DataFrame indexed by quarter (or period number).
            title: Chart title.
            config: Chart configuration.

        Returns:
            Plotly figure object.
        """
        df = self._as_frame(data)
        x = [str(v) for v in df.index]
        fig = go.Figure()
        for column in df.columns:
            fig.add_trace(go.Scatter(
                x=x,
                y=df[column].to_numpy(),
                mode="lines",
                name=str(column)
            ))
        if config.get("zero_line", True):
            fig.add_hline(y=0.0, line_width=1, line_dash="dot", line_color="grey")

        fig.update_layout(
            title=title,
            template=config["template"],
            height=config["height"],
            width=config["width"],
            showlegend=config.get("showlegend", len(df.columns) > 1),
            xaxis_title=config.get("xaxis_title", df.index.name or "Quarter"),
            yaxis_title=config.get("yaxis_title", "Value")
        )
        return fig

    def _create_histogram(
        self,
        data: Any,
        title: str,
        config: dict[str, Any]
    ) -> go.Figure:
        """Create overlaid histograms, one per column.

        Args:
            data: DataFrame or dict of samples.
            title: Chart title.
            config: Chart configuration.

        Returns:
            Plotly figure object.
        """
        df = self._as_frame(data)
        fig = go.Figure()
        for column in df.columns:
            fig.add_trace(go.Histogram(
                x=df[column].dropna().to_numpy(),
                name=str(column),
                opacity=0.6,
                nbinsx=config.get("bins", 40)
            ))

        fig.update_layout(
            title=title,
            barmode="overlay",
            template=config["template"],
            height=config["height"],
            width=config["width"],
            showlegend=config.get("showlegend", True),
            xaxis_title=config.get("xaxis_title", "Value"),
            yaxis_title=config.get("yaxis_title", "Count")
        )
        return fig

    def generate_chart(
        self,
        chart_type: VisualizationType,
        data: Any,
        title: str,
        config: Optional[dict[str, Any]] = None
    ) -> Visualization:
        """Generate a visualization based on the data and chart type.

        Args:
            chart_type: Type of chart to generate.
            data: Data to visualize.
            title: Chart title.
            config: Additional chart configuration.

        Returns:
            Visualization object with the generated chart.

        Raises:
            ChartGenerationError: If chart generation fails.
        """
        try:
            config = {**self.default_config, **(config or {})}

            if chart_type == VisualizationType.LINE:
                chart = self._create_line_chart(data, title, config)
            elif chart_type == VisualizationType.HISTOGRAM:
                chart = self._create_histogram(data, title, config)
            else:
                raise ChartGenerationError(f"Unsupported chart type: {chart_type}")

            return Visualization(
                chart_type=chart_type,
                chart_object=chart,
                title=title,
                description=config.get(
                    "description", f"{chart_type.value} chart for {title}"
                ),
                config=config
            )
        except ChartGenerationError:
            raise
        except Exception as e:
            raise ChartGenerationError(
                f"Failed to generate {chart_type.value} chart: {str(e)}"
            ) from e

    def save_chart(
        self,
        visualization: Visualization,
        path_stem: str
    ) -> str:
        """Write a visualization as SVG, or as standalone HTML when SVG export fails.

        Args:
            visualization: The chart to write.
            path_stem: Destination path without extension.

        Returns:
            The path actually written.

        Raises:
            ChartGenerationError: If neither format can be written.
        """
        directory = os.path.dirname(path_stem)
        if directory:
            os.makedirs(directory, exist_ok=True)

        figure = visualization.chart_object
        svg_path = f"{path_stem}.svg"
        try:
            # static export goes through kaleido
            figure.write_image(svg_path, format="svg")
            return svg_path
        except Exception as e:
            logger.warning(f"SVG export unavailable ({str(e)}); writing HTML instead")

        html_path = f"{path_stem}.html"
        try:
            figure.write_html(html_path, include_plotlyjs="cdn")
        except Exception as e:
            raise ChartGenerationError(f"Failed to write chart {html_path}: {str(e)}") from e
        return html_path
