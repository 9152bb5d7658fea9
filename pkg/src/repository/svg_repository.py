import numpy as np

from src.utils.logger import logger

# viewBox 0 0 100 100; el disco de radio 1/2 ocupa el circulo de radio 45
VIEWBOX = 100.0
DISK_RADIUS = 45.0
POINT_RADIUS = 0.35
CLASS_COLORS = {
    "acute": "#1f77b4",
    "right": "#2ca02c",
    "obtuse": "#d62728",
}
DEFAULT_COLOR = "#555555"


def _to_view(x: float, y: float, bound: float) -> tuple[float, float]:
    scale = DISK_RADIUS / bound
    return VIEWBOX / 2.0 + scale * x, VIEWBOX / 2.0 - scale * y


class SvgRepository:
    """Dispersion minima en SVG: contorno del disco y un circle por punto."""

    def render_scatter(self, xs, ys, classes=None, bound: float = 0.5) -> str:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        classes = [None] * xs.size if classes is None else list(classes)
        center = VIEWBOX / 2.0
        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEWBOX:g} {VIEWBOX:g}">',
            f'<circle cx="{center:g}" cy="{center:g}" r="{DISK_RADIUS:g}" fill="none" stroke="black" stroke-width="0.3"/>',
        ]
        for x, y, label in zip(xs, ys, classes):
            cx, cy = _to_view(float(x), float(y), bound)
            color = CLASS_COLORS.get(label, DEFAULT_COLOR)
            parts.append(f'<circle cx="{cx:.4f}" cy="{cy:.4f}" r="{POINT_RADIUS:g}" fill="{color}"/>')
        parts.append("</svg>")
        return "\n".join(parts) + "\n"

    def write_scatter(self, path: str, xs, ys, classes=None, bound: float = 0.5) -> None:
        logger.debug("[Repository] Inicio del metodo write_scatter")
        try:
            with open(path, "w") as handle:
                handle.write(self.render_scatter(xs, ys, classes, bound))
            logger.info(f"[Repository] SVG escrito en {path} ({len(xs)} puntos)")
        except Exception as e:
            logger.error(f"Error en escribir el SVG: {e}")
            raise
