"""
Diagrammi ASCII dei pattern di misura.

Layout: una riga di testo per ogni riga del cluster, celle centrate e unite da
" - " (archi orizzontali); tra due righe una linea con "|" sotto le colonne che
hanno archi verticali. `o` è un sito con angolo 0, `θ=x.xx` un sito ruotato,
`[ ]` un sito di output.
"""

from typing import List

from app.core.pattern import MeasurementPattern

OUTPUT_CELL = "[ ]"
OPERATIONAL_CELL = "o"
SEPARATOR = " - "


def render(pattern: MeasurementPattern) -> str:
    g = pattern.geometry
    angles = pattern.angles()

    def cell(i: int, j: int) -> str:
        if j == g.cols:
            return OUTPUT_CELL
        angle = angles.get((i, j), 0.0)
        return OPERATIONAL_CELL if angle == 0.0 else f"θ={angle:.2f}"

    cells = [[cell(i, j) for j in range(1, g.cols + 1)] for i in range(1, g.rows + 1)]
    width = max(len(text) for row in cells for text in row)

    lines: List[str] = [f"# {g.rows}x{g.cols} {g.kind.value}, {pattern.measured_count} misure"]
    for index, row in enumerate(cells):
        lines.append(SEPARATOR.join(text.center(width) for text in row).rstrip())
        if index < g.rows - 1:
            connectors = ["|" if g.has_vertical_edges(j) else " " for j in range(1, g.cols + 1)]
            lines.append((" " * len(SEPARATOR)).join(c.center(width) for c in connectors).rstrip())
    return "\n".join(lines) + "\n"
