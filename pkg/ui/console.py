"""
Human-readable summaries
Renders report documents as rich tables for --format table
"""

from typing import Dict, List, Optional

from rich import box
from rich.console import Console
from rich.table import Table

from config.settings import APP_NAME, VERSION

# rich styles per status value
STATUS_STYLES = {
    "exact": "green",
    "candidate_upper_bound": "yellow",
    "bounds_pair": "yellow",
    "compact": "green",
    "noncompact": "cyan",
    "uncertain": "red",
}


def _table(title: str) -> Table:
    table = Table(title=title, box=box.SIMPLE_HEAVY, show_header=True, title_justify="left")
    table.add_column("Field", style="bold")
    table.add_column("Value", overflow="fold")
    return table


def _styled(value: Optional[str]) -> str:
    if value is None:
        return "-"
    style = STATUS_STYLES.get(value.split(" ")[0])
    return f"[{style}]{value}[/{style}]" if style else value


def normalization_table(data: Dict) -> Table:
    table = _table("Normalization")
    table.add_row("Laurent", str(data.get("laurent_ok")))
    table.add_row("Base", data.get("base", "-"))
    mapped = data.get("map")
    if mapped:
        table.add_row("Normal form", f"({mapped['p']}, {mapped['q']})")
        table.add_row("Degrees", f"delta={mapped['delta']}, d={mapped['d']}, l={mapped['l']}")
    for j, coefficient in sorted(data.get("fiber_coefficients", {}).items(), key=lambda kv: -int(kv[0])):
        table.add_row(f"b_{j}", coefficient)
    return table


def symmetry_table(data: Dict) -> Table:
    group = data["group"]
    table = _table("Symmetry group")
    table.add_row("Group", data.get("description", "-"))
    table.add_row("Kind", group["kind"])
    table.add_row("Status", _styled(data.get("status")))
    table.add_row("Mode", data.get("mode", "-"))
    if group.get("order") is not None:
        table.add_row("Order", str(group["order"]))
    if group.get("generators"):
        gens = ", ".join(f"({mu[0]}/{mu[1]}, {nu[0]}/{nu[1]})" for mu, nu in group["generators"])
        table.add_row("Generators (turns)", gens)
    sigma = data.get("sigma_p") or {}
    table.add_row("Sigma_p order", "infinite" if sigma.get("infinite") else str(sigma.get("order")))
    bounds = data.get("bounds")
    if bounds:
        table.add_row("Lower bound order", str(bounds["lower"].get("order")))
        table.add_row("Upper bound order", str(bounds["upper"].get("order")))
    for note in data.get("notes", []):
        table.add_row("Note", note)
    return table


def classification_table(data: Dict) -> Table:
    table = _table("Classification")
    table.add_row("Type", f"[bold]{data['type']}[/bold]")
    table.add_row("Infinite", str(data["infinite"]))
    table.add_row("Julia set", (data.get("julia_shape") or {}).get("shape", "-"))
    witness = data.get("witness")
    if witness:
        table.add_row("Semiconjugacy", f"r={witness['r']}, s={witness['s']}, f0={witness['f0']}")
    if data.get("sigma_factor") is not None:
        table.add_row("Sigma factor", str(data["sigma_factor"]))
    if data.get("torsion_consistent") is not None:
        table.add_row("Torsion consistent", str(data["torsion_consistent"]))
    table.add_row("Uncertain", _styled("uncertain") if data["uncertain"] else "no")
    for note in data.get("notes", []):
        table.add_row("Note", note)
    return table


def verification_table(data: Dict) -> Table:
    table = Table(title=f"Numeric verification (tol {data['tol']}, seed {data['seed']})",
                  box=box.SIMPLE_HEAVY, title_justify="left")
    table.add_column("Element")
    table.add_column("Passed")
    table.add_column("Discrepancy", justify="right")
    table.add_column("Skipped", justify="right")
    for row in data["results"]:
        passed = "[green]yes[/green]" if row["passed"] else "[red]no[/red]"
        distance = "-" if row["distance"] is None else f"{row['distance']:.3e}"
        table.add_row(str(row["element"]), passed, distance, str(row["skipped"]))
    return table


def compactness_table(data: Dict) -> Table:
    table = _table("Compactness of J_f")
    table.add_row("Verdict", _styled(data["verdict"]))
    table.add_row("Method", data["method"])
    if data.get("min_distance") is not None:
        table.add_row("Closest root distance", f"{data['min_distance']:.3e}")
    return table


def render_table(data: Dict) -> Table:
    table = _table("Fiber slice")
    table.add_row("Image", data.get("image", "-"))
    table.add_row("Resolution", "x".join(str(n) for n in data["resolution"]))
    for key, value in sorted(data.get("stats", {}).items()):
        table.add_row(key, f"{value:.4g}" if isinstance(value, float) else str(value))
    for key, value in sorted(data.get("flags", {}).items()):
        if value:
            table.add_row("Flag", key)
    return table


SECTIONS = [
    ("normalization", normalization_table),
    ("symmetry", symmetry_table),
    ("classification", classification_table),
    ("verification", verification_table),
    ("compactness", compactness_table),
    ("render", render_table),
]


def report_tables(report: Dict) -> List[Table]:
    return [build(report[key]) for key, build in SECTIONS if report.get(key)]


def print_report(report: Dict, console: Optional[Console] = None):
    """Print every section of a report as a table"""
    console = console or Console()
    source = report.get("input", {}).get("map", "")
    console.print(f"[bold]{APP_NAME} {VERSION}[/bold]  {report['command']}  {source}")
    for table in report_tables(report):
        console.print(table)
    if report.get("uncertain"):
        console.print(_styled("uncertain") + ": some results could not be settled")
