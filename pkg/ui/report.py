"""
Versioned JSON reports
Builds the report document for each subcommand, checks its structure and
writes it deterministically (sorted keys, optional timestamp)
"""

import json
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from config.settings import APP_NAME, SCHEMA_VERSION, VERSION
from core.pipeline import AnalysisResult
from utils.logging import get_logger

logger = get_logger(__name__)

# sections each subcommand must carry besides the common header
REQUIRED_SECTIONS = {
    "normalize": ["normalization"],
    "symmetries": ["normalization", "symmetry"],
    "classify": ["normalization", "symmetry", "classification"],
    "verify": ["symmetry", "verification"],
    "render": ["render"],
    "report": ["normalization", "symmetry", "classification", "verification", "compactness"],
}
HEADER_KEYS = ["schema", "tool", "command", "input", "settings", "uncertain"]
GROUP_KEYS = ["kind", "character", "torsion", "generators"]


class ReportError(Exception):
    """Custom report error"""
    pass


def _finite(value: Any) -> Any:
    """Replace non-finite floats by None so the document stays strict JSON"""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


def _settings_echo(config: Dict) -> Dict:
    keys = ["seed", "samples", "verify_samples", "tol", "filter_tol", "green_tol",
            "max_order", "depth", "n_max", "bailout", "eps_near", "eps_far"]
    return {k: config[k] for k in keys if k in config}


def build_report(command: str, result: Optional[AnalysisResult], config: Dict,
                 extra: Optional[Dict] = None, timestamp: bool = True) -> Dict:
    """Assemble the report document for one subcommand run"""
    report: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "tool": {"name": APP_NAME, "version": VERSION},
        "command": command,
        "settings": _settings_echo(config),
        "input": {},
        "uncertain": False,
    }

    if result is not None:
        report["input"] = {"map": result.source, "parsed": result.f.to_json()}
        report["uncertain"] = result.uncertain

        if result.normalized is not None:
            report["normalization"] = result.normalized.to_json()
        if result.symmetry is not None:
            symmetry = result.symmetry.to_json()
            symmetry["status"] = str(result.symmetry.status)
            symmetry["exact"] = result.symmetry.is_exact
            report["symmetry"] = symmetry
        if result.classification is not None:
            report["classification"] = result.classification.to_json()
        if result.verifications:
            report["verification"] = {
                "tol": config["tol"],
                "seed": config["seed"],
                "samples": config["verify_samples"],
                "passed": all(v.passed for v in result.verifications),
                "results": [v.to_json() for v in result.verifications],
                "pole_sets": [p.to_json() for p in result.pole_sets],
            }
        if result.compactness is not None:
            compactness = result.compactness.to_json()
            compactness.update({"eps_near": config["eps_near"], "eps_far": config["eps_far"],
                                "seed": config["seed"], "samples": config["samples"]})
            report["compactness"] = compactness
        if result.oracle is not None:
            report["oracle"] = result.oracle

    if extra:
        report.update(extra)
    if timestamp:
        report["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")

    report = _finite(report)
    errors = validate_report(report)
    if errors:
        raise ReportError("; ".join(errors))
    return report


def _check_group(data: Any, where: str) -> List[str]:
    if not isinstance(data, dict):
        return [f"{where}: group must be an object"]
    errors = [f"{where}: missing {key}" for key in GROUP_KEYS if key not in data]
    for pair in data.get("generators") or []:
        if len(pair) != 2 or any(len(turn) != 2 for turn in pair):
            errors.append(f"{where}: generators must be [[k, m], [k, m]] pairs")
            break
    return errors


def validate_report(report: Dict) -> List[str]:
    """Structural check; returns a list of problems (empty when valid)"""
    errors = [f"missing {key}" for key in HEADER_KEYS if key not in report]
    if report.get("schema") != SCHEMA_VERSION:
        errors.append(f"schema must be {SCHEMA_VERSION!r}")

    command = report.get("command")
    if command not in REQUIRED_SECTIONS:
        errors.append(f"unknown command {command!r}")
        return errors

    for section in REQUIRED_SECTIONS[command]:
        if section not in report:
            errors.append(f"{command} report needs a {section} section")

    symmetry = report.get("symmetry")
    if isinstance(symmetry, dict):
        errors.extend(_check_group(symmetry.get("group"), "symmetry"))
        status = (symmetry.get("group") or {}).get("status") or {}
        if status.get("kind") == "exact" and not symmetry.get("conditions") and not symmetry.get("bounds"):
            errors.append("exact group without a certificate")

    verification = report.get("verification")
    if isinstance(verification, dict):
        for key in ("tol", "seed", "samples"):
            if key not in verification:
                errors.append(f"verification: missing {key}")

    compactness = report.get("compactness")
    if isinstance(compactness, dict) and compactness.get("verdict") not in ("compact", "noncompact", "uncertain"):
        errors.append(f"compactness: bad verdict {compactness.get('verdict')!r}")

    return errors


def dumps_report(report: Dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_report(report: Dict, out_dir: Path, name: Optional[str] = None) -> Path:
    """Write the report under out_dir as <name or command>.json"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name or report['command']}.json"
    path.write_text(dumps_report(report))
    logger.info(f"Report written to {path}")
    return path
