"""Validates every example config and the reports produced from them."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
import yaml

COMMANDS = {
    "weights_factorial": "weights-check",
    "weights_gevrey2": "weights-check",
    "fourier_gaussian": "fourier-series",
    "fourier_windowed": "fourier-series",
    "analyze_jump": "analyze",
    "delta": "wavefront",
    "plane_jump_quasianalytic": "wavefront",
    "gaussian": "lattice-info",
}


def main() -> int:
    wfs, root = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    config_schema = json.loads((root / "schemas/config.schema.json").read_text())
    report_schema = json.loads((root / "schemas/report.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(config_schema)
    jsonschema.Draft202012Validator.check_schema(report_schema)
    failures = 0
    for path in sorted((root / "configs").glob("*.yaml")):
        try:
            jsonschema.validate(yaml.safe_load(path.read_text()), config_schema)
        except jsonschema.ValidationError as e:
            print(f"{path.name}: {e.message}")
            failures += 1
    with tempfile.TemporaryDirectory() as out:
        for name, command in COMMANDS.items():
            cfg = root / "configs" / f"{name}.yaml"
            run = subprocess.run([str(wfs), command, str(cfg), "--out", out, "-q"], capture_output=True, text=True)
            if run.returncode != 0:
                print(f"{name}: exit {run.returncode}: {run.stderr.strip()}")
                failures += 1
                continue
            report_name = yaml.safe_load(cfg.read_text()).get("output", {}).get("json", "report.json")
            report = json.loads((pathlib.Path(out) / report_name).read_text())
            try:
                jsonschema.validate(report, report_schema)
            except jsonschema.ValidationError as e:
                print(f"{name} report: {e.message} at {list(e.absolute_path)}")
                failures += 1
    print("schema checks:", "ok" if failures == 0 else f"{failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
