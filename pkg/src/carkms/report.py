"""Report assembly and serialization.

A report is a key/value tree: command echo, per-check records
{name, value, tolerance, verdict}, named data sections (partial products,
extension tables, scan rows), and timing.  The body -- everything except
timing -- is byte-deterministic for a fixed spec and seed.  Reports are
emitted as YAML, optionally with a flat CSV of the per-check rows.
"""

import csv
import sys
import time

import numpy as np
import yaml

PASS = "pass"
FAIL = "fail"
UNDETERMINED = "Undetermined"


def plain(value):
    """Recursively convert numpy scalars/arrays to plain python values."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        c = complex(value)
        if abs(c.imag) < 1e-14:
            return float(c.real)
        return {"re": float(c.real), "im": float(c.imag)}
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    return value


class Report:
    def __init__(self, command, spec_echo):
        self.command = command
        self.spec_echo = plain(spec_echo)
        self.checks = []
        self.sections = {}
        self._t0 = time.perf_counter()

    def add_residual(self, name, value, tolerance):
        """Record a residual check: passes iff value <= tolerance."""
        value = float(value)
        self.checks.append({
            "name": name,
            "value": plain(value),
            "tolerance": plain(float(tolerance)),
            "verdict": PASS if value <= tolerance else FAIL,
        })

    def add_flag(self, name, ok, value=None, tolerance=0.0):
        """Record a boolean check with an optional reported value."""
        self.checks.append({
            "name": name,
            "value": plain(ok if value is None else value),
            "tolerance": plain(float(tolerance)),
            "verdict": PASS if ok else FAIL,
        })

    def add_trend(self, name, value, annotation, tolerance=0.0):
        """Record a trend-only observation.  Never affects the exit code."""
        self.checks.append({
            "name": name,
            "value": plain(value),
            "tolerance": plain(float(tolerance)),
            "verdict": UNDETERMINED,
            "annotation": str(annotation),
        })

    def section(self, name, data):
        self.sections[name] = plain(data)

    @property
    def failed(self):
        return any(c["verdict"] == FAIL for c in self.checks)

    def body(self):
        doc = {"command": self.command, "spec": self.spec_echo}
        doc.update(self.sections)
        doc["checks"] = self.checks
        return doc

    def document(self):
        doc = self.body()
        doc["timing_seconds"] = round(time.perf_counter() - self._t0, 6)
        return doc

    def to_yaml(self, include_timing=True):
        doc = self.document() if include_timing else self.body()
        return yaml.safe_dump(doc, sort_keys=False, default_flow_style=False)

    def write(self, path=None):
        text = self.to_yaml()
        if path is None:
            sys.stdout.write(text)
        else:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["name", "value", "tolerance", "verdict"])
            for c in self.checks:
                writer.writerow([c["name"], c["value"], c["tolerance"], c["verdict"]])

    def exit_code(self):
        return 2 if self.failed else 0
