#!/usr/bin/env python3
"""Render validate.json and bench.csv files from a results directory into a text report."""
import csv
import json
import os
import sys
from collections import defaultdict
from datetime import datetime


class ValidationReportGenerator:
    def __init__(self, results_dir):
        self.results_dir = results_dir
        self.checks = {}
        self.bench_rows = defaultdict(list)

    def load_results(self):
        """Load every validate*.json and bench*.csv file in the results directory."""
        for filename in sorted(os.listdir(self.results_dir)):
            path = os.path.join(self.results_dir, filename)
            if filename.endswith(".config.json"):
                continue
            if filename.startswith("validate") and filename.endswith(".json"):
                with open(path, "r") as f:
                    try:
                        self.checks.update(json.load(f))
                    except json.JSONDecodeError:
                        print(f"Error: Could not parse {filename}")
            elif filename.startswith("bench") and filename.endswith(".csv"):
                with open(path, "r", newline="") as f:
                    self.bench_rows[filename] = list(csv.DictReader(f))

    def generate_report(self):
        report = []
        report.append("First-Passage Sampler Validation Report")
        report.append("=" * 50)
        report.append(f"Generated on: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")

        passed = sum(1 for check in self.checks.values() if check.get("pass"))
        total = len(self.checks)
        percentage = (passed / total * 100) if total > 0 else 0
        report.append("Acceptance Summary")
        report.append("-" * 30)
        report.append(f"Checks passed: {percentage:.2f}% ({passed}/{total})")
        report.append("")
        for name, check in self.checks.items():
            status = "✓" if check.get("pass") else "✗"
            p = check.get("p")
            p_text = "n/a" if p is None else f"{p:.4g}"
            report.append(f"  {status} {name}: statistic {check.get('statistic'):.6g}, p {p_text}")
        report.append("")

        for filename, rows in self.bench_rows.items():
            complete = sum(1 for row in rows if row["status"] == "complete")
            report.append(f"Benchmark: {filename}")
            report.append("-" * (len(filename) + 11))
            report.append(f"Grid points complete: {complete}/{len(rows)}")
            report.append(f"  {'alpha':>6} {'q':>6} {'r':>10} {'median s/1e4':>14} {'mean M':>9} {'mean K':>9}")
            for row in rows:
                status = "✓" if row["status"] == "complete" else "✗"
                report.append(f"{status} {float(row['alpha']):>6.3g} {float(row['q']):>6.3g} "
                              f"{float(row['r']):>10.4g} {float(row['median_s']):>14.4g} "
                              f"{float(row['mean_M']):>9.3g} {float(row['mean_K']):>9.3g}")
            report.append("\n" + "=" * 50 + "\n")

        return "\n".join(report)

    def save_report(self, output_file="validation_report.txt"):
        report = self.generate_report()
        path = os.path.join(self.results_dir, output_file)
        with open(path, "w") as f:
            f.write(report)
        print(f"Validation report saved to {path}")
        print("\nSummary:")
        print(report.split("\nBenchmark:")[0])
        return path


def main(argv=None):
    argv = sys.argv if argv is None else argv
    if len(argv) != 2:
        print("Usage: generate_validation_report.py <results_directory>")
        sys.exit(1)

    results_dir = argv[1]
    if not os.path.isdir(results_dir):
        print(f"Error: {results_dir} is not a directory")
        sys.exit(1)

    generator = ValidationReportGenerator(results_dir)
    generator.load_results()
    generator.save_report()


if __name__ == "__main__":
    main()
