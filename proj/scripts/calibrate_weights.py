#!/usr/bin/env python3
"""Scan the comfort weight and report how each controller responds.

For every comfort weight the script writes a config override, runs
`evac compare` and prints energy, mean temperature, standard deviation and
saving per controller. It also prints a reference weight: the steady-state
electric power saved by holding the cabin 1 degC warmer at the comparison
conditions, which is the weight at which a sustained 1 degC offset costs as
much as the power it saves.

    scripts/calibrate_weights.py --evac build/tools/evac 100 1000 10000 30000
"""

import argparse
import csv
import io
import json
import os
import subprocess
import sys
import tempfile


def run(evac, *args):
    res = subprocess.run([evac, *args], capture_output=True, text=True)
    if res.returncode != 0:
        sys.exit(f"evac {' '.join(args)} failed:\n{res.stderr}")
    return res.stdout


def reference_weight(evac, cfg_path, cfg, speed):
    target = cfg["cost"]["target_c"]
    sim = cfg["simulation"]
    out = run(evac, "sweep", "--config", cfg_path, "--variable", "speed", "--values", str(speed),
              "--targets", f"{target},{target + 1}", "--ambient", str(sim["ambient_c"]),
              "--solar", str(sim["solar_wm2"]))
    rows = list(csv.DictReader(io.StringIO(out)))
    duration = cfg["sweep"]["duration_s"]
    return (float(rows[0]["energy_j"]) - float(rows[1]["energy_j"])) / duration


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("weights", nargs="+", type=float, help="comfort weights per degC^2*s")
    p.add_argument("--evac", default="build/tools/evac", help="path to the evac binary")
    p.add_argument("--config", help="base configuration (default: built-in)")
    p.add_argument("--scale", action="append", type=float, help="cycle scale (repeatable)")
    p.add_argument("--speed", type=float, default=30.0, help="speed for the reference weight, km/h")
    args = p.parse_args()
    scales = args.scale or [0.68, 1.45]

    with tempfile.TemporaryDirectory() as tmp:
        base_path = os.path.join(tmp, "base.json")
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                base = json.load(fh)
            with open(base_path, "w", encoding="utf-8") as fh:
                json.dump(base, fh)
        else:
            run(args.evac, "dump-config", "--out", base_path)
            with open(base_path, encoding="utf-8") as fh:
                base = json.load(fh)

        ref = reference_weight(args.evac, base_path, base, args.speed)
        print(f"power saved per degC warmer: {ref:.1f} W (reference weight ~{ref:.0f} per degC^2*s)")
        print(f"{'weight':>10} {'mission':>12} {'controller':>10} {'energy_MJ':>10} "
              f"{'mean_C':>7} {'std_C':>6} {'saving':>7}")

        for w in args.weights:
            cfg = json.loads(json.dumps(base))
            cfg["cost"]["comfort_weight"] = w
            path = os.path.join(tmp, f"w{w:g}.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(cfg, fh)
            csv_path = os.path.join(tmp, "cmp.csv")
            cmd = ["compare", "--config", path, "--csv", csv_path]
            for s in scales:
                cmd += ["--scale", str(s)]
            run(args.evac, *cmd)
            with open(csv_path, encoding="utf-8") as fh:
                for r in csv.DictReader(fh):
                    saving = f"{100 * float(r['saving']):.2f}%" if r["saving"] else "-"
                    print(f"{w:>10g} {r['mission']:>12} {r['controller']:>10} "
                          f"{float(r['energy_j']) / 1e6:>10.4f} {float(r['mean_temp_c']):>7.2f} "
                          f"{float(r['temp_std_c']):>6.3f} {saving:>7}")


if __name__ == "__main__":
    main()
