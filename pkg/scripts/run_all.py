"""Run every applicable suite for each built-in algebra on the parameter grid and
write one JSON document per algebra."""

import argparse
import contextlib
import io
import json
from dataclasses import dataclass
from pathlib import Path

from berezin_kit.algebra import BUILTIN_NAMES
from berezin_kit.cli import main


@dataclass
class RunAllConfig:
    out_dir: Path = Path("results")
    cap: int = 8
    seed: int = 0


def run(cfg: RunAllConfig) -> int:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name in BUILTIN_NAMES:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(["verify", "--algebra", name, "--suite", "all", "--params-grid",
                         "--cap", str(cfg.cap), "--seed", str(cfg.seed), "--format", "json"])
        doc = json.loads(buf.getvalue())
        (cfg.out_dir / f"{name}.json").write_text(buf.getvalue())
        passed = sum(r["pass"] for r in doc["reports"])
        print(f"{name:12s} exit={code}  {passed}/{len(doc['reports'])} reports pass")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", type=Path, default=RunAllConfig.out_dir)
    p.add_argument("--cap", type=int, default=RunAllConfig.cap)
    p.add_argument("--seed", type=int, default=RunAllConfig.seed)
    raise SystemExit(run(RunAllConfig(**vars(p.parse_args()))))
