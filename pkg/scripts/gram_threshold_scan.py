"""Scan the vacuum weight c and report whether the truncated Schrodinger Gram
matrix is positive semidefinite.  The decoupled sl(2) part has lowest weight
c - 1/2, so positivity should switch on exactly at c = 1/2."""

import argparse
from dataclasses import dataclass
from fractions import Fraction

from berezin_kit.algebra import Params, parse_rational
from berezin_kit.fock import gram_matrix, is_positive_semidefinite, leading_principal_minors


@dataclass
class ScanConfig:
    m: Fraction = Fraction(1)
    degree: int = 4
    lo: Fraction = Fraction(-1)
    hi: Fraction = Fraction(3, 2)
    steps: int = 20


def scan(cfg: ScanConfig) -> list[tuple[Fraction, bool, Fraction]]:
    rows = []
    for k in range(cfg.steps + 1):
        c = cfg.lo + (cfg.hi - cfg.lo) * k / cfg.steps
        _, g = gram_matrix("schrodinger", cfg.degree, Params(cfg.m, c))
        rows.append((c, is_positive_semidefinite(g), min(leading_principal_minors(g))))
    return rows


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("-m", type=parse_rational, default=ScanConfig.m)
    p.add_argument("--degree", type=int, default=ScanConfig.degree)
    p.add_argument("--lo", type=parse_rational, default=ScanConfig.lo)
    p.add_argument("--hi", type=parse_rational, default=ScanConfig.hi)
    p.add_argument("--steps", type=int, default=ScanConfig.steps)
    cfg = ScanConfig(**vars(p.parse_args()))
    print(f"m = {cfg.m}, Gram matrix to degree {cfg.degree}")
    print(f"{'c':>8}  {'PSD':>5}  min leading minor")
    for c, psd, low in scan(cfg):
        print(f"{str(c):>8}  {str(psd):>5}  {low}")
