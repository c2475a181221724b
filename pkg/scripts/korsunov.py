"""Admissible fraction of surjections [kn+1] -> [n] against the limit c_k."""
from __future__ import annotations

from dataclasses import dataclass

from _config import parse_config

from pascal_fields.acda import acda_probability, korsunov_constant


@dataclass(frozen=True)
class Config:
    """ACDA probabilities against Korsunov constants."""
    letters: tuple[int, ...] = (2, 3, 4)
    n_list: tuple[int, ...] = (1, 2, 5, 10, 30, 100, 300)


def main(cfg: Config) -> None:
    for k in cfg.letters:
        kc = korsunov_constant(k)
        print(f"k={k}: c_k = {kc.c:.12f}  crossing = {kc.crossing:.12f}  zeta_2({k - 1}) = {kc.zeta:.12f}")
        for n in cfg.n_list:
            p = acda_probability(k, n)
            shown = f"{p}" if n <= 5 else f"{float(p):.12f}"
            print(f"    n={n:4d}  P = {shown:>24s}  gap = {abs(float(p) - kc.c):.3e}")


if __name__ == "__main__":
    main(parse_config(Config))
