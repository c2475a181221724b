"""Table of |p1(m, l) - phi| for growing m at fixed lambda."""
from __future__ import annotations

from dataclasses import dataclass

from _config import parse_config

from pascal_fields.experiments import slope_convergence


@dataclass(frozen=True)
class Config:
    """Slope convergence table."""
    kinds: tuple[str, ...] = ("pascal", "stirling2", "stirling1", "euler")
    lam: float = 1.0
    m_list: tuple[int, ...] = (50, 200, 1000, 2000, 5000)
    method: str = "log"


def main(cfg: Config) -> None:
    print(f"lambda = {cfg.lam}")
    print(f"{'kind':10s} {'m':>6s} {'l':>6s} {'p1':>20s} {'phi':>20s} {'error':>10s}")
    for kind in cfg.kinds:
        for r in slope_convergence(kind, cfg.lam, cfg.m_list, method=cfg.method).rows:
            print(f"{kind:10s} {r.m:6d} {r.ell:6d} {float(r.p1):20.16f} {float(r.phi):20.16f} {float(r.error):10.3e}")


if __name__ == "__main__":
    main(parse_config(Config))
