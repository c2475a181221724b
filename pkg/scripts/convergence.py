"""Exceedance fraction of the sup distance over m**-eta as m grows."""
from __future__ import annotations

from dataclasses import dataclass

from _config import parse_config

from pascal_fields.experiments import convergence_experiment


@dataclass(frozen=True)
class Config:
    """Sample-path convergence sweep."""
    kinds: tuple[str, ...] = ("pascal", "stirling2", "stirling1", "euler")
    m_list: tuple[int, ...] = (100, 300, 1000, 3000)
    lam: float = 1.0
    eta: float = 0.25
    paths: int = 200
    seed: int = 2024


def main(cfg: Config) -> None:
    for kind in cfg.kinds:
        for m in cfg.m_list:
            rep = convergence_experiment(kind, m, cfg.lam, cfg.eta, cfg.paths, cfg.seed)
            lo, hi = rep.wilson
            print(f"{kind:10s} m={m:5d} threshold={rep.threshold:.4f} median sup={float(sorted(rep.distances)[len(rep.distances) // 2]):.4f} "
                  f"exceedance={rep.fraction:.3f} [{lo:.3f}, {hi:.3f}] {rep.status}")


if __name__ == "__main__":
    main(parse_config(Config))
