#!/usr/bin/env python3
"""Generates the committed GraphML corpus under data/topologies.

Every graph is a ring plus random chords, so it is connected and stays
2-edge-connected (every pair of switches has a link-disjoint detour).
Deterministic: fixed seed per graph, safe to re-run.
"""
import random
import sys
from pathlib import Path

# name -> (nodes, links)
GRAPHS = {
    "AttMpls": (25, 57),
    "Goodnet": (17, 31),
    "mesh005": (5, 5),
    "mesh008": (8, 10),
    "mesh010": (10, 14),
    "mesh012": (12, 18),
    "mesh015": (15, 22),
    "mesh020": (20, 30),
    "mesh025": (25, 40),
    "mesh030": (30, 50),
    "mesh040": (40, 70),
    "mesh050": (50, 90),
    "mesh060": (60, 120),
    "mesh080": (80, 160),
    "mesh100": (100, 200),
    "mesh110": (110, 250),
}


def ring_with_chords(name: str, n: int, m: int) -> list[tuple[int, int]]:
    if m < n:
        raise ValueError(f"{name}: need at least {n} links for the ring")
    rng = random.Random(f"tel-corpus-{name}")
    edges = {(i, (i + 1) % n) for i in range(n)}
    norm = lambda a, b: (a, b) if a < b else (b, a)
    edges = {norm(a, b) for a, b in edges}
    while len(edges) < m:
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b:
            continue
        edges.add(norm(a, b))
    return sorted(edges)


def to_graphml(n: int, edges: list[tuple[int, int]]) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <graph edgedefault="undirected">',
    ]
    width = len(str(n - 1))
    name = lambda i: f"N{i:0{width}d}"
    for i in range(n):
        lines.append(f'    <node id="{name(i)}"/>')
    for a, b in edges:
        lines.append(f'    <edge source="{name(a)}" target="{name(b)}"/>')
    lines += ["  </graph>", "</graphml>", ""]
    return "\n".join(lines)


def main() -> int:
    out_dir = Path(__file__).resolve().parent.parent / "data" / "topologies"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, (n, m) in sorted(GRAPHS.items()):
        edges = ring_with_chords(name, n, m)
        assert len(edges) == m, (name, len(edges))
        (out_dir / f"{name}.graphml").write_text(to_graphml(n, edges))
        print(f"{name}: {n} nodes, {m} links")
    return 0


if __name__ == "__main__":
    sys.exit(main())
