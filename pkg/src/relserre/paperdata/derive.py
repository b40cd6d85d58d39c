"""Rebuild groups.dat: the S_G label groups at modulus 8, placed in each appendix curve's frame.

Candidates for each obstruction are the M-set members at modulus 8 (for 2Cs) or
the index-2 refinements of G-hat(8) with full determinant and full image mod 4
(for 2B and 2Cn, together with K1-hat for 2Cn), up to GL2(Z/8)-conjugacy.  A
label is matched to the unique candidate of the right index and level having a
conjugate whose support contains every Frobenius code of the appendix curve.

Run as ``python3 -m relserre.paperdata.derive [--bound N] [--out PATH]``.
"""
from __future__ import annotations

import argparse
import sys

from ..adelic.frames import frame_of
from ..adelic.position import frame_positions, frobenius_sample
from ..ellq.curves import classify_mod2
from ..errors import InconsistencyError
from ..fingroup.core import closure, determinant_image, gl2, is_level, preimage_at, reduce_mod
from ..fingroup.lattice import conjugacy_partition, m_set
from ..fingroup.quotients import index_subgroups
from ..modmat import ResidueMatrix, format_generators
from .labels import S_G, TwoAdicLabel, data_dir, load_appendix

R = ResidueMatrix.of

BASE_GENERATORS = {
    "2Cs": [],
    "2B": [R(1, 1, 0, 1, 2)],
    "2Cn": [R(0, 1, 1, 1, 2)],
}
K_GENERATORS = {
    "K1": [R(3, 0, 0, 1, 4), R(1, 1, 1, 0, 4)],
    "K2": [R(3, 0, 0, 1, 4), R(3, 0, 2, 3, 4), R(1, 2, 0, 1, 4)],
    "K3": [R(3, 0, 0, 1, 4), R(3, 0, 2, 3, 4), R(1, 2, 0, 3, 4)],
}


def level_of(H) -> int:
    m = 1
    while not is_level(H, m):
        m *= 2
    return m


def candidate_groups(obstruction: str) -> list:
    """One representative per GL2(Z/8)-class of possible 2-adic images at modulus 8."""
    G = closure(BASE_GENERATORS[obstruction], 2)
    hat = preimage_at(G, 8)
    if obstruction == "2Cs":
        return m_set(hat)
    full4 = reduce_mod(hat, 4).order
    subs = [hat] + [
        H for H in index_subgroups(hat, 2)
        if len(determinant_image(H)) == 4 and reduce_mod(H, 4).order == full4
    ]
    if obstruction == "2Cn":
        subs.append(preimage_at(closure(K_GENERATORS["K1"], 4), 8))
    return [cls[0] for cls in conjugacy_partition(subs, gl2(8))]


def derive_label_groups(bound: int = 6000, directory=None) -> dict:
    """label -> GroupSlice at modulus 8, positioned in the appendix curve's frame."""
    rows = load_appendix(directory)
    out = {}
    for obstruction in S_G:
        cands = [(H, level_of(H), 1536 // H.order) for H in candidate_groups(obstruction)]
        for row in (r for r in rows if r.obstruction == obstruction):
            lab = TwoAdicLabel.parse(row.label)
            curve = row.curve
            frame = frame_of(classify_mod2(curve))
            sample = frobenius_sample(curve, frame, bound)
            hits = []
            for H, A, B in cands:
                if (A, B) != (lab.A, lab.B):
                    continue
                pos = frame_positions(H, frame, sample, first_only=True)
                if pos:
                    hits.append(pos[0])
            if len(hits) != 1:
                raise InconsistencyError(f"label {row.label} ({row.name}) matched {len(hits)} candidates")
            out[row.label] = hits[0]
    return out


def groups_dat_lines(bound: int = 6000, directory=None) -> list:
    lines = []
    for name, gens in BASE_GENERATORS.items():
        lines.append(f"{name} 2 {format_generators(gens)}")
    for name, gens in K_GENERATORS.items():
        lines.append(f"{name} 4 {format_generators(gens)}")
    groups = derive_label_groups(bound, directory)
    for obstruction, labels in S_G.items():
        for label in labels:
            lines.append(f"{label} 8 {format_generators(groups[label].gens)}")
    return lines


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="relserre.paperdata.derive")
    ap.add_argument("--bound", type=int, default=6000)
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)
    out = args.out or str(data_dir() / "groups.dat")
    lines = groups_dat_lines(args.bound)
    with open(out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} groups to {out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
