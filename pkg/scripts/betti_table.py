"""Print L2-Betti numbers for a few standard hierarchies and the Bourdon table.

    python scripts/betti_table.py
"""

from __future__ import annotations

from vfbc import hierarchy as hi

EXAMPLES = {
    "free group F_3": "(free 3)",
    "genus 2 surface": "(amal (free 2) (free 2) over 1)",
    "genus 3 surface": "(amal (free 3) (free 3) over 1)",
    "F_2 *_Z": "(hnn (free 2) over 1)",
    "double of F_3 over F_2": "(amal (free 3) (free 3) over 2)",
    "two-level": "(amal (hnn (free 2) over 1) (free 3) over 2)",
}


def main() -> None:
    print(f"{'group':<24} {'chi':>4} {'b1':>3}  hierarchy")
    for name, text in EXAMPLES.items():
        rep = hi.betti(hi.parse_hierarchy(text))
        print(f"{name:<24} {str(rep.euler_char):>4} {str(rep.betti[1]):>3}  {text}")
    print()
    print("one-relator b1:", {n: str(hi.one_relator_betti(n).betti[1]) for n in range(2, 8)})
    print()
    qs = range(2, 13)
    print("Bourdon X_{p,q} lattices virtually free-by-cyclic (Y/.)")
    print("  p\\q " + " ".join(f"{q:>2}" for q in qs))
    for p in range(5, 13):
        print(f"  {p:>3} " + " ".join(" Y" if hi.bourdon_vfbc(p, q) else " ." for q in qs))
    print()
    for name, preset in sorted(hi.PRESETS.items()):
        print(f"{name:<34} {preset.decide().value:<13} {preset.description}")


if __name__ == "__main__":
    main()
