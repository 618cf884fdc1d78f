"""Walk a few familiar curves through minimal models and reduction types.

Run: python3 demos/local_reduction_tour.py
"""

from ellgal.curve import WeierstrassModel
from ellgal.localdata import global_reduce, inertial_type, phi_order

CURVES = [
    ("0,0,1,-1,0", (0, 0, 1, -1, 0)),       # conductor 37, rank 1
    ("0,-1,1,-10,-20", (0, -1, 1, -10, -20)),  # conductor 11
    ("0,0,1,0,0", (0, 0, 1, 0, 0)),         # conductor 27, CM by -3
    ("0,0,0,-1,0", (0, 0, 0, -1, 0)),       # conductor 32, CM by -4
    ("0,1,0,4,4", (0, 1, 0, 4, 4)),         # conductor 20
    ("0,1,1,-2,0", (0, 1, 1, -2, 0)),       # conductor 389, rank 2
]


def main():
    for name, ainvs in CURVES:
        red = global_reduce(WeierstrassModel(*ainvs))
        mm = red.minimal_model
        print(f"[{name}]  minimal {mm.ainvs()}  N = {red.conductor}"
              f"  semistable = {red.semistable}")
        for p in sorted(red.locals):
            loc = red.locals[p]
            line = f"    p = {p:>2}: {loc.kodaira:<5} f = {loc.f}  {loc.red_type}"
            if loc.red_type == "additive" and loc.pot_good:
                phi = phi_order(loc)
                line += f"  |Phi| = {phi}"
                if p >= 5:
                    line += f"  ({inertial_type(loc)})"
            print(line)
        print()


if __name__ == "__main__":
    main()
