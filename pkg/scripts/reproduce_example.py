"""Run the bundled 4x4 example and print every intermediate next to the expected matrix."""

import argparse
from pathlib import Path

import numpy as np

from pinvupdate.fileformat import read_matrix
from pinvupdate.update_engine import check_conditions, update

FIXTURE = Path(__file__).resolve().parents[1] / "src" / "pinvupdate" / "fixtures" / "worked_example"
EXPECTED = {"apinv": "a_pinv"}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixture", type=Path, default=FIXTURE)
    args = parser.parse_args()

    A, X, Y = (read_matrix(args.fixture / f"{k}.csv")[0] for k in "axy")
    rep = check_conditions(A, X, Y)
    print("conditions:")
    for key, value in rep.to_dict().items():
        print(f"  {key:22s} {value}")

    res = update(A, X, Y, verify=True, intermediates=True)
    print(f"formula: {res.formula_used.value}")
    print(f"oracle deviation: {res.oracle_deviation:.3e}")
    print(f"Penrose residuals: {', '.join(f'{v:.2e}' for v in res.penrose)}")

    shown = dict(res.intermediates, update=res.pseudoinverse)
    np.set_printoptions(precision=4, suppress=True)
    worst = 0.0
    for name, got in shown.items():
        want = read_matrix(args.fixture / "expected" / f"{EXPECTED.get(name, name)}.csv")[0]
        dev = np.abs(got - want).max()
        worst = max(worst, dev)
        print(f"\n{name} (max deviation {dev:.1e})\n{got.real}")
    print(f"\nworst entry deviation: {worst:.1e}")
    return 0 if worst <= 1e-12 else 1


if __name__ == "__main__":
    raise SystemExit(main())
