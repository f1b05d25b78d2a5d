"""Compare the compiled and pure-Python kernels on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json]
"""
import argparse
import json
import time
from fractions import Fraction

from looptorsors import _kernels
from looptorsors.azumaya import BrauerMatrix
from looptorsors.basefield import KDiagonalForm, parse_field


def _bfs_case(n, start_blocks, target_blocks, budget=10**5):
    def flat(blocks, modulus):
        b = BrauerMatrix.from_upper(n, {(2 * k + 1, 2 * k + 2): Fraction(q) for k, q in enumerate(blocks)})
        return [x for row in b.integer_matrix(modulus) for x in row]

    modulus = max(Fraction(q).denominator for q in start_blocks + target_blocks)
    return flat(start_blocks, modulus), flat(target_blocks, modulus), n, modulus, budget


def _ff_case(q):
    # an anisotropic binary form forces a full scan of k^2
    k = parse_field(f"Fq:{q}")
    nu = k.square_classes()[1]
    form = KDiagonalForm(k, (k.one_class, -nu))
    add, mul = k.tables
    return [c.representative().value for c in form.entries], add, mul


CASES = [
    ("bfs n=3 1/7 -> 3/7", "congruence_bfs", _bfs_case(3, ["1/7"], ["3/7"])),
    ("bfs n=4 orbit of [1/5,1/5] (exhausts)", "congruence_bfs", _bfs_case(4, ["1/5", "1/5"], ["1/5", "2/5"])),
    ("bfs n=4 [1/7,1/7] vs [1/7,3/7] (budget)", "congruence_bfs", _bfs_case(4, ["1/7", "1/7"], ["1/7", "3/7"])),
    ("finite field scan q=81 d=2", "finite_field_has_zero", _ff_case(81)),
    ("finite field scan q=243 d=2", "finite_field_has_zero", _ff_case(243)),
]


def bench(repeat: int):
    backends = _kernels.backends()
    rows = []
    for label, fn, args in CASES:
        row = {"case": label}
        answers = set()
        for name, mod in backends.items():
            best = float("inf")
            for _ in range(repeat):
                t0 = time.perf_counter()
                out = getattr(mod, fn)(*args)
                best = min(best, time.perf_counter() - t0)
            answers.add(json.dumps(out))
            row[name] = best
        row["agree"] = len(answers) == 1
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = bench(args.repeat)
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"default backend: {_kernels.BACKEND}")
    print(f"{'case':<42} {'python s':>10} {'cython s':>10} {'speedup':>8} agree")
    for r in rows:
        cy = f"{r['cython']:.4f}" if "cython" in r else "-"
        sp = f"{r['speedup']:.1f}x" if "speedup" in r else "-"
        print(f"{r['case']:<42} {r['python']:>10.4f} {cy:>10} {sp:>8} {r['agree']}")


if __name__ == "__main__":
    main()
