#!/usr/bin/env python3
"""Regenerates data/moment_cumulant_table.json by brute-force enumeration.

Every set partition of {1..k} contributes one product of cumulants, one per
block, so the coefficient of a block-size pattern in m(k) is the number of
set partitions with that pattern.
"""
import json
import sys
from collections import Counter


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def table(max_order):
    orders = {}
    for k in range(1, max_order + 1):
        counts = Counter()
        for part in set_partitions(list(range(k))):
            counts[tuple(sorted((len(b) for b in part), reverse=True))] += 1
        terms = [{"coef": c, "blocks": list(b)} for b, c in counts.items()]
        terms.sort(key=lambda t: [-x for x in t["blocks"]])
        orders[str(k)] = terms
    return orders


def main():
    max_order = int(sys.argv[1]) if len(sys.argv) > 1 else 6
    doc = {
        "description": "m(k) = sum over terms of coef * Sym(c(b1) ⊗ c(b2) ⊗ ...), blocks in decreasing order",
        "generator": "tools/gen_moment_table.py (set-partition enumeration)",
        "max_order": max_order,
        "orders": table(max_order),
    }
    json.dump(doc, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
