"""Shared test data and small utilities."""

import json
from pathlib import Path

from grpring import orders
from grpring.abgroups import FinAbGroup

DATA = Path(orders.__file__).parent / "data"

# every abelian group of order at most 8, in invariant-factor form
GROUPS_UP_TO_8 = [(), (2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2)]


def load(name: str):
    with open(DATA / name, encoding="utf-8") as fh:
        return json.load(fh)


def data_path(name: str) -> str:
    return str(DATA / name)


def build(name: str) -> orders.Order:
    return orders.build(load(name))


def group(invariants) -> FinAbGroup:
    return FinAbGroup(tuple(invariants))


def int_group_ring(invariants) -> orders.Order:
    return orders.build({"kind": "group_ring", "base": {"kind": "int"}, "group": list(invariants)})


def group_ring_over(base_name: str, invariants) -> orders.Order:
    base = {"kind": "int"} if base_name == "int" else load(base_name)
    return orders.build({"kind": "group_ring", "base": base, "group": list(invariants)})


def all_finite_abelian(max_order: int) -> list[FinAbGroup]:
    """Every invariant-factor list with product at most max_order."""
    out = [()]

    def extend(prefix, prod):
        last = prefix[-1] if prefix else 1
        for d in range(2, max_order // prod + 1):
            if d % last == 0:
                out.append(tuple(prefix + [d]))
                extend(prefix + [d], prod * d)

    extend([], 1)
    return [FinAbGroup(g) for g in out]
