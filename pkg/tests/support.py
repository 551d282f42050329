"""Shared test helpers: random model/net generators and brute-force oracles.

The oracles only use plain Python loops over explicit index ranges and set
membership; they never touch the sparse code paths they are checking.
"""

from __future__ import annotations

import itertools
from contextlib import contextmanager
from time import perf_counter

import numpy as np

from hfgt import build_model, build_operand_net, validate, fixture_path, parse_system_file

OPERAND_KINDS = ["matter", "energy", "living-organism", "information", "money"]

ACCEPTANCE_RESULTS: list[tuple[str, str, str]] = []


@contextmanager
def criterion(cid: str, title: str):
    """Record PASS/FAIL for one acceptance criterion (printed at session end)."""
    t0 = perf_counter()
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE_RESULTS.append(
            (cid, "FAIL", f"{title} ({type(exc).__name__}: {exc}) [{perf_counter() - t0:.3f}s]")
        )
        raise
    ACCEPTANCE_RESULTS.append((cid, "PASS", f"{title} [{perf_counter() - t0:.3f}s]"))


def fig5_model():
    return parse_system_file(fixture_path("fig5.json"))


def _subset(rng, n: int) -> list[int]:
    k = int(rng.integers(1, n + 1))
    return sorted(rng.choice(n, size=k, replace=False).tolist())


def random_model_decls(rng, max_operands=5, max_buffers=6, max_caps=20):
    """Declarations for a random model that passes validation.

    Payloads are kept distinct and every process gets at least one resource,
    so R1-R5 all hold by construction.
    """
    n_ops = int(rng.integers(1, max_operands + 1))
    n_buf = int(rng.integers(1, max_buffers + 1))
    n_m = int(rng.integers(0, n_buf + 1))
    n_h = int(rng.integers(0, 4))
    kinds = ["transformation"] * n_m + ["independent-buffer"] * (n_buf - n_m)
    kinds += ["transportation"] * n_h
    rng.shuffle(kinds)

    operands = [
        {"name": f"l{i}", "kind": OPERAND_KINDS[int(rng.integers(len(OPERAND_KINDS)))]}
        for i in range(n_ops)
    ]
    resources = [{"name": f"r{v}", "kind": k} for v, k in enumerate(kinds)]
    m_ids = [v for v, k in enumerate(kinds) if k == "transformation"]
    buf_ids = [v for v, k in enumerate(kinds) if k != "transportation"]
    h_ids = [v for v, k in enumerate(kinds) if k == "transportation"]

    target = int(rng.integers(0, max_caps + 1))
    processes, allocations, payloads = [], [], set()
    n_caps = 0
    for _ in range(200):
        if n_caps >= target:
            break
        budget = target - n_caps
        if m_ids and rng.random() < 0.5:
            ins, outs = _subset(rng, n_ops), _subset(rng, n_ops)
            key = ("t", tuple(ins), tuple(outs))
            decl = {"inputs": ins, "outputs": outs}
            hosts = m_ids
        else:
            origin = int(rng.choice(buf_ids))
            dest = origin if rng.random() < 0.3 else int(rng.choice(buf_ids))
            carried = int(rng.integers(n_ops))
            key = ("h", origin, dest, carried)
            decl = {"origin": origin, "destination": dest, "carried": carried}
            hosts = list(h_ids) + ([origin] if origin == dest else [])
        if not hosts or key in payloads:
            continue
        k = int(rng.integers(1, min(len(hosts), budget) + 1))
        chosen = sorted(rng.choice(hosts, size=k, replace=False).tolist())
        payloads.add(key)
        pid = len(processes)
        processes.append({"name": f"p{pid}", **decl})
        allocations += [{"process": pid, "resource": r} for r in chosen]
        n_caps += k
    return {
        "operands": operands,
        "resources": resources,
        "processes": processes,
        "allocations": allocations,
    }


def random_valid_model(rng, **kwargs):
    model = build_model(**random_model_decls(rng, **kwargs))
    report = validate(model)
    assert report.ok, report.format()
    return model


def random_models(seed: int, count: int, **kwargs):
    rng = np.random.default_rng(seed)
    return [random_valid_model(rng, **kwargs) for _ in range(count)]


def random_net(rng, max_places=6, max_transitions=5, max_weight=2):
    n_s = int(rng.integers(1, max_places + 1))
    n_e = int(rng.integers(1, max_transitions + 1))
    places = [f"s{k}" for k in range(n_s)]
    transitions = [f"e{k}" for k in range(n_e)]
    arcs = []
    for e in range(n_e):
        for s in range(n_s):
            if rng.random() < 0.3:
                arcs.append((places[s], transitions[e], int(rng.integers(1, max_weight + 1))))
            if rng.random() < 0.3:
                arcs.append((transitions[e], places[s], int(rng.integers(1, max_weight + 1))))
        if not any(transitions[e] in a[:2] for a in arcs):
            arcs.append((places[int(rng.integers(n_s))], transitions[e], 1))
    return build_operand_net(0, places, transitions, arcs)


# ---------------------------------------------------------------------------
# oracles


def oracle_a_rho(pos, neg) -> np.ndarray:
    n_ops, n_buf, n_caps = pos.dims
    p, m = pos.entries(), neg.entries()
    out = np.zeros((n_caps, n_caps), dtype=np.int64)
    for psi1, psi2, i, y in itertools.product(
        range(n_caps), range(n_caps), range(n_ops), range(n_buf)
    ):
        if (i, y, psi1) in p and (i, y, psi2) in m:
            out[psi1, psi2] += 1
    return out


def oracle_a_bs(pos, neg) -> np.ndarray:
    n_ops, n_buf, n_caps = pos.dims
    p, m = pos.entries(), neg.entries()
    out = np.zeros((n_buf, n_buf), dtype=np.int64)
    for y1, y2, psi, i in itertools.product(range(n_buf), range(n_buf), range(n_caps), range(n_ops)):
        if (i, y1, psi) in m and (i, y2, psi) in p:
            out[y1, y2] = 1
    return out


def oracle_multilayer(pos, neg) -> np.ndarray:
    n_ops, n_buf, n_caps = pos.dims
    p, m = pos.entries(), neg.entries()
    out = np.zeros((n_buf, n_buf, n_ops, n_ops), dtype=np.int64)
    for y1, y2, i1, i2, psi in itertools.product(
        range(n_buf), range(n_buf), range(n_ops), range(n_ops), range(n_caps)
    ):
        if (i1, y1, psi) in m and (i1, y2, psi) in p:
            out[y1, y2, i1, i2] = 1
    return out
