"""Named reproduction scenarios; each returns a report with a pass/fail entry per check."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import classify as cl
from .channels import apply, apply_to_operator, paper_channel, pd_channel, pd_derivative, validate_cptp
from .core import (
    DEFAULT_TOL,
    BlochVector,
    bloch_from_density,
    density_from_bloch,
    hamiltonian,
    hamming_mode,
    kron,
    l1_coherence,
    pure,
    uniform_superposition,
)
from .fisher import (
    classical_fi,
    dephasing_qfi,
    pe_qfi,
    single_qubit_dephasing_qfi,
    witness_phase,
    witness_povm,
)
from .hamming import enumerate_hdf, factor_hdf, is_hdf
from .sampling import (
    c1c2_mixture,
    random_bloch,
    random_density,
    random_diagonal_density,
    random_hdp_channel,
    random_pure,
    random_shp,
    seeds,
)
from .transform import (
    ConeQuery,
    MergeSpec,
    cone_boundary,
    cone_radius_by_search,
    conditional_probabilities,
    extreme_cone_channel,
    golden_transform,
    hdp_cone_contains,
    hdp_offdiag_bound,
    hdp_unitary,
    max_cone_radius,
    merge_channel,
)

DEFAULT_THETA = 0.5
DEFAULT_SEED = 2024
THETA_GRID = (0.2, 0.5, 1.0)


@dataclass
class Report:
    scenario: str
    parameters: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def check(self, name: str, passed, **details) -> bool:
        self.checks.append({"name": name, "passed": bool(passed), **details})
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "parameters": self.parameters,
            "passed": self.passed,
            "checks": self.checks,
            "data": self.data,
        }

    def to_text(self) -> str:
        lines = [f"scenario {self.scenario}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            extra = ", ".join(f"{k}={_fmt(v)}" for k, v in c.items() if k not in ("name", "passed"))
            lines.append(f"  [{'PASS' if c['passed'] else 'FAIL'}] {c['name']}" + (f" ({extra})" if extra else ""))
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def psi1() -> np.ndarray:
    """``(|0> + |1>) / sqrt(2)``: coherence at Hamming distance 1."""
    return np.array([1, 1, 0, 0], dtype=complex) / math.sqrt(2)


def psi_eigen() -> np.ndarray:
    """``(|1> + |2>) / sqrt(2)``: an energy eigenstate with coherence at distance 2."""
    return np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)


def psi2() -> np.ndarray:
    """``(|0> + |3>) / sqrt(2)``."""
    return np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)


def g(x: float, y: float) -> float:
    return x + y - (x - y) ** 2


# --- scenarios ----------------------------------------------------------------------


def scenario_free_states(theta=DEFAULT_THETA, seed=DEFAULT_SEED, count=100, tol=DEFAULT_TOL) -> Report:
    rep = Report("free-states", {"theta": theta, "seed": seed, "count": count})
    rngs = seeds(seed, 2 * count)
    worst_free = 0.0
    for rng in rngs[:count]:
        n = int(rng.integers(1, 3))
        worst_free = max(worst_free, dephasing_qfi(random_diagonal_density(n, rng), theta))
    rep.check("diagonal states have zero dephasing QFI", worst_free <= 1e-8, max_qfi=worst_free)

    min_fi, worst_gap = math.inf, -math.inf
    for rng in rngs[count:]:
        n = int(rng.integers(1, 3))
        rho = random_density(n, rng)
        off = np.abs(rho - np.diag(np.diag(rho)))
        x, y = np.unravel_index(np.argmax(off), off.shape)
        if off[x, y] < 1e-2:
            continue
        rho_t = apply(pd_channel(n, theta), rho)
        drho = pd_derivative(n, theta, rho)
        fi = classical_fi(witness_povm(int(x), int(y), witness_phase(rho_t, x, y), n), rho_t, drho)
        q = dephasing_qfi(rho, theta)
        min_fi = min(min_fi, fi)
        worst_gap = max(worst_gap, fi - q)
    rep.check("witness POVM detects coherence", min_fi > 1e-6, min_fi=min_fi)
    rep.check("classical FI does not exceed QFI", worst_gap <= 1e-8, max_fi_minus_qfi=worst_gap)
    return rep


def scenario_psi1_psi2(theta=DEFAULT_THETA, tol=DEFAULT_TOL, epsilon=1.0) -> Report:
    rep = Report("psi1-psi2", {"theta": theta, "epsilon": epsilon})
    r1, r2 = pure(psi1()), pure(psi2())
    for t in sorted(set(THETA_GRID) | {theta}):
        f1, f2 = dephasing_qfi(r1, t), dephasing_qfi(r2, t)
        e1 = math.exp(-2 * t) / (1 - math.exp(-2 * t))
        e2 = 4 * math.exp(-4 * t) / (1 - math.exp(-4 * t))
        rep.check(f"psi1 dephasing QFI at theta={t}", _rel(f1, e1) <= 1e-8, value=f1, expected=e1)
        rep.check(f"psi2 dephasing QFI at theta={t}", _rel(f2, e2) <= 1e-8, value=f2, expected=e2)
    rep.check("equal l1 coherence", abs(l1_coherence(r1) - l1_coherence(r2)) <= tol)
    rep.check(
        "HDP cannot map psi1 to psi2 (mode 2 empty in psi1, not in psi2)",
        np.abs(hamming_mode(r1, 2)).max() == 0 and np.abs(hamming_mode(r2, 2)).max() > 0,
    )
    v = paper_channel("V_swap")
    h = hamiltonian(2, epsilon)
    e = pure(psi_eigen())
    rep.check("(|1>+|2>)/sqrt(2) is an energy eigenstate", pe_qfi(e, h) <= 1e-12, pe_qfi=pe_qfi(e, h))
    rep.check("V maps (|1>+|2>)/sqrt(2) to psi2", np.abs(apply(v, e) - r2).max() <= tol)
    rep.check("psi2 has PE-QFI 4 Var(H)", abs(pe_qfi(r2, h) - 4 * epsilon**2) <= 1e-8, pe_qfi=pe_qfi(r2, h))
    return rep


def scenario_golden(seed=DEFAULT_SEED, count=100, tol=DEFAULT_TOL) -> Report:
    rep = Report("golden", {"seed": seed, "count": count})
    for n in (1, 2, 3):
        worst, shp_ok = 0.0, True
        for rng in seeds(seed + n, count):
            target = random_pure(n, rng)
            eta = rng.uniform(0, 2 * math.pi, 1 << n)
            ch = golden_transform(target, eta)
            out = apply(ch, uniform_superposition(n, eta))
            fid = float(np.real(target.conj() @ out @ target))
            worst = max(worst, 1 - fid)
            shp_ok &= cl.is_shp_decomposition(ch, tol).is_member
        rep.check(f"n={n}: golden state reaches random targets", worst <= 1e-9, max_infidelity=worst)
        rep.check(f"n={n}: golden channels are SHP", shp_ok)
    return rep


def scenario_cone(source=(0.6, 0.0, 0.6), num=201, seed=DEFAULT_SEED, count=1000, tol=DEFAULT_TOL) -> Report:
    src = BlochVector(*map(float, source)).check()
    rep = Report("cone", {"source": list(src), "num": num, "seed": seed, "count": count})
    grid = np.linspace(-1, 1, num)
    rows = cone_boundary(src, grid)
    err = max(abs(r - max_cone_radius(src, z)) for z, r in rows)
    rep.data["boundary"] = [[z, r] for z, r in rows]
    rep.check("boundary CSV matches the closed-form cone", err <= 1e-9, max_error=err)

    agree, sat = True, 0.0
    for rng in seeds(seed, count):
        q = ConeQuery(random_bloch(rng), random_bloch(rng))
        inside = hdp_cone_contains(q, tol)
        if inside:
            out = bloch_from_density(apply(extreme_cone_channel(q, tol), density_from_bloch(q.source)))
            sat = max(sat, abs(out.r - max_cone_radius(q.source, q.target.z)), abs(out.z - q.target.z))
            agree &= out.r >= q.target.r - 1e-9
        else:
            agree &= cone_radius_by_search(q.source, q.target.z) < q.target.r
    rep.check("cone membership agrees with extreme-channel reachability", agree)
    rep.check("extreme channel saturates the boundary", sat <= 1e-9, max_error=sat)
    return rep


EXPECTED_REGIONS = {
    "W": "HDP - SIO",
    "R": "(SIO & HDP) - SHP",
    "N": "DIO - (SIO | HDP)",
    "U_sio": "SIO - HDP",
    "V_swap": "SHP",
    "U_phase": "SHP",
}


def scenario_hierarchy(tol=DEFAULT_TOL) -> Report:
    rep = Report("hierarchy", {})
    for name, region in EXPECTED_REGIONS.items():
        ch = paper_channel(name, phi=0.7) if name == "U_phase" else paper_channel(name)
        report = cl.hierarchy_report(ch, tol)
        rep.data[name] = report
        rep.check(f"{name} lies in {region}", report["region"] == region, found=report["region"])
    z = cl.is_hdp(paper_channel("Z"), tol)
    rep.check("Z is not HDP", z.is_non_member, entry=z.certificate.get("entry"))
    return rep


def scenario_prop8(amplitudes=None, theta=DEFAULT_THETA, epsilon=1.0, tol=DEFAULT_TOL) -> Report:
    psi = psi_eigen() if amplitudes is None else np.asarray(amplitudes, dtype=complex)
    if psi.shape != (4,):
        raise ValueError("expected four two-qubit amplitudes")
    if abs(np.linalg.norm(psi) - 1) > tol:
        raise ValueError("amplitudes are not normalized")
    p = np.abs(psi) ** 2
    g03, g12 = g(p[0], p[3]), g(p[1], p[2])
    improvable = g12 > g03 + tol
    h = hamiltonian(2, epsilon)
    rho = pure(psi)
    v = paper_channel("V_swap")
    after = apply(v, rho) if improvable else rho
    before_pe, after_pe = pe_qfi(rho, h), pe_qfi(after, h)
    rep = Report("prop8", {"amplitudes": [[float(a.real), float(a.imag)] for a in psi], "epsilon": epsilon})
    rep.data.update(g_03=g03, g_12=g12, improvable=bool(improvable), pe_qfi_before=before_pe, pe_qfi_after=after_pe)
    # pure-state phase-estimation QFI is 4 Var(H) = 4 g eps^2
    rep.check("PE-QFI before equals 4 g(p0, p3) eps^2", abs(before_pe - 4 * g03 * epsilon**2) <= 1e-8, value=before_pe)
    if improvable:
        rep.check("PE-QFI after V equals 4 g(p1, p2) eps^2", abs(after_pe - 4 * g12 * epsilon**2) <= 1e-8, value=after_pe)
        rep.check("V increases the PE-QFI", after_pe > before_pe)
    else:
        best = max(pe_qfi(apply(u, rho), h) for u in _hdf_unitaries(2))
        rep.check("no HDF permutation increases the PE-QFI", best <= before_pe + 1e-8, best=best)
    d0, d1 = dephasing_qfi(rho, theta), dephasing_qfi(apply(v, rho), theta)
    rep.check("V preserves the dephasing QFI", abs(d0 - d1) <= 1e-9, before=d0, after=d1)
    return rep


def _hdf_unitaries(n):
    return [hdp_unitary(f) for f in enumerate_hdf(n)]


def scenario_merge_demo(n=2, seed=DEFAULT_SEED, count=20, theta=DEFAULT_THETA, epsilon=1.0, tol=DEFAULT_TOL) -> Report:
    rep = Report("merge-demo", {"n": n, "seed": seed, "count": count, "theta": theta})
    d = 1 << n
    h = hamiltonian(n, epsilon)
    worst_purity, min_gain, worst_pd = 0.0, math.inf, 0.0
    hdp_ok = True
    for rng in seeds(seed, count):
        rho, zeta, _, _ = c1c2_mixture(n, rng)
        ch = merge_channel(MergeSpec.optimal(rho, 0, d - 1, tol), tol)
        out = apply(ch, rho)
        hdp_ok &= cl.is_hdp(ch, tol).is_member
        target = np.zeros(d)
        target[0], target[-1] = math.cos(zeta), math.sin(zeta)
        worst_purity = max(worst_purity, 1 - float(np.real(target @ out @ target)))
        min_gain = min(min_gain, pe_qfi(out, h) - pe_qfi(rho, h))
        worst_pd = max(worst_pd, abs(dephasing_qfi(out, theta) - dephasing_qfi(rho, theta)))
    rep.check("merge channels are HDP", hdp_ok)
    rep.check("output is the pure state cos|0> + sin|1..1>", worst_purity <= 1e-9, max_infidelity=worst_purity)
    rep.check("PE-QFI strictly increases", min_gain > 1e-6, min_gain=min_gain)
    rep.check("dephasing QFI is preserved", worst_pd <= 1e-8, max_change=worst_pd)
    return rep


def appendix_a_expression(r: float, z: float, theta: float) -> float:
    return 3 / (r * r * math.exp(-2 * theta)) - 4 / (4 - r * r) + 1 / (1 - z * z)


def scenario_appendix_a(theta_grid=(0.2, 0.5, 1.0), num=10, tol=DEFAULT_TOL) -> Report:
    rep = Report("appendix-a", {"theta_grid": list(theta_grid), "num": num})
    zc = paper_channel("Z")
    rep.check("Z is CPTP", validate_cptp(zc, tol))
    rep.check("Z is not HDP", cl.is_hdp(zc, tol).is_non_member)
    rs, zs = np.linspace(0.1, 1.0, num), np.linspace(0.0, 0.9, num)
    min_slack, mins = math.inf, {}
    for t in theta_grid:
        best = (math.inf, None)
        for r, z in itertools.product(rs, zs):
            if r * r + z * z > 1 + 1e-12:
                continue
            sigma = density_from_bloch((r, 0.0, z))
            f_in = dephasing_qfi(sigma, t)
            f_out = dephasing_qfi(apply(zc, sigma), t)
            min_slack = min(min_slack, f_in - f_out)
            if r * r + z * z < 1 - 1e-12 or z == 0:
                best = min(best, (appendix_a_expression(r, z, t), (float(r), float(z))))
        expected = 3 * math.exp(2 * t) - 1 / 3
        mins[t] = best
        rep.check(
            f"expression minimum at theta={t} is 3e^(2 theta) - 1/3 at r=1, z=0",
            abs(best[0] - expected) <= 1e-9 * expected and best[1] == (1.0, 0.0),
            value=best[0], expected=expected, at=best[1],
        )
    rep.check("Z never increases the dephasing QFI on the grid", min_slack >= -1e-8, min_slack=min_slack)
    zero = [dephasing_qfi(density_from_bloch((0.0, 0.0, z)), t) for z in zs for t in theta_grid]
    zero += [dephasing_qfi(apply(zc, density_from_bloch((0.0, 0.0, z))), t) for z in zs for t in theta_grid]
    rep.check("r = 0: both QFIs vanish", max(zero) <= 1e-12, max_value=max(zero))
    closed = max(
        _rel(dephasing_qfi(density_from_bloch((r, 0.0, z)), t), single_qubit_dephasing_qfi(r, z, t))
        for r, z in itertools.product(rs, zs) for t in theta_grid if r * r + z * z <= 1 - 1e-9
    )
    rep.check("single-qubit QFI matches its closed form", closed <= 1e-8, max_rel_error=closed)
    return rep


def scenario_appendix_b(max_n=4, brute_max_n=3) -> Report:
    rep = Report("appendix-b", {"max_n": max_n, "brute_max_n": brute_max_n})
    for n in range(1, max_n + 1):
        funcs = enumerate_hdf(n)
        rep.check(f"n={n}: 2^n n! functions", len(funcs) == (1 << n) * math.factorial(n), count=len(funcs))
        rep.check(f"n={n}: factorization round-trips", all(factor_hdf(f.table, n) == (f.mask, f.reorder) for f in funcs))
        if n <= brute_max_n:
            brute = {p for p in itertools.permutations(range(1 << n)) if is_hdf(p, n)}
            rep.check(f"n={n}: equals brute-force filtering", brute == {f.table for f in funcs})
    rep.data["n2"] = [f.to_dict() for f in enumerate_hdf(2)]
    return rep


def scenario_appendix_c(tol=DEFAULT_TOL) -> Report:
    rep = Report("appendix-c", {})
    w = paper_channel("W")
    rho = pure(np.array([1, 1, 0, 0]) / math.sqrt(2))
    out = apply(w, rho)
    before, after = l1_coherence(rho), l1_coherence(out)
    rep.data.update(l1_in=before, l1_out=after)
    rep.check("l1 coherence of input is 1", abs(before - 1) <= tol, value=before)
    rep.check("l1 coherence after W is sqrt(2)", abs(after - math.sqrt(2)) <= tol, value=after)
    rep.check("W is HDP", cl.is_hdp(w, tol).is_member)
    rep.check("W is certified outside SIO", cl.sio_nonmembership_by_l1(w, rho, tol).is_non_member)
    report = cl.hierarchy_report(w, tol)
    rep.check("W lies in HDP - SIO", report["region"] == "HDP - SIO", found=report["region"])
    return rep


def scenario_properties(theta=DEFAULT_THETA, seed=DEFAULT_SEED, count=50, tol=DEFAULT_TOL) -> Report:
    rep = Report("properties", {"theta": theta, "seed": seed, "count": count})
    rngs = iter(seeds(seed, 10 * count))

    add = 0.0
    for _ in range(count):
        rng = next(rngs)
        a, b = random_density(int(rng.integers(1, 3)), rng), random_density(int(rng.integers(1, 3)), rng)
        add = max(add, abs(dephasing_qfi(kron(a, b), theta) - dephasing_qfi(a, theta) - dephasing_qfi(b, theta)))
    rep.check("P1 additivity", add <= 1e-8, max_error=add)

    conv = math.inf
    for _ in range(count):
        rng = next(rngs)
        n = int(rng.integers(1, 3))
        states = [random_density(n, rng) for _ in range(3)]
        w = rng.dirichlet(np.ones(3))
        mixed = sum(p * s for p, s in zip(w, states))
        conv = min(conv, sum(p * dephasing_qfi(s, theta) for p, s in zip(w, states)) - dephasing_qfi(mixed, theta))
    rep.check("P2 convexity", conv >= -1e-8, min_slack=conv)

    mono, bound, modes = math.inf, math.inf, 0.0
    contain = True
    for _ in range(count):
        rng = next(rngs)
        n = int(rng.integers(1, 3))
        ch = random_hdp_channel(n, rng)
        rho = random_density(n, rng)
        out = apply(ch, rho)
        mono = min(mono, dephasing_qfi(rho, theta) - dephasing_qfi(out, theta))
        contain &= cl.is_hdp(ch, tol).is_member and cl.is_dio(ch, tol).is_member
        p = conditional_probabilities(ch)
        for i, j in itertools.combinations(range(1 << n), 2):
            bound = min(bound, hdp_offdiag_bound(rho, i, j, p) - abs(out[i, j]))
        for hd in range(n + 1):
            # E(rho^(h)) must stay inside mode h
            lhs = apply_to_operator(ch, hamming_mode(rho, hd))
            modes = max(modes, float(np.abs(lhs - hamming_mode(lhs, hd)).max()))
    rep.check("P3 monotonicity under generated HDP channels", mono >= -1e-8, min_slack=mono)
    rep.check("generated HDP channels are HDP and DIO", contain)
    rep.check("off-diagonal bound holds", bound >= -1e-9, min_slack=bound)
    rep.check("Hamming modes evolve independently", modes <= 1e-9, max_error=modes)

    shp_ok = True
    for _ in range(count):
        rng = next(rngs)
        n = int(rng.integers(1, 4))
        ch = random_shp(n, int(rng.integers(1, 4)), rng)
        shp_ok &= all(
            v.is_member
            for v in (cl.is_shp_decomposition(ch, tol), cl.is_sio_decomposition(ch, tol), cl.is_hdp(ch, tol), cl.is_dio(ch, tol))
        )
    rep.check("SHP is contained in SIO and HDP, both in DIO", shp_ok)
    return rep


SCENARIOS = {
    "free-states": scenario_free_states,
    "psi1-psi2": scenario_psi1_psi2,
    "golden": scenario_golden,
    "cone": scenario_cone,
    "hierarchy": scenario_hierarchy,
    "prop8": scenario_prop8,
    "merge-demo": scenario_merge_demo,
    "appendix-a": scenario_appendix_a,
    "appendix-b": scenario_appendix_b,
    "appendix-c": scenario_appendix_c,
    "properties": scenario_properties,
}
