"""Batch command-line front end.

Every command prints a JSON result document embedding the command, its
configuration, the seed (when any randomness is involved), and the package
version.  Exit codes: 0 success, 1 verification failure, 2 usage error,
3 resource or truncation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .codes import build_code, code_to_dict, kl_check
from .errors import PiqecError, ResourceLimitError, TruncationError

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _emit(command: str, config: dict, payload: dict, seed=None):
    doc = {"command": command, "config": config, "version": __version__}
    if seed is not None:
        doc["seed"] = seed
    doc.update(payload)
    json.dump(doc, sys.stdout, indent=1, default=_jsonify)
    sys.stdout.write("\n")


def _jsonify(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _output_dir() -> str:
    return os.environ.get("PIQEC_OUTPUT_DIR", ".")


def _resolve(path: str) -> str:
    if os.path.isabs(path):
        return path
    return os.path.join(_output_dir(), path)


def _code_params(args) -> dict:
    params = {}
    for key in ("b", "g", "m", "delta"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    return params


def _parse_code_spec(spec: str):
    name, _, rest = spec.partition(":")
    if name in ("pi7", "pi11"):
        return build_code(name)
    values = [int(v) for v in rest.split(",")] if rest else []
    if name == "bg" and len(values) == 2:
        return build_code("bg", b=values[0], g=values[1])
    if name == "bgm" and len(values) == 3:
        return build_code("bgm", b=values[0], g=values[1], m=values[2])
    raise argparse.ArgumentTypeError(
        f"bad code spec {spec!r}; use pi7, pi11, bg:B,G or bgm:B,G,M")


# ---------------------------------------------------------------------------
# subcommands


def cmd_codes(args) -> int:
    code = build_code(args.family, **_code_params(args))
    if args.action == "build":
        payload = {"code": code_to_dict(code)}
        _emit("codes build", {"family": args.family, **_code_params(args)}, payload)
        if args.output:
            with open(_resolve(args.output), "w") as fh:
                json.dump(code_to_dict(code), fh, indent=1)
        return EXIT_OK
    report = kl_check(code, args.t)
    payload = {
        "code": code.label,
        "n_qubits": code.n_qubits,
        "t": args.t,
        "orthogonality_residual": report.orthogonality_residual,
        "deformation_residual": report.deformation_residual,
        "verdict": report.verdict,
        "passed": report.passed,
    }
    _emit("codes certify", {"family": args.family, **_code_params(args), "t": args.t},
          payload)
    return EXIT_OK if report.passed else EXIT_VERIFICATION


def cmd_tau60(args) -> int:
    from .transversal import search_super_golden_rational

    approx = search_super_golden_rational(args.epsilon, args.max_denominator)
    if approx is None:
        _emit("tau60-approx", {"epsilon": args.epsilon}, {"found": False})
        return EXIT_VERIFICATION
    _emit("tau60-approx",
          {"epsilon": args.epsilon, "max_denominator": args.max_denominator},
          {"found": True, "g": approx.numerator, "b": approx.denominator,
           "distance": approx.distance})
    return EXIT_OK


def cmd_gpg(args) -> int:
    from .codes import build_pi7, build_pi11
    from .gpg import cnot_pi_control, cnot_stabilizer_control, logical_cz, repetition_weight_model

    if args.action == "verify-cz":
        _, rec = logical_cz(repetition_weight_model(3), build_pi11())
        payload = {"residual": rec.residual, "passed": rec.passed}
        _emit("gpg verify-cz", {}, payload)
        return EXIT_OK if rec.passed else EXIT_VERIFICATION

    code = build_pi7()
    if args.direction == "pi-control":
        rec = cnot_pi_control(code, cutoff=args.cutoff)
    else:
        rec = cnot_stabilizer_control(None, code, cutoff=args.cutoff)
    payload = {
        "direction": rec.direction,
        "cutoff": rec.cutoff,
        "cnot_residual": rec.cnot_residual,
        "control0_residual": rec.control0_residual,
        "control1_residual": rec.control1_residual,
        "vacuum_fidelity_min": rec.vacuum_fidelity_min,
        "correction": rec.correction,
        "passed": rec.passed,
    }
    _emit("gpg verify-cnot", {"direction": args.direction, "cutoff": args.cutoff}, payload)
    return EXIT_OK if rec.passed else EXIT_VERIFICATION


def cmd_tomography(args) -> int:
    from .tomography import logical_hadamard_channel, optimized_hadamard_prep

    code = _parse_code_spec(args.code)
    prep = optimized_hadamard_prep(code, args.pulses, args.cooperativity,
                                   seed=args.seed, restarts=args.restarts)
    _, rec = logical_hadamard_channel(code, prep.sequence, args.cooperativity)
    payload = {
        "F_pro": rec.process_fidelity,
        "process_infidelity": rec.process_infidelity,
        "F_ph": rec.phase_gate_fidelity,
        "prep_infidelity": rec.prep_ideal_infidelity,
    }
    _emit("tomography hadamard",
          {"code": args.code, "cooperativity": args.cooperativity,
           "pulses": args.pulses, "restarts": args.restarts},
          payload, seed=args.seed)
    return EXIT_OK


def cmd_switch(args) -> int:
    from .switching import SwitchPlan, gate_cost_table, roundtrip_cost, simulate_switch

    if args.action == "table1":
        rows = gate_cost_table()
        payload = {"rows": [{
            "distance": r.distance, "code_A": r.code_a,
            "stabilizer_B": r.code_b_stabilizer, "pi_B": r.code_b_pi,
            "lower_bound": r.lower_bound, "upper_bound": r.upper_bound,
        } for r in rows], "roundtrip_cost_formula": "14*N_B + 13"}
        _emit("switch table1", {}, payload)
        header = f"{'d':>3} {'code A':<12} {'stab code B':<12} {'PI code B':<26} {'lower':>6} {'upper':>6}"
        print(header, file=sys.stderr)
        for r in rows:
            print(f"{r.distance:>3} {r.code_a:<12} {r.code_b_stabilizer:<12} "
                  f"{r.code_b_pi:<26} {r.lower_bound:>6} {r.upper_bound:>6}", file=sys.stderr)
        if args.csv:
            with open(_resolve(args.csv), "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["# piqec", __version__])
                writer.writerow(["distance", "code_A", "stabilizer_B", "pi_B",
                                 "lower_bound", "upper_bound", "roundtrip_cost"])
                for r in rows:
                    writer.writerow([r.distance, r.code_a, r.code_b_stabilizer,
                                     r.code_b_pi, r.lower_bound, r.upper_bound,
                                     roundtrip_cost(r.n_pi)])
        return EXIT_OK

    code = _parse_code_spec(args.code)
    plan = SwitchPlan(code, args.omega, args.circuit)
    psi = np.array([complex(v) for v in args.input.split(",")])
    outcome = simulate_switch(plan, psi)
    payload = {
        "omega_prime": plan.omega_prime,
        "logical_out": [[v.real, v.imag] for v in outcome.logical_out],
        "ancilla_return_fidelity": outcome.ancilla_return_fidelity,
        "logical_deviation": outcome.logical_deviation,
        "passed": outcome.passed,
    }
    _emit("switch run", {"code": args.code, "omega": args.omega,
                         "circuit": args.circuit, "input": args.input}, payload)
    return EXIT_OK if outcome.passed else EXIT_VERIFICATION


def cmd_sweep(args) -> int:
    from .codes import build_pi11, logical_plus
    from .prep import fit_power_law, scan_infidelity_vs_C
    from .tomography import logical_hadamard_channel, optimized_hadamard_prep

    grid = [float(v) for v in args.c_grid.split(",")]
    if len(grid) < 2:
        print("error: the cooperativity grid needs at least two points", file=sys.stderr)
        return EXIT_USAGE
    code = build_pi11()
    scan = scan_infidelity_vs_C(logical_plus(code), args.pulses, grid,
                                seed=args.seed, restarts=args.restarts)
    hadamard = None
    h_pref = h_expo = None
    if args.curves in ("both", "hadamard"):
        hadamard = []
        warm = ()
        for c in scan.cooperativities:
            prep = optimized_hadamard_prep(code, args.pulses, c,
                                           seed=args.seed + 1, restarts=args.restarts,
                                           extra_starts=warm)
            warm = (prep.sequence.pulses,)
            _, rec = logical_hadamard_channel(code, prep.sequence, c)
            hadamard.append(rec.process_infidelity)
        h_pref, h_expo = fit_power_law(scan.cooperativities, hadamard)

    csv_path = _resolve(args.output_csv)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["# piqec", __version__, "seed", args.seed, "pulses",
                         args.pulses, "restarts", args.restarts, "curves", args.curves])
        writer.writerow(["cooperativity", "prep_infidelity", "hadamard_infidelity"])
        for i, (c, p) in enumerate(zip(scan.cooperativities, scan.infidelities)):
            writer.writerow([c, p, hadamard[i] if hadamard else ""])
        writer.writerow([])
        writer.writerow(["fit", "prefactor", "exponent"])
        writer.writerow(["prep", scan.prefactor, scan.exponent])
        if hadamard:
            writer.writerow(["hadamard", h_pref, h_expo])

    payload = {
        "cooperativities": scan.cooperativities,
        "prep_infidelities": scan.infidelities,
        "hadamard_infidelities": hadamard,
        "prep_fit": {"prefactor": scan.prefactor, "exponent": scan.exponent},
        "hadamard_fit": ({"prefactor": h_pref, "exponent": h_expo}
                         if hadamard else None),
        "csv": csv_path,
    }
    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 4))
        ax.loglog(scan.cooperativities, scan.infidelities, "o-", label="state preparation")
        if hadamard:
            ax.loglog(scan.cooperativities, hadamard, "^-", label="logical Hadamard")
        ax.set_xlabel("cooperativity C")
        ax.set_ylabel("infidelity")
        ax.legend()
        fig.tight_layout()
        plot_path = _resolve(args.plot)
        fig.savefig(plot_path)
        payload["plot"] = plot_path
    _emit("sweep fig2", {"c_grid": grid, "pulses": args.pulses,
                         "restarts": args.restarts}, payload, seed=args.seed)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = _verification_suite()
    selected = {name: fn for name, fn in checks.items()
                if args.only is None or name == args.only}
    if not selected:
        print(f"error: unknown check {args.only!r}; choices: {sorted(checks)}",
              file=sys.stderr)
        return EXIT_USAGE
    results = []
    t_start = time.time()
    for name, fn in selected.items():
        t0 = time.time()
        try:
            ok, detail = fn()
        except PiqecError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"check": name, "passed": ok, "detail": detail,
                        "seconds": round(time.time() - t0, 3)})
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name}: {detail}", file=sys.stderr)
    wall = time.time() - t_start
    all_ok = all(r["passed"] for r in results)
    print(f"total wall clock: {wall:.1f} s", file=sys.stderr)
    _emit("verify", {"only": args.only}, {"results": results,
                                          "wall_seconds": wall, "passed": all_ok})
    return EXIT_OK if all_ok else EXIT_VERIFICATION


def _verification_suite() -> dict:
    def check_lemma():
        from piqec.codes import lemma_S

        count = 0
        for b in range(2, 7):
            for g in range(1, 2 * b):
                for m in range(1, 5):
                    for x in range(1, m + 1):
                        if lemma_S(b, g, m, x) != 0:
                            return False, f"nonzero at (b,g,m,x)=({b},{g},{m},{x})"
                        count += 1
        return True, f"{count} grid points all exactly zero"

    def check_cz():
        from piqec.codes import build_pi11
        from piqec.gpg import cz_three_pulse_phase, logical_cz, repetition_weight_model

        for wa in range(25):
            for wb in range(25):
                if abs(cz_three_pulse_phase(wa, wb) - (-1.0) ** (wa * wb)) > 1e-12:
                    return False, f"phase mismatch at ({wa},{wb})"
        _, rec = logical_cz(repetition_weight_model(3), build_pi11())
        if not rec.passed:
            return False, f"logical CZ residual {rec.residual:.2e}"
        return True, f"exact on weights <= 24; logical CZ residual {rec.residual:.2e}"

    def check_cnot():
        from piqec.codes import build_pi7
        from piqec.gpg import cnot_pi_control, cnot_stabilizer_control

        r1 = cnot_pi_control(build_pi7())
        r2 = cnot_stabilizer_control(None, build_pi7())
        ok = r1.passed and r2.passed
        return ok, (f"pi-control residual {r1.cnot_residual:.2e}, "
                    f"stab-control residual {r2.cnot_residual:.2e}")

    def check_tau60():
        from piqec.transversal import (phase_min_distance, search_super_golden_rational,
                                       tau60, tau60_tilde)

        d = phase_min_distance(tau60_tilde(np.pi * 167 / 704), tau60())
        if d >= 1e-6:
            return False, f"distance at 167/704 is {d:.3e}"
        approx = search_super_golden_rational(1e-6)
        if approx is None or approx.denominator > 704:
            return False, "convergent search failed"
        return True, (f"distance {d:.3e} at 167/704; search found "
                      f"{approx.numerator}/{approx.denominator}")

    def check_table1():
        from piqec.switching import gate_cost_table, roundtrip_cost

        expected = [(112, 83), (384, 139), (752, 195), (1472, 251), (2224, 307)]
        rows = gate_cost_table()
        got = [(r.lower_bound, r.upper_bound) for r in rows]
        if got != expected:
            return False, f"bounds {got} != {expected}"
        if roundtrip_cost(11) != 167:
            return False, "roundtrip formula broken"
        return True, "all five rows and the round-trip formula match"

    def check_switch():
        from piqec.codes import build_bg, build_pi7, build_pi11
        from piqec.switching import SwitchPlan, simulate_switch

        cases = [(build_pi11(), 3 * np.pi / 4), (build_pi7(), 2 * np.pi / 5),
                 (build_bg(2, 1), np.pi / 2), (build_bg(5, 3), np.pi / 5),
                 (build_bg(6, 1), np.pi / 6)]
        worst = 0.0
        for code, omega in cases:
            for circuit in ("swap", "cz"):
                out = simulate_switch(SwitchPlan(code, omega, circuit), [0.6, 0.8j])
                worst = max(worst, out.logical_deviation,
                            abs(out.ancilla_return_fidelity - 1))
                if not out.passed:
                    return False, f"{code.label}/{circuit} deviates by {worst:.2e}"
        return True, f"both circuits on five codes, worst residual {worst:.2e}"

    def check_kl():
        from piqec.codes import build_bgm, build_pi7, build_pi11, kl_check

        for code, t in ((build_pi7(), 1), (build_pi11(), 1), (build_bgm(6, 5, 2), 2)):
            report = kl_check(code, t)
            if not report.passed:
                return False, f"{code.label} t={t}: {report.verdict}"
        return True, "pi7, pi11 at t=1 and (6,5,2) at t=2 all certified"

    return {
        "lemma": check_lemma,
        "cz": check_cz,
        "cnot": check_cnot,
        "tau60": check_tau60,
        "table1": check_table1,
        "switch": check_switch,
        "kl": check_kl,
    }


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="piqec")
    sub = parser.add_subparsers(dest="command", required=True)

    p_codes = sub.add_parser("codes", help="build or certify a PI code")
    p_codes.add_argument("action", choices=("build", "certify"))
    p_codes.add_argument("--family", required=True)
    p_codes.add_argument("--b", type=int)
    p_codes.add_argument("--g", type=int)
    p_codes.add_argument("--m", type=int)
    p_codes.add_argument("--delta", type=int)
    p_codes.add_argument("--t", type=int, default=1)
    p_codes.add_argument("--output")
    p_codes.set_defaults(func=cmd_codes)

    p_tau = sub.add_parser("tau60-approx", help="rational approximation search")
    p_tau.add_argument("--epsilon", type=float, required=True)
    p_tau.add_argument("--max-denominator", type=int, default=10**4)
    p_tau.set_defaults(func=cmd_tau60)

    p_gpg = sub.add_parser("gpg", help="verify GPG-built entangling gates")
    p_gpg.add_argument("action", choices=("verify-cz", "verify-cnot"))
    p_gpg.add_argument("--direction", choices=("pi-control", "stab-control"),
                       default="pi-control")
    p_gpg.add_argument("--cutoff", type=int, default=64)
    p_gpg.set_defaults(func=cmd_gpg)

    p_tomo = sub.add_parser("tomography", help="logical Hadamard process fidelity")
    p_tomo.add_argument("action", choices=("hadamard",))
    p_tomo.add_argument("--code", default="pi11")
    p_tomo.add_argument("--cooperativity", type=float, required=True)
    p_tomo.add_argument("--pulses", type=int, default=10)
    p_tomo.add_argument("--restarts", type=int, default=4)
    p_tomo.add_argument("--seed", type=int, default=0)
    p_tomo.set_defaults(func=cmd_tomography)

    p_switch = sub.add_parser("switch", help="simulate code switching / print the cost table")
    p_switch.add_argument("action", choices=("run", "table1"))
    p_switch.add_argument("--code", default="pi11")
    p_switch.add_argument("--omega", type=float, default=3 * np.pi / 4)
    p_switch.add_argument("--circuit", choices=("swap", "cz"), default="swap")
    p_switch.add_argument("--input", default="1,0")
    p_switch.add_argument("--csv")
    p_switch.set_defaults(func=cmd_switch)

    p_sweep = sub.add_parser("sweep", help="cooperativity sweeps")
    p_sweep.add_argument("action", choices=("fig2",))
    p_sweep.add_argument("--c-grid", default="1e4,1e5,1e6,1e7,1e8")
    p_sweep.add_argument("--pulses", type=int, default=10)
    p_sweep.add_argument("--restarts", type=int, default=8)
    p_sweep.add_argument("--seed", type=int, default=42)
    p_sweep.add_argument("--output-csv", default="fig2.csv")
    p_sweep.add_argument("--curves", choices=("both", "prep", "hadamard"), default="both")
    p_sweep.add_argument("--plot")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the invariant verification suite")
    p_verify.add_argument("--only")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ResourceLimitError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except PiqecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
