"""Command line driver: solve, spectrum, converge, vacuum, oracle-check.

Exit codes: 0 success, 2 configuration error, 3 convergence failure,
4 structural anomaly (missing zero mode or unstable spectrum), 5 numerical
error, 6 truncation warning from the vacuum command.

Only the standard library is imported at module level so that BDGZ_THREADS
can cap the BLAS/FFT thread pools before numpy is first loaded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_STRUCTURAL = 4
EXIT_NUMERICAL = 5
EXIT_TRUNCATION = 6

_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def _cap_threads():
    """Honor BDGZ_THREADS; effective only if numpy is not yet imported."""
    val = os.environ.get("BDGZ_THREADS")
    if val:
        for var in _THREAD_VARS:
            os.environ.setdefault(var, val)


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _emit_table(columns, rows, out_path, fmt, extra=None):
    """Write rows as CSV text or a JSON document to a file or stdout."""
    if fmt == "json":
        doc = {"columns": list(columns), "rows": [list(r) for r in rows]}
        if extra:
            doc.update(extra)
        text = json.dumps(doc, indent=1, sort_keys=True, default=float)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _write_json(doc, path):
    text = json.dumps(doc, indent=1, sort_keys=True, default=float)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_state(args, config):
    from . import snapshot

    path = args.state or config.state_path
    if not os.path.exists(path):
        from .errors import ConfigurationError

        raise ConfigurationError(f"state snapshot not found: {path} (run 'bdgz solve' first)")
    return snapshot.load_state(path)


def _zero_mode_doc(zm):
    return {
        "omega0_residual": zm.omega0_residual,
        "mass_mu": zm.mass_mu,
        "pattern_deviation": zm.pattern_deviation,
        "p_eta_norm": zm.p_eta_norm,
        "q_residual": zm.q_residual,
        "pairing_residual": zm.pairing_residual,
        "p_re": zm.p.real.tolist(),
        "p_im": zm.p.imag.tolist(),
        "q_re": zm.q.real.tolist(),
        "q_im": zm.q.imag.tolist(),
    }


def cmd_solve(args):
    from . import snapshot
    from .config import load_config
    from .gp import solve_ground_state

    config = load_config(args.config)
    state = solve_ground_state(config.params, config.grid, config.solver)
    path = args.state or config.state_path
    snapshot.save_state(state, path)
    print(f"mu0 = {state.mu0:.12e}")
    print(f"residual = {state.residual:.3e}")
    print(f"iterations = {state.iterations}")
    print(f"state written to {path}")
    return EXIT_OK


def _debug_spectrum(args):
    import numpy as np

    from .bogoliubov import diagonalize
    from .quadform import matrix_from_json

    with open(args.debug_matrix, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    a = np.atleast_2d(matrix_from_json(doc["a"]))
    b = np.atleast_2d(matrix_from_json(doc["b"]))
    f = a.shape[0]
    m = np.block([[a, b], [b.conj(), a.conj()]])
    eta = np.diag(np.concatenate([np.ones(f), -np.ones(f)]))
    spec = diagonalize(m, eta)
    rows = [(i + 1, w, nu) for i, (w, nu) in enumerate(zip(spec.omega, spec.eta_norms))]
    extra = {
        "stable": spec.stable,
        "unstable_modes": [[lam.real, lam.imag] for lam in spec.unstable_modes],
    }
    _emit_table(("mode", "omega", "eta_norm"), rows, args.out, args.format, extra)
    if not spec.stable:
        print(f"stable = false ({len(spec.unstable_modes)} complex frequencies)", file=sys.stderr)
        return EXIT_STRUCTURAL
    print("stable = true")
    return EXIT_OK


def cmd_spectrum(args):
    if args.debug_matrix:
        return _debug_spectrum(args)

    from .config import load_config
    from .pipeline import excitation_spectrum

    config = load_config(args.config)
    state = _load_state(args, config)
    result = excitation_spectrum(
        state, config.f, config.zero_tol_factor, config.pattern_tol
    )
    spec = result.spectrum
    rows = [(i + 1, w, nu) for i, (w, nu) in enumerate(zip(spec.omega, spec.eta_norms))]
    zero_doc = _zero_mode_doc(result.zero_mode) if result.zero_mode else None
    extra = {
        "stable": spec.stable,
        "zero_mode": zero_doc,
        "zero_mode_error": result.zero_mode_error,
        "unstable_modes": [[lam.real, lam.imag] for lam in spec.unstable_modes],
    }
    _emit_table(("mode", "omega", "eta_norm"), rows, args.out, args.format, extra)
    if args.format == "csv" and args.out:
        _write_json(
            {"zero_mode": zero_doc, "zero_mode_error": result.zero_mode_error},
            args.out + ".zero_mode.json",
        )

    status = EXIT_OK
    if not spec.stable:
        print(
            f"unstable spectrum: {len(spec.unstable_modes)} complex frequencies",
            file=sys.stderr,
        )
        status = EXIT_STRUCTURAL
    if result.zero_mode is None:
        print(f"zero mode not extracted: {result.zero_mode_error}", file=sys.stderr)
        status = EXIT_STRUCTURAL
    else:
        zm = result.zero_mode
        print(f"omega0 residual = {zm.omega0_residual:.3e}")
        print(f"collective mass mu = {zm.mass_mu:.12e}")
    return status


def _parse_f_list(text):
    from .errors import ConfigurationError

    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"bad --f-list {text!r}: {exc}") from exc
    if not values or any(v < 1 for v in values):
        raise ConfigurationError("--f-list needs positive integers")
    return values


def cmd_converge(args):
    from .config import load_config
    from .oracle import direct_bdg_solve
    from .pipeline import excitation_spectrum

    config = load_config(args.config)
    state = _load_state(args, config)
    f_values = _parse_f_list(args.f_list)
    reference = direct_bdg_solve(state)
    n_report = min(5, reference.size)

    rows = []
    deviations = []
    for f in f_values:
        spec = excitation_spectrum(state, f, config.zero_tol_factor).spectrum
        omega = spec.omega[spec.omega > spec.zero_tol][:n_report]
        devs = [
            abs(w - ref) / abs(ref) for w, ref in zip(omega, reference[: omega.size])
        ]
        max_dev = max(devs) if devs else float("nan")
        deviations.append(max_dev)
        rows.append((f, *omega, max_dev))
    columns = ("f", *[f"omega_{i+1}" for i in range(n_report)], "max_rel_dev")
    _emit_table(columns, rows, args.out, args.format)
    trend = all(b <= a * (1 + 1e-12) for a, b in zip(deviations, deviations[1:]))
    print(f"deviation non-increasing with f: {'yes' if trend else 'no'}")
    return EXIT_OK


def cmd_vacuum(args):
    import numpy as np

    from .config import load_config
    from .errors import ConfigurationError, TruncationWarning
    from .oracle import analytic_amplitudes
    from .pipeline import excitation_spectrum
    from .vacuum import annihilation_residual, pair_vacuum, zero_mode_vacuum

    config = load_config(args.config)
    state = _load_state(args, config)
    if state.params.trap.kind != "zero" or state.grid.boundary != "periodic":
        raise ConfigurationError(
            "the vacuum report needs a homogeneous run (zero trap, periodic box); "
            "paired closed-form vacua do not exist for trapped states"
        )
    gn = state.params.gn / state.grid.volume
    result = excitation_spectrum(state, config.f, config.zero_tol_factor)
    kvecs = result.basis.wavevectors
    if kvecs is None:
        raise ConfigurationError("basis carries no plane-wave labels")

    rows = []
    total = 0.0
    for k in kvecs:
        first = next((c for c in k if abs(c) > 1e-12), 0.0)
        if first <= 0:  # one row per (k, -k) pair
            continue
        eps = 0.5 * float(np.dot(k, k))
        pv = pair_vacuum(eps, gn, config.n_max)
        x_amp, y_amp = analytic_amplitudes(k, gn)
        res = annihilation_residual(pv.coefficients, x_amp, y_amp)
        total += 2.0 * pv.depletion
        rows.append((*k, eps, pv.ratio_r, pv.depletion, res))
    kcols = tuple(f"k{ax}" for ax in "xyz"[: state.grid.dimension])
    _emit_table(
        (*kcols, "epsilon", "ratio_r", "depletion", "residual"),
        rows,
        args.out,
        args.format,
    )

    truncated = False
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        zmv = zero_mode_vacuum(state.params.n0, config.n_max)
        truncated = any(issubclass(w.category, TruncationWarning) for w in caught)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    zero_doc = {
        "n0": zmv.n0,
        "n_max": zmv.n_max,
        "phase_convention": zmv.phase_convention,
        "quadrature_residual": zmv.quadrature_residual,
        "delta_normalized": zmv.delta_normalized,
        "coefficients_re": zmv.coefficients.real.tolist(),
        "coefficients_im": zmv.coefficients.imag.tolist(),
        "partial_norms": zmv.partial_norms.tolist(),
    }
    _write_json(zero_doc, args.out + ".zero_mode.json" if args.out else None)
    print(f"total depletion (both pair members) = {total:.12e}")
    print(f"zero-mode quadrature residual = {zmv.quadrature_residual:.3e}")
    return EXIT_TRUNCATION if truncated else EXIT_OK


def cmd_oracle_check(args):
    import numpy as np

    from .config import load_config
    from .oracle import HomogeneousParams, direct_bdg_solve
    from .pipeline import excitation_spectrum

    config = load_config(args.config)
    state = _load_state(args, config)
    result = excitation_spectrum(state, config.f, config.zero_tol_factor)
    spec = result.spectrum
    omega = spec.omega[spec.omega > spec.zero_tol]

    homogeneous = state.params.trap.kind == "zero" and state.grid.boundary == "periodic"
    if homogeneous and result.basis.wavevectors is not None:
        hom = HomogeneousParams.from_state(state)
        eps = 0.5 * np.sum(result.basis.wavevectors**2, axis=1)
        ref = np.sort(np.sqrt((eps + hom.gn) ** 2 - hom.gn**2))
        ref = ref[ref > spec.zero_tol]
        label = "analytic"
    else:
        ref = direct_bdg_solve(state)[: omega.size]
        label = "direct"
    n = min(omega.size, ref.size)
    rows = [
        (i + 1, omega[i], ref[i], abs(omega[i] - ref[i]) / abs(ref[i]))
        for i in range(n)
    ]
    _emit_table(("mode", "omega_pipeline", f"omega_{label}", "rel_dev"), rows, args.out, args.format)
    max_dev = max((r[3] for r in rows), default=float("nan"))
    print(f"max relative deviation vs {label} oracle = {max_dev:.3e}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bdgz",
        description=(
            "Bogoliubov excitation spectra, zero mode, and approximate vacuum "
            "of a trapped condensate"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, state=True, table=True):
        p.add_argument("--config", required=True, help="TOML run configuration")
        if state:
            p.add_argument("--state", default=None, help="condensate snapshot path")
        if table:
            p.add_argument("--out", default=None, help="output file (default: stdout)")
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("solve", help="solve the ground state and write a snapshot")
    common(p, table=False)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("spectrum", help="excitation frequencies and zero mode")
    common(p)
    p.add_argument(
        "--debug-matrix",
        default=None,
        help="JSON file with explicit a/b matrices, bypassing the pipeline",
    )
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("converge", help="truncation scan against the direct solver")
    common(p)
    p.add_argument("--f-list", required=True, help="comma-separated truncation levels")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("vacuum", help="paired squeezed vacua and zero-mode vacuum")
    common(p)
    p.set_defaults(func=cmd_vacuum)

    p = sub.add_parser("oracle-check", help="compare the pipeline against its oracle")
    common(p)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    _cap_threads()
    args = build_parser().parse_args(argv)
    from .errors import (
        BdgzError,
        ConfigurationError,
        ConvergenceError,
        NumericalError,
        StructuralError,
    )

    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except StructuralError as exc:
        print(f"structural anomaly: {exc}", file=sys.stderr)
        return EXIT_STRUCTURAL
    except (NumericalError, BdgzError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
