"""
nettmle - targeted estimation of interventional means under network autoregression

Usage:
    nettmle simulate [--config FILE] [--out DIR] [--workers N]
    nettmle estimate --data CSV --edges CSV [--config FILE] [--out DIR]
    nettmle oracle [--config FILE]
    nettmle selftest
    nettmle log [FILE]

Exit codes: 0 success, 1 usage or config error, 2 data error, 3 numerical failure.
"""

import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path

from . import __version__
from .config import EstimateConfig, StudyConfig
from .errors import ConfigError, NetTMLEError
from .harness import compute_truth, run_estimate, run_study, write_report
from .harness.study import network_for
from .logger import RunLogger
from .schema import EstimateResult, MetricsTable
from .utils import calculate_display_width, format_value, render_table

DEFAULT_STUDY_CONFIG = "config-example.yaml"
DEFAULT_ESTIMATE_CONFIG = "estimate-example.yaml"


# ANSI color codes
class Colors:
    """Terminal color definitions"""

    RESET = "\033[0m"
    BOLD = "\033[1m"
    DIM = "\033[2m"

    RED = "\033[31m"
    GREEN = "\033[32m"
    YELLOW = "\033[33m"

    BRIGHT_CYAN = "\033[96m"
    BRIGHT_WHITE = "\033[97m"
    BRIGHT_YELLOW = "\033[93m"


def get_log_directory() -> Path:
    """Get the log directory path."""
    return Path.home() / ".nettmle" / "log"


def show_log_directory() -> None:
    """List the ten most recent run logs."""
    log_dir = get_log_directory()

    print(f"\n{Colors.BRIGHT_CYAN}Log Directory: {log_dir}{Colors.RESET}")

    if not log_dir.exists() or not log_dir.is_dir():
        print(f"{Colors.RED}Log directory does not exist: {log_dir}{Colors.RESET}\n")
        return

    log_files = list(log_dir.glob("*.log"))
    if not log_files:
        print(f"{Colors.YELLOW}No log files found in directory.{Colors.RESET}\n")
        return

    # newest first
    log_files.sort(key=lambda x: x.stat().st_mtime, reverse=True)

    print(f"{Colors.DIM}{'─' * 60}{Colors.RESET}")
    print(f"{Colors.BOLD}{Colors.BRIGHT_YELLOW}Available Log Files (newest first):{Colors.RESET}")

    for i, log_file in enumerate(log_files[:10], 1):
        mtime = datetime.fromtimestamp(log_file.stat().st_mtime)
        size = log_file.stat().st_size
        size_str = f"{size:,}" if size < 1024 else f"{size / 1024:.1f}K"
        print(f"  {Colors.GREEN}{i:2d}.{Colors.RESET} {Colors.BRIGHT_WHITE}{log_file.name}{Colors.RESET}")
        print(f"      {Colors.DIM}Modified: {mtime.strftime('%Y-%m-%d %H:%M:%S')}, Size: {size_str}{Colors.RESET}")

    if len(log_files) > 10:
        print(f"  {Colors.DIM}... and {len(log_files) - 10} more files{Colors.RESET}")

    print(f"{Colors.DIM}{'─' * 60}{Colors.RESET}\n")


def read_log_file(filename: str) -> int:
    """Print one run log; returns the exit code."""
    log_file = get_log_directory() / filename

    if not log_file.exists() or not log_file.is_file():
        print(f"\n{Colors.RED}Log file not found: {log_file}{Colors.RESET}\n")
        return 1

    print(f"\n{Colors.BRIGHT_CYAN}Reading: {log_file}{Colors.RESET}")
    print(f"{Colors.DIM}{'─' * 80}{Colors.RESET}")
    print(log_file.read_text(encoding="utf-8"))
    print(f"{Colors.DIM}{'─' * 80}{Colors.RESET}\n")
    return 0


def print_banner(title: str):
    """Print a boxed title line"""
    BOX_WIDTH = 58
    text = f"{Colors.BOLD}{title}{Colors.RESET}"
    total_padding = max(0, BOX_WIDTH - calculate_display_width(text))
    left_padding = total_padding // 2
    right_padding = total_padding - left_padding

    print()
    print(f"{Colors.BOLD}{Colors.BRIGHT_CYAN}╔{'═' * BOX_WIDTH}╗{Colors.RESET}")
    print(
        f"{Colors.BOLD}{Colors.BRIGHT_CYAN}║{Colors.RESET}{' ' * left_padding}{text}{' ' * right_padding}"
        f"{Colors.BOLD}{Colors.BRIGHT_CYAN}║{Colors.RESET}"
    )
    print(f"{Colors.BOLD}{Colors.BRIGHT_CYAN}╚{'═' * BOX_WIDTH}╝{Colors.RESET}")
    print()


def print_metrics(metrics: MetricsTable):
    print(f"{Colors.DIM}psi_true = {metrics.psi_true:.4f} (MC SE {metrics.psi_true_mc_se:.1e}){Colors.RESET}\n")
    rows = [
        [
            row.method,
            format_value(row.bias),
            format_value(row.se),
            format_value(None if row.cp is None else 100 * row.cp, 1),
            format_value(row.mean_se),
            format_value(row.runtime_s, 2),
            f"{row.n_ok}/{row.n_ok + row.n_failed}",
        ]
        for row in metrics.rows
    ]
    print(render_table(["method", "bias", "se", "cp%", "mean_se", "runtime_s", "ok"], rows))
    for warning in metrics.warnings:
        print(f"{Colors.YELLOW}warning: {warning}{Colors.RESET}")
    print()


def print_estimates(result: EstimateResult):
    report = result.ingest
    print(
        f"{Colors.DIM}{report.n_nodes} nodes, {report.n_edges} edges"
        f" ({len(report.dropped_isolated)} isolated dropped){Colors.RESET}\n"
    )
    for name, estimate in result.policies.items():
        print(f"{Colors.BOLD}{name}{Colors.RESET} {Colors.DIM}{estimate.policy}{Colors.RESET}")
        rows = [
            [
                method,
                format_value(res.psi_hat),
                format_value(res.se),
                f"[{format_value(res.ci_lo)}, {format_value(res.ci_hi)}]",
                format_value(estimate.contrasts.get(method)),
                format_value(res.rho_hat0),
            ]
            for method, res in estimate.methods.items()
        ]
        print(render_table(["method", "psi_hat", "se", "ci", "vs observed", "rho_hat0"], rows))
        print()


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{Colors.RED}error: {message}{Colors.RESET}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="nettmle",
        description="Targeted estimation of interventional means under network autoregression",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  nettmle simulate --config study.yaml --out results/    # Monte Carlo study
  nettmle estimate --data nodes.csv --edges edges.csv     # Real-data estimates
  nettmle oracle --config study.yaml                      # Ground truth only
  nettmle log                                             # Recent run logs
        """,
    )
    parser.add_argument("--version", "-v", action="version", version=f"nettmle {__version__}")
    parser.add_argument("--verbose", action="store_true", help="Print library log messages")

    subparsers = parser.add_subparsers(dest="command", required=True, help="Available commands")

    simulate = subparsers.add_parser("simulate", help="Run a Monte Carlo study")
    simulate.add_argument("--config", "-c", default=DEFAULT_STUDY_CONFIG, help="Study config (YAML)")
    simulate.add_argument("--out", "-o", default=None, help="Report directory (default: output.dir)")
    simulate.add_argument("--workers", "-j", type=int, default=None, help="Parallel replications")

    estimate = subparsers.add_parser("estimate", help="Estimate on real data")
    estimate.add_argument("--data", required=True, help="Node CSV: id,y,z,x1,...,xp")
    estimate.add_argument("--edges", required=True, help="Edge CSV: i,j (ids from the node CSV)")
    estimate.add_argument("--config", "-c", default=DEFAULT_ESTIMATE_CONFIG, help="Estimate config (YAML)")
    estimate.add_argument("--out", "-o", default=None, help="Report directory (default: output.dir)")

    oracle = subparsers.add_parser("oracle", help="Monte Carlo ground truth of a study config")
    oracle.add_argument("--config", "-c", default=DEFAULT_STUDY_CONFIG, help="Study config (YAML)")

    subparsers.add_parser("selftest", help="Run the quick invariant suite")

    log_parser = subparsers.add_parser("log", help="Show log directory or read log files")
    log_parser.add_argument(
        "filename",
        nargs="?",
        default=None,
        help="Log filename to read (optional, shows directory if omitted)",
    )
    return parser


def _load(config_cls, name: str):
    path = config_cls.resolve_path(name)
    try:
        return config_cls.from_yaml(path)
    except FileNotFoundError as e:
        raise ConfigError(str(e)) from e


def _run_logger(config) -> RunLogger:
    return RunLogger(config.output.log_dir)


def cmd_simulate(args) -> int:
    config = _load(StudyConfig, args.config)
    run_logger = _run_logger(config)
    run_logger.start_new_run("simulate")
    run_logger.log_config(config)
    try:
        print_banner(f"Study: {config.replications} replications, N={config.sim.n_nodes}, rho0={config.sim.rho0}")
        result = run_study(config, workers=args.workers, run_logger=run_logger)
        paths = write_report(result, args.out or config.output.dir)
    finally:
        run_logger.finish()
    print_metrics(result.metrics)
    for path in paths:
        print(f"{Colors.GREEN}wrote{Colors.RESET} {path}")
    print(f"{Colors.DIM}log: {run_logger.get_log_file_path()}{Colors.RESET}")
    return 0


def cmd_estimate(args) -> int:
    config = _load(EstimateConfig, args.config)
    run_logger = _run_logger(config)
    run_logger.start_new_run("estimate")
    run_logger.log_config(config)
    try:
        result = run_estimate(config, args.data, args.edges, run_logger=run_logger)
        paths = write_report(result, args.out or config.output.dir)
    finally:
        run_logger.finish()
    print_banner("Estimates")
    print_estimates(result)
    for path in paths:
        print(f"{Colors.GREEN}wrote{Colors.RESET} {path}")
    return 0


def cmd_oracle(args) -> int:
    config = _load(StudyConfig, args.config)
    graph = network_for(config, 0)
    psi, mc_se = compute_truth(config, graph)
    print(f"network: {graph.n_nodes} nodes, {graph.n_edges} edges ({config.network.kind})")
    print(f"psi_true = {psi:.6f}  (MC SE {mc_se:.2e}, n_mc = {config.oracle_n_mc})")
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    failures = 0
    for check in run_selftest():
        mark = f"{Colors.GREEN}ok  {Colors.RESET}" if check.passed else f"{Colors.RED}FAIL{Colors.RESET}"
        failures += not check.passed
        detail = f" {Colors.DIM}{check.detail}{Colors.RESET}" if check.detail else ""
        print(f"  {mark} {check.name}{detail}")
    print()
    if failures:
        print(f"{Colors.RED}{failures} check(s) failed{Colors.RESET}")
        return 1
    print(f"{Colors.GREEN}all checks passed{Colors.RESET}")
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "oracle": cmd_oracle,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    """Main entry point for CLI"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    if args.command == "log":
        if args.filename:
            return read_log_file(args.filename)
        show_log_directory()
        return 0

    try:
        return COMMANDS[args.command](args)
    except NetTMLEError as e:
        print(f"{Colors.RED}{type(e).__name__}: {e}{Colors.RESET}", file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        print(f"\n{Colors.YELLOW}Interrupted{Colors.RESET}", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
