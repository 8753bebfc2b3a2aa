# benchapp.py
import argparse
import os
import sys

from src.adapt.params import load_adapt_params
from src.bench.matrix import ExperimentConfig, ReportRow, ReportTable, aggregate, build_domain, run_matrix
from src.bench.methods import MethodId
from src.bench.online import TaskSettings, run_online_task
from src.bench.report import emit_report, load_results
from src.config import (
    DEFAULT_N_TL0,
    DEFAULT_REGRESSOR,
    EXPERIMENT_CONFIG_FILE,
    RESULTS_DIR,
    DATA_DIR,
)
from src.dataset.domain import damage_index_domain
from src.dataset.loaders import load_domain, save_domain
from src.dataset.schedule import online_split
from src.dataset.synthetic import add_noise
from src.errors import OfjdarError
from src.logger_config import logger, set_log_level


def cmd_generate(args) -> int:
    """Write every synthetic domain of a config to CSV."""
    config = ExperimentConfig.from_json(args.config)
    os.makedirs(args.out, exist_ok=True)
    for spec in config.domains:
        if "path" in spec:
            continue
        domain = build_domain(spec, args.seed, args.seed is not None and config.vary_domains_with_seed)
        path = os.path.join(args.out, f"{spec['name']}.csv")
        save_domain(domain, path)
        logger.info(f"[MAIN 7701:10] :: Wrote '{domain.name}' ({domain.n_samples} x {domain.n_features}) to {path}")
    return 0


def cmd_run(args) -> int:
    """Single online task on two CSV domains."""
    d_s = load_domain(args.source)
    d_t = load_domain(args.target)
    d_s = add_noise(d_s, args.noise, args.seed)
    d_t = add_noise(d_t, args.noise, args.seed + 1)
    if args.damage_index:
        d_s, d_t = damage_index_domain(d_s), damage_index_domain(d_t)

    method = MethodId.parse(args.method)
    settings = TaskSettings(params=load_adapt_params(method.value), regressor=args.regressor)
    schedule = online_split(d_t, args.n_tl0, args.delta_n)
    log = run_online_task(d_s, d_t, method, schedule, settings, args.seed)

    row = ReportRow(d_s.name, d_t.name, method.value, args.delta_n, args.noise, args.seed,
                    log.rmse(), log.status, log.reason, log)
    emit_report(ReportTable([row]), args.out)
    return 0 if log.ok else 1


def cmd_matrix(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    table = run_matrix(config, args.workers)
    emit_report(table, args.out)
    return 0 if table.all_ok else 1


def cmd_report(args) -> int:
    """Re-aggregate an existing results.csv into summary.csv."""
    table = load_results(args.results)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "summary.csv")
    aggregate(table).to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    logger.info(f"[MAIN 7704:10] :: Summary of {len(table)} rows written to {path}")
    return 0 if table.all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Online domain-adaptation benchmark for crack-length regression")
    parser.add_argument("--log-level", default=None, type=str.upper,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    generate = sub.add_parser("generate", help="write synthetic domains to CSV")
    generate.add_argument("--config", default=EXPERIMENT_CONFIG_FILE)
    generate.add_argument("--out", default=DATA_DIR)
    generate.add_argument("--seed", type=int, default=None, help="run seed for seed-varied domains")
    generate.set_defaults(func=cmd_generate)

    run = sub.add_parser("run", help="run one online task")
    run.add_argument("--source", required=True, help="source domain CSV")
    run.add_argument("--target", required=True, help="target domain CSV")
    run.add_argument("--method", required=True, choices=[m.value for m in MethodId], type=str.upper)
    run.add_argument("--delta-n", type=int, default=5)
    run.add_argument("--noise", type=float, default=0.0)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--n-tl0", type=int, default=DEFAULT_N_TL0)
    run.add_argument("--regressor", default=DEFAULT_REGRESSOR)
    run.add_argument("--damage-index", action="store_true")
    run.add_argument("--out", default=RESULTS_DIR)
    run.set_defaults(func=cmd_run)

    matrix = sub.add_parser("matrix", help="run an experiment matrix")
    matrix.add_argument("--config", default=EXPERIMENT_CONFIG_FILE)
    matrix.add_argument("--out", default=RESULTS_DIR)
    matrix.add_argument("--workers", type=int, default=None)
    matrix.set_defaults(func=cmd_matrix)

    report = sub.add_parser("report", help="re-aggregate an existing results.csv")
    report.add_argument("--results", required=True)
    report.add_argument("--out", default=RESULTS_DIR)
    report.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_log_level(args.log_level)
    try:
        return args.func(args)
    except (OfjdarError, OSError) as e:
        logger.error(f"[MAIN 7700:90] :: {args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
# End of Main Script
