#!/usr/bin/env python3
"""
纠缠量子深度学习模拟器
GHZ 态测距 + 量子多层前馈网络 + 有限差分训练，复现鸢尾花分类实验
"""
import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

import numpy as np

# 添加项目路径
sys.path.insert(0, str(Path(__file__).parent))

from config import (
    DEFAULT_THRESHOLDS, EXIT_DATA, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE,
    REPRODUCE_INIT_SEEDS, SPECIES,
)
from dataset import label_state, load_iris, preprocess, split
from evaluation import projection_data, recognition_report, resource_comparison, resource_estimate
from quantum.errors import ConfigError, DataError, NumericalError, SchemaMismatch
from quantum.measurement import measure, prepare_label
from quantum.network import NetworkConfig, blocks_for_layers, output_state
from quantum.state import AmplitudeVector, check_normalized, check_same_dim, distance_squared, ghz_init, set_input
from training import initial_network, train
from utils.logging_setup import setup_logging
from utils.manifest import RunManifest, build_manifest
from utils.output import (
    atomic_write_text, csv_text, curve_rows, dumps_json, read_json, write_csv, write_json,
)

logger = logging.getLogger("main")

CURVE_COLUMNS = ("iteration", "acc_mse")
PROJECTION_COLUMNS = ("x1", "x2", "x3", "x4", "class", "source")

ASSUMPTIONS = [
    "重复训练之间只有初始化种子不同",
    "精确模式使用结果概率，不做有限次测量抽样",
    "cut 理解为减去常数: SL−4, SW−3, PL−4, PW 不变",
]


def _projection_tuples(rows):
    return [(r.x1, r.x2, r.x3, r.x4, r.cls, r.source) for r in rows]


def _label_projections():
    return projection_data([(label_state(name), name) for name in SPECIES], source="label")


# ---------------------------------------------------------------- train

def run_training(manifest: RunManifest, init_seed: int, progress: bool = True):
    """划分 → 随机初始化 → 训练 → 测试集识别率；返回 (报告字典, 曲线 CSV 文本, 划分结果, 训练后网络)"""
    samples = load_iris(manifest.iris_path)
    dataset = split(samples, manifest.split_seed)
    train_cfg = manifest.training_config(init_seed)
    initial = initial_network(4, blocks_for_layers(manifest.layers), train_cfg)

    trained, trace = train(initial, dataset.train, train_cfg, progress=progress)
    recognition = recognition_report(trained, dataset.test, DEFAULT_THRESHOLDS)

    run_id = manifest.run_id(init_seed)
    curve = trace.acc_mse_per_iteration
    report = {
        "run_id": run_id,
        "command": "train",
        "seeds": {
            "split_seed": manifest.split_seed,
            "init_seed": init_seed,
            "shot_seed": manifest.shot_seed if manifest.shots is not None else None,
        },
        "config": {
            "dim": trained.dim,
            "layers": manifest.layers,
            "n_uu_layers": trained.n_uu_layers,
            "n_params": trained.n_params,
            "params": trace.best_params,
            "initial_params": trace.initial_params,
        },
        "hyperparameters": {
            "epsilon": train_cfg.epsilon,
            "learning_rate": train_cfg.learning_rate,
            "iterations": train_cfg.iterations,
            "shots": manifest.shots,
            "estimated_basis": manifest.estimated_basis,
        },
        "acc_mse": {
            "initial": curve[0],
            "final": curve[-1],
            "best": trace.best_acc_mse,
            "best_iteration": trace.best_iteration,
        },
        "collapsed_samples": {
            "per_iteration_max": max(trace.collapsed_sample_counts),
            "final": trace.collapsed_sample_counts[-1],
            "perturbation_collapses": trace.perturbation_collapses,
            "perturbation_mismatches": trace.perturbation_mismatches,
        },
        "dataset": {
            "iris_path": str(manifest.iris_path),
            "train_size": len(dataset.train),
            "test_size": len(dataset.test),
            "train_indices": dataset.train_indices,
            "test_indices": dataset.test_indices,
        },
        "recognition": {
            "thresholds": list(recognition.thresholds),
            "rate_per_threshold": list(recognition.rate_per_threshold),
            "test_size": len(recognition.per_sample),
            "collapsed": recognition.collapsed_count,
        },
        "resources": resource_comparison(trained.dim),
        "assumptions": ASSUMPTIONS,
    }
    return report, csv_text(curve_rows(curve), CURVE_COLUMNS), dataset, trained


def cmd_train(manifest: RunManifest, progress: bool = True) -> int:
    report, curve_csv, _, _ = run_training(manifest, manifest.init_seed, progress)
    run_id = report["run_id"]
    # 全部结果在内存中生成后再写盘
    atomic_write_text(manifest.output_dir / f"run-{run_id}-curve.csv", curve_csv)
    report_path = write_json(manifest.output_dir / f"run-{run_id}-report.json", report)
    acc = report["acc_mse"]
    print(f"训练完成: AccEk {acc['initial']:.6f} → 最小 {acc['best']:.6f} (第 {acc['best_iteration']} 次迭代)")
    rates = ", ".join(f"{r:.2f}" for r in report["recognition"]["rate_per_threshold"])
    print(f"测试集识别率: [{rates}]")
    print(f"报告: {report_path}")
    return EXIT_OK


# ---------------------------------------------------------------- test

def network_from_report(report: dict, manifest: RunManifest) -> NetworkConfig:
    try:
        cfg = report["config"]
        dim, layers, params = int(cfg["dim"]), int(cfg["layers"]), cfg["params"]
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaMismatch(f"报告缺少网络配置字段: {e}") from None
    if dim != 4:
        raise SchemaMismatch(f"报告维度 {dim} 与鸢尾花数据维度 4 不符")
    if layers != manifest.layers:
        raise SchemaMismatch(f"报告层数 {layers} 与 --layers {manifest.layers} 不符")
    return NetworkConfig.from_params(dim, blocks_for_layers(layers), params)


def evaluate_network(config: NetworkConfig, test, run_id: str):
    """识别率报告 + 投影数据（输入、输出、标签）"""
    recognition = recognition_report(config, test, DEFAULT_THRESHOLDS)
    rows = projection_data([(s.vector, s.species) for s in test], source="input")
    outputs = []
    for s, rec in zip(test, recognition.per_sample):
        if not rec.collapsed:
            outputs.append((output_state(config, s.vector), s.species))
    rows += projection_data(outputs, source="output")
    rows += _label_projections()
    result = {"run_id": run_id, "command": "test", **recognition.to_dict()}
    return result, csv_text(_projection_tuples(rows), PROJECTION_COLUMNS)


def cmd_test(manifest: RunManifest, report_path: Path) -> int:
    try:
        report = read_json(report_path)
    except json.JSONDecodeError as e:
        raise SchemaMismatch(f"报告不是合法 JSON: {e}") from None
    config = network_from_report(report, manifest)
    split_seed = report.get("seeds", {}).get("split_seed", manifest.split_seed)
    dataset = split(load_iris(manifest.iris_path), split_seed)
    run_id = report.get("run_id", manifest.run_id())

    result, projections_csv = evaluate_network(config, dataset.test, run_id)
    atomic_write_text(manifest.output_dir / f"run-{run_id}-projections.csv", projections_csv)
    write_json(manifest.output_dir / f"run-{run_id}-recognition.json", result)

    for threshold, rate in zip(result["thresholds"], result["rate_per_threshold"]):
        print(f"阈值 {threshold:.1f}: 识别率 {rate:.3f}")
    print(f"argmax 准确率 (补充指标): {result['argmax_accuracy']:.3f}")
    return EXIT_OK


# ---------------------------------------------------------------- distance

def read_vector(path: Path) -> AmplitudeVector:
    """每行一个数值"""
    try:
        values = np.loadtxt(path, dtype=float, ndmin=1)
    except ValueError as e:
        raise DataError(f"无法解析向量文件 {path}: {e}") from None
    return AmplitudeVector(values)


def cmd_distance(vector_path: Path, label_path: Path, manifest: RunManifest) -> int:
    k = read_vector(vector_path)
    v = read_vector(label_path)
    check_same_dim(k, v)
    check_normalized(k, v)

    state = prepare_label(set_input(ghz_init(k.n_qubits), k), v)
    estimate = measure(state, manifest.shot_plan)
    direct = distance_squared(k, v)

    mode = "精确" if estimate.exact else f"{manifest.shots} 次测量"
    print(f"模式: {mode}")
    print(f"γ² = {estimate.gamma_sq:.15g}, λ² = {estimate.lambda_sq:.15g}, P(φ) = {estimate.p_phi:.15g}")
    print(f"E (GHZ 测量) = {estimate.mse:.15g}")
    print(f"E (直接计算) = {direct:.15g}")
    return EXIT_OK


# ---------------------------------------------------------------- resources / preprocess

def cmd_resources(dim: int, with_classical: bool = False) -> int:
    if with_classical:
        print(dumps_json(resource_comparison(dim)), end="")
    else:
        print(json.dumps(resource_estimate(dim).to_dict()))
    return EXIT_OK


def cmd_preprocess(manifest: RunManifest) -> int:
    """全部 150 条样本预处理后的投影数据 + 三个标签态"""
    samples = load_iris(manifest.iris_path)
    rows = projection_data([(preprocess(s), s.species) for s in samples], source="input")
    rows += _label_projections()
    path = write_csv(manifest.output_dir / "projections.csv", _projection_tuples(rows), PROJECTION_COLUMNS)
    print(f"投影数据: {path} ({len(samples)} 条样本)")
    return EXIT_OK


# ---------------------------------------------------------------- reproduce

def cmd_reproduce(manifest: RunManifest, progress: bool = True) -> int:
    """3 层、4 层网络各训练三次并测试"""
    runs = []
    for layers in (3, 4):
        layer_manifest = replace(manifest, layers=layers)
        for init_seed in REPRODUCE_INIT_SEEDS:
            logger.info("开始训练: %d 层, 初始化种子 %d", layers, init_seed)
            report, curve_csv, dataset, trained = run_training(layer_manifest, init_seed, progress)
            run_id = report["run_id"]
            result, projections_csv = evaluate_network(trained, dataset.test, run_id)
            out = manifest.output_dir
            atomic_write_text(out / f"run-{run_id}-curve.csv", curve_csv)
            write_json(out / f"run-{run_id}-report.json", report)
            atomic_write_text(out / f"run-{run_id}-projections.csv", projections_csv)
            write_json(out / f"run-{run_id}-recognition.json", result)
            runs.append({
                "run_id": run_id,
                "layers": layers,
                "init_seed": init_seed,
                **{f"{k}_acc_mse": v for k, v in report["acc_mse"].items() if k != "best_iteration"},
                "best_iteration": report["acc_mse"]["best_iteration"],
                "rate_per_threshold": result["rate_per_threshold"],
            })
    summary = {"split_seed": manifest.split_seed, "thresholds": list(DEFAULT_THRESHOLDS), "runs": runs}
    path = write_json(manifest.output_dir / "summary.json", summary)
    for run in runs:
        rates = ", ".join(f"{r:.2f}" for r in run["rate_per_threshold"])
        print(f"{run['run_id']}: AccEk {run['initial_acc_mse']:.4f} → {run['final_acc_mse']:.4f}, 识别率 [{rates}]")
    print(f"汇总: {path}")
    return EXIT_OK


# ---------------------------------------------------------------- 入口

class _ArgumentParser(argparse.ArgumentParser):
    """用法错误退出码为 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: 错误: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--iris", dest="iris_path", type=Path, help="鸢尾花数据文件")
    common.add_argument("--layers", type=int, choices=(3, 4), help="神经元层数 (默认: 3)")
    common.add_argument("--iterations", type=int, help="迭代次数 (默认: 5000)")
    common.add_argument("--epsilon", type=float, help="有限差分步长 ε，rad (默认: 0.001)")
    common.add_argument("--lr", dest="learning_rate", type=float, help="学习率 k，rad (默认: 0.05)")
    common.add_argument("--split-seed", type=int, help="训练/测试划分种子")
    common.add_argument("--init-seed", type=int, help="参数初始化种子")
    common.add_argument("--shots", type=int, help="每次测量的重复次数 (省略为精确模式)")
    common.add_argument("--shot-seed", type=int, help="测量抽样种子")
    common.add_argument("--estimated-basis", action="store_true", default=None,
                        help="第二次测量基使用估计的 γ̂、λ̂")
    common.add_argument("-o", "--out", dest="output_dir", type=Path, help="输出目录")
    common.add_argument("--manifest", type=Path, help="JSON 运行清单（覆盖命令行参数）")
    common.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    common.add_argument("-q", "--quiet", action="store_true", help="只输出警告并关闭进度条")

    parser = _ArgumentParser(
        description="纠缠量子深度学习模拟器 - GHZ 态测距与 QMFNN 训练",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  %(prog)s train --layers 3                      # 按默认超参数训练 3 层网络
  %(prog)s train --layers 4 --iterations 100     # 短训练
  %(prog)s test --layers 3 --report runs/run-3layer-split0-init1-exact-report.json
  %(prog)s distance k.txt v.txt                  # 精确模式计算 E
  %(prog)s distance k.txt v.txt --shots 10000 --shot-seed 7
  %(prog)s resources 1024                        # 资源估算
  %(prog)s preprocess                            # 输出预处理后的投影数据
  %(prog)s reproduce                             # 3 层、4 层各训练三次并测试
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    sub.add_parser("train", parents=[common], help="训练网络")
    p_test = sub.add_parser("test", parents=[common], help="用测试集评估训练结果")
    p_test.add_argument("--report", type=Path, required=True, help="train 生成的报告 JSON")
    p_dist = sub.add_parser("distance", parents=[common], help="GHZ 测量求两个单位向量的 MSE")
    p_dist.add_argument("vector_file", type=Path, help="未知向量，每行一个数值")
    p_dist.add_argument("label_file", type=Path, help="已知向量，每行一个数值")
    p_res = sub.add_parser("resources", parents=[common], help="资源估算")
    p_res.add_argument("dim", type=int, help="向量维度 N")
    p_res.add_argument("--with-classical", action="store_true", help="同时输出经典运算量")
    sub.add_parser("preprocess", parents=[common], help="输出预处理后的投影数据")
    sub.add_parser("reproduce", parents=[common], help="复现三次训练 + 测试")
    return parser


MANIFEST_FIELDS = ("iris_path", "layers", "iterations", "epsilon", "learning_rate",
                   "split_seed", "init_seed", "shots", "shot_seed", "estimated_basis",
                   "output_dir")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(verbose=args.verbose, quiet=args.quiet)
    progress = not args.quiet

    try:
        values = {name: getattr(args, name) for name in MANIFEST_FIELDS}
        manifest = build_manifest(args.command, values, args.manifest)

        if args.command == "train":
            return cmd_train(manifest, progress)
        if args.command == "test":
            return cmd_test(manifest, args.report)
        if args.command == "distance":
            return cmd_distance(args.vector_file, args.label_file, manifest)
        if args.command == "resources":
            return cmd_resources(args.dim, args.with_classical)
        if args.command == "preprocess":
            return cmd_preprocess(manifest)
        if args.command == "reproduce":
            return cmd_reproduce(manifest, progress)
    except ConfigError as e:
        logger.error("参数错误: %s", e)
        return EXIT_USAGE
    except (DataError, OSError) as e:
        logger.error("数据错误: %s", e)
        return EXIT_DATA
    except NumericalError as e:
        logger.error("数值错误: %s", e)
        return EXIT_NUMERICAL
    parser.print_help()
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
