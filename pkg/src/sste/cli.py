"""Command-line entry point.

Subcommands: ``validate`` (schema-check a dataset), ``synth`` (generate a
synthetic corpus + covering word vectors), ``featurize`` (emit a feature
matrix CSV), ``train`` / ``score`` (fit one classifier and apply it for
registration-time screening), and ``experiment`` (run one of the named
evaluation protocols into a reproducible output directory).

Option precedence for ``experiment``: command-line flags beat the JSON
config file, which beats built-in defaults; the effective configuration is
echoed into the run manifest. Output directories are named by the hash of
that configuration, and partially written runs are removed on failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import shutil
import sys
from pathlib import Path

import numpy as np

from .classifiers import TrainConfig, build_classifier, model_from_dict, model_to_dict
from .embeddings import (
    ENDPOINT_ENV_VAR,
    RemoteEmbeddingProvider,
    StaticEmbeddingProvider,
    load_embedding_table,
)
from .experiments import (
    DEFAULT_ABLATIONS,
    DEFAULT_SWEEP,
    EXPERIMENT_IDS,
    ExperimentConfig,
    NamedProvider,
    curve_csv_text,
    run_experiment,
)
from .featurize import (
    FEATURE_FAMILIES,
    FeaturizationMode,
    NUMERIC_FEATURE_NAMES,
    featurize_profiles,
)
from .profiles import Label, Section, parse_dataset
from .synth import CorpusSpec, spec_from_dict, write_corpus

BUNDLE_FORMAT = "sste-train-bundle"


def _add_provider_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--embeddings",
        action="append",
        default=None,
        metavar="VEC",
        help="static word-vector file (repeatable; provider named by file stem)",
    )
    parser.add_argument(
        "--remote",
        action="append",
        default=None,
        metavar="MODEL",
        help="contextual model served by the embedding sidecar (repeatable)",
    )
    parser.add_argument(
        "--endpoint",
        default=None,
        help=f"embedding service URL (default: ${ENDPOINT_ENV_VAR})",
    )


def _build_providers(args) -> list[NamedProvider]:
    providers: list[NamedProvider] = []
    for path in args.embeddings or []:
        table = load_embedding_table(path)
        providers.append(NamedProvider(Path(path).stem, StaticEmbeddingProvider(table)))
    for model in args.remote or []:
        providers.append(
            NamedProvider(model, RemoteEmbeddingProvider(args.endpoint, model=model))
        )
    if not providers:
        raise SystemExit("no embedding provider: pass --embeddings and/or --remote")
    return providers


def _fake_probability(model, X) -> np.ndarray:
    if hasattr(model, "predict_proba"):
        return model.predict_proba(X)
    if hasattr(model, "vote_fractions"):
        return model.vote_fractions(X)
    # Margin squashed through a logistic; monotone but uncalibrated.
    return 1.0 / (1.0 + np.exp(-model.decision_function(X)))


def cmd_validate(args) -> int:
    try:
        dataset = parse_dataset(args.dataset)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if len(dataset) == 0:
        print("error: empty dataset", file=sys.stderr)
        return 1
    counts = dataset.label_counts
    summary = " ".join(f"{label.value}:{counts[label]}" for label in Label)
    print(f"{len(dataset)} profiles, {summary}, 0 errors")
    return 0


def cmd_synth(args) -> int:
    if args.spec:
        spec = spec_from_dict(json.loads(Path(args.spec).read_text(encoding="utf-8")))
    else:
        spec = CorpusSpec()
    overrides = {}
    for name in ("seed", "sigma", "dim"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    for flag, field_name in (("llp", "n_llp"), ("flp", "n_flp"), ("clp", "n_clp")):
        value = getattr(args, flag)
        if value is not None:
            overrides[field_name] = value
    if overrides:
        from dataclasses import replace

        spec = replace(spec, **overrides)
    dataset_path, vectors_path = write_corpus(spec, args.out, stem=args.stem)
    print(f"wrote {dataset_path}")
    print(f"wrote {vectors_path}")
    return 0


def cmd_featurize(args) -> int:
    dataset = parse_dataset(args.dataset)
    providers = _build_providers(args) if args.family != "numeric" else []
    provider = providers[0].provider if providers else None
    mode = FeaturizationMode(args.mode)
    result = featurize_profiles(
        dataset.profiles, provider, mode, args.family, jobs=args.jobs
    )
    if args.family == "numeric":
        mode_label = "numeric"
        columns = list(NUMERIC_FEATURE_NAMES)
    elif args.family == "combined":
        mode_label = f"combined:{mode.value}"
        columns = [f"f{i}" for i in range(provider.dim)] + list(NUMERIC_FEATURE_NAMES)
    else:
        mode_label = mode.value
        columns = [f"f{i}" for i in range(provider.dim)]

    out = Path(args.out)
    with out.open("w", encoding="utf-8") as handle:
        width = result.X.shape[1] if result.X.size else len(columns)
        header = ",".join(["id", "label", "mode"] + [f"f{i}" for i in range(width)])
        handle.write(header + "\n")
        for profile_id, label, row in zip(result.ids, result.labels, result.X):
            values = ",".join(repr(v) for v in row.tolist())
            handle.write(f"{profile_id},{label.value},{mode_label},{values}\n")
    schema = {
        "family": args.family,
        "mode": mode.value,
        "columns": columns,
        "numeric_feature_order": list(NUMERIC_FEATURE_NAMES),
        "excluded_ids": list(result.excluded_ids),
    }
    schema_path = out.with_suffix(out.suffix + ".schema.json")
    schema_path.write_text(json.dumps(schema, indent=2, sort_keys=True), encoding="utf-8")
    print(f"wrote {out} ({len(result.ids)} rows, {len(result.excluded_ids)} excluded)")
    return 0


def cmd_train(args) -> int:
    dataset = parse_dataset(args.dataset)
    providers = _build_providers(args) if args.family != "numeric" else []
    provider = providers[0].provider if providers else None
    mode = FeaturizationMode(args.mode)
    result = featurize_profiles(
        dataset.profiles, provider, mode, args.family, jobs=args.jobs
    )
    y = np.array([0 if label is Label.LLP else 1 for label in result.labels])
    config = TrainConfig(seed=args.seed)
    model = build_classifier(args.algorithm, config).fit(result.X, y)
    bundle = {
        "format": BUNDLE_FORMAT,
        "version": 1,
        "algorithm": args.algorithm,
        "family": args.family,
        "mode": mode.value,
        "provider": (
            {"name": providers[0].name, **vars(provider.describe())} if provider else None
        ),
        "model": model_to_dict(model),
    }
    Path(args.out).write_text(json.dumps(bundle), encoding="utf-8")
    print(f"wrote {args.out} (trained on {len(result.ids)} profiles, "
          f"{len(result.excluded_ids)} excluded)")
    return 0


def cmd_score(args) -> int:
    bundle = json.loads(Path(args.model).read_text(encoding="utf-8"))
    if bundle.get("format") != BUNDLE_FORMAT:
        print("error: not a trained model bundle", file=sys.stderr)
        return 1
    model = model_from_dict(bundle["model"])
    dataset = parse_dataset(args.dataset)
    providers = _build_providers(args) if bundle["family"] != "numeric" else []
    provider = providers[0].provider if providers else None
    result = featurize_profiles(
        dataset.profiles,
        provider,
        FeaturizationMode(bundle["mode"]),
        bundle["family"],
        jobs=args.jobs,
    )
    probabilities = _fake_probability(model, result.X)
    labels = (probabilities > 0.5).astype(int)
    with Path(args.out).open("w", encoding="utf-8") as handle:
        handle.write("id,fake_probability,label\n")
        for profile_id, probability, label in zip(result.ids, probabilities, labels):
            word = "fake" if label == 1 else "legit"
            handle.write(f"{profile_id},{probability!r},{word}\n")
        for profile_id in result.excluded_ids:
            handle.write(f"{profile_id},,excluded\n")
    print(f"wrote {args.out} ({len(result.ids)} scored, {len(result.excluded_ids)} excluded)")
    return 0


_EXPERIMENT_DEFAULTS = {
    "seed": 0,
    "scale": 1.0,
    "sweep": list(DEFAULT_SWEEP),
    "ablate": [section.value for section in DEFAULT_ABLATIONS],
    "jobs": os.cpu_count() or 1,
}


def _effective_experiment_config(args) -> dict:
    effective = dict(_EXPERIMENT_DEFAULTS)
    if args.config:
        effective.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
    for key in ("seed", "scale", "jobs"):
        value = getattr(args, key)
        if value is not None:
            effective[key] = value
    if args.sweep is not None:
        effective["sweep"] = [int(v) for v in args.sweep.split(",")]
    if args.ablate is not None:
        effective["ablate"] = [v.strip() for v in args.ablate.split(",")]
    effective["experiment"] = args.name
    effective["dataset"] = args.dataset
    effective["embeddings"] = list(args.embeddings or [])
    effective["remote"] = list(args.remote or [])
    return effective


def cmd_experiment(args) -> int:
    effective = _effective_experiment_config(args)
    dataset = parse_dataset(args.dataset)
    providers = _build_providers(args)
    # jobs is an execution knob: outputs are identical regardless, so it
    # stays out of the run identity and the echoed config.
    jobs = int(effective.pop("jobs"))
    config = ExperimentConfig(
        seed=int(effective["seed"]),
        scale=float(effective["scale"]),
        sweep=tuple(int(v) for v in effective["sweep"]),
        ablate=tuple(Section(v) for v in effective["ablate"]),
        jobs=jobs,
    )
    config_hash = hashlib.sha256(
        json.dumps(effective, sort_keys=True).encode("utf-8")
    ).hexdigest()[:12]
    run_dir = Path(args.out) / config_hash
    if run_dir.exists():
        shutil.rmtree(run_dir)
    run_dir.mkdir(parents=True)
    try:
        result = run_experiment(args.name, dataset, providers, config)
        manifest = dict(result.manifest)
        manifest["config"] = effective
        (run_dir / "metrics.csv").write_text(result.table.to_csv_text(), encoding="utf-8")
        (run_dir / "manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        if result.curve is not None:
            (run_dir / "curve.csv").write_text(curve_csv_text(result.curve), encoding="utf-8")
    except Exception as exc:
        shutil.rmtree(run_dir, ignore_errors=True)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(run_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sste",
        description="Detect fake and LLM-generated profiles from registration-time text.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="schema-check a dataset file")
    p_validate.add_argument("dataset", help="JSON-lines dataset file")
    p_validate.set_defaults(func=cmd_validate)

    p_synth = sub.add_parser("synth", help="generate a synthetic corpus")
    p_synth.add_argument("spec", nargs="?", default=None, help="corpus spec JSON file")
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.add_argument("--stem", default="corpus", help="output file stem")
    p_synth.add_argument("--seed", type=int, default=None, help="override spec seed")
    p_synth.add_argument("--sigma", type=float, default=None, help="override class-signal strength")
    p_synth.add_argument("--dim", type=int, default=None, help="override embedding dimension")
    p_synth.add_argument("--llp", type=int, default=None, help="override legitimate profile count")
    p_synth.add_argument("--flp", type=int, default=None, help="override fake profile count")
    p_synth.add_argument("--clp", type=int, default=None, help="override LLM-generated profile count")
    p_synth.set_defaults(func=cmd_synth)

    p_feat = sub.add_parser("featurize", help="emit a feature matrix CSV")
    p_feat.add_argument("--dataset", required=True)
    p_feat.add_argument("--mode", default="sste", choices=[m.value for m in FeaturizationMode])
    p_feat.add_argument("--family", default="embedding", choices=list(FEATURE_FAMILIES))
    p_feat.add_argument("--out", required=True, help="output CSV path")
    p_feat.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="featurization workers")
    _add_provider_flags(p_feat)
    p_feat.set_defaults(func=cmd_featurize)

    p_train = sub.add_parser("train", help="fit one classifier on a dataset")
    p_train.add_argument("--dataset", required=True)
    p_train.add_argument("--algorithm", default="lr",
                         choices=["lr", "svm_linear", "svm_poly", "svm_rbf", "rf"])
    p_train.add_argument("--mode", default="sste", choices=[m.value for m in FeaturizationMode])
    p_train.add_argument("--family", default="embedding", choices=list(FEATURE_FAMILIES))
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--out", required=True, help="model bundle path")
    p_train.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="featurization workers")
    _add_provider_flags(p_train)
    p_train.set_defaults(func=cmd_train)

    p_score = sub.add_parser("score", help="apply a trained model to a dataset")
    p_score.add_argument("--model", required=True, help="model bundle from train")
    p_score.add_argument("--dataset", required=True)
    p_score.add_argument("--out", required=True, help="output CSV path")
    p_score.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="featurization workers")
    _add_provider_flags(p_score)
    p_score.set_defaults(func=cmd_score)

    p_exp = sub.add_parser("experiment", help="run a named evaluation protocol")
    p_exp.add_argument("name", choices=list(EXPERIMENT_IDS))
    p_exp.add_argument("--dataset", required=True)
    p_exp.add_argument("--out", required=True, help="parent output directory")
    p_exp.add_argument("--config", default=None, help="JSON config file (flags win)")
    p_exp.add_argument("--seed", type=int, default=None)
    p_exp.add_argument("--scale", type=float, default=None,
                       help="shrink the protocol counts for desk-scale runs")
    p_exp.add_argument("--sweep", default=None,
                       help="comma-separated sample counts (fig4)")
    p_exp.add_argument("--ablate", default=None,
                       help="comma-separated sections to leave out (fig5)")
    p_exp.add_argument("--jobs", type=int, default=None, help="featurization workers")
    _add_provider_flags(p_exp)
    p_exp.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "endpoint", None) is None and hasattr(args, "endpoint"):
        args.endpoint = os.environ.get(ENDPOINT_ENV_VAR)
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
