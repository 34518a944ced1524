"""
Silent Speech Decoder - Main Application Script

This script wires the pipeline into reproducible experiments: it simulates
labeled EMG sessions, ingests raw packet captures, extracts features, runs the
three evaluation strategies (session-specific 7-fold, global stratified 5-fold,
leave-one-session-out) and renders the resulting reports.

Every command writes its outputs plus a run_manifest.json into --out, and all
randomness flows from the --seed flag (or the seeds in the config file).

Usage:
    python silentSpeechDecoder.py simulate --out DIR [--condition vocalized|silent] [--oracle UV] [--emit-capture]
    python silentSpeechDecoder.py ingest --capture FILE --schedule FILE --out DIR
    python silentSpeechDecoder.py featurize --store DIR --out DIR
    python silentSpeechDecoder.py evaluate --store DIR --scheme session|global|loso --out DIR
    python silentSpeechDecoder.py report --report FILE --out DIR

Example:
    python silentSpeechDecoder.py simulate --seed 7 --out runs/vocalized
    python silentSpeechDecoder.py evaluate --store runs/vocalized --scheme global --seed 7 --threads 4 --out runs/eval
"""
import argparse
import dataclasses
import json
import os
import sys

from emgcore.configs import AcquisitionConfig, PipelineConfig, ProtocolConfig, from_dict, to_dict
from emgcore.errors import DecoderError
from emgcore.validation import validate_dataset
from features import feature_names, featurize_dataset
from ingest import ingest_packet_stream, load_schedule, segment_utterances, validate_schedule
from learn import ForestParams, Scheme, evaluate
from reporting import render_text, summary_lines, write_markdown_report
from storage import (STORAGE_HANDLERS, RunManifest, is_oracle_store, load_dataset, load_report_json, save_session,
                     write_run_manifest)
from synth import DATASET_GENERATORS, SynthConfig, emit_capture
from utils import get_logger, load_app_config, set_verbosity

DEFAULT_APP_CONFIG = "silent_speech_config.json"
CAPTURE_DIR = "captures"

logger = get_logger("cli")


@dataclasses.dataclass(frozen=True)
class ResolvedConfig:
    acquisition: AcquisitionConfig
    protocol: ProtocolConfig
    pipeline: PipelineConfig
    synth: SynthConfig
    forest: ForestParams

    def to_dict(self):
        return {name: to_dict(getattr(self, name)) for name in ("acquisition", "protocol", "pipeline", "synth", "forest")}


def resolve_config(args):
    """
    Loads the application config and applies command line overrides.

    Args:
        args: Parsed arguments (config, seed and the per-command flags)

    Returns:
        ResolvedConfig
    """
    settings = load_app_config(args.config)
    synth = from_dict(SynthConfig, settings["synth"])
    forest = from_dict(ForestParams, settings["forest"])
    pipeline = from_dict(PipelineConfig, settings["pipeline"])
    if args.seed is not None:
        synth = dataclasses.replace(synth, seed=args.seed)
        forest = dataclasses.replace(forest, seed=args.seed)
    if getattr(args, "condition", None):
        synth = SynthConfig.for_condition(args.condition, synth.seed,
                                          baseline_uv=synth.baseline_uv,
                                          powerline_amp_uv=synth.powerline_amp_uv,
                                          repositioning_strength=synth.repositioning_strength,
                                          class_templates=synth.class_templates)
    if getattr(args, "trees", None):
        forest = dataclasses.replace(forest, n_trees=args.trees)
    if getattr(args, "no_filters", False):
        pipeline = dataclasses.replace(pipeline, apply_filters=False)
    return ResolvedConfig(
        acquisition=from_dict(AcquisitionConfig, settings["acquisition"]),
        protocol=from_dict(ProtocolConfig, settings["protocol"]),
        pipeline=pipeline,
        synth=synth,
        forest=forest,
    )


def new_manifest(command, argv, config, seeds, inputs, out_dir):
    return RunManifest(command=command, argv=list(argv), configs=config.to_dict(), seeds=seeds,
                       inputs=inputs, out_dir=out_dir)


def cmd_simulate(args, argv):
    """Generates a synthetic (or oracle) dataset and persists it as a session store."""
    config = resolve_config(args)
    manifest = new_manifest("simulate", argv, config, {"synth": config.synth.seed}, {}, args.out)
    if args.oracle is not None:
        dataset = DATASET_GENERATORS["oracle"](config.protocol, config.acquisition, args.oracle,
                                               seed=config.synth.seed, threads=args.threads)
    else:
        dataset = DATASET_GENERATORS["synthetic"](config.protocol, config.acquisition, config.synth,
                                                  threads=args.threads)
    written = STORAGE_HANDLERS["store"](dataset, args.out, oracle=args.oracle is not None)

    for session_id in dataset.session_ids():
        n_batches = len(dataset.batch_ids(session_id))
        n_utterances = len(dataset.indices_where(session_id=session_id))
        logger.info(f"Session {session_id}: {n_batches} batch(es), {n_utterances} utterance(s)")
    logger.info(f"Simulated {len(dataset)} utterance(s) into {args.out}")

    if args.emit_capture:
        capture_dir = os.path.join(args.out, CAPTURE_DIR)
        os.makedirs(capture_dir, exist_ok=True)
        for session_id in dataset.session_ids():
            data, schedule = emit_capture(dataset, session_id, config.acquisition, config.protocol,
                                          seed=config.synth.seed, rest_noise_uv=config.synth.baseline_uv)
            capture_path = os.path.join(capture_dir, f"{session_id}.emgcap")
            schedule_path = os.path.join(capture_dir, f"{session_id}_schedule.json")
            with open(capture_path, "wb") as f:
                f.write(data)
            with open(schedule_path, "w", encoding="utf-8") as f:
                json.dump(schedule, f, indent=2)
            written += [capture_path, schedule_path]
            logger.info(f"Capture of session {session_id}: {len(data)} byte(s) written to {capture_path}")

    manifest.record_artifacts(written)
    write_run_manifest(manifest)
    return 0


def cmd_ingest(args, argv):
    """Parses a packet capture, segments it with its schedule and writes the session store."""
    config = resolve_config(args)
    manifest = new_manifest("ingest", argv, config, {}, {"capture": args.capture, "schedule": args.schedule}, args.out)
    session_id, condition, schedule = load_schedule(args.schedule)
    if not schedule:
        logger.warning(f"Schedule {args.schedule} has no events; writing an empty store")
    validate_schedule(schedule, config.protocol, config.acquisition.sample_rate)

    with open(args.capture, "rb") as f:
        data = f.read()
    stream, gaps = ingest_packet_stream(data, config.acquisition)
    logger.info(f"Gap report: {len(gaps)} gap(s), {sum(g.lost for g in gaps)} frame(s) lost "
                f"in {stream.n_samples} sample(s)")
    for gap in gaps:
        logger.info(f"  after seq {gap.after_seq}: {gap.lost} frame(s) lost at sample {gap.start_sample}")

    utterances = segment_utterances(stream, schedule, config.protocol, config.acquisition, session_id, gaps)
    written = save_session(args.out, session_id, utterances, condition, config.acquisition, config.protocol)
    logger.info(f"Ingested {len(utterances)} utterance(s) of session {session_id}")
    manifest.record_artifacts(written)
    write_run_manifest(manifest)
    return 0


def _load_checked(store):
    dataset = load_dataset(store)
    violations = validate_dataset(dataset)
    for violation in violations:
        logger.warning(f"Dataset check: {violation}")
    logger.info(f"Loaded {len(dataset)} utterance(s) from {store} ({dataset.condition.value})")
    return dataset


def _pipeline_for_store(store, config, manifest):
    """
    The pipeline config to run on a store; filters are switched off for oracle stores.

    The oracle classes differ only by a DC offset, which the high-pass stage removes.
    """
    pipeline = config.pipeline
    if pipeline.apply_filters and is_oracle_store(store):
        logger.warning(f"{store} holds the oracle dataset; running with filters off (as with --no-filters)")
        pipeline = dataclasses.replace(pipeline, apply_filters=False)
        manifest.configs["pipeline"]["apply_filters"] = False
    return pipeline


def cmd_featurize(args, argv):
    """Writes the feature/label CSV of a session store."""
    config = resolve_config(args)
    manifest = new_manifest("featurize", argv, config, {}, {"store": args.store}, args.out)
    dataset = _load_checked(args.store)
    pipeline = _pipeline_for_store(args.store, config, manifest)
    X, _ = featurize_dataset(dataset, pipeline, threads=args.threads)
    os.makedirs(args.out, exist_ok=True)
    path = STORAGE_HANDLERS["features"](os.path.join(args.out, "features.csv"), dataset, X,
                                        feature_names(dataset.acquisition.n_active, config.pipeline))
    manifest.record_artifacts([path])
    write_run_manifest(manifest)
    return 0


def cmd_evaluate(args, argv):
    """Preprocesses, featurizes and evaluates a store with one scheme; writes JSON, CSV and Markdown reports."""
    config = resolve_config(args)
    scheme = Scheme.from_name(args.scheme)
    manifest = new_manifest("evaluate", argv, config, {"forest": config.forest.seed, "folds": config.forest.seed},
                            {"store": args.store}, args.out)
    dataset = _load_checked(args.store)
    pipeline = _pipeline_for_store(args.store, config, manifest)
    report = evaluate(dataset, scheme, config.forest, pipeline, seed=config.forest.seed, threads=args.threads)
    for line in summary_lines(report):
        logger.info(line)

    written = [STORAGE_HANDLERS["json"](report, args.out)]
    written += STORAGE_HANDLERS["csv"](report, args.out)
    written.append(write_markdown_report(report, args.out))
    manifest.record_artifacts(written)
    write_run_manifest(manifest)
    return 0


def cmd_report(args, argv):
    """Renders a saved JSON report to the console and to Markdown."""
    config = resolve_config(args)
    manifest = new_manifest("report", argv, config, {}, {"report": args.report}, args.out)
    report = load_report_json(args.report)
    print(render_text(report), end="")
    path = write_markdown_report(report, args.out)
    manifest.record_artifacts([path])
    write_run_manifest(manifest)
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "ingest": cmd_ingest,
    "featurize": cmd_featurize,
    "evaluate": cmd_evaluate,
    "report": cmd_report,
}


def build_parser():
    parser = argparse.ArgumentParser(description="Silent Speech Decoder")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=DEFAULT_APP_CONFIG, help="Application config JSON (created if missing)")
    common.add_argument("--seed", type=int, default=None, help="Seed overriding the config seeds (unsigned 64-bit)")
    common.add_argument("--threads", type=int, default=1, help="Worker threads; outputs do not depend on it")
    common.add_argument("--out", required=True, help="Output directory")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    commands = parser.add_subparsers(dest="command", required=True)
    simulate = commands.add_parser("simulate", parents=[common], help="Generate a synthetic session store")
    simulate.add_argument("--condition", choices=["vocalized", "silent"], help="Use the condition's default SNR")
    simulate.add_argument("--oracle", type=float, metavar="SEPARATION_UV",
                          help="Generate the separable oracle dataset instead")
    simulate.add_argument("--emit-capture", action="store_true", help="Also write packet captures and schedules")

    ingest = commands.add_parser("ingest", parents=[common], help="Parse a packet capture into a session store")
    ingest.add_argument("--capture", required=True, help="Raw packet capture file")
    ingest.add_argument("--schedule", required=True, help="Prompt schedule JSON")

    featurize = commands.add_parser("featurize", parents=[common], help="Export the feature/label CSV")
    featurize.add_argument("--store", required=True, help="Session store directory")
    featurize.add_argument("--no-filters", action="store_true", help="Skip the high-pass and notch filters")

    evaluate_cmd = commands.add_parser("evaluate", parents=[common], help="Run one evaluation scheme")
    evaluate_cmd.add_argument("--store", required=True, help="Session store directory")
    evaluate_cmd.add_argument("--scheme", choices=[s.value for s in Scheme], default=Scheme.GLOBAL_5FOLD.value)
    evaluate_cmd.add_argument("--trees", type=int, help="Number of trees (overrides the config)")
    evaluate_cmd.add_argument("--no-filters", action="store_true", help="Skip the high-pass and notch filters")

    report = commands.add_parser("report", parents=[common], help="Render a saved JSON report")
    report.add_argument("--report", required=True, help="Report JSON written by evaluate")
    return parser


def main(argv=None):
    """
    Main entry point for the Silent Speech Decoder.

    Returns:
        Process exit code: 0 on success, 1 on any pipeline or I/O error
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    set_verbosity(args.verbose)
    if args.threads < 1:
        logger.error(f"--threads must be >= 1, got {args.threads}")
        return 1
    try:
        return COMMANDS[args.command](args, argv)
    except (DecoderError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
