"""
generate: schema -> skeleton -> header fill -> body fill -> validate, per table.
"""
import argparse
import logging
import shlex
import subprocess
from pathlib import Path
from typing import List, Optional

from tablesmith.commands.common import parse_range, validated, write_json
from tablesmith.core.errors import ConfigError, ProviderError
from tablesmith.llm.factory import build_content_provider, build_ranker, build_runner
from tablesmith.llm.template_provider import TemplateProvider
from tablesmith.schemas.generation import Complexity, GenerationRequest, TriState
from tablesmith.schemas.pipeline import PipelineConfig, ProviderKind, RankerKind
from tablesmith.schemas.table import AnnotationRecord, Language
from tablesmith.services.augment_service import augment_records
from tablesmith.services.checker_service import FillingChecker
from tablesmith.services.generator_service import GenerationOutcome, generate_batch
from tablesmith.services.manifest_service import write_manifest
from tablesmith.services.topic_memory import TopicMemory

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="Generate an annotated table manifest")
    parser.add_argument("--count", type=int, help="Number of tables")
    parser.add_argument("--complexity", choices=[c.value for c in Complexity])
    parser.add_argument("--colored", choices=[t.value for t in TriState])
    parser.add_argument("--lined", choices=[t.value for t in TriState])
    parser.add_argument("--rows", help="Inclusive row range LOW,HIGH (default 2,12, a local choice)")
    parser.add_argument("--cols", help="Inclusive column range LOW,HIGH (default 2,8, a local choice)")
    parser.add_argument("--domain")
    parser.add_argument("--lang", choices=[l.value for l in Language])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--provider", choices=[k.value for k in ProviderKind])
    parser.add_argument("--ranker", choices=[k.value for k in RankerKind])
    parser.add_argument("--max-fallback", type=int)
    parser.add_argument("--topic-memory", help="JSON file of used topics, updated after the run")
    parser.add_argument("--out", required=True, help="Manifest JSONL to write")
    parser.add_argument("--report", help="Batch report JSON (default: <out>.report.json)")
    parser.add_argument("--render-cmd", help="Shell command run per table; {html} and {id} are substituted")
    parser.set_defaults(handler=run)


def build_request(args: argparse.Namespace, config: PipelineConfig) -> GenerationRequest:
    """Config-file generation block, overridden by any flag given on the command line."""
    data = config.generation.model_dump()
    overrides = {
        "count": args.count,
        "complexity": args.complexity,
        "colored": args.colored,
        "lined": args.lined,
        "row_range": parse_range(args.rows),
        "col_range": parse_range(args.cols),
        "domain": args.domain,
        "language": args.lang,
        "seed": args.seed,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    return validated(GenerationRequest, data, "generation request")


def _write_outputs(outcome: GenerationOutcome, out: str, report_path: str) -> None:
    write_manifest(outcome.records, out)
    write_json(outcome.report, report_path)


def render_argv(command: str, html_path: Path, record_id: str) -> List[str]:
    """Argument vector of ``--render-cmd`` for one table."""
    try:
        return shlex.split(command.format(html=shlex.quote(str(html_path)), id=record_id))
    except (KeyError, IndexError, ValueError) as e:
        raise ConfigError(
            f"--render-cmd {command!r} is not a valid template, only {{html}} and {{id}} are substituted: {e}",
            render_cmd=command,
        )


def _render(records: List[AnnotationRecord], out: str, command: str) -> None:
    """Hand each table to an external renderer; failures are logged, never fatal."""
    html_dir = Path(out).parent / f"{Path(out).stem}_html"
    html_dir.mkdir(parents=True, exist_ok=True)
    for record in records:
        html_path = html_dir / f"{record.id}.html"
        html_path.write_text(record.html, encoding="utf-8")
        argv = render_argv(command, html_path, record.id)
        result = subprocess.run(argv, capture_output=True, text=True)
        if result.returncode != 0:
            logger.warning(f"Render command failed: id={record.id}, code={result.returncode}, stderr={result.stderr[:200]}")


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    request = build_request(args, config)
    if args.render_cmd:
        # Fail before generating anything
        render_argv(args.render_cmd, Path("table.html"), "table")
    provider_config = config.provider
    if args.provider:
        provider_config = provider_config.model_copy(update={"kind": ProviderKind(args.provider)})
    ranker_kind = RankerKind(args.ranker) if args.ranker else config.checker.ranker
    max_fallback = args.max_fallback if args.max_fallback is not None else config.checker.max_fallback

    runner = None
    if provider_config.kind == ProviderKind.http or ranker_kind == RankerKind.http:
        runner = build_runner(provider_config, config.paths.transcript_dir)
    infill = build_content_provider(provider_config, seed=request.seed, runner=runner)
    checker = FillingChecker(build_ranker(ranker_kind, provider_config, runner=runner), config.checker.min_overall)

    memory_path: Optional[str] = args.topic_memory or config.paths.topic_memory
    memory = TopicMemory.load(memory_path) if memory_path else TopicMemory()
    report_path = args.report or str(Path(args.out).with_suffix(".report.json"))

    logger.info(
        f"Generating tables: count={request.count}, complexity={request.complexity.value}, "
        f"provider={provider_config.kind.value}, ranker={ranker_kind.value}, seed={request.seed}"
    )
    try:
        outcome = generate_batch(request, infill, checker, max_fallback=max_fallback,
                                 workers=workers, topic_memory=memory)
    except ProviderError as e:
        if isinstance(e.partial, GenerationOutcome):
            _write_outputs(e.partial, args.out, report_path)
            logger.error(f"Provider failed, partial manifest written: records={len(e.partial.records)}")
        raise

    if isinstance(infill, TemplateProvider) and infill.used_fallback:
        logger.warning(f"Unknown domain served from the generic lexicon: domains={sorted(infill.fallback_domains)}")

    _write_outputs(outcome, args.out, report_path)
    if memory_path:
        memory.save(memory_path)

    if config.augmentation.enabled:
        seed = config.augmentation.seed if config.augmentation.seed is not None else request.seed
        augmented = augment_records(outcome.records, infill, seed=seed, domain=request.domain, workers=workers)
        write_manifest(augmented, str(Path(args.out).with_suffix(".augmented.jsonl")))

    if args.render_cmd:
        _render(outcome.records, args.out, args.render_cmd)

    print(f"produced={outcome.report.produced} failed={outcome.report.failed} "
          f"mean_iterations={outcome.report.mean_iterations:.2f}")
    return 1 if outcome.report.failed else 0
