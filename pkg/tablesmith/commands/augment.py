"""
augment: nine variants per record, four of them structurally transformed.
"""
import argparse
import logging

from tablesmith.llm.factory import build_content_provider
from tablesmith.schemas.pipeline import PipelineConfig, ProviderKind
from tablesmith.services.augment_service import augment_records
from tablesmith.services.manifest_service import load_manifest, write_manifest

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("augment", help="Fan every record out into filled and transformed variants")
    parser.add_argument("manifest")
    parser.add_argument("--out", required=True)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--provider", choices=[k.value for k in ProviderKind])
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    records = load_manifest(args.manifest)
    seed = args.seed if args.seed is not None else (config.augmentation.seed or 0)
    provider_config = config.provider
    if args.provider:
        provider_config = provider_config.model_copy(update={"kind": ProviderKind(args.provider)})
    provider = build_content_provider(provider_config, seed=seed, transcript_dir=config.paths.transcript_dir)

    augmented = augment_records(records, provider, seed=seed, domain=config.generation.domain, workers=workers)
    write_manifest(augmented, args.out)
    print(f"parents={len(records)} records={len(augmented)}")
    return 0
