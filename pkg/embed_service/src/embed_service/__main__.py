"""Run the sidecar: ``python -m embed_service --model mini-2l-64d --port 8901``."""

from __future__ import annotations

import argparse

import uvicorn

from .app import ServiceSettings, create_app
from .model import DEFAULT_MODEL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="embed-service", description=__doc__)
    parser.add_argument("--model", default=DEFAULT_MODEL,
                        help="model name to serve (mini-<layers>l-<dim>d)")
    parser.add_argument("--layer", type=int, default=-1,
                        help="hidden layer supplying token vectors (default: last)")
    parser.add_argument("--max-tokens", type=int, default=512,
                        help="per-sequence token limit (413 beyond it)")
    parser.add_argument("--batch-limit", type=int, default=64,
                        help="sequences per request limit (413 beyond it)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8901)
    return parser


def main(argv=None) -> None:
    args = build_parser().parse_args(argv)
    settings = ServiceSettings(
        model=args.model,
        layer=args.layer,
        max_tokens=args.max_tokens,
        batch_limit=args.batch_limit,
    )
    uvicorn.run(create_app(settings), host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
