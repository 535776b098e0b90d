#!/usr/bin/env python3
"""Serve the reference fixture over HTTP (handy for driving the web UI).

    python3 scripts/serve_fixture.py [--port 8400] [--data-dir DIR]

Prints ready-to-use credentials. State persists under --data-dir when
given, otherwise in a temporary directory that is discarded on exit.
"""

import argparse
import tempfile
from pathlib import Path

import uvicorn

from trustnet.fixtures import (
    ADMIN,
    ADMIN_CREDENTIAL,
    SEARCHER,
    SEARCHER_CREDENTIAL,
    build_inversion_data_dir,
)
from trustnet.service import create_service


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8400)
    parser.add_argument("--data-dir", default=None)
    args = parser.parse_args()

    if args.data_dir:
        data_dir = Path(args.data_dir)
        keep = True
    else:
        tmp = tempfile.TemporaryDirectory(prefix="trustnet-fixture-")
        data_dir = Path(tmp.name)
        keep = False

    app = build_inversion_data_dir(data_dir)
    print(f"fixture data dir: {data_dir}{' (temporary)' if not keep else ''}")
    print(f"normal user: {SEARCHER} / {SEARCHER_CREDENTIAL}")
    print(f"administrator: {ADMIN} / {ADMIN_CREDENTIAL}")
    print(f"try: curl -s -X POST http://{args.host}:{args.port}/login "
          f"-d '{{\"handle\":\"{SEARCHER}\",\"credential\":\"{SEARCHER_CREDENTIAL}\"}}'")
    uvicorn.run(create_service(app), host=args.host, port=args.port)


if __name__ == "__main__":
    main()
