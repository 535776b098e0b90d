"""Command-line client and operator tool.

Runs against a local data directory (in-process, no network) or a remote
HTTP endpoint; both modes emit byte-identical JSON for identical state.
Failures print a machine-readable JSON error on stderr and exit with a
per-kind code (see EXIT_CODES).
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import requests

from .app import App, AppConfig, canonical_json
from .errors import (
    ERROR_KINDS,
    ConnectivityError,
    TrustnetError,
    ValidationError,
)

EXIT_CODES = {
    "validation": 2,
    "authentication": 3,
    "authorization": 4,
    "not_found": 5,
    "conflict": 6,
    "connectivity": 7,
}


class LocalClient:
    """Drives an in-process App; the acting user comes from --user."""

    def __init__(self, app: App, user: str | None):
        self.app = app
        self._user = user

    @property
    def user(self) -> str:
        if not self._user:
            raise ValidationError("an acting user is required (--user or TRUSTNET_USER)")
        return self._user

    def set_trust(self, contact, value):
        return self.app.api_set_trust(self.user, contact, {"value": value})

    def get_trust(self, contact):
        return self.app.api_get_trust(self.user, contact)

    def set_topic_trust(self, contact, topic, value):
        return self.app.api_set_topic_trust(self.user, contact, topic, {"value": value})

    def get_topic_trust(self, contact, topic):
        return self.app.api_get_topic_trust(self.user, contact, topic)

    def experts(self, topic, threshold):
        return self.app.api_experts(self.user, topic, threshold)

    def search(self, params):
        return self.app.api_search(self.user, params)

    def ingest_posts(self, text):
        return self.app.api_ingest_posts(text)

    def ingest_events(self, text):
        return self.app.api_ingest_events(text)

    def get_coefficients(self):
        return self.app.api_get_coefficients(self.user)

    def set_coefficients(self, values):
        return self.app.api_set_coefficients(self.user, values)

    def quarantine_list(self):
        return self.app.api_quarantine_list(self.user)

    def quarantine_submit(self, body):
        return self.app.api_quarantine_submit(body)

    def quarantine_approve(self, candidate):
        return self.app.api_quarantine_approve(self.user, candidate)

    def quarantine_flag(self, candidate):
        return self.app.api_quarantine_flag(self.user, candidate)

    def forecast(self, stream):
        return self.app.api_forecast(stream)


class HttpClient:
    """Drives a remote service; the acting user comes from the session token."""

    def __init__(self, endpoint: str, token: str | None):
        self.endpoint = endpoint.rstrip("/")
        self.token = token
        self.http = requests.Session()

    def _call(self, method, path, json_body=None, text_body=None, params=None):
        headers = {}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        if text_body is not None:
            headers["Content-Type"] = "application/x-ndjson"
        try:
            response = self.http.request(
                method,
                self.endpoint + path,
                json=json_body,
                data=text_body.encode("utf-8") if text_body is not None else None,
                params=params,
                headers=headers,
                timeout=30,
            )
        except requests.RequestException as exc:
            raise ConnectivityError(f"cannot reach {self.endpoint}: {exc}") from None
        if response.status_code >= 400:
            try:
                error = response.json()["error"]
                cls = ERROR_KINDS.get(error["type"], TrustnetError)
                raise cls(error["message"])
            except (ValueError, KeyError):
                raise TrustnetError(
                    f"HTTP {response.status_code}: {response.text[:200]}"
                ) from None
        return response.json()

    def set_trust(self, contact, value):
        return self._call("PUT", f"/trust/{contact}", json_body={"value": value})

    def get_trust(self, contact):
        return self._call("GET", f"/trust/{contact}")

    def set_topic_trust(self, contact, topic, value):
        return self._call(
            "PUT", f"/topic-trust/{contact}/{topic}", json_body={"value": value}
        )

    def get_topic_trust(self, contact, topic):
        return self._call("GET", f"/topic-trust/{contact}/{topic}")

    def experts(self, topic, threshold):
        params = {"topic": topic}
        if threshold is not None:
            params["threshold"] = threshold
        return self._call("GET", "/experts", params=params)

    def search(self, params):
        return self._call("GET", "/search", params=params)

    def ingest_posts(self, text):
        return self._call("POST", "/ingest/posts", text_body=text)

    def ingest_events(self, text):
        return self._call("POST", "/ingest/events", text_body=text)

    def get_coefficients(self):
        return self._call("GET", "/admin/coefficients")

    def set_coefficients(self, values):
        return self._call("PUT", "/admin/coefficients", json_body=values)

    def quarantine_list(self):
        return self._call("GET", "/quarantine")

    def quarantine_submit(self, body):
        return self._call("POST", "/quarantine/submit", json_body=body)

    def quarantine_approve(self, candidate):
        return self._call("POST", f"/quarantine/{candidate}/approve")

    def quarantine_flag(self, candidate):
        return self._call("POST", f"/quarantine/{candidate}/flag")

    def forecast(self, stream):
        return self._call("GET", f"/forecast/{stream}")


class CliContext:
    def __init__(self, endpoint, data_dir, token, user, output, config: AppConfig):
        self.endpoint = endpoint
        self.data_dir = data_dir
        self.token = token
        self.user = user
        self.output = output
        self.config = config
        self._client = None

    def client(self):
        if self._client is None:
            if bool(self.endpoint) == bool(self.data_dir):
                raise ValidationError(
                    "exactly one of --endpoint or --data-dir must be given"
                )
            if self.endpoint:
                self._client = HttpClient(self.endpoint, self.token)
            else:
                self.config.data_dir = Path(self.data_dir)
                self._client = LocalClient(App(self.config), self.user)
        return self._client


def _emit(ctx_obj: CliContext, payload, render=None):
    if ctx_obj.output == "json" or render is None:
        click.echo(canonical_json(payload))
    else:
        click.echo(render(payload))


def _fail(exc: TrustnetError):
    click.echo(
        canonical_json({"error": {"type": exc.kind, "message": str(exc)}}),
        err=True,
    )
    sys.exit(EXIT_CODES.get(exc.kind, 1))


def _run(ctx_obj: CliContext, call, render=None):
    try:
        payload = call()
    except TrustnetError as exc:
        _fail(exc)
    _emit(ctx_obj, payload, render)


def _columns(rows):
    if not rows:
        return ""
    widths = [max(len(str(row[i])) for row in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(str(cell).ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in rows
    )


def _render_search(payload):
    header = f"total: {payload['total']}  page: {payload['page']}"
    rows = [("rank", "trust", "author", "created_at", "text")]
    rows += [
        (r["rank"], r["trust"], r["author"], r["created_at"], r["text"])
        for r in payload["results"]
    ]
    return header + "\n" + _columns(rows)


def _render_trust(payload):
    parts = [payload["contact"]]
    if "topic" in payload:
        parts.append(payload["topic"])
    parts.append(payload["value"])
    return "  ".join(parts)


def _render_experts(payload):
    if not payload["experts"]:
        return f"no experts for {payload['topic']} at threshold {payload['threshold']}"
    return "\n".join(payload["experts"])


def _render_coefficients(payload):
    return "\n".join(f"{name}={value}" for name, value in sorted(payload.items()))


def _render_ingest(payload):
    parts = [f"accepted: {payload['accepted']}"]
    if "duplicates" in payload:
        parts.append(f"duplicates: {payload['duplicates']}")
    parts.append(f"rejected: {len(payload['rejected'])}")
    lines = ["  ".join(parts)]
    lines += [f"line {r['line']}: {r['error']}" for r in payload["rejected"]]
    return "\n".join(lines)


def _render_record(payload):
    line = (
        f"{payload['candidate']}  {payload['state']}  "
        f"approvals={len(payload['approvals'])}  flags={len(payload['flags'])}"
    )
    if payload.get("notice"):
        line += f"  ({payload['notice']})"
    return line


def _render_records(payload):
    if not payload["records"]:
        return "no candidacies"
    return "\n".join(_render_record(record) for record in payload["records"])


def _render_forecast(payload):
    lines = [f"stream: {payload['stream']}  prediction: {payload['prediction']}"]
    lines += [f"  {name}: {value}" for name, value in sorted(payload["tau"].items())]
    return "\n".join(lines)


@click.group()
@click.option("--endpoint", envvar="TRUSTNET_ENDPOINT", help="Remote service URL.")
@click.option(
    "--data-dir",
    envvar="TRUSTNET_DATA_DIR",
    type=click.Path(file_okay=False),
    help="Local mode data directory.",
)
@click.option("--token", envvar="TRUSTNET_TOKEN", help="Session token (remote mode).")
@click.option("--user", envvar="TRUSTNET_USER", help="Acting user (local mode).")
@click.option(
    "--output",
    envvar="TRUSTNET_OUTPUT",
    type=click.Choice(["table", "json"]),
    default="table",
    show_default=True,
)
@click.option("--page-size", envvar="TRUSTNET_PAGE_SIZE", type=int, default=50)
@click.option("--max-len", envvar="TRUSTNET_MAX_LEN", type=int, default=140)
@click.option("--approval-quorum", envvar="TRUSTNET_APPROVAL_QUORUM", type=int, default=3)
@click.option("--flag-quorum", envvar="TRUSTNET_FLAG_QUORUM", type=int, default=3)
@click.option("--rho", envvar="TRUSTNET_RHO", type=float, default=0.1)
@click.option("--deposit", envvar="TRUSTNET_DEPOSIT", type=float, default=1.0)
@click.option(
    "--lexicon",
    envvar="TRUSTNET_LEXICON",
    type=click.Path(exists=True, dir_okay=False),
    help="Polarity lexicon file (word<TAB>+ / word<TAB>-).",
)
@click.pass_context
def main(ctx, endpoint, data_dir, token, user, output, page_size, max_len,
         approval_quorum, flag_quorum, rho, deposit, lexicon):
    """Trust-ranked social search over a follow graph."""
    config = AppConfig(
        page_size=page_size,
        max_text_len=max_len,
        approval_quorum=approval_quorum,
        flag_quorum=flag_quorum,
        evaporation_rate=rho,
        deposit=deposit,
        lexicon_path=Path(lexicon) if lexicon else None,
    )
    ctx.obj = CliContext(endpoint, data_dir, token, user, output, config)


@main.command()
@click.option("--host", envvar="TRUSTNET_HOST", default="127.0.0.1", show_default=True)
@click.option("--port", envvar="TRUSTNET_PORT", type=int, default=8400, show_default=True)
@click.option(
    "--bootstrap-admin",
    envvar="TRUSTNET_BOOTSTRAP_ADMIN",
    help="handle:credential for the first administrator account.",
)
@click.pass_obj
def serve(ctx_obj: CliContext, host, port, bootstrap_admin):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_service

    if ctx_obj.endpoint:
        _fail(ValidationError("serve runs locally; do not pass --endpoint"))
    if bootstrap_admin:
        if ":" not in bootstrap_admin:
            _fail(ValidationError("--bootstrap-admin expects handle:credential"))
        handle, _, credential = bootstrap_admin.partition(":")
        ctx_obj.config.bootstrap_admin = (handle, credential)
    if ctx_obj.data_dir:
        ctx_obj.config.data_dir = Path(ctx_obj.data_dir)
    app = App(ctx_obj.config)
    uvicorn.run(create_service(app), host=host, port=port, log_level="warning")


@main.group()
def ingest():
    """Bulk-load posts or events from JSON Lines files."""


@ingest.command("posts")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def ingest_posts(ctx_obj: CliContext, file):
    text = Path(file).read_text(encoding="utf-8")
    _run(ctx_obj, lambda: ctx_obj.client().ingest_posts(text), _render_ingest)


@ingest.command("events")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def ingest_events(ctx_obj: CliContext, file):
    text = Path(file).read_text(encoding="utf-8")
    _run(ctx_obj, lambda: ctx_obj.client().ingest_events(text), _render_ingest)


@main.command()
@click.argument("query")
@click.option("--mode", type=click.Choice(["static", "dynamic"]), default="static",
              show_default=True)
@click.option("--from", "time_from", help="ISO-8601 lower bound, e.g. 2012-05-01T00:00:00Z.")
@click.option("--to", "time_to", help="ISO-8601 upper bound.")
@click.option("--friends", help="Comma-separated contact subset.")
@click.option("--page", type=int, default=1, show_default=True)
@click.pass_obj
def search(ctx_obj: CliContext, query, mode, time_from, time_to, friends, page):
    """Trust-ordered keyword search."""
    params = {"q": query, "mode": mode, "page": page}
    if time_from:
        params["from"] = time_from
    if time_to:
        params["to"] = time_to
    if friends:
        params["friends"] = friends
    _run(ctx_obj, lambda: ctx_obj.client().search(params), _render_search)


@main.group()
def trust():
    """Read or write per-contact static trust."""


@trust.command("set", context_settings={"ignore_unknown_options": True})
@click.argument("contact")
@click.argument("value")
@click.pass_obj
def trust_set(ctx_obj: CliContext, contact, value):
    _run(ctx_obj, lambda: ctx_obj.client().set_trust(contact, value), _render_trust)


@trust.command("get")
@click.argument("contact")
@click.pass_obj
def trust_get(ctx_obj: CliContext, contact):
    _run(ctx_obj, lambda: ctx_obj.client().get_trust(contact), _render_trust)


@main.group(name="topic-trust")
def topic_trust():
    """Read or write per-contact, per-topic trust."""


@topic_trust.command("set", context_settings={"ignore_unknown_options": True})
@click.argument("contact")
@click.argument("topic")
@click.argument("value")
@click.pass_obj
def topic_trust_set(ctx_obj: CliContext, contact, topic, value):
    _run(
        ctx_obj,
        lambda: ctx_obj.client().set_topic_trust(contact, topic, value),
        _render_trust,
    )


@topic_trust.command("get")
@click.argument("contact")
@click.argument("topic")
@click.pass_obj
def topic_trust_get(ctx_obj: CliContext, contact, topic):
    _run(ctx_obj, lambda: ctx_obj.client().get_topic_trust(contact, topic), _render_trust)


@main.command()
@click.argument("topic")
@click.option("--threshold", default=None, help="Minimum effective topic trust [default: 50.00].")
@click.pass_obj
def experts(ctx_obj: CliContext, topic, threshold):
    """Contacts whose topic trust clears the threshold."""
    _run(ctx_obj, lambda: ctx_obj.client().experts(topic, threshold), _render_experts)


@main.group()
def coeff():
    """Read or write dynamic-trust coefficients (admin only)."""


@coeff.command("get")
@click.argument("name", required=False)
@click.pass_obj
def coeff_get(ctx_obj: CliContext, name):
    def call():
        payload = ctx_obj.client().get_coefficients()
        if name is not None:
            if name not in payload:
                raise ValidationError(f"unknown coefficient: {name!r}")
            return {name: payload[name]}
        return payload

    _run(ctx_obj, call, _render_coefficients)


@coeff.command("set", context_settings={"ignore_unknown_options": True})
@click.argument("name")
@click.argument("value")
@click.pass_obj
def coeff_set(ctx_obj: CliContext, name, value):
    _run(
        ctx_obj,
        lambda: ctx_obj.client().set_coefficients({name: value}),
        _render_coefficients,
    )


@main.group()
def quarantine():
    """Candidate admission: list, submit, approve, flag."""


@quarantine.command("list")
@click.pass_obj
def quarantine_list(ctx_obj: CliContext):
    _run(ctx_obj, lambda: ctx_obj.client().quarantine_list(), _render_records)


@quarantine.command("submit")
@click.argument("candidate")
@click.option("--handle", help="Declared contact handle.")
@click.option("--email", help="Declared email address.")
@click.option("--external-id", help="Declared external account id.")
@click.pass_obj
def quarantine_submit(ctx_obj: CliContext, candidate, handle, email, external_id):
    body = {"candidate": candidate}
    if handle:
        body["handle"] = handle
    if email:
        body["email"] = email
    if external_id:
        body["external_id"] = external_id
    _run(ctx_obj, lambda: ctx_obj.client().quarantine_submit(body), _render_record)


@quarantine.command("approve")
@click.argument("candidate")
@click.pass_obj
def quarantine_approve(ctx_obj: CliContext, candidate):
    _run(ctx_obj, lambda: ctx_obj.client().quarantine_approve(candidate), _render_record)


@quarantine.command("flag")
@click.argument("candidate")
@click.pass_obj
def quarantine_flag(ctx_obj: CliContext, candidate):
    _run(ctx_obj, lambda: ctx_obj.client().quarantine_flag(candidate), _render_record)


@main.command()
@click.argument("stream")
@click.pass_obj
def forecast(ctx_obj: CliContext, stream):
    """Pheromone forecast for a hashtag stream."""
    _run(ctx_obj, lambda: ctx_obj.client().forecast(stream), _render_forecast)


if __name__ == "__main__":
    main()
