import json
import socket
import threading
import time

import pytest
from click.testing import CliRunner

from trustnet.cli import main
from trustnet.fixtures import (
    ADMIN,
    ADMIN_CREDENTIAL,
    SEARCHER,
    SEARCHER_CREDENTIAL,
    build_inversion_data_dir,
)

runner = CliRunner()


@pytest.fixture
def data_dir(tmp_path):
    build_inversion_data_dir(tmp_path / "data")
    return str(tmp_path / "data")


def cli(*args, **kwargs):
    return runner.invoke(main, list(args), **kwargs)


def local(data_dir, *args, user=SEARCHER, output="json"):
    return cli("--data-dir", data_dir, "--user", user, "--output", output, *args)


def test_trust_set_then_search_static(data_dir):
    result = local(data_dir, "trust", "set", "ouest-france", "55")
    assert result.exit_code == 0, result.output
    assert json.loads(result.output) == {"contact": "ouest-france", "value": "55.00"}

    result = local(data_dir, "search", "apple")
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["results"][0]["author"] == "ouest-france"
    assert payload["results"][0]["trust"] == "55.00"


def test_search_dynamic_shows_inverted_ranking(data_dir):
    result = local(data_dir, "search", "apple", "--mode", "dynamic")
    payload = json.loads(result.output)
    assert payload["results"][0]["author"] == "TechCrunch"
    assert payload["results"][0]["trust"] == "56.02"


def test_table_output_renders_rows(data_dir):
    result = local(data_dir, "search", "apple", output="table")
    assert result.exit_code == 0
    assert "total: 6" in result.output
    assert "ouest-france" in result.output


def test_trust_get_and_topic_trust(data_dir):
    assert json.loads(local(data_dir, "trust", "get", "TechCrunch").output) == {
        "contact": "TechCrunch", "value": "50.00",
    }
    result = local(data_dir, "topic-trust", "set", "TechCrunch", "tech", "91.00")
    assert json.loads(result.output)["value"] == "91.00"
    result = local(data_dir, "topic-trust", "get", "TechCrunch", "tech")
    assert json.loads(result.output)["value"] == "91.00"
    result = local(data_dir, "experts", "tech", "--threshold", "90")
    assert json.loads(result.output)["experts"] == ["TechCrunch"]


def test_coeff_commands_and_authorization(data_dir):
    result = local(data_dir, "coeff", "get", user=ADMIN)
    assert json.loads(result.output)["c_results"] == "0.0900"
    result = local(data_dir, "coeff", "get", "c_results", user=ADMIN)
    assert json.loads(result.output) == {"c_results": "0.0900"}
    result = local(data_dir, "coeff", "set", "c_results", "0.2", user=ADMIN)
    assert json.loads(result.output)["c_results"] == "0.2000"

    denied = local(data_dir, "coeff", "set", "c_results", "0.2", user=SEARCHER)
    assert denied.exit_code == 4
    assert json.loads(denied.stderr)["error"]["type"] == "authorization"


def test_negative_coefficient_is_validation_error(data_dir):
    result = local(data_dir, "coeff", "set", "c_favorites", "-1", user=ADMIN)
    assert result.exit_code == 2
    assert json.loads(result.stderr)["error"]["type"] == "validation"


def test_quarantine_commands(data_dir):
    result = local(data_dir, "quarantine", "submit", "newbie",
                   "--handle", "newbie", "--email", "n@example.org")
    assert result.exit_code == 0
    assert json.loads(result.output)["state"] == "quarantined"
    result = local(data_dir, "quarantine", "approve", "newbie", user=SEARCHER)
    assert json.loads(result.output)["approvals"] == [SEARCHER]
    result = local(data_dir, "quarantine", "list")
    assert json.loads(result.output)["records"][0]["candidate"] == "newbie"
    # stances persist across invocations: double stance now conflicts
    result = local(data_dir, "quarantine", "approve", "newbie", user=SEARCHER)
    assert result.exit_code == 6


def test_ingest_and_forecast(data_dir, tmp_path):
    posts = tmp_path / "posts.jsonl"
    posts.write_text(json.dumps({
        "post_id": "n1", "author": "TechCrunch", "text": "more #apple news",
        "created_at": "2026-05-30T10:00:00Z",
    }) + "\n", encoding="utf-8")
    result = local(data_dir, "ingest", "posts", str(posts))
    assert json.loads(result.output)["accepted"] == 1
    result = local(data_dir, "forecast", "apple")
    assert json.loads(result.output)["observations"] == 3


def test_unknown_contact_exit_code(data_dir):
    result = local(data_dir, "trust", "get", "ghost")
    assert result.exit_code == 5
    assert json.loads(result.stderr)["error"]["type"] == "not_found"


def test_missing_user_is_validation_error(data_dir):
    result = cli("--data-dir", data_dir, "--output", "json", "search", "apple")
    assert result.exit_code == 2


def test_mode_exclusivity():
    result = cli("--output", "json", "search", "apple")
    assert result.exit_code == 2
    result = cli("--endpoint", "http://x", "--data-dir", "/tmp/x",
                 "--output", "json", "search", "apple")
    assert result.exit_code == 2


def test_connectivity_error_exit_code():
    result = cli("--endpoint", "http://127.0.0.1:9", "--output", "json",
                 "search", "apple")
    assert result.exit_code == 7
    assert json.loads(result.stderr)["error"]["type"] == "connectivity"


@pytest.fixture
def live_server(data_dir):
    import uvicorn

    from trustnet.app import App, AppConfig
    from trustnet.service import create_service

    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()
    app = App(AppConfig(data_dir=data_dir))
    server = uvicorn.Server(
        uvicorn.Config(create_service(app), host="127.0.0.1", port=port,
                       log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    for _ in range(100):
        if server.started:
            break
        time.sleep(0.05)
    assert server.started
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


def test_local_and_remote_json_are_byte_identical(data_dir, live_server):
    import requests

    searcher_token = requests.post(
        f"{live_server}/login",
        json={"handle": SEARCHER, "credential": SEARCHER_CREDENTIAL},
        timeout=10,
    ).json()["token"]
    admin_token = requests.post(
        f"{live_server}/login",
        json={"handle": ADMIN, "credential": ADMIN_CREDENTIAL},
        timeout=10,
    ).json()["token"]

    searcher_cases = [
        ("search", "apple"),
        ("search", "apple", "--mode", "dynamic"),
        ("search", "apple", "--friends", "TechCrunch,dailynews", "--page", "1"),
        ("trust", "get", "TechCrunch"),
        ("experts", "tech", "--threshold", "90"),
        ("quarantine", "list"),
        ("forecast", "apple"),
    ]
    for case in searcher_cases:
        local_result = local(data_dir, *case)
        remote_result = cli("--endpoint", live_server, "--token", searcher_token,
                            "--output", "json", *case)
        assert local_result.exit_code == 0, local_result.output
        assert remote_result.exit_code == 0, remote_result.output
        assert local_result.output == remote_result.output, case

    local_result = local(data_dir, "coeff", "get", user=ADMIN)
    remote_result = cli("--endpoint", live_server, "--token", admin_token,
                        "--output", "json", "coeff", "get")
    assert local_result.output == remote_result.output
