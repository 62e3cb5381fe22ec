import json
import os
import pathlib
import subprocess

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    exe = os.environ.get("ASLGARCH_BIN", str(ROOT / "build" / "aslgarch"))
    if not pathlib.Path(exe).exists():
        pytest.skip("aslgarch binary not built")

    def run(*args, env=None, check=True):
        full_env = dict(os.environ)
        for k in ("ASLG_SEED", "ASLG_THREADS", "ASLG_CACHE_DIR"):
            full_env.pop(k, None)
        full_env.update(env or {})
        proc = subprocess.run([exe, *map(str, args)], capture_output=True, text=True, env=full_env)
        if check and proc.returncode != 0:
            raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
        return proc

    return run


@pytest.fixture(scope="session")
def schema():
    from jsonschema import Draft202012Validator
    from referencing import Registry, Resource

    docs = {p.name: json.loads(p.read_text()) for p in (ROOT / "schemas").glob("*.json")}
    registry = Registry().with_resources(
        (f"aslgarch/{name}", Resource.from_contents(doc)) for name, doc in docs.items()
    )

    def validate(name, instance):
        Draft202012Validator(docs[name], registry=registry).validate(instance)

    return validate


@pytest.fixture(scope="session")
def returns_file(tmp_path_factory, cli):
    path = tmp_path_factory.mktemp("data") / "returns.csv"
    sim = cli("simulate", "--model", "aslog", "--n", 1500, "--seed", 3).stdout.splitlines()[1:]
    path.write_text("return\n" + "\n".join(line.split(",")[1] for line in sim) + "\n")
    return path
