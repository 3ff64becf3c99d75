"""The whole pipeline on the checked-in fixture, then the review API.

Runs calendar -> ingest -> detect -> flags -> impute -> split -> merge ->
write on the three-day fixture, then serves the result over the local JSON
API, posts a flag update the way the review UI would, and shows that it
lands in the flag file the next pipeline run will read.
"""

import json
import tempfile
import threading
import urllib.request
from pathlib import Path

from espeni import PipelineConfig, run_pipeline
from espeni.review import serve_review

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"

work = Path(tempfile.mkdtemp(prefix="espeni-demo-"))
flag_path = work / "flags.csv"
flag_path.write_bytes((DATA / "flags.csv").read_bytes())

config = PipelineConfig(
    elexon_dir=DATA / "elexon",
    ng_dir=DATA / "ng",
    out_dir=work / "out",
    flag_path=flag_path,
)

print("=== pipeline ===")
run_pipeline(config)

print("\n=== review service ===")
server = serve_review(config, listen="127.0.0.1:0")
threading.Thread(target=server.serve_forever, daemon=True).start()
host, port = server.server_address[:2]
base = f"http://{host}:{port}"


def get(path: str) -> dict | list:
    with urllib.request.urlopen(base + path) as response:
        return json.load(response)


meta = get("/api/meta")
print(f"serving {meta['start_utc']} .. {meta['end_utc']}")

window = get(
    "/api/window?start=2020-03-29T00:00:00%2B00:00"
    "&end=2020-03-30T00:00:00%2B00:00&source=ELEXM"
)
flagged = [k for k, f in zip(window["keys"], window["flags"]) if f == 0]
print(f"flagged rows in the window: {flagged}")

body = json.dumps(
    {"source": "ELEXM", "updates": [{"datesp": "2020-03-28_05", "flag": 0, "note": "demo"}]}
).encode("utf-8")
request = urllib.request.Request(
    base + "/api/flags", data=body, headers={"Content-Type": "application/json"}
)
with urllib.request.urlopen(request) as response:
    print("posted a flag update:", json.load(response))

print("flag file now contains:")
for line in flag_path.read_text("utf-8").splitlines():
    print(f"  {line}")

server.shutdown()
print(f"\nartifacts under {work}")
