#!/usr/bin/env python3
"""Start `crgeo serve` on a free port and validate its responses against the API schema."""

import json
import socket
import subprocess
import sys
import tempfile
import time
import urllib.error
import urllib.parse
import urllib.request

import jsonschema


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def main():
    crgeo, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)

    def validator(name):
        sub = {"$ref": "#/$defs/" + name, "$defs": schema["$defs"]}
        return jsonschema.Draft202012Validator(sub)

    port = free_port()
    assets = tempfile.mkdtemp()
    with open(assets + "/index.html", "w") as f:
        f.write("<!doctype html><title>t</title>")
    proc = subprocess.Popen([crgeo, "serve", "--port", str(port), "--assets", assets],
                            stderr=subprocess.DEVNULL)
    base = f"http://127.0.0.1:{port}"
    failures = []

    def fetch(path, body=None):
        req = urllib.request.Request(base + path, data=body.encode() if body is not None else None)
        try:
            with urllib.request.urlopen(req, timeout=120) as r:
                return r.status, r.read().decode()
        except urllib.error.HTTPError as e:
            return e.code, e.read().decode()

    def expect(path, status, schema_name=None, body=None, check=None):
        code, text = fetch(path, body)
        if code != status:
            failures.append(f"{path}: status {code}, wanted {status}")
            return
        if schema_name is None:
            return
        doc = json.loads(text)
        errs = sorted(validator(schema_name).iter_errors(doc), key=str)
        if errs:
            failures.append(f"{path}: {errs[0].message} at {list(errs[0].absolute_path)}")
        elif check and not check(doc):
            failures.append(f"{path}: content check failed")
        print(f"ok {path}")

    try:
        for _ in range(100):
            try:
                fetch("/api/rep?s=6")
                break
            except (urllib.error.URLError, ConnectionError):
                time.sleep(0.05)

        expect("/api/rep?s=5.916079", 200, "rep", check=lambda d: 4 <= d["x"] <= 817 / 200)
        expect("/api/rep?s=6.454972243679028", 200, "rep", check=lambda d: d["classification"] == "parabolic")
        expect("/api/rep?s=1", 200, "rep", check=lambda d: not d["certified"])
        expect("/api/verify?lemma=TL1&n=8", 200, "lemma_report", check=lambda d: d["verdict"] == "PASS")
        expect("/api/verify?lemma=all&n=1&n_curve=512", 200, "sweep_report")
        expect("/api/figure", 200, "figure", body=json.dumps({"view": "Elevation", "n_curve": 256, "n_arcs": 8}))
        expect("/api/figure?spec=" + urllib.parse.quote(json.dumps({"view": "ArgArgTorus", "n_curve": 64})), 200,
               "figure")
        expect("/api/figure", 200, "figure", body=json.dumps({"view": "ElevationAffiliate", "n_curve": 256}))

        off = {"view": "HeisProjection", "layers": {}}
        full = json.loads(fetch("/api/figure", json.dumps({"view": "HeisProjection", "n_curve": 64}))[1])
        for layer in full["layers"]:
            off["layers"][layer["name"]] = False
        expect("/api/figure", 200, "figure", body=json.dumps(off), check=lambda d: d["layers"] == [])

        code, text = fetch("/api/verify?lemma=TL2&n=2&n_curve=512&stream=1")
        lines = [json.loads(l) for l in text.splitlines() if l.strip()]
        if code != 200 or len(lines) != 2:
            failures.append(f"stream: status {code}, {len(lines)} lines")
        else:
            for e in validator("progress").iter_errors(lines[0]):
                failures.append("stream progress: " + e.message)
            for e in validator("stream_report").iter_errors(lines[1]):
                failures.append("stream report: " + e.message)
            print("ok stream")

        for bad in ["/api/rep", "/api/rep?s=abc", "/api/rep?s=-1", "/api/rep?s=40",
                    "/api/verify?lemma=TL7", "/api/verify?n=0", "/api/verify?n=1.5", "/api/verify?s0=7&s1=6",
                    "/api/figure?spec=%7Bnot", "/api/verify?n=3&stream=1&n_curve=-4"]:
            expect(bad, 400, "error")
        expect("/api/figure", 400, "error", body=json.dumps({"view": "Nope"}))
        expect("/api/figure", 400, "error", body=json.dumps({"s": 100}))
        expect("/api/nowhere", 404, "error")
        code, text = fetch("/")
        if code != 200 or "<title>" not in text:
            failures.append(f"/: status {code}")
    finally:
        proc.terminate()
        proc.wait(timeout=10)

    for f in failures:
        print("FAIL", f)
    print("schema check:", "FAIL" if failures else "PASS")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
