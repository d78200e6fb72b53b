"""Driving the proving service: sessions, steps, proofs, theory browsing.

Exercises the HTTP/JSON API in-process. To run the same flows against a
live server: `pvk serve --port 8056` and point the studio or curl at it.
"""

from fastapi.testclient import TestClient

from pvk.service import create_app
from pvk.theory import load_stdlib

client = TestClient(create_app(load_stdlib()))

print("=== 1. Create a session over the stdlib snapshot ===")
session = client.post("/sessions", json={"snapshot": "stdlib"}).json()
sid = session["id"]
print("session:", session)

print()
print("=== 2. Apply steps; failures leave the session untouched ===")
r1 = client.post(f"/sessions/{sid}/steps", json={"assume": '(Variable "A")'})
print("assume A ->", r1.json()["text"])
r2 = client.post(f"/sessions/{sid}/steps",
                 json={"deduce": {"target": 0,
                                  "antecedent": '(Variable "A")'}})
print("deduce   ->", r2.json()["text"])
bad = client.post(f"/sessions/{sid}/steps", json={"invoke": "no.such.item"})
print("bad invoke ->", bad.status_code, bad.json()["code"])

print()
print("=== 3. Proof tables mirror the exported DAG ===")
table = client.get(f"/sessions/{sid}/judgments/1/proof",
                   params={"format": "latex-table"}).json()
for row in table["rows"]:
    print(f"  {row['step']}. {row['rule']:<12} {row['requirements']} "
          f"{row['judgment']}")

print()
print("=== 4. Certificates export as JSON and re-verify ===")
cert = client.get(f"/sessions/{sid}/judgments/1/proof").json()
print("digest:", cert["digest"][:16], "... steps:", len(cert["steps"]))

print()
print("=== 5. Browse the theory hierarchy ===")
booleans = client.get("/theories/logic.booleans").json()
for item in booleans["items"]:
    print(f"  {item['name']:<28} [{item['status']}] {item['text']}")
print("subpackages:", ", ".join(booleans["subpackages"]))

print()
print("=== 6. Inspect an expression DAG (the studio's inspector data) ===")
rows = client.post("/expressions/inspect", json={
    "expression": booleans["items"][1]["statement"]}).json()["rows"]
for row in rows[:6]:
    print(f"  {row['index']:2d} {row['kind']:<10} {row['text'][:60]}")
