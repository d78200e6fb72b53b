"""Interactive proving sessions over a JSON/HTTP API.

Sessions are in-memory with an append-only event log; a failed step leaves
the session untouched.  Requests within one session are serialized;
distinct sessions run concurrently over immutable theory snapshots.
"""

from __future__ import annotations

import json
import os
import threading
import uuid

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .errors import (PvkError, UnknownIndex, UnknownPath, UnknownSnapshot,
                     UnknownTheoryItem)
from .exprs import ExprTuple
from . import kernel as _kernel
from . import sexpr as _sexpr
from .reduce import ReplacementMap
from .style import format_expr, format_judgment
from .theory import Presumptions, Registry, load_stdlib

NOT_FOUND = (UnknownSnapshot, UnknownIndex, UnknownPath, UnknownTheoryItem)

RULE_CATALOG = [
    {"rule": "assume", "args": {"assume": "expression"}},
    {"rule": "invoke", "args": {"invoke": "theory item name"}},
    {"rule": "modus_ponens",
     "args": {"modus_ponens": {"implication": "judgment index",
                               "antecedent": "judgment index"}}},
    {"rule": "deduce",
     "args": {"deduce": {"target": "judgment index",
                         "antecedent": "expression"}}},
    {"rule": "instantiate",
     "args": {"instantiate": {"target": "judgment index",
                              "bindings": "[[target, replacement], ...]",
                              "alt_expansions": "[[form, replacement], ...]",
                              "layers": "int (default 1)",
                              "eq_mode": "default|none",
                              "assumptions": "[expression, ...]"}}},
    {"rule": "generalize",
     "args": {"generalize": {"target": "judgment index",
                             "parameters": "[expression, ...]",
                             "extra_conditions": "[expression, ...]"}}},
    {"rule": "literal_generalize",
     "args": {"literal_generalize": {"target": "judgment index",
                                     "mapping": "[[literal, variable], ...]"}}},
]


class Session:
    def __init__(self, session_id, registry, presumptions):
        self.id = session_id
        self.registry = registry
        self.presumptions = presumptions
        self.judgments = []
        self.events = []
        self.lock = threading.Lock()

    def judgment(self, index):
        if not (0 <= index < len(self.judgments)):
            raise UnknownIndex(f"no judgment {index} in session {self.id}")
        return self.judgments[index]


def _judgment_view(index, j):
    return {
        "index": index,
        "rule": j.proof.rule,
        "assumptions": [a.sexpr() for a in j.assumptions],
        "consequent": j.consequent.sexpr(),
        "text": format_judgment(j.assumptions, j.consequent, "text"),
        "latex": format_judgment(j.assumptions, j.consequent, "latex"),
    }


class ProverService:
    def __init__(self, registry=None, event_log=None):
        self.snapshots = {"stdlib": registry or load_stdlib(),
                          "empty": Registry()}
        self.sessions = {}
        self.lock = threading.Lock()
        self.event_log = event_log
        self._counter = 0

    # --- session lifecycle -------------------------------------------------------

    def create_session(self, snapshot="stdlib", presumptions=None):
        registry = self.snapshots.get(snapshot or "stdlib")
        if registry is None:
            raise UnknownSnapshot(f"unknown theory snapshot {snapshot!r}")
        if presumptions is None:
            scope = Presumptions.all()
        else:
            scope = Presumptions(presumptions)
        with self.lock:
            self._counter += 1
            session_id = f"s{self._counter:04d}-{uuid.uuid4().hex[:8]}"
            session = Session(session_id, registry, scope)
            self.sessions[session_id] = session
        self._log({"event": "create", "session": session_id,
                   "snapshot": snapshot or "stdlib",
                   "presumptions": presumptions})
        return session

    def session(self, session_id):
        s = self.sessions.get(session_id)
        if s is None:
            raise UnknownIndex(f"unknown session {session_id!r}")
        return s

    def _log(self, event):
        if self.event_log:
            with open(self.event_log, "a", encoding="utf-8") as f:
                f.write(json.dumps(event, ensure_ascii=False) + "\n")

    # --- the single proving entry point -------------------------------------------

    def apply_step(self, session_id, request):
        session = self.session(session_id)
        with session.lock:
            judgment, satisfied = self._dispatch(session, request)
            index = len(session.judgments)
            session.judgments.append(judgment)
            session.events.append(request)
        self._log({"event": "step", "session": session_id,
                   "request": request})
        view = _judgment_view(index, judgment)
        view["requirements_satisfied"] = satisfied
        return view

    def _dispatch(self, session, request):
        if not isinstance(request, dict) or len(request) != 1:
            raise PvkError("a step request names exactly one rule")
        (rule, args), = request.items()
        if rule == "assume":
            return _kernel.assume(_sexpr.parse(args)), []
        if rule == "invoke":
            j = _kernel.invoke(session.registry, args,
                               presumptions=session.presumptions)
            return j, []
        if rule == "modus_ponens":
            impl = session.judgment(int(args["implication"]))
            ant = session.judgment(int(args["antecedent"]))
            return _kernel.modus_ponens(impl, ant), []
        if rule == "deduce":
            target = session.judgment(int(args["target"]))
            antecedent = _sexpr.parse(args["antecedent"])
            return _kernel.deduce(target, antecedent), []
        if rule == "instantiate":
            target = session.judgment(int(args["target"]))
            rmap = ReplacementMap()
            for t_text, r_text in args.get("bindings", []):
                rmap.bind(_sexpr.parse(t_text), _sexpr.parse(r_text))
            for f_text, r_text in args.get("alt_expansions", []):
                rmap.add_alt_expansion(_sexpr.parse(f_text),
                                       _sexpr.parse(r_text))
            assumptions = [_sexpr.parse(t)
                           for t in args.get("assumptions", [])]
            j = _kernel.instantiate(
                target, rmap, assumptions=assumptions,
                layers=int(args.get("layers", 1)),
                eq_mode=args.get("eq_mode", "default"),
                range_mode=args.get("range_mode", "auto"),
                known=session.judgments)
            satisfied = [format_judgment(r.assumptions, r.consequent, "text")
                         for r in j.proof.requirements[1:]]
            return j, satisfied
        if rule == "generalize":
            target = session.judgment(int(args["target"]))
            params = [_sexpr.parse(t) for t in args["parameters"]]
            extras = [_sexpr.parse(t)
                      for t in args.get("extra_conditions", [])]
            return _kernel.generalize(target, params, extras), []
        if rule == "literal_generalize":
            target = session.judgment(int(args["target"]))
            mapping = {_sexpr.parse(l): _sexpr.parse(v)
                       for l, v in args["mapping"]}
            return _kernel.literal_generalize(target, mapping), []
        raise PvkError(f"unknown rule {rule!r}")

    # --- proofs and theory browsing ---------------------------------------------------

    def get_proof(self, session_id, index, fmt="json"):
        session = self.session(session_id)
        j = session.judgment(index)
        proof = _kernel.export_proof(j)
        if fmt == "latex-table":
            rows = []
            for step in proof:
                rows.append({
                    "step": step.index,
                    "rule": step.rule,
                    "requirements": list(step.requirements),
                    "judgment": format_judgment(step.judgment.assumptions,
                                                step.judgment.consequent,
                                                "latex"),
                })
            return {"format": "latex-table", "rows": rows}
        return _kernel.proof_certificate(proof)

    def list_theory(self, path):
        registry = self.snapshots["stdlib"]
        items = registry.list_package(path)
        return {
            "path": path,
            "items": [{
                "name": item["name"],
                "kind": item["kind"],
                "status": item["status"],
                "statement": item["statement"].sexpr(),
                "text": format_expr(item["statement"], "text"),
                "latex": format_expr(item["statement"], "latex"),
            } for item in items],
            "subpackages": registry.subpackages(path),
        }


def _error_response(exc):
    status = 404 if isinstance(exc, NOT_FOUND) else 422
    return JSONResponse(status_code=status,
                        content={"code": exc.code, "message": str(exc),
                                 "details": getattr(exc, "details", {})})


def create_app(registry=None, event_log=None, studio_dir=None):
    service = ProverService(registry, event_log)
    app = FastAPI(title="pvk prover service")
    app.state.service = service

    @app.exception_handler(PvkError)
    async def _pvk_error(request: Request, exc: PvkError):
        return _error_response(exc)

    @app.post("/sessions")
    async def create_session(body: dict | None = None):
        body = body or {}
        session = service.create_session(body.get("snapshot", "stdlib"),
                                         body.get("presumptions"))
        return {"id": session.id, "judgments": 0}

    @app.post("/sessions/{session_id}/steps")
    async def post_step(session_id: str, body: dict):
        return service.apply_step(session_id, body)

    @app.get("/sessions/{session_id}/judgments/{index}")
    async def get_judgment(session_id: str, index: int):
        session = service.session(session_id)
        return _judgment_view(index, session.judgment(index))

    @app.get("/sessions/{session_id}/judgments")
    async def list_judgments(session_id: str):
        session = service.session(session_id)
        return [_judgment_view(i, j)
                for i, j in enumerate(session.judgments)]

    @app.get("/sessions/{session_id}/judgments/{index}/proof")
    async def get_proof(session_id: str, index: int, format: str = "json"):
        return service.get_proof(session_id, index, format)

    @app.get("/theories/{path}")
    async def get_theory(path: str):
        try:
            return service.list_theory(path)
        except UnknownTheoryItem as exc:
            raise UnknownPath(str(exc))

    @app.get("/rules")
    async def get_rules():
        return RULE_CATALOG

    @app.post("/expressions/inspect")
    async def inspect_expression(body: dict):
        from .exprs import dag_table
        expr = _sexpr.parse(body["expression"])
        return {"rows": [{
            "index": row["index"],
            "kind": row["kind"],
            "subexprs": row["subexprs"],
            "text": format_expr(row["expr"], "text"),
            "latex": format_expr(row["expr"], "latex"),
        } for row in dag_table(expr)]}

    if studio_dir and os.path.isdir(studio_dir):
        from fastapi.staticfiles import StaticFiles
        app.mount("/studio", StaticFiles(directory=studio_dir, html=True),
                  name="studio")
    return app


def replay_requests_from_certificate(cert):
    """Session step requests that rebuild a certificate bottom-up.

    Returns (requests, final_request_position): replaying the requests in
    order re-derives every judgment; reference steps reuse their target's
    session index, so they produce no request.
    """
    steps = cert["steps"]
    order = sorted(steps, key=lambda s: -s["index"])
    session_index = {}   # certificate index -> session judgment index
    requests = []
    next_index = 0
    for step in order:
        rule = step["rule"]
        reqs = step["requirements"]
        if rule == "reference":
            session_index[step["index"]] = session_index[reqs[0]]
            continue
        if rule == "assumption":
            assumptions = step["assumptions"]
            req = {"assume": assumptions[0]}
        elif rule in ("axiom_invocation", "theorem_invocation"):
            req = {"invoke": step["payload"]["name"]}
        elif rule == "modus_ponens":
            req = {"modus_ponens": {"implication": session_index[reqs[0]],
                                    "antecedent": session_index[reqs[1]]}}
        elif rule == "deduction":
            req = {"deduce": {"target": session_index[reqs[0]],
                              "antecedent": step["payload"]["antecedent"]}}
        elif rule == "instantiation":
            payload = step["payload"]
            req = {"instantiate": {
                "target": session_index[reqs[0]],
                "bindings": payload.get("bindings", []),
                "alt_expansions": payload.get("alt_expansions", []),
                "layers": payload.get("layers", 1),
                "eq_mode": payload.get("eq_mode", "default"),
                "range_mode": payload.get("range_mode", "auto"),
                "assumptions": step["assumptions"],
            }}
        elif rule == "generalization":
            payload = step["payload"]
            req = {"generalize": {"target": session_index[reqs[0]],
                                  "parameters": payload["parameters"],
                                  "extra_conditions":
                                      payload.get("extra_conditions", [])}}
        elif rule == "literal_generalization":
            payload = step["payload"]
            req = {"literal_generalize": {"target": session_index[reqs[0]],
                                          "mapping": payload["mapping"]}}
        else:
            raise PvkError(f"cannot replay rule {rule!r}")
        session_index[step["index"]] = next_index
        next_index += 1
        requests.append(req)
    return requests, session_index[0]
