"""Theory packages: axioms, theorems/conjectures and common expressions,
with presumption sets, acyclic proof dependencies and status propagation.

The registry persists as a directory tree of canonical serializations plus
an ``index.json`` of pinned digests and statuses.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading

from .errors import (CircularDependency, DuplicateName, FixtureCorrupt,
                     NotClosed, PresumptionViolation, UnknownTheoryItem,
                     VerificationFailed)
from . import sexpr as _sexpr

STDLIB_DIR = os.path.join(os.path.dirname(__file__), "stdlib_data")

STATUS_CONJECTURE = "conjecture"
STATUS_PARTIAL = "proven-with-conjectures"
STATUS_FULL = "fully-proven"


class TheoryItem:
    __slots__ = ("name", "kind", "statement", "certificate", "presumptions")

    def __init__(self, name, kind, statement):
        self.name = name           # full dotted name: <package>.<short name>
        self.kind = kind           # "axiom" | "theorem" | "common"
        self.statement = statement
        self.certificate = None
        self.presumptions = None

    @property
    def package(self):
        return self.name.rsplit(".", 1)[0]

    @property
    def short_name(self):
        return self.name.rsplit(".", 1)[1]


class Presumptions:
    """Names and package prefixes a proof may invoke."""

    def __init__(self, allowed=None, everything=False):
        self.everything = everything
        self.allowed = frozenset(allowed or ())

    @classmethod
    def all(cls):
        return cls(everything=True)

    def allows(self, name):
        if self.everything:
            return True
        if name in self.allowed:
            return True
        parts = name.split(".")
        for i in range(1, len(parts)):
            if ".".join(parts[:i]) in self.allowed:
                return True
        return False

    def __repr__(self):
        return "Presumptions(all)" if self.everything \
            else f"Presumptions({sorted(self.allowed)})"


class TheoryPackage:
    __slots__ = ("path", "common", "axioms", "theorems")

    def __init__(self, path):
        self.path = path
        self.common = {}
        self.axioms = {}
        self.theorems = {}


class Registry:
    """All registered theory items plus the theorem dependency graph."""

    def __init__(self):
        self.packages = {}
        self.items = {}
        self.deps = {}       # theorem name -> frozenset of invoked item names
        self._lock = threading.RLock()

    # --- registration -------------------------------------------------------

    def package(self, path):
        pkg = self.packages.get(path)
        if pkg is None:
            pkg = self.packages[path] = TheoryPackage(path)
        return pkg

    def _register(self, pkg_path, name, kind, statement, closed=True):
        full = f"{pkg_path}.{name}"
        with self._lock:
            if full in self.items:
                raise DuplicateName(f"{full} is already registered")
            if closed and statement.free_var_names():
                raise NotClosed(
                    f"{full} has free variables: "
                    f"{sorted(statement.free_var_names())}")
            item = TheoryItem(full, kind, statement)
            self.items[full] = item
            pkg = self.package(pkg_path)
            group = {"axiom": pkg.axioms, "theorem": pkg.theorems,
                     "common": pkg.common}[kind]
            group[name] = item
        return item

    def register_axiom(self, pkg_path, name, statement):
        return self._register(pkg_path, name, "axiom", statement)

    def register_theorem(self, pkg_path, name, statement):
        return self._register(pkg_path, name, "theorem", statement)

    def register_common(self, pkg_path, name, expression):
        return self._register(pkg_path, name, "common", expression,
                              closed=False)

    def lookup(self, name):
        return self.items.get(name)

    def require(self, name):
        item = self.lookup(name)
        if item is None:
            raise UnknownTheoryItem(f"unknown theory item {name!r}")
        return item

    # --- presumptions ---------------------------------------------------------

    def default_presumptions(self, theorem_name):
        """Everything registered except the theorem itself and whatever
        already depends on it (directly or indirectly)."""
        blocked = {theorem_name} | self.reverse_closure(theorem_name)
        allowed = set(self.items) - blocked
        return Presumptions(allowed)

    def reverse_closure(self, name):
        out = set()
        frontier = {name}
        while frontier:
            nxt = set()
            for thm, uses in self.deps.items():
                if thm not in out and (uses & frontier):
                    out.add(thm)
                    nxt.add(thm)
            frontier = nxt
        return out

    # --- proofs and statuses ----------------------------------------------------

    def attach_proof(self, theorem_name, certificate, presumptions=None):
        """Verify a certificate, wire dependency edges, recompute statuses."""
        from .checker import verify_certificate_data
        item = self.require(theorem_name)
        if item.kind != "theorem":
            raise VerificationFailed(f"{theorem_name} is not a theorem")
        if presumptions is None:
            presumptions = self.default_presumptions(theorem_name)
        report = verify_certificate_data(certificate, self.lookup)
        if not report.ok:
            raise VerificationFailed(
                f"certificate for {theorem_name} failed verification: "
                f"{report.first_error()}")
        root = report.root_judgment
        if root[0] or root[1] != item.statement:
            raise VerificationFailed(
                f"certificate proves a different judgment than {theorem_name}")
        used = set(report.axioms) | set(report.theorems)
        for name in sorted(used):
            if not presumptions.allows(name):
                raise PresumptionViolation(
                    f"proof of {theorem_name} invokes {name} outside its "
                    f"presumption set")
        with self._lock:
            old = self.deps.get(theorem_name)
            self.deps[theorem_name] = frozenset(report.theorems)
            cycle = self._find_cycle(theorem_name)
            if cycle:
                if old is None:
                    del self.deps[theorem_name]
                else:
                    self.deps[theorem_name] = old
                raise CircularDependency(
                    " -> ".join(cycle + [theorem_name]))
            item.certificate = certificate
            item.presumptions = presumptions
        return self.status(theorem_name)

    def _find_cycle(self, start):
        seen = []
        stack = [(start, iter(sorted(self.deps.get(start, ()))))]
        on_path = {start}
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt == start:
                    return [n for n, _ in stack]
                if nxt in on_path:
                    continue
                if nxt in self.deps:
                    on_path.add(nxt)
                    stack.append((nxt, iter(sorted(self.deps.get(nxt, ())))))
                    advanced = True
                    break
            if not advanced:
                on_path.discard(node)
                stack.pop()
        return None

    def status(self, name):
        """Status as a pure function of the dependency closure."""
        item = self.require(name)
        if item.kind == "axiom":
            return "axiom"
        if item.kind == "common":
            return "common"
        if item.certificate is None:
            return STATUS_CONJECTURE
        for dep in self.theorem_closure(name):
            dep_item = self.lookup(dep)
            if dep_item is None or dep_item.certificate is None:
                return STATUS_PARTIAL
        return STATUS_FULL

    def theorem_closure(self, name):
        """Theorems reachable through proof dependencies (excluding name)."""
        out = []
        seen = {name}
        frontier = [name]
        while frontier:
            cur = frontier.pop()
            for dep in sorted(self.deps.get(cur, ())):
                item = self.lookup(dep)
                if item is not None and item.kind == "theorem" \
                        and dep not in seen:
                    seen.add(dep)
                    out.append(dep)
                    frontier.append(dep)
        return out

    def axiom_closure(self, name):
        """Axioms required directly or indirectly by a theorem's proof;
        axioms eliminated by literal generalization do not count."""
        from .checker import certificate_axioms
        axioms = set()
        for thm in [name] + self.theorem_closure(name):
            item = self.lookup(thm)
            if item is None or item.certificate is None:
                continue
            for ref in certificate_axioms(item.certificate):
                ref_item = self.lookup(ref)
                if ref_item is not None and ref_item.kind == "axiom":
                    axioms.add(ref)
        return sorted(axioms)

    def dependency_report(self, name):
        """Leaves of the dependency DAG partitioned by kind, plus the
        reverse-dependency list."""
        item = self.require(name)
        if item.kind == "theorem" and item.certificate is None:
            return {"axioms": [], "unproven_conjectures": [name],
                    "dependents": sorted(self.reverse_closure(name))}
        axioms = set(self.axiom_closure(name)) if item.kind == "theorem" else set()
        unproven = []
        for thm in self.theorem_closure(name) if item.kind == "theorem" else []:
            dep_item = self.lookup(thm)
            if dep_item is None or dep_item.certificate is None:
                unproven.append(thm)
        return {"axioms": sorted(axioms),
                "unproven_conjectures": sorted(unproven),
                "dependents": sorted(self.reverse_closure(name))}

    # --- persistence ---------------------------------------------------------------

    def save(self, root):
        index = {"packages": {}}
        for path, pkg in sorted(self.packages.items()):
            pkg_dir = os.path.join(root, "theories", path)
            entry = {"common": {}, "axioms": {}, "theorems": {}}
            for group_name in ("common", "axioms", "theorems"):
                group = getattr(pkg, group_name)
                if not group:
                    continue
                gdir = os.path.join(pkg_dir, group_name)
                os.makedirs(gdir, exist_ok=True)
                for name, item in sorted(group.items()):
                    data = item.statement.sexpr() + "\n"
                    fn = os.path.join(gdir, name + ".pvx")
                    with open(fn, "w", encoding="utf-8") as f:
                        f.write(data)
                    digest = hashlib.sha256(data.encode("utf-8")).hexdigest()
                    meta = {"digest": digest}
                    if item.kind == "theorem":
                        meta["status"] = self.status(item.name)
                        if item.certificate is not None:
                            cert_fn = os.path.join(gdir, name + ".pvp")
                            with open(cert_fn, "w", encoding="utf-8") as f:
                                json.dump(item.certificate, f, indent=1,
                                          ensure_ascii=False)
                            meta["certificate"] = name + ".pvp"
                    entry[group_name][name] = meta
            index["packages"][path] = entry
        os.makedirs(root, exist_ok=True)
        with open(os.path.join(root, "index.json"), "w", encoding="utf-8") as f:
            json.dump(index, f, indent=1, sort_keys=True, ensure_ascii=False)

    def load(self, root, verify_digests=True):
        with open(os.path.join(root, "index.json"), encoding="utf-8") as f:
            index = json.load(f)
        kind_of = {"common": "common", "axioms": "axiom", "theorems": "theorem"}
        certs = []
        for path, entry in sorted(index["packages"].items()):
            for group_name in ("common", "axioms", "theorems"):
                for name, meta in sorted(entry.get(group_name, {}).items()):
                    fn = os.path.join(root, "theories", path, group_name,
                                      name + ".pvx")
                    with open(fn, encoding="utf-8") as f:
                        data = f.read()
                    digest = hashlib.sha256(data.encode("utf-8")).hexdigest()
                    if verify_digests and digest != meta["digest"]:
                        raise FixtureCorrupt(
                            f"{fn}: digest {digest} does not match the "
                            f"pinned {meta['digest']}")
                    stmt = _sexpr.parse(data)
                    self._register(path, name, kind_of[group_name], stmt,
                                   closed=(group_name != "common"))
                    if meta.get("certificate"):
                        certs.append((f"{path}.{name}",
                                      os.path.join(root, "theories", path,
                                                   group_name,
                                                   meta["certificate"])))
        for full_name, cert_fn in certs:
            with open(cert_fn, encoding="utf-8") as f:
                self.attach_proof(full_name, json.load(f),
                                  presumptions=Presumptions.all())
        return self

    def list_package(self, path):
        pkg = self.packages.get(path)
        if pkg is None:
            raise UnknownTheoryItem(f"unknown theory package {path!r}")
        out = []
        for group_name, kind in (("common", "common"), ("axioms", "axiom"),
                                 ("theorems", "theorem")):
            for name, item in sorted(getattr(pkg, group_name).items()):
                out.append({"name": item.name, "kind": kind,
                            "status": self.status(item.name),
                            "statement": item.statement})
        return out

    def subpackages(self, path=""):
        if not path:
            return sorted({p.split(".")[0] for p in self.packages})
        prefix = path + "."
        out = set()
        for p in self.packages:
            if p.startswith(prefix):
                out.add(prefix + p[len(prefix):].split(".")[0])
        return sorted(out)


def load_stdlib(registry=None, verify_digests=True):
    """Load the bundled theory fixtures (pinned by digest)."""
    registry = registry or Registry()
    registry.load(STDLIB_DIR, verify_digests=verify_digests)
    return registry
