"""HTTP facade over the evolution state machine and the compiler.

One session per server process.  All state mutations funnel through the
session lock (FIFO by lock fairness), every successful mutation appends
exactly one action-log record, and the population directory is rewritten
after each mutation so a crash never loses more than the in-flight request.
Static files for the web client are served from /, the API under /api/v1/.
"""

from __future__ import annotations

import json
import posixpath
import re
import threading
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import catalog, codegen, evolution, persistence
from .errors import (
    IdenticalParents,
    ParseError,
    SchemaError,
    ShaderEvoError,
    StorageFailure,
    TooManySeeds,
    UnknownIndividual,
    VersionError,
)
from .evolution import ActionLog, EvolutionConfig

API_PREFIX = "/api/v1"
POPULATION_DIR = "population"


class HttpError(Exception):
    def __init__(self, status, message):
        super().__init__(message)
        self.status = status
        self.message = message


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _merge_config_doc(base_doc, overrides):
    doc = dict(base_doc)
    for key, value in overrides.items():
        if key == "mutation" and isinstance(value, dict):
            merged = dict(base_doc.get("mutation", {}))
            merged.update(value)
            doc["mutation"] = merged
        else:
            doc[key] = value
    return doc


class Session:
    """The single mutable session behind the API."""

    def __init__(self, out_dir, config=None, seed=None):
        self.lock = threading.Lock()
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.config = config or EvolutionConfig()
        self.config.validate()
        self.population = None
        self.log = ActionLog(self.out_dir / "actions.log")
        self.session_seed = seed
        self._bundle_cache = {}

    # -- helpers ---------------------------------------------------------

    def _require_run(self):
        if self.population is None:
            raise HttpError(409, "no active run; POST /api/v1/run first")

    def _persist(self):
        persistence.write_population(self.out_dir / POPULATION_DIR,
                                     self.population, self.config)

    def _individual(self, individual_id):
        self._require_run()
        try:
            return self.population.get(individual_id)
        except UnknownIndividual as exc:
            raise HttpError(404, str(exc)) from None

    def _bundle_json(self, genome):
        key = persistence.genome_sha256(genome)
        cached = self._bundle_cache.get(key)
        if cached is None:
            bundle = codegen.compile(genome)
            cached = json.dumps(bundle.to_doc(), indent=2) + "\n"
            if len(self._bundle_cache) > 256:
                self._bundle_cache.clear()
            self._bundle_cache[key] = cached
        return cached

    # -- endpoint bodies ---------------------------------------------------

    def start_run(self, body):
        with self.lock:
            if self.population is not None and not body.get("restart", False):
                raise HttpError(409, "a run is already active; pass restart=true")
            overrides = body.get("config", {})
            try:
                config = EvolutionConfig.from_doc(
                    _merge_config_doc(self.config.to_doc(), overrides))
            except (ValueError, KeyError) as exc:
                raise HttpError(400, f"bad config: {exc}") from None
            seeds = []
            seed_docs = []
            seed_files = body.get("seeds")
            if seed_files and seed_files != "random":
                for path in seed_files:
                    try:
                        text = Path(path).read_text(encoding="utf-8")
                        genome = persistence.parse_genome(text)
                    except OSError as exc:
                        raise HttpError(400, f"cannot read seed file {path}: {exc}") from None
                    except (ParseError, SchemaError, VersionError) as exc:
                        raise HttpError(400, f"bad seed file {path}: {exc}") from None
                    seeds.append(genome)
                    seed_docs.append(persistence.genome_to_doc(genome))
            seed = body.get("seed")
            if seed is None:
                import random as _random

                seed = self.session_seed if self.session_seed is not None \
                    else _random.SystemRandom().getrandbits(48)
            try:
                seed = int(seed)
            except (TypeError, ValueError):
                raise HttpError(400, "seed must be an integer") from None
            ts = _now()
            try:
                population = evolution.start_run(config, seeds, seed, created_at=ts)
            except TooManySeeds as exc:
                raise HttpError(400, str(exc)) from None
            self.config = config
            self.population = population
            self._bundle_cache.clear()
            self.log.append({"event": "start", "ts": ts, "seed": seed,
                             "config": config.to_doc(), "seeds": seed_docs})
            self._persist()
            return self.population_listing()

    def population_listing(self, page=None, per_page=None):
        self._require_run()
        entries = []
        for individual in self.population.individuals.values():
            bundle_doc = json.loads(self._bundle_json(individual.genome))
            entries.append({
                "id": individual.id,
                "score": individual.score,
                "saved": individual.saved,
                "born_generation": individual.born_generation,
                "lit": individual.genome.lit,
                "uniforms": bundle_doc["uniforms"],
            })
        total = len(entries)
        if page is not None:
            per_page = per_page or 4
            entries = entries[page * per_page:(page + 1) * per_page]
        return {
            "generation": self.population.generation,
            "capacity": self.population.capacity,
            "total": total,
            "individuals": entries,
        }

    def get_shader(self, individual_id):
        with self.lock:
            individual = self._individual(individual_id)
            return self._bundle_json(individual.genome)

    def get_graph(self, individual_id):
        with self.lock:
            individual = self._individual(individual_id)
            return persistence.serialize_genome(individual.genome)

    def post_score(self, individual_id, body):
        with self.lock:
            individual = self._individual(individual_id)
            score = body.get("score")
            if score not in evolution.SCORES:
                raise HttpError(400, f"score must be one of {evolution.SCORES}")
            evolution.set_score(self.population, individual.id, score)
            self.log.append({"event": "score", "ts": _now(),
                             "id": individual.id, "score": score})
            self._persist()
            return {"id": individual.id, "score": score}

    def post_breed(self, body):
        with self.lock:
            self._require_run()
            mode = body.get("mode", "auto")
            parents = None
            if mode == "manual":
                raw = body.get("parents")
                if not isinstance(raw, (list, tuple)) or len(raw) != 2:
                    raise HttpError(400, "manual mode requires parents: [id, id]")
                parents = (raw[0], raw[1])
                for p in parents:
                    self._individual(p)
                if parents[0] == parents[1]:
                    raise HttpError(400, "manual breeding requires two distinct parents")
            elif mode != "auto":
                raise HttpError(400, "mode must be 'auto' or 'manual'")
            ts = _now()
            try:
                result = evolution.breed(self.population, self.config,
                                         parents=parents, created_at=ts)
            except IdenticalParents as exc:
                raise HttpError(400, str(exc)) from None
            self.log.append({
                "event": "breed", "ts": ts, "mode": mode,
                "parents": list(parents) if parents else None,
                "event_seed": result.event_seed,
                "new_ids": result.new_ids,
                "culled_ids": result.culled_ids,
            })
            self._persist()
            return {"new_ids": result.new_ids, "culled_ids": result.culled_ids,
                    "generation": self.population.generation}

    def post_save(self, individual_id):
        with self.lock:
            individual = self._individual(individual_id)
            try:
                path = evolution.save_individual(self.population, individual.id,
                                                 output_dir=self.out_dir)
            except StorageFailure as exc:
                raise HttpError(500, str(exc)) from None
            self.log.append({"event": "save", "ts": _now(), "id": individual.id})
            self._persist()
            return {"id": individual.id, "file": str(path)}

    def get_config(self):
        with self.lock:
            doc = self.config.to_doc()
            doc["run_active"] = self.population is not None
            return doc

    def put_config(self, body):
        with self.lock:
            if self.population is not None and "capacity" in body \
                    and int(body["capacity"]) != self.population.capacity:
                raise HttpError(400, "capacity cannot change while a run is active")
            try:
                config = EvolutionConfig.from_doc(
                    _merge_config_doc(self.config.to_doc(), body))
            except (ValueError, KeyError) as exc:
                raise HttpError(400, f"bad config: {exc}") from None
            self.config = config
            if self.population is not None:
                self.log.append({"event": "config", "ts": _now(),
                                 "config": config.to_doc()})
                self._persist()
            return config.to_doc()


# ---------------------------------------------------------------------------
# HTTP plumbing

_ID_SHADER = re.compile(r"^/individuals/(\d+)/shader$")
_ID_GRAPH = re.compile(r"^/individuals/(\d+)/graph$")
_ID_SCORE = re.compile(r"^/individuals/(\d+)/score$")
_ID_SAVE = re.compile(r"^/individuals/(\d+)/save$")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".png": "image/png",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
    ".map": "application/json",
    ".obj": "text/plain; charset=utf-8",
}


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "shaderevo"

    # the server instance carries .session and .static_dir

    def log_message(self, fmt, *args):
        pass

    def _send_json(self, payload, status=200):
        if isinstance(payload, str):
            body = payload.encode("utf-8")
        else:
            body = (json.dumps(payload, indent=2) + "\n").encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status, message):
        self._send_json({"error": message}, status=status)

    def _read_body(self):
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            body = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise HttpError(400, "request body must be valid JSON")
        if not isinstance(body, dict):
            raise HttpError(400, "request body must be a JSON object")
        return body

    def _query(self):
        if "?" not in self.path:
            return self.path, {}
        path, _, raw = self.path.partition("?")
        params = {}
        for pair in raw.split("&"):
            if "=" in pair:
                k, _, v = pair.partition("=")
                params[k] = v
        return path, params

    def _dispatch(self, method):
        try:
            path, params = self._query()
            if path.startswith(API_PREFIX):
                self._api(method, path[len(API_PREFIX):] or "/", params)
            elif method == "GET" and self.server.static_dir is not None:
                self._static(path)
            else:
                self._send_error_json(404, "not found")
        except HttpError as exc:
            self._send_error_json(exc.status, exc.message)
        except ShaderEvoError as exc:
            self._send_error_json(500, str(exc))
        except BrokenPipeError:
            pass

    def _api(self, method, path, params):
        session = self.server.session
        if method == "GET":
            if path == "/population":
                try:
                    page = int(params["page"]) if "page" in params else None
                    per_page = int(params["per_page"]) if "per_page" in params else None
                except ValueError:
                    raise HttpError(400, "page and per_page must be integers")
                with session.lock:
                    self._send_json(session.population_listing(page, per_page))
                return
            if path == "/config":
                self._send_json(session.get_config())
                return
            if path == "/catalog":
                self._send_json({"nodes": catalog.catalog_dump()})
                return
            m = _ID_SHADER.match(path)
            if m:
                self._send_json(session.get_shader(int(m.group(1))))
                return
            m = _ID_GRAPH.match(path)
            if m:
                self._send_json(session.get_graph(int(m.group(1))))
                return
        elif method == "POST":
            body = self._read_body()
            if path == "/run":
                self._send_json(session.start_run(body))
                return
            if path == "/breed":
                self._send_json(session.post_breed(body))
                return
            m = _ID_SCORE.match(path)
            if m:
                self._send_json(session.post_score(int(m.group(1)), body))
                return
            m = _ID_SAVE.match(path)
            if m:
                self._send_json(session.post_save(int(m.group(1))))
                return
        elif method == "PUT":
            if path == "/config":
                body = self._read_body()
                self._send_json(session.put_config(body))
                return
        self._send_error_json(404, f"no route for {method} {API_PREFIX}{path}")

    def _static(self, path):
        root = Path(self.server.static_dir)
        clean = posixpath.normpath(path.lstrip("/")) if path != "/" else "index.html"
        if clean.startswith("..") or clean in (".", ""):
            clean = "index.html"
        target = root / clean
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_error_json(404, "not found")
            return
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type",
                         _CONTENT_TYPES.get(target.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_PUT(self):
        self._dispatch("PUT")


def make_server(session, port=0, host="127.0.0.1", static_dir=None):
    server = ThreadingHTTPServer((host, port), _Handler)
    server.daemon_threads = True
    server.session = session
    server.static_dir = str(static_dir) if static_dir else None
    return server


def serve(out_dir, port, host="127.0.0.1", config=None, seed=None, static_dir=None):
    session = Session(out_dir, config=config, seed=seed)
    server = make_server(session, port=port, host=host, static_dir=static_dir)
    return server
