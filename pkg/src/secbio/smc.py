"""Encrypted-domain matching between a claimant holding the decryption key
and a verifier that stores only ciphertexts.

The verifier stores elementwise encryptions of the enrollment vector plus an
encryption of its sum of squares.  Authentication computes the encrypted
squared Euclidean distance to the probe, then runs a blinded comparison: the
verifier multiplies (distance - threshold - 1) by a secret positive scale
and adds a nonnegative offset smaller than the scale, so the claimant learns
only the sign, which decides acceptance.

Wire format: newline-delimited JSON over TCP, one message per line,
{"v": 1, "type": ..., "sid": ..., "payload": ...} with integers hex-encoded.
"""

from __future__ import annotations

import json
import logging
import random
import socket
import socketserver
import threading
from dataclasses import dataclass

import numpy as np

from . import paillier
from .gf2 import bit_str, bits
from .paillier import Keypair, PublicKey

log = logging.getLogger(__name__)

PROTOCOL_VERSION = 1

# message types
HELLO = "HELLO"
ENROLL = "ENROLL"
AUTH_START = "AUTH_START"
DIST_BLINDED = "DIST_BLINDED"
SIGN_REPLY = "SIGN_REPLY"
DECISION = "DECISION"
ERROR = "ERROR"

# error codes carried by ERROR messages
ERR_VERSION = "version_mismatch"
ERR_UNKNOWN_ID = "unknown_id"
ERR_KEY_MISMATCH = "key_mismatch"
ERR_BAD_MESSAGE = "bad_message"


class SmcProtocolError(Exception):
    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code


@dataclass(frozen=True)
class EncryptedTemplate:
    """Per-element ciphertexts of the enrollment bits plus the encrypted
    sum of squares, all under the claimant's public key."""

    elements: tuple
    sum_squares: int
    pub: PublicKey

    @property
    def n(self) -> int:
        return len(self.elements)


def enroll_template(pub: PublicKey, a, rng: random.Random | None = None
                    ) -> EncryptedTemplate:
    a = bits(a)
    elems = tuple(paillier.encrypt(pub, int(ai), rng) for ai in a)
    ssq = paillier.encrypt(pub, int(np.sum(a.astype(np.int64) ** 2)), rng)
    return EncryptedTemplate(elements=elems, sum_squares=ssq, pub=pub)


def encrypted_distance(template: EncryptedTemplate, d,
                       rng: random.Random | None = None) -> int:
    """Ciphertext of the squared Euclidean distance between the enrolled
    vector and the plaintext probe d."""
    d = bits(d, template.n)
    pub = template.pub
    acc = paillier.add(
        pub,
        template.sum_squares,
        paillier.encrypt(pub, int(np.sum(d.astype(np.int64) ** 2)), rng),
    )
    for ci, di in zip(template.elements, d):
        if di:
            acc = paillier.add(pub, acc, paillier.scalar_mul(pub, ci, -2))
    return acc


def blind_comparison(pub: PublicKey, c_dist: int, theta: int, dist_bound: int,
                     rng: random.Random | None = None,
                     scale_cap: int = 1 << 32) -> int:
    """Verifier side of the comparison: ciphertext of s*(dist - theta - 1) + r
    with secret s >= 1 and 0 <= r < s, which is negative iff dist <= theta."""
    rng = rng or random.SystemRandom()
    s_max = min(scale_cap, (pub.n // 2 - 1) // (dist_bound + theta + 2))
    if s_max < 1:
        raise ValueError("modulus too small for the requested threshold")
    s = rng.randrange(1, s_max + 1)
    r = rng.randrange(0, s)
    shifted = paillier.add(pub, c_dist, paillier.encrypt(pub, -(theta + 1), rng))
    return paillier.add(pub, paillier.scalar_mul(pub, shifted, s),
                        paillier.encrypt(pub, r, rng))


def comparison_sign(keypair: Keypair, c_blinded: int) -> int:
    """Claimant side: -1 if the blinded value decrypts negative, else 1."""
    return -1 if paillier.decrypt_signed(keypair, c_blinded) < 0 else 1


def decision_from_sign(sign: int) -> bool:
    return sign < 0


# --- wire helpers ----------------------------------------------------------

def _send(wfile, msg_type: str, payload: dict, sid: str) -> None:
    line = json.dumps({"v": PROTOCOL_VERSION, "type": msg_type,
                       "sid": sid, "payload": payload})
    wfile.write(line.encode("utf-8") + b"\n")
    wfile.flush()


def _recv(rfile) -> dict | None:
    line = rfile.readline()
    if not line:
        return None
    try:
        msg = json.loads(line.decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise SmcProtocolError(ERR_BAD_MESSAGE, str(exc))
    if not isinstance(msg, dict) or "type" not in msg:
        raise SmcProtocolError(ERR_BAD_MESSAGE, "missing type")
    return msg


# --- server ----------------------------------------------------------------

class TemplateStore:
    """JSON-file-backed map of user id -> encrypted template; writes are
    serialized, reads share the in-memory copy."""

    def __init__(self, path: str | None = None):
        self.path = path
        self._lock = threading.Lock()
        self._data: dict = {}
        if path:
            try:
                with open(path, "r", encoding="utf-8") as f:
                    self._data = json.load(f)
            except FileNotFoundError:
                pass

    def put(self, user_id: str, template: EncryptedTemplate, theta: int) -> None:
        entry = {
            "pub_n": hex(template.pub.n),
            "elements": [hex(c) for c in template.elements],
            "sum_squares": hex(template.sum_squares),
            "theta": theta,
        }
        with self._lock:
            self._data[user_id] = entry
            if self.path:
                with open(self.path, "w", encoding="utf-8") as f:
                    json.dump(self._data, f, indent=1)

    def get(self, user_id: str):
        entry = self._data.get(user_id)
        if entry is None:
            return None, None
        pub = PublicKey(n=int(entry["pub_n"], 16),
                        n_sq=int(entry["pub_n"], 16) ** 2)
        template = EncryptedTemplate(
            elements=tuple(int(c, 16) for c in entry["elements"]),
            sum_squares=int(entry["sum_squares"], 16),
            pub=pub,
        )
        return template, int(entry["theta"])


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        server: SmcServer = self.server  # type: ignore[assignment]
        sid = ""
        client_pub_n = None
        try:
            while True:
                msg = _recv(self.rfile)
                if msg is None:
                    return
                sid = msg.get("sid", sid)
                if msg.get("v") != PROTOCOL_VERSION:
                    self._error(sid, ERR_VERSION,
                                f"server speaks v{PROTOCOL_VERSION}")
                    return
                mtype = msg["type"]
                payload = msg.get("payload", {})
                if mtype == HELLO:
                    client_pub_n = int(payload["pub_n"], 16)
                    _send(self.wfile, HELLO, {"ok": True}, sid)
                elif mtype == ENROLL:
                    self._enroll(sid, payload, client_pub_n)
                elif mtype == AUTH_START:
                    self._auth(sid, payload, client_pub_n)
                else:
                    self._error(sid, ERR_BAD_MESSAGE,
                                f"unexpected type {mtype}")
                    return
        except SmcProtocolError as exc:
            log.warning("protocol failure: %s", exc)
            self._error(sid, exc.code, str(exc))
        except (ConnectionError, ValueError) as exc:
            log.warning("session aborted: %s", exc)

    def _error(self, sid, code, detail=""):
        try:
            _send(self.wfile, ERROR, {"code": code, "detail": detail}, sid)
        except OSError:
            pass

    def _enroll(self, sid, payload, client_pub_n):
        if client_pub_n is None:
            raise SmcProtocolError(ERR_BAD_MESSAGE, "ENROLL before HELLO")
        server: SmcServer = self.server  # type: ignore[assignment]
        pub = PublicKey(n=client_pub_n, n_sq=client_pub_n ** 2)
        template = EncryptedTemplate(
            elements=tuple(int(c, 16) for c in payload["elements"]),
            sum_squares=int(payload["sum_squares"], 16),
            pub=pub,
        )
        theta = int(payload.get("theta", server.default_theta))
        server.store.put(payload["id"], template, theta)
        _send(self.wfile, DECISION, {"accepted": True, "action": "enroll"}, sid)

    def _auth(self, sid, payload, client_pub_n):
        if client_pub_n is None:
            raise SmcProtocolError(ERR_BAD_MESSAGE, "AUTH_START before HELLO")
        server: SmcServer = self.server  # type: ignore[assignment]
        template, theta = server.store.get(payload["id"])
        if template is None:
            log.warning("auth for unknown id %r", payload["id"])
            self._error(sid, ERR_UNKNOWN_ID, payload["id"])
            return
        if template.pub.n != client_pub_n:
            # wrong decryption key at the claimant would only produce
            # garbage downstream; reject up front and log the failure
            log.warning("public key mismatch for id %r", payload["id"])
            self._error(sid, ERR_KEY_MISMATCH, payload["id"])
            return
        probe = bits(payload["probe"], template.n)
        c_dist = encrypted_distance(template, probe, server.rng)
        c_blinded = blind_comparison(template.pub, c_dist, theta,
                                     template.n, server.rng)
        _send(self.wfile, DIST_BLINDED, {"c": hex(c_blinded)}, sid)
        reply = _recv(self.rfile)
        if reply is None or reply.get("type") != SIGN_REPLY:
            raise SmcProtocolError(ERR_BAD_MESSAGE, "expected SIGN_REPLY")
        sign = int(reply["payload"]["sign"])
        if sign not in (-1, 1):
            raise SmcProtocolError(ERR_BAD_MESSAGE, "sign must be +/-1")
        accepted = decision_from_sign(sign)
        _send(self.wfile, DECISION, {"accepted": accepted}, sid)


class SmcServer(socketserver.ThreadingTCPServer):
    """Verifier endpoint; sessions are independent, the template store is
    the only shared state."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, store: TemplateStore | None = None,
                 default_theta: int = 1, seed: int | None = None):
        super().__init__(address, _Handler)
        self.store = store or TemplateStore()
        self.default_theta = default_theta
        self.rng = random.Random(seed) if seed is not None else None

    def serve_background(self) -> threading.Thread:
        t = threading.Thread(target=self.serve_forever, daemon=True)
        t.start()
        return t


def serve(port: int, store_path: str | None = None, default_theta: int = 1,
          host: str = "127.0.0.1", seed: int | None = None) -> SmcServer:
    return SmcServer((host, port), TemplateStore(store_path),
                     default_theta=default_theta, seed=seed)


# --- client ----------------------------------------------------------------

class _Session:
    def __init__(self, address, pub: PublicKey, sid: str):
        host, port = address
        self.sock = socket.create_connection((host, port))
        self.rfile = self.sock.makefile("rb")
        self.wfile = self.sock.makefile("wb")
        self.sid = sid
        _send(self.wfile, HELLO, {"pub_n": hex(pub.n)}, sid)
        self._expect(HELLO)

    def _expect(self, msg_type: str) -> dict:
        msg = _recv(self.rfile)
        if msg is None:
            raise SmcProtocolError(ERR_BAD_MESSAGE, "connection closed")
        if msg["type"] == ERROR:
            raise SmcProtocolError(msg["payload"]["code"],
                                   msg["payload"].get("detail", ""))
        if msg["type"] != msg_type:
            raise SmcProtocolError(ERR_BAD_MESSAGE,
                                   f"expected {msg_type}, got {msg['type']}")
        return msg["payload"]

    def close(self):
        self.sock.close()


def enroll_remote(address, user_id: str, a, keypair: Keypair,
                  theta: int | None = None,
                  rng: random.Random | None = None) -> bool:
    template = enroll_template(keypair.public, a, rng)
    session = _Session(address, keypair.public, sid=f"enroll-{user_id}")
    try:
        payload = {
            "id": user_id,
            "elements": [hex(c) for c in template.elements],
            "sum_squares": hex(template.sum_squares),
        }
        if theta is not None:
            payload["theta"] = theta
        _send(session.wfile, ENROLL, payload, session.sid)
        return bool(session._expect(DECISION)["accepted"])
    finally:
        session.close()


def authenticate_remote(address, claimed_id: str, probe,
                        keypair: Keypair) -> bool:
    """Full claimant round trip; returns the verifier's decision."""
    probe = bits(probe)
    session = _Session(address, keypair.public, sid=f"auth-{claimed_id}")
    try:
        _send(session.wfile, AUTH_START,
              {"id": claimed_id, "probe": bit_str(probe)}, session.sid)
        blinded = session._expect(DIST_BLINDED)
        sign = comparison_sign(keypair, int(blinded["c"], 16))
        _send(session.wfile, SIGN_REPLY, {"sign": sign}, session.sid)
        return bool(session._expect(DECISION)["accepted"])
    finally:
        session.close()


def template_storage_bits(template: EncryptedTemplate) -> int:
    """Serialized payload size: (n + 1) ciphertexts of ceil(log2 n^2) bits."""
    width = (template.pub.n_sq - 1).bit_length()
    return (template.n + 1) * width
