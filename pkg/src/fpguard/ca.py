"""Local root CA for the optional TLS interception mode.

Generates a self-signed root certificate once per store directory and
mints short-lived leaf certificates per intercepted host, cached in
memory. Requires the `cryptography` package (the `tls` extra); the
plain-HTTP data path never touches this module.
"""

from __future__ import annotations

import datetime
import ipaddress
import ssl
import tempfile
import threading
from pathlib import Path

try:
    from cryptography import x509
    from cryptography.hazmat.primitives import hashes, serialization
    from cryptography.hazmat.primitives.asymmetric import rsa
    from cryptography.x509.oid import NameOID

    HAVE_CRYPTOGRAPHY = True
except ImportError:  # pragma: no cover - exercised only without the extra
    HAVE_CRYPTOGRAPHY = False

CA_CERT_NAME = "fpguard-ca.pem"
CA_KEY_NAME = "fpguard-ca-key.pem"
_LEAF_DAYS = 30
_CA_DAYS = 3650


class CertificateAuthorityUnavailable(RuntimeError):
    """cryptography is not installed; TLS interception cannot run."""


def _require_cryptography() -> None:
    if not HAVE_CRYPTOGRAPHY:
        raise CertificateAuthorityUnavailable(
            "TLS interception needs the 'cryptography' package (pip install fpguard[tls])"
        )


def _new_key() -> "rsa.RSAPrivateKey":
    return rsa.generate_private_key(public_exponent=65537, key_size=2048)


def generate_root_ca(directory: str | Path) -> tuple[Path, Path]:
    """Create (or reuse) a root CA under directory; returns (cert, key) paths."""
    _require_cryptography()
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cert_path = directory / CA_CERT_NAME
    key_path = directory / CA_KEY_NAME
    if cert_path.exists() and key_path.exists():
        return cert_path, key_path

    key = _new_key()
    name = x509.Name([
        x509.NameAttribute(NameOID.COMMON_NAME, "fpguard local root CA"),
        x509.NameAttribute(NameOID.ORGANIZATION_NAME, "fpguard"),
    ])
    now = datetime.datetime.now(datetime.timezone.utc)
    cert = (
        x509.CertificateBuilder()
        .subject_name(name)
        .issuer_name(name)
        .public_key(key.public_key())
        .serial_number(x509.random_serial_number())
        .not_valid_before(now - datetime.timedelta(minutes=5))
        .not_valid_after(now + datetime.timedelta(days=_CA_DAYS))
        .add_extension(x509.BasicConstraints(ca=True, path_length=0), critical=True)
        .add_extension(
            x509.KeyUsage(
                digital_signature=True, key_cert_sign=True, crl_sign=True,
                content_commitment=False, key_encipherment=False,
                data_encipherment=False, key_agreement=False,
                encipher_only=False, decipher_only=False,
            ),
            critical=True,
        )
        .sign(key, hashes.SHA256())
    )
    key_path.write_bytes(
        key.private_bytes(
            serialization.Encoding.PEM,
            serialization.PrivateFormat.TraditionalOpenSSL,
            serialization.NoEncryption(),
        )
    )
    key_path.chmod(0o600)
    cert_path.write_bytes(cert.public_bytes(serialization.Encoding.PEM))
    return cert_path, key_path


class CertificateAuthority:
    """Mints per-host leaf certs signed by the local root."""

    def __init__(self, cert_path: str | Path, key_path: str | Path):
        _require_cryptography()
        self.cert_path = Path(cert_path)
        self._ca_cert = x509.load_pem_x509_certificate(self.cert_path.read_bytes())
        self._ca_key = serialization.load_pem_private_key(
            Path(key_path).read_bytes(), password=None
        )
        self._lock = threading.Lock()
        self._contexts: dict[str, ssl.SSLContext] = {}

    @classmethod
    def ensure(cls, directory: str | Path) -> "CertificateAuthority":
        cert_path, key_path = generate_root_ca(directory)
        return cls(cert_path, key_path)

    def _mint(self, host: str) -> tuple[bytes, bytes]:
        key = _new_key()
        try:
            san: x509.GeneralName = x509.IPAddress(ipaddress.ip_address(host))
        except ValueError:
            san = x509.DNSName(host)
        now = datetime.datetime.now(datetime.timezone.utc)
        cert = (
            x509.CertificateBuilder()
            .subject_name(x509.Name([x509.NameAttribute(NameOID.COMMON_NAME, host)]))
            .issuer_name(self._ca_cert.subject)
            .public_key(key.public_key())
            .serial_number(x509.random_serial_number())
            .not_valid_before(now - datetime.timedelta(minutes=5))
            .not_valid_after(now + datetime.timedelta(days=_LEAF_DAYS))
            .add_extension(x509.SubjectAlternativeName([san]), critical=False)
            .add_extension(x509.BasicConstraints(ca=False, path_length=None), critical=True)
            .sign(self._ca_key, hashes.SHA256())
        )
        cert_pem = cert.public_bytes(serialization.Encoding.PEM)
        key_pem = key.private_bytes(
            serialization.Encoding.PEM,
            serialization.PrivateFormat.TraditionalOpenSSL,
            serialization.NoEncryption(),
        )
        return cert_pem, key_pem

    def server_context(self, host: str) -> ssl.SSLContext:
        """TLS server context presenting a leaf for host, chained to the CA."""
        with self._lock:
            context = self._contexts.get(host)
            if context is not None:
                return context
            cert_pem, key_pem = self._mint(host)
            context = ssl.SSLContext(ssl.PROTOCOL_TLS_SERVER)
            # load_cert_chain only reads files; hand it a throwaway bundle
            with tempfile.NamedTemporaryFile(suffix=".pem") as bundle:
                bundle.write(cert_pem + self.cert_path.read_bytes() + key_pem)
                bundle.flush()
                context.load_cert_chain(bundle.name)
            self._contexts[host] = context
            return context
